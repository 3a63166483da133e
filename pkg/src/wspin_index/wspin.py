"""Decorated orbicurves and the per-variable line bundle data they induce."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputValidationError, InvalidOrder, NonIntegralDegree, NotInGroup, PointIndexError
from .qpoly import GroupElement, QPoly, is_symmetry
from ._rational import to_fraction


class PointType(str, enum.Enum):
    BROAD = "Broad"
    NARROW = "Narrow"


class Metric(str, enum.Enum):
    SMOOTH = "smooth"
    CYLINDRICAL = "cylindrical"


@dataclass(frozen=True)
class MarkedPoint:
    """A marked point with isotropy ``Z/m`` acting through ``decoration``.

    ``order`` defaults to the order of the decoration; any multiple is allowed.
    """

    decoration: GroupElement
    order: int | None = None

    def __post_init__(self):
        if not isinstance(self.decoration, GroupElement):
            object.__setattr__(self, "decoration", GroupElement(tuple(self.decoration)))
        base = self.decoration.order
        m = base if self.order is None else self.order
        if not isinstance(m, int) or m <= 0 or m % base:
            raise InvalidOrder(f"local order {m} is not a positive multiple of ord(h) = {base}")
        object.__setattr__(self, "order", m)

    @property
    def nu(self) -> tuple[int, ...]:
        return tuple(int(self.order * p) for p in self.decoration.phases)


@dataclass(frozen=True)
class DecoratedOrbicurve:
    genus: int
    points: tuple[MarkedPoint, ...] = ()

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 0:
            raise InputValidationError(f"genus must be a nonnegative integer, got {self.genus!r}")
        object.__setattr__(self, "points", tuple(self.points))

    @property
    def k(self) -> int:
        return len(self.points)

    @classmethod
    def from_phases(cls, genus: int, decorations: Sequence[Sequence], orders=None):
        orders = orders or [None] * len(decorations)
        pts = tuple(
            MarkedPoint(GroupElement(tuple(to_fraction(x) for x in dec)), m)
            for dec, m in zip(decorations, orders)
        )
        return cls(genus, pts)

    @classmethod
    def from_dict(cls, data: dict) -> "DecoratedOrbicurve":
        points = data.get("points", [])
        return cls.from_phases(
            data["genus"],
            [p["decoration"] for p in points],
            [p.get("order") for p in points],
        )

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "points": [
                {"decoration": [str(x) for x in p.decoration.phases], "order": p.order}
                for p in self.points
            ],
        }


@dataclass(frozen=True)
class CValues:
    c: tuple[Fraction, ...]
    negative: int
    zero: int
    positive: int


@dataclass(frozen=True)
class LineBundleData:
    """Orbifold data of ``L_j``: one entry of each list per marked point."""

    j: int
    q: Fraction
    a_list: tuple[Fraction, ...]
    v_list: tuple[int, ...]
    m_list: tuple[int, ...]

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise InputValidationError(f"q_{self.j} = {self.q} is not in (0, 1)")
        if not len(self.a_list) == len(self.v_list) == len(self.m_list):
            raise InputValidationError("a_list, v_list and m_list differ in length")
        for a, v, m in zip(self.a_list, self.v_list, self.m_list):
            if not (0 <= a < 1 and 0 <= v < m and Fraction(v, m) == a):
                raise InputValidationError(f"inconsistent action a={a}, nu={v}, m={m}")

    @property
    def k(self) -> int:
        return len(self.a_list)


def classify_point(data: LineBundleData, l: int) -> PointType:
    """Broad or narrow at the ``l``-th marked point (1-based)."""
    if not 1 <= l <= data.k:
        raise PointIndexError(f"point index {l} out of range 1..{data.k}")
    return PointType.BROAD if data.v_list[l - 1] == 0 else PointType.NARROW


def degree_from_actions(q, g: int, k: int, a_list) -> Fraction:
    return Fraction(q) * (2 * g - 2 + k) - sum(a_list, Fraction(0))


def line_degree(data: LineBundleData, g: int, k: int | None = None) -> int:
    """Degree of the desingularized bundle; a fractional value is an error."""
    k = data.k if k is None else k
    deg = degree_from_actions(data.q, g, k, data.a_list)
    if deg.denominator != 1:
        raise NonIntegralDegree([(data.j, deg)])
    return int(deg)


def c_values(data: LineBundleData, metric: Metric | str = Metric.SMOOTH) -> CValues:
    metric = Metric(metric)
    if metric is Metric.SMOOTH:
        c = tuple(a - data.q for a in data.a_list)
    else:
        c = tuple(data.a_list)
    return CValues(
        c,
        sum(1 for x in c if x < 0),
        sum(1 for x in c if x == 0),
        sum(1 for x in c if x > 0),
    )


@dataclass(frozen=True)
class WSpinStructure:
    curve: DecoratedOrbicurve
    poly: QPoly
    bundles: tuple[LineBundleData, ...]
    degrees: tuple[int, ...]

    @property
    def genus(self) -> int:
        return self.curve.genus

    @property
    def k(self) -> int:
        return self.curve.k

    def bundle(self, j: int) -> LineBundleData:
        if not 1 <= j <= len(self.bundles):
            raise PointIndexError(f"variable index {j} out of range 1..{len(self.bundles)}")
        return self.bundles[j - 1]


def bundle_data(curve: DecoratedOrbicurve, poly: QPoly, j: int) -> LineBundleData:
    pts = curve.points
    return LineBundleData(
        j,
        poly.q[j - 1],
        tuple(p.decoration.phases[j - 1] for p in pts),
        tuple(p.nu[j - 1] for p in pts),
        tuple(p.order for p in pts),
    )


def validate_structure(curve: DecoratedOrbicurve, poly: QPoly) -> WSpinStructure:
    """Build all ``L_j`` and check that every degree is an integer."""
    for l, p in enumerate(curve.points, 1):
        if len(p.decoration) != poly.t:
            raise NotInGroup(f"decoration at point {l} has {len(p.decoration)} phases, expected {poly.t}")
        if not is_symmetry(poly.exponents, p.decoration):
            raise NotInGroup(f"decoration {p.decoration} at point {l} is not a symmetry of {poly.render()}")
    bundles = tuple(bundle_data(curve, poly, j) for j in range(1, poly.t + 1))
    failures = []
    degrees = []
    for b in bundles:
        deg = degree_from_actions(b.q, curve.genus, curve.k, b.a_list)
        if deg.denominator != 1:
            failures.append((b.j, deg))
        degrees.append(deg)
    if failures:
        raise NonIntegralDegree(failures)
    return WSpinStructure(curve, poly, bundles, tuple(int(d) for d in degrees))


def broad_monomials(poly: QPoly, point: MarkedPoint) -> tuple[int, ...]:
    """Indices of monomials all of whose variables are broad at ``point``.

    The structure is broad at the point iff this is nonempty.
    """
    out = []
    for i, row in enumerate(poly.exponents):
        if all(point.decoration.phases[j] == 0 for j, b in enumerate(row) if b > 0):
            out.append(i)
    return tuple(out)


def is_broad_structure(poly: QPoly, point: MarkedPoint) -> bool:
    return bool(broad_monomials(poly, point))
