"""Boundary Maslov index of line-bundle pairs and Riemann-Roch with boundary.

A rank-1 pair is recorded by the windings ``kappa`` of its boundary real
lines (``F = exp(i kappa theta / 2) R`` on each circle) and the degree of the
bundle obtained by capping every boundary circle with a disk whose winding is
``-kappa``. Capping is how every value here is computed:

    mu(E, F) = 2 * deg(capped) - sum(cap windings) = 2 * deg + sum(kappa)
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .errors import InternalInconsistency, MismatchedBoundary, NonIntegralDegree, UnsupportedPair
from .wspin import degree_from_actions


class Orientation(str, enum.Enum):
    STANDARD = "standard"
    REVERSED = "reversed"


def wspin_winding(v: int, orientation: Orientation | str = Orientation.STANDARD) -> int:
    """Winding ``kappa`` of the real line ``exp(+-i v theta) R``.

    The line rotates by ``v`` full half-turns per loop, so ``kappa = 2v``; the
    reversed boundary orientation flips the sign. Every conversion from the
    integers ``v`` to windings goes through here.
    """
    return -2 * v if Orientation(orientation) is Orientation.REVERSED else 2 * v


@dataclass(frozen=True)
class BundlePair:
    genus: int
    loops: tuple[int, ...] = ()
    closed_degree: int = 0
    rank: int = 1
    summands: tuple["BundlePair", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "loops", tuple(int(x) for x in self.loops))
        object.__setattr__(self, "summands", tuple(self.summands))
        if self.genus < 0 or self.rank < 1:
            raise ValueError("genus must be >= 0 and rank >= 1")
        for s in self.summands:
            if s.genus != self.genus or len(s.loops) != len(self.loops) or s.rank != 1:
                raise UnsupportedPair("summands must be rank-1 pairs over the same surface")
        if self.summands and len(self.summands) != self.rank:
            raise UnsupportedPair(f"{len(self.summands)} summands for rank {self.rank}")

    @property
    def boundary_count(self) -> int:
        return len(self.loops)

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - len(self.loops)


def disk(kappa: int) -> BundlePair:
    return BundlePair(0, (kappa,), 0)


def closed_surface(genus: int, degree: int) -> BundlePair:
    return BundlePair(genus, (), degree)


def direct_sum(*pairs: BundlePair) -> BundlePair:
    first = pairs[0]
    flat = []
    for p in pairs:
        flat.extend(p.summands if p.summands else [p])
    return BundlePair(first.genus, first.loops, 0, len(flat), tuple(flat))


def maslov(pair: BundlePair) -> int:
    if pair.rank > 1:
        if not pair.summands:
            raise UnsupportedPair("rank > 1 pairs must be given as direct sums of line bundles")
        return sum(maslov(s) for s in pair.summands)
    caps = [disk(-kappa) for kappa in pair.loops]
    return maslov_complement(closed_surface(pair.genus, pair.closed_degree), caps)


def maslov_complement(closed: BundlePair, caps: Sequence[BundlePair]) -> int:
    """mu of the closed pair minus mu of the removed disks."""
    if closed.loops:
        raise MismatchedBoundary("the capped surface must be closed")
    total = 2 * closed.closed_degree
    for c in caps:
        if c.genus != 0 or len(c.loops) != 1:
            raise UnsupportedPair("caps must be disks")
        total -= c.loops[0]
    return total


def rr_boundary_index(pair: BundlePair) -> int:
    """Real index of the Cauchy-Riemann operator on ``(E, F)``."""
    return pair.rank * pair.euler_characteristic + maslov(pair)


# -- decomposition trees -----------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    pair: BundlePair


@dataclass(frozen=True)
class Glue:
    """Join ``left`` and ``right`` along circles ``(i_left, i_right)``.

    The right piece sees each shared circle with the opposite orientation; the
    clutching degree across a seam is ``(kappa_left + kappa_right) / 2``.
    """

    left: "Tree"
    right: "Tree"
    seams: tuple[tuple[int, int], ...]


Tree = Union[Leaf, Glue]


@dataclass
class ComposeCertificate:
    value: int
    pair: BundlePair
    nodes: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(n["additive"] for n in self.nodes)


def glue_pairs(left: BundlePair, right: BundlePair, seams) -> BundlePair:
    if left.rank != 1 or right.rank != 1:
        raise UnsupportedPair("only line bundle pairs are glued")
    seams = tuple((int(a), int(b)) for a, b in seams)
    if not seams:
        raise MismatchedBoundary("a glue node needs at least one shared circle")
    li = [a for a, _ in seams]
    ri = [b for _, b in seams]
    if len(set(li)) != len(li) or len(set(ri)) != len(ri):
        raise MismatchedBoundary("a boundary circle is used twice")
    if not all(0 <= a < len(left.loops) for a in li) or not all(0 <= b < len(right.loops) for b in ri):
        raise MismatchedBoundary("seam refers to a missing boundary circle")
    clutch = 0
    for a, b in seams:
        s = left.loops[a] + right.loops[b]
        if s % 2:
            raise MismatchedBoundary(
                f"windings {left.loops[a]} and {right.loops[b]} cannot be matched on one circle"
            )
        clutch += s // 2
    loops = tuple(x for i, x in enumerate(left.loops) if i not in li) + tuple(
        x for i, x in enumerate(right.loops) if i not in ri
    )
    chi = left.euler_characteristic + right.euler_characteristic
    twice_genus = 2 - len(loops) - chi
    if twice_genus < 0 or twice_genus % 2:
        raise MismatchedBoundary("glued surface is not a connected orientable surface")
    return BundlePair(twice_genus // 2, loops, left.closed_degree + right.closed_degree + clutch)


def maslov_compose(tree: Tree) -> ComposeCertificate:
    """Evaluate a decomposition tree, checking additivity at every node."""
    if isinstance(tree, Leaf):
        mu = maslov(tree.pair)
        return ComposeCertificate(mu, tree.pair, [{"node": "leaf", "mu": mu, "additive": True}])
    left = maslov_compose(tree.left)
    right = maslov_compose(tree.right)
    pair = glue_pairs(left.pair, right.pair, tree.seams)
    mu = maslov(pair)
    node = {
        "node": "glue",
        "mu": mu,
        "children": [left.value, right.value],
        "additive": mu == left.value + right.value,
    }
    return ComposeCertificate(mu, pair, left.nodes + right.nodes + [node])


# -- W-spin assembly ---------------------------------------------------------


def _integral_degree(q, g, k, a_list, j=None) -> int:
    deg = degree_from_actions(q, g, k, a_list)
    if deg.denominator != 1:
        raise NonIntegralDegree([(j, deg)])
    return int(deg)


def wspin_interior_maslov(q, g: int, k: int, a_list, v_list) -> int:
    """Maslov index of ``|L_j|`` over the surface with the point disks removed.

    Computed as the closed degree minus the removed caps, whose boundary
    circles carry the reversed W-spin condition.
    """
    deg = _integral_degree(q, g, k, a_list)
    caps = [disk(wspin_winding(v, Orientation.REVERSED)) for v in v_list]
    mu = maslov_complement(closed_surface(g, deg), caps)
    closed_form = 2 * Fraction(q) * (2 * g - 2 + k) - 2 * sum(a_list, Fraction(0)) + 2 * sum(v_list)
    if mu != closed_form or mu % 2:
        raise InternalInconsistency(f"interior Maslov index {mu} disagrees with {closed_form}")
    return mu


def interior_pair(q, g: int, k: int, a_list, v_list) -> BundlePair:
    deg = _integral_degree(q, g, k, a_list)
    return BundlePair(g, tuple(wspin_winding(v) for v in v_list), deg)


def interior_index(q, g: int, k: int, a_list, v_list) -> int:
    """Index of the operator on the surface with k boundary circles."""
    pair = interior_pair(q, g, k, a_list, v_list)
    ind = rr_boundary_index(pair)
    mu = wspin_interior_maslov(q, g, k, a_list, v_list)
    if ind != (2 - 2 * g - k) + mu:
        raise InternalInconsistency("Riemann-Roch and Maslov assembly disagree")
    closed_form = (1 - 2 * Fraction(q)) * (2 - 2 * g - k) - 2 * sum(a_list, Fraction(0)) + 2 * sum(v_list)
    if ind != closed_form:
        raise InternalInconsistency(f"interior index {ind} disagrees with closed form {closed_form}")
    return ind


def glued_cylinder_pair(v: int, orientation: Orientation | str = Orientation.STANDARD, frame_twist: int = 1) -> BundlePair:
    """Annulus obtained by joining the two half-cylinder models at winding v.

    Both ends carry the line with the orientation opposite to the half
    cylinders. ``frame_twist`` counts the unit twists of the capping frame at
    each end; the closed annulus model used for the local end problem has one
    twist per end.
    """
    flipped = Orientation.STANDARD if Orientation(orientation) is Orientation.REVERSED else Orientation.REVERSED
    w = wspin_winding(v, flipped)
    return BundlePair(0, (w, w), 2 * frame_twist)
