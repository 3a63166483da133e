"""Independent checks of the local half-cylinder indices.

Model problem: ``u: [0, inf) x S^1 -> C`` with ``(d/dt + i d/dtheta) u = f``,
boundary values in the real line ``exp(i s theta) R`` at ``t = 0`` and a weight
on the end. Writing ``u = sum_n u_n(t) exp(-i n theta)`` turns the operator
into ``d/dt + n`` on each mode, and the boundary line couples mode ``n`` to
mode ``-n - 2s`` by complex conjugation.

The function itself is weighted by ``exp(beta p t)`` with ``beta = w - 1``:
``w`` is the weight of the derivative part of the norm, one more than that
of the function (see the decisions ledger). A kernel mode ``exp(-n t)`` is
admissible iff ``n > beta``.

Two evaluations are provided: an exact mode count and a discretization whose
rank is read off singular values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import IllConditioned, InternalInconsistency, OnWall
from .maslov import BundlePair, Orientation, glued_cylinder_pair, rr_boundary_index, wspin_winding
from ._rational import to_fraction


@dataclass(frozen=True)
class HalfCylinderProblem:
    v: int
    w: Fraction
    orientation: Orientation = Orientation.STANDARD
    p_nominal: Fraction = Fraction(3)

    def __post_init__(self):
        w = to_fraction(self.w)
        if w.denominator == 1:
            raise OnWall(f"weight {w} is an integer")
        if self.v < 0:
            raise ValueError("v must be nonnegative")
        if to_fraction(self.p_nominal) <= 1:
            raise ValueError("p must exceed 1")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "orientation", Orientation(self.orientation))
        object.__setattr__(self, "p_nominal", to_fraction(self.p_nominal))

    @property
    def beta(self) -> Fraction:
        """Exponent of the weight on the function itself."""
        return self.w - 1

    @property
    def shift(self) -> int:
        """``s`` with boundary line ``exp(i s theta) R``."""
        return wspin_winding(self.v, self.orientation) // 2

    def partner(self, n: int) -> int:
        return -n - 2 * self.shift


@dataclass(frozen=True)
class GridConfig:
    T: float = 8.0
    N_t: int = 64
    N_theta: int = 32
    svd_threshold: float = 1e-8
    min_gap: float = 1e3
    far_end_condition: str = "aps"

    def __post_init__(self):
        if self.N_theta <= 0 or self.N_theta % 2:
            raise ValueError("N_theta must be a positive even integer")
        if self.N_t <= 0:
            raise ValueError("N_t must be positive")
        if self.T < 4:
            raise ValueError("T must be at least 4")
        if not 0 < self.svd_threshold < 1:
            raise ValueError("svd_threshold must lie in (0, 1)")
        if self.far_end_condition != "aps":
            raise ValueError("only the 'aps' far-end condition is implemented")

    @classmethod
    def parse(cls, text: str) -> "GridConfig":
        T, nt, nth = text.split(",")
        return cls(float(T), int(nt), int(nth))


# -- exact mode count --------------------------------------------------------


@dataclass(frozen=True)
class ModeCount:
    kernel: int
    cokernel: int
    bound: int

    @property
    def index(self) -> int:
        return self.kernel - self.cokernel


def truncation_bound(problem: HalfCylinderProblem) -> int:
    # A pair contributes only if n and its partner lie on the same side of
    # beta, i.e. n lies between beta and -2s - beta. Both endpoints have
    # modulus at most |w| + 1 + 2v, so beyond this bound exactly one member
    # of every pair is admissible and nothing changes.
    return 2 * math.ceil(abs(problem.w)) + 2 * problem.v + 4


def mode_count(problem: HalfCylinderProblem) -> ModeCount:
    """Real kernel and cokernel dimensions by enumerating Fourier modes.

    Each unordered pair ``{n, m}`` contributes one complex parameter (two
    real dimensions) when both modes decay; a self-paired mode contributes a
    real one. The cokernel is the kernel of the adjoint, which has the
    negated weight, so it counts pairs with both modes below beta.
    """
    bound = truncation_bound(problem)
    beta = problem.beta
    kernel = cokernel = 0
    # counting per mode n gives 1 for each member of a two-mode pair, and 1
    # for a self-paired mode, which is the real dimension in both cases
    for n in range(-bound, bound + 1):
        m = problem.partner(n)
        if n > beta and m > beta:
            kernel += 1
        elif n < beta and m < beta:
            cokernel += 1
    return ModeCount(kernel, cokernel, bound)


def mode_count_index(problem: HalfCylinderProblem) -> int:
    return mode_count(problem).index


# -- discretization ----------------------------------------------------------


@dataclass
class DiscreteResult:
    kernel: int
    cokernel: int
    gap_ratio: float
    smallest_kept: float
    largest_discarded: float
    band: int
    shape: tuple[int, int]

    @property
    def index(self) -> int:
        return self.kernel - self.cokernel

    def to_dict(self) -> dict:
        return {
            "kernel": self.kernel,
            "cokernel": self.cokernel,
            "index": self.index,
            "gap_ratio": self.gap_ratio,
            "smallest_kept": self.smallest_kept,
            "largest_discarded": self.largest_discarded,
            "band": self.band,
            "shape": list(self.shape),
        }


def _block(problem: HalfCylinderProblem, grid: GridConfig, modes: Sequence[int], band: int):
    """Real matrix for the modes of one boundary pair (or a single mode).

    Unknowns per mode: real and imaginary parts of the rescaled coefficient
    ``phi_n = exp(beta t) u_n`` at the ``N_t + 1`` grid points, on which the
    operator is ``d/dt + (n - beta)``, discretized with the box scheme.
    """
    nt = grid.N_t
    h = grid.T / nt
    beta = float(problem.beta)
    npts = nt + 1
    ncols = 2 * npts * len(modes)
    rows = []

    def col(mode_idx, part, i):
        return (mode_idx * 2 + part) * npts + i

    for a, n in enumerate(modes):
        mu = n - beta
        for part in (0, 1):
            for i in range(nt):
                r = np.zeros(ncols)
                r[col(a, part, i + 1)] = 1 / h + mu / 2
                r[col(a, part, i)] = -1 / h + mu / 2
                rows.append(r)
    n_interior = len(rows)

    def bc(entries):
        r = np.zeros(ncols)
        for c, val in entries:
            r[c] += val
        rows.append(r)

    if len(modes) == 2:
        # u_m(0) = conj(u_n(0))
        bc([(col(0, 0, 0), 1), (col(1, 0, 0), -1)])
        bc([(col(0, 1, 0), 1), (col(1, 1, 0), 1)])
    else:
        n = modes[0]
        m = problem.partner(n)
        if m == n:
            bc([(col(0, 1, 0), 1)])
        elif n - beta > 0:
            # partner lies outside the band and does not decay; eliminating
            # it forces u_n(0) = 0
            bc([(col(0, 0, 0), 1)])
            bc([(col(0, 1, 0), 1)])
        # otherwise the unresolved partner decays and absorbs the condition

    for a, n in enumerate(modes):
        if n - beta < 0:
            # no decaying continuation past T
            bc([(col(a, 0, nt), 1)])
            bc([(col(a, 1, nt), 1)])
    return np.array(rows).reshape(-1, ncols), n_interior


def discrete_index(problem: HalfCylinderProblem, grid: GridConfig | None = None) -> DiscreteResult:
    """Index from the numerical rank of the discretized boundary problem.

    Fourier modes ``|n| <= N_theta/2 - 1`` are kept. The matrix is block
    diagonal over boundary pairs, so singular values are taken blockwise and
    pooled before thresholding.
    """
    grid = grid or GridConfig()
    band = grid.N_theta // 2 - 1
    beta = problem.beta
    need = max(abs(beta), abs(2 * problem.shift + beta)) + 1
    if band < need:
        raise IllConditioned(
            f"N_theta={grid.N_theta} resolves modes |n| <= {band}; need {float(need):.3g}",
            {"band": band, "required_band": float(need)},
        )

    blocks = []
    seen = set()
    for n in range(-band, band + 1):
        if n in seen:
            continue
        m = problem.partner(n)
        modes = [n] if (m == n or abs(m) > band) else [n, m]
        seen.update(modes)
        blocks.append(_block(problem, grid, modes, band))

    svals = []
    dims = []
    for A, _ in blocks:
        s = np.linalg.svd(A, compute_uv=False)
        svals.append(s)
        dims.append(A.shape)
    smax = max(float(s.max()) for s in svals)
    tol = grid.svd_threshold * smax
    kept = [float(x) for s in svals for x in s if x > tol]
    dropped = [float(x) for s in svals for x in s if x <= tol]
    floor = np.finfo(float).eps * smax
    smallest_kept = min(kept)
    largest_dropped = max(dropped) if dropped else 0.0
    gap = smallest_kept / max(largest_dropped, floor)

    kernel = cokernel = 0
    for s, (r, c) in zip(svals, dims):
        rank = int(np.sum(s > tol))
        kernel += c - rank
        cokernel += r - rank
    nrows = sum(r for r, _ in dims)
    ncols = sum(c for _, c in dims)
    result = DiscreteResult(kernel, cokernel, gap, smallest_kept, largest_dropped, band, (nrows, ncols))
    if gap < grid.min_gap:
        raise IllConditioned(f"singular value gap {gap:.3g} below {grid.min_gap:g}", result.to_dict())
    return result


# -- wall crossing and gluing -------------------------------------------------


@dataclass
class JumpScan:
    v: int
    entries: list[tuple[Fraction, int]]
    differences: list[int]
    walls: list[int]
    multiplicities: list[Fraction]

    @property
    def multiplicity(self) -> Fraction | None:
        """Per-wall drop if it is the same at every wall crossed."""
        vals = set(self.multiplicities)
        return vals.pop() if len(vals) == 1 else None

    def to_dict(self) -> dict:
        m = self.multiplicity
        return {
            "v": self.v,
            "entries": [{"weight": str(w), "index": i} for w, i in self.entries],
            "differences": self.differences,
            "walls_crossed": self.walls,
            "per_wall_multiplicity": None if m is None else str(m),
        }


def jump_scan(v: int, weights: Sequence, orientation=Orientation.STANDARD) -> JumpScan:
    ws = [to_fraction(w) for w in weights]
    if any(a >= b for a, b in zip(ws, ws[1:])):
        raise ValueError("weights must be strictly increasing")
    entries = [(w, mode_count_index(HalfCylinderProblem(v, w, orientation))) for w in ws]
    diffs, walls, mults = [], [], []
    for (w1, i1), (w2, i2) in zip(entries, entries[1:]):
        crossed = math.floor(w2) - math.floor(w1)
        diffs.append(i2 - i1)
        walls.append(crossed)
        if crossed:
            mults.append(Fraction(i1 - i2, crossed))
    return JumpScan(v, entries, diffs, walls, mults)


@dataclass
class GlueCertificate:
    v: int
    w: Fraction
    orientation: str
    ind_plus: int
    ind_minus: int
    glued: int
    expected_glued: int
    symmetric_sum: int
    untwisted_annulus: int
    bound: int

    @property
    def sum_passed(self) -> bool:
        return self.glued == self.ind_plus + self.ind_minus

    @property
    def closed_form_passed(self) -> bool:
        return self.glued == self.expected_glued

    @property
    def passed(self) -> bool:
        return self.sum_passed and self.closed_form_passed

    def to_dict(self) -> dict:
        return {
            "v": self.v,
            "w": str(self.w),
            "orientation": self.orientation,
            "ind_plus": self.ind_plus,
            "ind_minus": self.ind_minus,
            "glued": self.glued,
            "expected_glued": self.expected_glued,
            "sum_passed": self.sum_passed,
            "closed_form_passed": self.closed_form_passed,
            "passed": self.passed,
            "diagnostics": {
                "symmetric_weight_sum": self.symmetric_sum,
                "untwisted_annulus_index": self.untwisted_annulus,
                "mode_bound": self.bound,
            },
        }


def glue_numeric(v: int, w, orientation=Orientation.STANDARD) -> GlueCertificate:
    """Compare ind(+w) + ind(-w) of the half cylinders with the annulus index.

    Diagnostics also record the pairing of function weights ``beta`` and
    ``-beta`` against the annulus without frame twists.
    """
    w = to_fraction(w)
    orientation = Orientation(orientation)
    plus = HalfCylinderProblem(v, w, orientation)
    minus = HalfCylinderProblem(v, -w, orientation)
    mc_plus, mc_minus = mode_count(plus), mode_count(minus)
    glued = rr_boundary_index(glued_cylinder_pair(v, orientation))
    expected = 4 - 4 * v if orientation is Orientation.STANDARD else 4 + 4 * v

    mirrored = HalfCylinderProblem(v, 2 - w, orientation)  # function weight -beta
    symmetric = mc_plus.index + mode_count_index(mirrored)
    untwisted = rr_boundary_index(glued_cylinder_pair(v, orientation, frame_twist=0))
    if symmetric != untwisted:
        raise InternalInconsistency(f"symmetric gluing {symmetric} != untwisted annulus {untwisted}")
    return GlueCertificate(
        v, w, orientation.value, mc_plus.index, mc_minus.index, glued, expected,
        symmetric, untwisted, max(mc_plus.bound, mc_minus.bound),
    )
