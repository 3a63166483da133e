"""Quasi-homogeneous polynomials and their diagonal symmetry groups.

Only the exponent matrix matters for everything downstream; coefficients are
kept so that a parsed polynomial renders back faithfully.

>>> W = QPoly.from_text("x^3*y + y^5")
>>> W.q
(Fraction(4, 15), Fraction(1, 5))
>>> symmetry_group(W).order
15
"""

from __future__ import annotations

import enum
import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterator, Sequence

import sympy
from sympy.matrices.normalforms import smith_normal_decomp

from .errors import (
    InfiniteGroup,
    NegativeExponent,
    NoSolution,
    NonPositiveWeight,
    NotInGroup,
    OrderCapExceeded,
    PolySyntaxError,
    WeightsNotUnique,
    ZeroPolynomial,
)
from ._rational import frac_part, to_fraction

DEFAULT_GROUP_CAP = 10**6


@dataclass(frozen=True)
class Monomial:
    exponents: tuple[int, ...]
    coefficient: Fraction = Fraction(1)

    def __post_init__(self):
        if any(e < 0 for e in self.exponents):
            raise ValueError("exponents must be nonnegative")
        if not any(self.exponents):
            raise ValueError("a monomial needs at least one positive exponent")
        if self.coefficient == 0:
            raise ValueError("coefficient must be nonzero")


@dataclass(frozen=True)
class Polynomial:
    """A polynomial as an ``s x t`` exponent matrix plus coefficients."""

    variables: tuple[str, ...]
    monomials: tuple[Monomial, ...]

    def __post_init__(self):
        if not self.monomials:
            raise ZeroPolynomial("polynomial has no monomials")
        t = len(self.variables)
        for mono in self.monomials:
            if len(mono.exponents) != t:
                raise ValueError(f"monomial {mono.exponents} does not have {t} exponents")

    @property
    def t(self) -> int:
        return len(self.variables)

    @property
    def s(self) -> int:
        return len(self.monomials)

    @property
    def exponents(self) -> tuple[tuple[int, ...], ...]:
        return tuple(m.exponents for m in self.monomials)

    def render(self) -> str:
        parts = []
        for mono in self.monomials:
            factors = []
            for name, e in zip(self.variables, mono.exponents):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            c = mono.coefficient
            sign = "-" if c < 0 else "+"
            c = abs(c)
            if c != 1:
                body = f"{c}*{body}"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.render()


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise PolySyntaxError(f"unexpected character {text[bad]!r}", text, bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        what = f"{tok[1]!r}" if tok[0] != "end" else "end of input"
        return PolySyntaxError(f"{message}, found {what}", self.text, tok[2])

    def poly(self):
        terms = []
        sign = 1
        if self.peek()[0] == "op" and self.peek()[1] in "+-":
            sign = -1 if self.take()[1] == "-" else 1
        terms.append(self.term(sign))
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            sign = -1 if self.take()[1] == "-" else 1
            terms.append(self.term(sign))
        if self.peek()[0] != "end":
            raise self.error("expected '+' or end of input")
        return terms

    def term(self, sign):
        start = self.peek()
        coeff = Fraction(sign)
        if start[0] == "num":
            coeff *= self.coefficient()
            if self.peek() == ("op", "*", self.peek()[2]):
                self.take()
            elif self.peek()[0] != "ident":
                raise PolySyntaxError("constant term", self.text, start[2])
        elif start[0] != "ident":
            raise self.error("expected a term")
        factors = [self.factor()]
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                factors.append(self.factor())
            elif tok[0] == "ident":
                factors.append(self.factor())
            else:
                break
        return coeff, factors, start[2]

    def coefficient(self):
        num = int(self.take()[1])
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "/":
            self.take()
            den_tok = self.take()
            if den_tok[0] != "num":
                raise self.error("expected a denominator", den_tok)
            den = int(den_tok[1])
            if den == 0:
                raise PolySyntaxError("zero denominator", self.text, den_tok[2])
            return Fraction(num, den)
        return Fraction(num)

    def factor(self):
        tok = self.take()
        if tok[0] != "ident":
            raise self.error("expected a variable", tok)
        exponent = 1
        nxt = self.peek()
        if nxt[0] == "op" and nxt[1] == "^":
            self.take()
            e_tok = self.take()
            if e_tok[0] == "op" and e_tok[1] == "-":
                raise NegativeExponent("negative exponent", self.text, e_tok[2])
            if e_tok[0] != "num":
                raise self.error("expected an exponent", e_tok)
            exponent = int(e_tok[1])
        return tok[1], exponent


def parse_poly(text: str) -> Polynomial:
    """Parse ``text`` into an exponent matrix; weights are not solved here.

    Variables are ordered by first appearance. Repeated monomials are merged.
    """
    terms = _Parser(text).poly()
    order: list[str] = []
    for _, factors, _ in terms:
        for name, _ in factors:
            if name not in order:
                order.append(name)
    index = {name: i for i, name in enumerate(order)}

    merged: dict[tuple[int, ...], Fraction] = {}
    for coeff, factors, pos in terms:
        exps = [0] * len(order)
        for name, e in factors:
            exps[index[name]] += e
        if not any(exps):
            raise PolySyntaxError("constant term", text, pos)
        key = tuple(exps)
        merged[key] = merged.get(key, Fraction(0)) + coeff

    kept = [(k, c) for k, c in merged.items() if c != 0]
    if not kept:
        raise ZeroPolynomial(f"{text!r} is the zero polynomial")
    used = [i for i in range(len(order)) if any(k[i] for k, _ in kept)]
    variables = tuple(order[i] for i in used)
    monomials = tuple(Monomial(tuple(k[i] for i in used), c) for k, c in kept)
    return Polynomial(variables, monomials)


# -- weights -----------------------------------------------------------------


@dataclass(frozen=True)
class Weights:
    q: tuple[Fraction, ...]
    d: int
    k: tuple[int, ...]


def _solve_exact(B: Sequence[Sequence[int]]):
    """Return (solution or None, rank of B, consistent?) for B q = 1."""
    M = sympy.Matrix(B)
    rank = M.rank()
    ones = sympy.ones(M.rows, 1)
    try:
        sol, params = M.gauss_jordan_solve(ones)
    except ValueError:
        return None, rank, False
    if params.shape[0] > 0:
        return None, rank, True
    q = tuple(Fraction(int(x.p), int(x.q)) for x in sol)
    return q, rank, True


def compute_weights(B: Sequence[Sequence[int]]) -> Weights:
    """Solve ``B q = (1, ..., 1)`` exactly and clear denominators."""
    if not B or not B[0]:
        raise ValueError("empty exponent matrix")
    q, rank, consistent = _solve_exact(B)
    if not consistent:
        raise NoSolution("no weights make every monomial of degree 1")
    if q is None:
        raise WeightsNotUnique(f"exponent matrix has rank {rank} < {len(B[0])} variables")
    if any(x <= 0 for x in q):
        raise NonPositiveWeight(f"weights {tuple(str(x) for x in q)} are not all positive")
    d = reduce(math.lcm, (x.denominator for x in q), 1)
    k = tuple(int(x * d) for x in q)
    return Weights(q, d, k)


@dataclass(frozen=True)
class QPoly:
    polynomial: Polynomial
    weights: Weights

    def __post_init__(self):
        for row in self.polynomial.exponents:
            if sum(b * q for b, q in zip(row, self.weights.q)) != 1:
                raise ValueError(f"monomial {row} is not of weighted degree 1")

    @classmethod
    def from_polynomial(cls, poly: Polynomial) -> "QPoly":
        return cls(poly, compute_weights(poly.exponents))

    @classmethod
    def from_text(cls, text: str) -> "QPoly":
        return cls.from_polynomial(parse_poly(text))

    @property
    def t(self) -> int:
        return self.polynomial.t

    @property
    def q(self) -> tuple[Fraction, ...]:
        return self.weights.q

    @property
    def exponents(self):
        return self.polynomial.exponents

    @property
    def variables(self):
        return self.polynomial.variables

    def render(self) -> str:
        return self.polynomial.render()


# -- nondegeneracy ------------------------------------------------------------


class Singularity(str, enum.Enum):
    VERIFIED = "Verified"
    ASSUMED = "Assumed"
    REFUTED = "Refuted"


@dataclass(frozen=True)
class Atom:
    kind: str  # fermat | chain | loop
    variables: tuple[int, ...]
    exponents: tuple[int, ...]


@dataclass(frozen=True)
class NondegeneracyReport:
    weights_unique: bool
    isolated_singularity: Singularity
    atoms: tuple[Atom, ...] = ()
    reason: str = ""

    @property
    def nondegenerate(self) -> bool:
        return self.weights_unique and self.isolated_singularity is not Singularity.REFUTED


def atomic_decomposition(B: Sequence[Sequence[int]]) -> tuple[Atom, ...] | None:
    """Split a square exponent matrix into Fermat, chain and loop blocks.

    Chains are read as ``x1^a1 x2 + x2^a2 x3 + ... + xn^an``. Returns None
    when ``B`` is not of this shape.
    """
    t = len(B[0])
    if len(B) != t:
        return None
    head_exp: dict[int, int] = {}
    points_to: dict[int, int | None] = {}
    for row in B:
        nz = [(i, e) for i, e in enumerate(row) if e]
        if len(nz) == 1:
            i, a = nz[0]
            head, target = i, None
        elif len(nz) == 2:
            (i, a), (j, b) = nz
            if b == 1 and a != 1:
                head, target = i, j
            elif a == 1 and b != 1:
                head, target, a = j, i, b
            else:
                return None
        else:
            return None
        if head in head_exp:
            return None
        head_exp[head] = a
        points_to[head] = target
    indegree = [0] * t
    for target in points_to.values():
        if target is not None:
            indegree[target] += 1
    if any(n > 1 for n in indegree):
        return None

    atoms = []
    seen: set[int] = set()
    for start in range(t):
        if indegree[start] != 0:
            continue
        path = [start]
        while points_to[path[-1]] is not None:
            path.append(points_to[path[-1]])
        seen.update(path)
        kind = "fermat" if len(path) == 1 else "chain"
        atoms.append(Atom(kind, tuple(path), tuple(head_exp[i] for i in path)))
    for start in range(t):
        if start in seen:
            continue
        cycle = [start]
        nxt = points_to[start]
        while nxt != start:
            if nxt is None or nxt in seen:
                return None
            cycle.append(nxt)
            nxt = points_to[nxt]
        seen.update(cycle)
        atoms.append(Atom("loop", tuple(cycle), tuple(head_exp[i] for i in cycle)))
    return tuple(atoms)


def check_nondegeneracy(poly: Polynomial | QPoly) -> NondegeneracyReport:
    """Report on both conditions of nondegeneracy.

    The isolated-singularity condition is only decided for invertible
    polynomials; everything else comes back ``Assumed``.
    """
    B = poly.exponents
    t = len(B[0])
    q, rank, consistent = _solve_exact(B)
    unique = consistent and q is not None

    for row in B:
        nz = [e for e in row if e]
        if nz == [1]:
            return NondegeneracyReport(
                unique, Singularity.REFUTED, reason="linear monomial: the origin is a regular point"
            )
    if len(B) != t:
        return NondegeneracyReport(unique, Singularity.ASSUMED, reason="not an invertible polynomial")
    atoms = atomic_decomposition(B)
    if atoms is None:
        return NondegeneracyReport(
            unique, Singularity.ASSUMED, reason="square but not a sum of Fermat, chain and loop atoms"
        )
    if all(a >= 2 for atom in atoms for a in atom.exponents):
        kinds = ", ".join(a.kind for a in atoms)
        return NondegeneracyReport(unique, Singularity.VERIFIED, atoms, reason=f"atoms: {kinds}")
    return NondegeneracyReport(
        unique, Singularity.ASSUMED, atoms, reason="atomic type with an exponent below 2"
    )


# -- symmetry group ----------------------------------------------------------


@dataclass(frozen=True, order=True)
class GroupElement:
    """Diagonal symmetry ``x_j -> exp(2 pi i phases[j]) x_j``."""

    phases: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple(frac_part(to_fraction(p)) for p in self.phases))

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(tuple(a + b for a, b in zip(self.phases, other.phases)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(tuple(-a for a in self.phases))

    def __len__(self) -> int:
        return len(self.phases)

    @property
    def order(self) -> int:
        return reduce(math.lcm, (p.denominator for p in self.phases), 1)

    def is_identity(self) -> bool:
        return not any(self.phases)

    def __str__(self) -> str:
        return "(" + ", ".join(str(p) for p in self.phases) + ")"


def is_symmetry(B: Sequence[Sequence[int]], element: GroupElement) -> bool:
    return all(
        sum(b * p for b, p in zip(row, element.phases)).denominator == 1 for row in B
    )


@dataclass(frozen=True)
class SymmetryGroup:
    exponents: tuple[tuple[int, ...], ...]
    order: int
    invariant_factors: tuple[int, ...]
    generators: tuple[tuple[GroupElement, int], ...]
    cap: int = DEFAULT_GROUP_CAP
    _elements: tuple[GroupElement, ...] | None = field(default=None, repr=False)

    @property
    def materialized(self) -> bool:
        return self._elements is not None

    @property
    def elements(self) -> tuple[GroupElement, ...]:
        if self._elements is None:
            raise OrderCapExceeded(self.order, self.generators, self.cap)
        return self._elements

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, element: GroupElement) -> bool:
        return len(element) == len(self.exponents[0]) and is_symmetry(self.exponents, element)

    @property
    def identity(self) -> GroupElement:
        return GroupElement((Fraction(0),) * len(self.exponents[0]))

    def element(self, phases) -> GroupElement:
        g = GroupElement(tuple(to_fraction(p) for p in phases))
        if g not in self:
            raise NotInGroup(f"{g} is not a diagonal symmetry")
        return g


def symmetry_group(poly: Polynomial | QPoly, cap: int = DEFAULT_GROUP_CAP) -> SymmetryGroup:
    """All phase vectors ``theta`` with ``B theta`` integral, via Smith normal form.

    If ``D = S B T`` then ``theta = T phi`` is a symmetry iff ``D phi`` is
    integral, so ``H`` is the direct sum of ``Z/d_i`` over the invariant
    factors, generated by the columns of ``T`` divided by ``d_i``.
    """
    B = tuple(tuple(row) for row in poly.exponents)
    t = len(B[0])
    D, _, T = smith_normal_decomp(sympy.Matrix(B))
    diag = [int(D[i, i]) for i in range(min(D.shape))]
    factors = [abs(x) for x in diag if x != 0]
    if len(factors) < t:
        raise InfiniteGroup(f"exponent matrix has rank {len(factors)} < {t}; H is infinite")

    generators = []
    for i, d_i in enumerate(factors):
        if d_i == 1:
            continue
        g = GroupElement(tuple(Fraction(int(T[r, i]), d_i) for r in range(t)))
        generators.append((g, d_i))
    order = math.prod(factors)

    elements = None
    if order <= cap:
        found = set()
        ranges = [range(n) for _, n in generators]
        for coeffs in itertools.product(*ranges):
            phases = [Fraction(0)] * t
            for c, (g, _) in zip(coeffs, generators):
                for r in range(t):
                    phases[r] += c * g.phases[r]
            found.add(GroupElement(tuple(phases)))
        elements = tuple(sorted(found))
    return SymmetryGroup(B, order, tuple(factors), tuple(generators), cap, elements)


def cyclic_weight_containment(poly: QPoly, element: GroupElement) -> bool:
    """Whether each phase lies in the cyclic subgroup of Q/Z generated by q_i."""
    d = poly.weights.d
    return all(
        (p * d) % math.gcd(k, d) == 0 for p, k in zip(element.phases, poly.weights.k)
    )
