import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from wspin_index.errors import (
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
from wspin_index.qpoly import (
    GroupElement,
    Polynomial,
    Monomial,
    QPoly,
    Singularity,
    check_nondegeneracy,
    compute_weights,
    is_symmetry,
    cyclic_weight_containment,
    parse_poly,
    symmetry_group,
)


def test_parse_fermat_pair():
    p = parse_poly("x^3 + y^3")
    assert p.variables == ("x", "y")
    assert p.exponents == ((3, 0), (0, 3))


def test_parse_chain():
    assert parse_poly("x^3*y + y^5").exponents == ((3, 1), (0, 5))


def test_parse_juxtaposition_and_coefficients():
    p = parse_poly("2/3 x^2 y - 5*y^3 x")
    assert p.exponents == ((2, 1), (1, 3))
    assert [m.coefficient for m in p.monomials] == [F(2, 3), F(-5)]


def test_parse_merges_repeats():
    p = parse_poly("x*x*y + x^2*y + y^3")
    assert p.exponents == ((2, 1), (0, 3))
    assert p.monomials[0].coefficient == 2


def test_syntax_error_position():
    with pytest.raises(PolySyntaxError) as exc:
        parse_poly("x^3 + + y")
    assert exc.value.position == 6


@pytest.mark.parametrize("text", ["x^", "x^3 +", "* x", "x^3 y^", "x $ y", "1/0 x", ""])
def test_malformed(text):
    with pytest.raises(PolySyntaxError):
        parse_poly(text)


def test_zero_polynomial():
    with pytest.raises(ZeroPolynomial):
        parse_poly("x^2 - x^2")


def test_negative_exponent():
    with pytest.raises(NegativeExponent):
        parse_poly("x^-2 + y")


def test_constant_term_rejected():
    with pytest.raises(PolySyntaxError, match="constant"):
        parse_poly("x^3 + 1")


@pytest.mark.parametrize(
    "B, q, d, k",
    [
        (((3, 0), (0, 3)), (F(1, 3), F(1, 3)), 3, (1, 1)),
        (((3, 1), (0, 5)), (F(4, 15), F(1, 5)), 15, (4, 3)),
        (((2, 1), (1, 2)), (F(1, 3), F(1, 3)), 3, (1, 1)),
        (((4,),), (F(1, 4),), 4, (1,)),
    ],
)
def test_weights(B, q, d, k):
    w = compute_weights(B)
    assert (w.q, w.d, w.k) == (q, d, k)


def test_weights_cramer_oracle():
    # 2x2 by Cramer's rule
    for a, b, c, e in itertools.product(range(1, 5), repeat=4):
        det = a * e - b * c
        if det == 0:
            continue
        q1, q2 = F(e - b, det), F(a - c, det)
        B = ((a, b), (c, e))
        if q1 > 0 and q2 > 0:
            assert compute_weights(B).q == (q1, q2)
        else:
            with pytest.raises(NonPositiveWeight):
                compute_weights(B)


def test_weights_errors():
    with pytest.raises(WeightsNotUnique):
        compute_weights(((2, 1),))
    with pytest.raises(NoSolution):
        compute_weights(((2, 0), (3, 0)))


def test_nondegeneracy_reports():
    r = check_nondegeneracy(QPoly.from_text("x^3 + y^3"))
    assert r.weights_unique and r.isolated_singularity is Singularity.VERIFIED
    assert [a.kind for a in r.atoms] == ["fermat", "fermat"]
    r = check_nondegeneracy(QPoly.from_text("x^3*y + y^5"))
    assert r.isolated_singularity is Singularity.VERIFIED
    assert [a.kind for a in r.atoms] == ["chain"]
    r = check_nondegeneracy(QPoly.from_text("x^2*y + x*y^2"))
    assert [a.kind for a in r.atoms] == ["loop"]
    r = check_nondegeneracy(parse_poly("x^2*y"))
    assert r.weights_unique is False
    assert r.isolated_singularity is Singularity.ASSUMED


def test_nondegeneracy_refuted_and_assumed():
    assert check_nondegeneracy(parse_poly("x + y^2")).isolated_singularity is Singularity.REFUTED
    r = check_nondegeneracy(parse_poly("x^4 + y^4 + x^2*y^2"))
    assert r.isolated_singularity is Singularity.ASSUMED


def test_group_x4():
    G = symmetry_group(QPoly.from_text("x^4"))
    assert G.order == 4
    assert [g.phases for g in G.elements] == [(F(0),), (F(1, 4),), (F(1, 2),), (F(3, 4),)]


def _brute_group(B, bound):
    t = len(B[0])
    out = set()
    for nums in itertools.product(range(bound), repeat=t):
        g = GroupElement(tuple(F(n, bound) for n in nums))
        if is_symmetry(B, g):
            out.add(g)
    return out


@pytest.mark.parametrize("text, bound", [("x^3 + y^3", 3), ("x^3*y + y^5", 15), ("x^2*y + x*y^2", 3)])
def test_group_matches_enumeration(text, bound):
    W = QPoly.from_text(text)
    assert set(symmetry_group(W).elements) == _brute_group(W.exponents, bound)


def test_group_cap():
    G = symmetry_group(QPoly.from_text("x^3*y + y^5"), cap=10)
    assert G.order == 15 and not G.materialized
    with pytest.raises(OrderCapExceeded) as exc:
        G.elements
    assert exc.value.order == 15
    assert G.generators


def test_infinite_group():
    with pytest.raises(InfiniteGroup):
        symmetry_group(parse_poly("x^2*y"))


def test_element_membership():
    G = symmetry_group(QPoly.from_text("x^3 + y^3"))
    assert G.element(["1/3", "2/3"]) in G
    with pytest.raises(NotInGroup):
        G.element(["1/2", "0"])


def test_cyclic_containment_is_not_automatic():
    # holds on the invertible fixtures but not for every polynomial
    W = QPoly.from_text("x^3*y + x*y^3")
    G = symmetry_group(W)
    assert G.order == 8
    assert not all(cyclic_weight_containment(W, g) for g in G)


monomial_rows = st.lists(st.integers(0, 4), min_size=3, max_size=3).filter(any)


@settings(max_examples=200, deadline=None)
@given(st.lists(monomial_rows, min_size=1, max_size=4, unique_by=tuple),
       st.lists(st.fractions(-5, 5, max_denominator=4).filter(lambda c: c != 0), min_size=4, max_size=4))
def test_render_round_trip(rows, coeffs):
    used = [i for i in range(3) if any(r[i] for r in rows)]
    names = ("a", "b1", "z_")
    mons = tuple(Monomial(tuple(r[i] for i in used), c) for r, c in zip(rows, coeffs))
    p = parse_poly(Polynomial(tuple(names[i] for i in used), mons).render())
    again = parse_poly(p.render())
    assert again.exponents == p.exponents
    assert again.variables == p.variables
    assert [m.coefficient for m in again.monomials] == [m.coefficient for m in p.monomials]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(2, 7), min_size=1, max_size=3))
def test_fermat_group_order_is_det(exps):
    t = len(exps)
    B = tuple(tuple(e if i == j else 0 for j in range(t)) for i, e in enumerate(exps))
    text = " + ".join(f"x{i}^{e}" for i, e in enumerate(exps))
    W = QPoly.from_text(text)
    assert W.exponents == B
    G = symmetry_group(W)
    prod = 1
    for e in exps:
        prod *= e
    assert G.order == prod
    for g in G.elements:
        assert cyclic_weight_containment(W, g)
