import itertools
from fractions import Fraction as F

import pytest

from wspin_index.errors import MismatchedBoundary, NonIntegralDegree, UnsupportedPair
from wspin_index.maslov import (
    BundlePair,
    Glue,
    Leaf,
    closed_surface,
    direct_sum,
    disk,
    glued_cylinder_pair,
    interior_index,
    maslov,
    maslov_complement,
    maslov_compose,
    rr_boundary_index,
    wspin_interior_maslov,
    wspin_winding,
)


def test_normalization_and_closed():
    assert maslov(disk(3)) == 3
    assert maslov(disk(0)) == 0
    assert maslov(closed_surface(2, 5)) == 10


def test_rr():
    assert rr_boundary_index(disk(0)) == 1
    for k in range(-4, 5):
        assert rr_boundary_index(disk(k)) == 1 + k
    for g, d in itertools.product(range(3), range(-2, 3)):
        assert rr_boundary_index(closed_surface(g, d)) == 2 - 2 * g + 2 * d


def test_sphere_from_two_disks():
    cert = maslov_compose(Glue(Leaf(disk(2)), Leaf(disk(-2)), ((0, 0),)))
    assert cert.pair == closed_surface(0, 0)
    assert cert.value == 0 and cert.passed
    # brute check: two disks close to a sphere of degree (k + k') / 2
    for k, kk in itertools.product(range(-4, 5), repeat=2):
        if (k + kk) % 2:
            with pytest.raises(MismatchedBoundary):
                maslov_compose(Glue(Leaf(disk(k)), Leaf(disk(kk)), ((0, 0),)))
            continue
        cert = maslov_compose(Glue(Leaf(disk(k)), Leaf(disk(kk)), ((0, 0),)))
        assert cert.pair.closed_degree * 2 == k + kk
        assert cert.passed


def test_single_leaf_passthrough():
    cert = maslov_compose(Leaf(disk(5)))
    assert cert.value == 5 and cert.pair == disk(5)


def test_composition_additivity_exhaustive():
    for g1, g2 in itertools.product(range(2), repeat=2):
        for loops1 in itertools.product(range(-2, 3), repeat=2):
            for kappa, d1, d2 in itertools.product(range(-2, 3), range(-1, 2), range(-1, 2)):
                left = BundlePair(g1, loops1, d1)
                right = BundlePair(g2, (kappa,), d2)
                try:
                    cert = maslov_compose(Glue(Leaf(left), Leaf(right), ((1, 0),)))
                except MismatchedBoundary:
                    assert (loops1[1] + kappa) % 2
                    continue
                assert cert.passed
                assert cert.pair.genus == g1 + g2
                assert cert.pair.loops == (loops1[0],)


def test_glue_two_seams_raises_genus():
    annulus = BundlePair(0, (0, 0), 0)
    cert = maslov_compose(Glue(Leaf(annulus), Leaf(annulus), ((0, 0), (1, 1))))
    assert cert.pair.genus == 1 and cert.pair.loops == ()


def test_complement_form():
    caps = [disk(-2), disk(-4)]
    assert maslov_complement(closed_surface(0, 3), caps) == 6 + 6
    assert maslov(BundlePair(0, (2, 4), 3)) == 12


def test_direct_sum():
    a, b = BundlePair(1, (2, 0), 1), BundlePair(1, (-4, 2), 0)
    s = direct_sum(a, b)
    assert s.rank == 2
    assert maslov(s) == maslov(a) + maslov(b)
    assert rr_boundary_index(s) == rr_boundary_index(a) + rr_boundary_index(b)
    with pytest.raises(UnsupportedPair):
        maslov(BundlePair(0, (1,), 0, rank=2))


def test_winding_convention():
    assert wspin_winding(3) == 6
    assert wspin_winding(3, "reversed") == -6


def test_glued_cylinder():
    for v in range(6):
        assert rr_boundary_index(glued_cylinder_pair(v)) == 4 - 4 * v
        assert rr_boundary_index(glued_cylinder_pair(v, frame_twist=0)) == -4 * v


def test_wspin_interior_examples():
    a = [F(1, 5), F(2, 5), F(3, 5)]
    assert wspin_interior_maslov(F(1, 5), 0, 3, a, [1, 2, 3]) == 10
    assert interior_index(F(1, 5), 0, 3, a, [1, 2, 3]) == 9
    assert wspin_interior_maslov(F(1, 3), 1, 0, [], []) == 0
    assert interior_index(F(1, 3), 1, 0, [], []) == 0
    with pytest.raises(NonIntegralDegree):
        interior_index(F(1, 4), 0, 3, [F(1, 4)] * 3, [1, 1, 1])


def test_interior_relation_randomized():
    # interior_index = chi + interior Maslov, Maslov index even
    for n in range(2, 7):
        q = F(1, n)
        for g in range(3):
            for a_nums in itertools.product(range(n), repeat=3):
                a = [F(x, n) for x in a_nums]
                try:
                    mu = wspin_interior_maslov(q, g, 3, a, list(a_nums))
                except NonIntegralDegree:
                    continue
                assert mu % 2 == 0
                assert interior_index(q, g, 3, a, list(a_nums)) == (2 - 2 * g - 3) + mu
