import random

import pytest
from hypothesis import given, settings, strategies as st

from quiverhom.algebra import opposite
from quiverhom.complexes import DegreeOverflow
from quiverhom.homology import (AtLeast, ExtClass, Finite, InfinitePeriodic, ext_class, ext_dims, injdim,
                                is_gorenstein, min_proj_resolution, projdim, yoneda_compose)
from quiverhom.endo import endomorphism_algebra
from quiverhom.modules import direct_sum, dual, hom_dim, is_isomorphic, projective, random_quotient_module, simple

from conftest import shipped

PROPERTY_ALGEBRAS = ["example4", "kxy", "a3", "kronecker", "nakayama34"]


def test_projective_resolution_has_length_zero(ex4):
    P = ex4[1]
    r = min_proj_resolution(P[0], 4)
    assert r.length() == 0


def test_resolution_of_s2(ex4):
    a, P, S, _ = ex4
    r = min_proj_resolution(S[1], 4)
    assert r.ranks()[:3] == [(0, 1, 0), (0, 0, 1), (0, 0, 0)]
    assert projdim(S[1]) == Finite(1)


def test_dual_numbers_simple_is_periodic(kx2):
    s = simple(kx2, 0)
    r = min_proj_resolution(s, 5)
    assert all(rk == (1,) for rk in r.ranks())
    assert projdim(s) == InfinitePeriodic(1, 0)
    assert is_isomorphic(r.syzygy(1), s)


def test_ext_basics(ex4):
    a, P, S, I = ex4
    for m in S + I:
        for n in S + P:
            assert ext_dims(m, n, 3).dims[0] == hom_dim(m, n)
    for n in S + I:
        assert ext_dims(P[0], n, 4).dims[1:] == [0, 0, 0, 0]


def test_ext1_between_simples_counts_arrows(ex4):
    a, _, S, _ = ex4
    arrows = {(x.source, x.target) for x in a.arrows}
    for i in range(3):
        for j in range(3):
            assert ext_dims(S[i], S[j], 1).dims[1] == (1 if (i, j) in arrows else 0)


def test_projdim_bounds_ext(ex4):
    a, P, S, I = ex4
    for m in S + I:
        pd = projdim(m)
        if isinstance(pd, Finite):
            for n in S:
                assert all(d == 0 for d in ext_dims(m, n, pd.n + 3).dims[pd.n + 1:])


def test_injdim_duality(ex4):
    a, P, S, I = ex4
    for m in S + P:
        assert injdim(m) == projdim(dual(m))
    assert injdim(I[0]) == Finite(0)


def test_gorenstein_examples(ex4, kx2, tilt4):
    g = is_gorenstein(kx2)
    assert g.verdict == "Yes" and g.left == Finite(0)
    assert is_gorenstein(ex4[0]).verdict == "Yes"
    summands, t = tilt4
    b = endomorphism_algebra(t, "opposite", summands=summands)
    assert is_gorenstein(b).verdict == "Yes"
    assert is_gorenstein(shipped("nakayama34")).verdict == "No"


def test_atleast_when_cap_is_too_small(ex4):
    b = shipped("nakayama34")
    res = projdim(simple(b, 0), 0)
    assert isinstance(res, (AtLeast, InfinitePeriodic))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(PROPERTY_ALGEBRAS))
def test_resolution_exact_and_minimal(seed, name):
    a = shipped(name)
    m = random_quotient_module(a, random.Random(seed), 5)
    r = min_proj_resolution(m, 4)
    assert r.check_exact()
    assert r.check_minimal()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(PROPERTY_ALGEBRAS))
def test_ext_additivity(seed, name):
    a = shipped(name)
    rng = random.Random(seed)
    m1, m2, n = (random_quotient_module(a, rng, 4) for _ in range(3))
    left = ext_dims(direct_sum([m1, m2])[0], n, 3).dims
    assert left == [x + y for x, y in zip(ext_dims(m1, n, 3).dims, ext_dims(m2, n, 3).dims)]
    right = ext_dims(n, direct_sum([m1, m2])[0], 3).dims
    assert right == [x + y for x, y in zip(ext_dims(n, m1, 3).dims, ext_dims(n, m2, 3).dims)]


def _coords(e):
    return e.hom.cohomology(e.degree).coords(e.vector)


def _random_class(table, degree, rng):
    F = table.m.field
    reps = table.hom.cohomology(degree).reps
    coeffs = F.random_matrix(rng, reps.shape[1], 1)
    return ExtClass(table.hom, degree, F.mul(reps, coeffs), len(table.dims) - 1)


def test_yoneda_identity(ex4):
    a, _, S, _ = ex4
    t11 = ext_dims(S[0], S[0], 4)
    t12 = ext_dims(S[0], S[1], 4)
    ident = ext_class(t11, 0, 0)
    for k in range(t12.dims[1]):
        e = ext_class(t12, 1, k)
        assert (_coords(yoneda_compose(ident, e)) == _coords(e)).all()


def test_yoneda_overflow(kx2):
    s = simple(kx2, 0)
    t = ext_dims(s, s, 2)
    e = ext_class(t, 2, 0)
    with pytest.raises(DegreeOverflow):
        yoneda_compose(e, e)


@pytest.mark.parametrize("seed", range(6))
def test_yoneda_associativity(seed, kx2, ex4):
    rng = random.Random(seed)
    if seed % 2 == 0:
        mods = [simple(kx2, 0)] * 4
    else:
        S = ex4[2]
        mods = [S[0], S[1], S[2], S[0]]
    cap = 6
    tabs = [ext_dims(mods[i], mods[i + 1], cap) for i in range(3)]
    degs = []
    for t in tabs:
        avail = [d for d in range(1, 3) if t.dims[d]]
        degs.append(rng.choice(avail) if avail else 0)
    e = [_random_class(t, d, rng) for t, d in zip(tabs, degs)]
    left = yoneda_compose(yoneda_compose(e[0], e[1]), e[2])
    right = yoneda_compose(e[0], yoneda_compose(e[1], e[2]))
    assert left.degree == right.degree
    assert (_coords(left) == _coords(right)).all()


def test_yoneda_dual_numbers_generates_polynomial_ring(kx2):
    s = simple(kx2, 0)
    t = ext_dims(s, s, 6)
    e1 = ext_class(t, 1, 0)
    power = e1
    for d in range(2, 7):
        power = yoneda_compose(power, e1)
        assert not power.hom.cohomology(d).is_coboundary(power.vector)
