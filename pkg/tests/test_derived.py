import random

import pytest
from hypothesis import given, settings, strategies as st

from quiverhom.algebra import Quiver, build_quotient, opposite, tensor
from quiverhom.complexes import Complex, Resolution, cone_of_identity, direct_sum_complex
from quiverhom.derived import (TiltingNotVerified, assoc_check, bimodule_algebra, derived_tensor, hyper_hom_dims,
                               injective_coresolution, invariance_suite, regular_bimodule_stalk, rhom_tilting,
                               tilting_functor)
from quiverhom.homology import ext_dims
from quiverhom.modules import (direct_sum, dual, is_isomorphic, module_from_action, projective,
                               random_quotient_module, simple)

from conftest import shipped

FIELD = build_quotient(Quiver(["1"], []), [])
TENSOR_ALGEBRAS = ["kx2", "a2", "a3"]


def right_module(l):
    """A left module over B^op viewed as a (k, B)-bimodule."""
    alg = bimodule_algebra(FIELD, opposite(l.algebra))
    return module_from_action(alg, l.dims, lambda k: l.act(alg.pair(k)[1]))


def left_module(m):
    """A left B-module viewed as a (B, k)-bimodule."""
    alg = bimodule_algebra(m.algebra, FIELD)
    return module_from_action(alg, m.dims, lambda k: m.act(alg.pair(k)[0]))


def _profile(x, lo, hi):
    return [sum(x.homology_dims(k)) if x.lo <= k <= x.hi else 0 for k in range(lo, hi + 1)]


# ---------------------------------------------------------------------------
# hyper-Hom


def test_stalk_hyper_hom_is_ext(ex4):
    a, P, S, I = ex4
    for m in S:
        for n in S + I:
            assert hyper_hom_dims(m, n, (0, 4)).as_list() == ext_dims(m, n, 4).dims


def test_projective_hyper_hom(ex4):
    a, P, S, _ = ex4
    t = hyper_hom_dims(P[0], S[0], (-2, 3))
    assert t.dims == {-2: 0, -1: 0, 0: 1, 1: 0, 2: 0, 3: 0}


def test_shift(ex4):
    a, P, S, _ = ex4
    x, y = Complex.stalk(S[0]), Complex.stalk(S[2])
    base = hyper_hom_dims(x, y, (-1, 4)).dims
    assert hyper_hom_dims(x.shift(1), y.shift(1), (-1, 4)).dims == base
    shifted = hyper_hom_dims(x, y.shift(1), (-2, 3)).dims
    assert all(shifted[n] == base[n + 1] for n in range(-2, 4))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["example4", "a3", "kxy", "kronecker"]))
def test_quasi_isomorphism_invariance(seed, name):
    a = shipped(name)
    rng = random.Random(seed)
    m, n = random_quotient_module(a, rng, 4), random_quotient_module(a, rng, 4)
    base = hyper_hom_dims(m, n, (-1, 3)).as_list()
    x = direct_sum_complex([Complex.stalk(m), cone_of_identity(random_quotient_module(a, rng, 3), -1)])
    assert hyper_hom_dims(x, n, (-1, 3)).as_list() == base
    j = injective_coresolution(Complex.stalk(n), 5)
    assert _profile(j, -1, 5) == [0, n.dim, 0, 0, 0, 0, 0]
    assert hyper_hom_dims(m, j, (-1, 3)).as_list() == base
    q = Resolution(Complex.stalk(m)).as_complex(-6)
    assert hyper_hom_dims(q, n, (-1, 3)).as_list() == base


# ---------------------------------------------------------------------------
# derived tensor


def test_tensor_with_regular_bimodule(ex4):
    a = ex4[0]
    A = regular_bimodule_stalk(a)
    x = derived_tensor(A, A, (-3, 2))
    assert _profile(x, -3, 2) == [0, 0, 0, a.dim, 0, 0]


def test_tensor_unit_on_modules(kx2):
    s = left_module(simple(kx2, 0))
    x = derived_tensor(regular_bimodule_stalk(kx2), s, (-2, 1))
    assert _profile(x, -2, 1) == [0, 0, 1, 0]


def test_tensor_zero(kx2):
    z = Complex(bimodule_algebra(kx2, kx2), {})
    x = derived_tensor(z, regular_bimodule_stalk(kx2))
    assert x.is_zero()


def test_tor_dual_numbers(kx2):
    s = simple(kx2, 0)
    x = derived_tensor(right_module(simple(opposite(kx2), 0)), left_module(s), (-4, 0))
    assert _profile(x, -4, 0) == [1, 1, 1, 1, 1]


@pytest.mark.parametrize("seed", range(6))
def test_tor_against_ext(seed, ex4):
    # Tor_n(L, M) is dual to Ext^n(M, D L)
    a = ex4[0]
    rng = random.Random(seed)
    l = random_quotient_module(opposite(a), rng, 4)
    m = random_quotient_module(a, rng, 4)
    x = derived_tensor(right_module(l), left_module(m), (-3, 0))
    ext = ext_dims(m, dual(l), 3).dims
    assert _profile(x, -3, 0) == ext[::-1]


def _random_bimodule(a, b, rng):
    return random_quotient_module(bimodule_algebra(a, b), rng, 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.lists(st.sampled_from(TENSOR_ALGEBRAS), min_size=4, max_size=4))
def test_assoc_random(seed, names):
    rng = random.Random(seed)
    A, B, C, D = (shipped(n) for n in names)
    l = _random_bimodule(A, B, rng)
    m = _random_bimodule(B, C, rng)
    n = _random_bimodule(C, D, rng)
    assert assoc_check(l, m, n, (-2, 0))


def test_assoc_regular(kx2):
    A = regular_bimodule_stalk(kx2)
    assert assoc_check(A, A, A, (-2, 1))


# ---------------------------------------------------------------------------
# RHom(T, -)


def test_rhom_of_summands(tilt4):
    summands, t = tilt4
    F = tilting_functor(summands)
    for i, s in enumerate(summands):
        x = rhom_tilting(summands, s, F)
        assert _profile(x, -1, 4) == [0, sum(F.on_module(s).dims), 0, 0, 0, 0]
        assert x.homology_dims(0) == projective(F.B, i).dims


def test_rhom_truncation_independent(ex4, tilt4):
    a, P, S, I = ex4
    summands, _ = tilt4
    F = tilting_functor(summands)
    for m in S + I:
        x = rhom_tilting(summands, m, F, depth=2)
        y = rhom_tilting(summands, m, F, depth=4)
        assert [x.homology_dims(k) for k in range(-1, 4)] == [y.homology_dims(k) if y.lo <= k <= y.hi
                                                              else (0, 0, 0) for k in range(-1, 4)]


def test_rhom_euler_characteristic(ex4, tilt4):
    a, P, S, I = ex4
    summands, _ = tilt4
    F = tilting_functor(summands)
    for m in S + P:
        x = rhom_tilting(summands, m, F)
        for i, ti in enumerate(summands):
            ext = ext_dims(ti, m, 4).dims
            chi = sum((-1) ** k * x.homology_dims(k)[i] for k in range(x.lo, x.hi + 1))
            assert chi == sum((-1) ** n * d for n, d in enumerate(ext))


def test_rhom_of_injective_is_stalk(ex4, tilt4):
    a, _, _, I = ex4
    summands, _ = tilt4
    F = tilting_functor(summands)
    x = rhom_tilting(summands, I[1], F)
    assert all(sum(x.homology_dims(k)) == 0 for k in range(x.lo, x.hi + 1) if k != 0)
    assert x.homology_dims(0) == F.on_module(I[1]).dims


def test_rhom_rejects_non_tilting(ex4):
    a, P, S, _ = ex4
    with pytest.raises(TiltingNotVerified):
        rhom_tilting([P[0], S[1]], S[0])


# ---------------------------------------------------------------------------
# invariance


def test_invariance_example(ex4, tilt4):
    a, P, S, _ = ex4
    summands, _ = tilt4
    pairs = [(S[0], S[1]), (S[1], S[1]), (S[2], S[0])]
    r = invariance_suite(a, summands, pairs)
    assert r.hh_ok and r.hyper_hom_ok and r.fingerprint_ok and r.passed


def test_invariance_identity(kx2):
    s = simple(kx2, 0)
    r = invariance_suite(kx2, [projective(kx2, 0)], [(s, s)])
    assert r.passed
