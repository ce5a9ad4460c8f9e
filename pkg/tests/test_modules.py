import random

import pytest
from hypothesis import given, settings, strategies as st

from quiverhom.algebra import ParseError, opposite
from quiverhom.modules import (AlgebraMismatch, ModuleMap, cokernel, decompose, direct_sum, dual, generated_submodule,
                               hom_basis, hom_dim, image, injective, is_isomorphic, kernel, loewy_series,
                               multiset_matches, parse_module, projective, radical, random_quotient_module,
                               regular_module, simple, socle, top)

from conftest import shipped


def test_projective_loewy_series(ex4):
    a, P, _, _ = ex4
    assert P[0].dim == 5 and loewy_series(P[0]) == ["1", "2", "3", "1", "2"]
    assert loewy_series(P[1]) == ["2", "3", "1", "2", "3"]
    assert loewy_series(P[2]) == ["3", "1", "2", "3"]


def test_simple_dimension_vectors(ex4):
    a, _, S, _ = ex4
    for i, s in enumerate(S):
        assert s.dims == tuple(1 if v == i else 0 for v in range(3))


def test_self_injective_dual_numbers(kx2):
    assert is_isomorphic(injective(kx2, 0), projective(kx2, 0))


def test_hom_from_projective_is_vertex_component(ex4):
    a, P, S, I = ex4
    for m in P + S + I:
        for v in range(3):
            assert hom_dim(P[v], m) == m.dims[v]


def test_end_of_tilting_module_has_dim_10(tilt4):
    _, t = tilt4
    assert len(hom_basis(t, t)) == 10


def test_hom_between_distinct_simples_vanishes(ex4):
    S = ex4[2]
    assert hom_dim(S[0], S[1]) == 0 and hom_dim(S[0], S[0]) == 1


def test_hom_algebra_mismatch(ex4, kx2):
    with pytest.raises(AlgebraMismatch):
        hom_basis(ex4[2][0], simple(kx2, 0))


def test_hom_maps_commute(ex4):
    a, P, S, I = ex4
    for f in hom_basis(P[0], I[1]):
        assert f.check()


def test_kernel_cokernel_dimensions(ex4):
    a, P, S, _ = ex4
    for f in hom_basis(P[2], P[1]) + hom_basis(P[0], P[0]):
        k, _ = kernel(f)
        im, _ = image(f)
        c, _ = cokernel(f)
        assert f.source.dim == k.dim + im.dim
        assert f.target.dim == im.dim + c.dim
    ident = ModuleMap.identity(P[0])
    assert kernel(ident)[0].dim == 0
    zero = ModuleMap.zero(P[0], P[1])
    assert kernel(zero)[0].dim == P[0].dim


def test_cokernel_of_p3_into_p2_is_s2(ex4):
    a, P, S, _ = ex4
    inj = [f for f in hom_basis(P[2], P[1]) if f.is_injective()]
    assert inj
    c, _ = cokernel(inj[0])
    assert c.dim == 1 and is_isomorphic(c, S[1])


def test_decompositions(ex4):
    a, P, S, _ = ex4
    assert multiset_matches(decompose(regular_module(a)), P)
    assert decompose(S[0])[0][1] == 1
    pieces = decompose(direct_sum([S[0], S[0]])[0])
    assert len(pieces) == 1 and pieces[0][1] == 2


def test_krull_schmidt_random_sums(ex4):
    a, P, S, I = ex4
    rng = random.Random(7)
    pool = P + S + I
    for _ in range(5):
        chosen = [rng.choice(pool) for _ in range(3)]
        assert multiset_matches(decompose(direct_sum(chosen)[0]), chosen)


def test_duality(ex4):
    a, P, S, _ = ex4
    op = opposite(a)
    for v in range(3):
        assert dual(S[v]).dims == S[v].dims
        assert is_isomorphic(dual(P[v]), injective(op, v))
        assert is_isomorphic(dual(dual(P[v])), P[v])


def test_radical_top_socle(ex4):
    a, P, S, _ = ex4
    for v in range(3):
        assert is_isomorphic(top(P[v])[0], S[v])
        assert radical(S[v])[0].dim == 0
    assert is_isomorphic(socle(P[2])[0], S[2])


def test_hom_additivity(ex4):
    a, P, S, I = ex4
    ms, ns = [P[0], S[1]], [I[2], P[1]]
    total = hom_dim(direct_sum(ms)[0], direct_sum(ns)[0])
    assert total == sum(hom_dim(m, n) for m in ms for n in ns)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["example4", "kxy", "a3", "kronecker"]))
def test_random_modules_are_modules(seed, name):
    a = shipped(name)
    m = random_quotient_module(a, random.Random(seed), 5)
    assert m.check() and 0 < m.dim <= 5
    assert dual(dual(m)).dims == m.dims


def test_generated_submodule(ex4):
    a, P, _, _ = ex4
    # the top generator spans everything
    sub, inc = generated_submodule(P[0], [(0, P[0].gen_vector(0))])
    assert sub.dim == P[0].dim and inc.check()


def test_parse_module(ex4):
    a = ex4[0]
    m = parse_module("dims = 1 1 0\narrow a = [[1]]\n", a)
    assert m.dims == (1, 1, 0) and m.dim == 2
    with pytest.raises(ParseError):
        parse_module("dims = 1 1\n", a)
    with pytest.raises(ParseError):
        parse_module("dims = 1 1 0\narrow a = [[1, 2]]\n", a)
