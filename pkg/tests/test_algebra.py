import itertools
import random

import numpy as np
import pytest

from quiverhom.algebra import (NotAdmissible, NotFiniteDimensional, NotIdempotent, ParseError, PathExpr, Quiver,
                               ZeroQuotient, build_quotient, corner, enveloping, ground_field_algebra, opposite,
                               parse_algebra, quotient_by_idempotent, tensor)
from quiverhom.exactlin import GF, QQ

from conftest import shipped


def monomial_basis_count(arrows, rels, maxlen=12):
    """Paths (in traversal order) avoiding every relation word as a contiguous piece."""
    n = 0
    verts = sorted({s for _, s, _ in arrows} | {t for _, _, t in arrows})
    n += len(verts)
    frontier = [((name,), t) for name, _, t in arrows]
    for _ in range(maxlen):
        nxt = []
        for word, end in frontier:
            text = "*".join(word)
            if any(r in text for r in rels):
                continue
            n += 1
            for name, s, t in arrows:
                if s == end:
                    nxt.append((word + (name,), t))
        frontier = nxt
    return n


def test_example4_dimension_against_monomial_count(ex4):
    a = ex4[0]
    arrows = [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")]
    assert a.dim == 14 == monomial_basis_count(arrows, ["a*b*c*a*b", "c*a*b*c"])


def test_example4_cartan_columns(ex4):
    C = ex4[0].cartan()
    cols = [[C[t][s] for t in range(3)] for s in range(3)]
    assert cols == [[2, 2, 1], [1, 2, 2], [1, 1, 2]]


def test_small_quotients(kx2, kxy):
    assert kx2.dim == 2
    assert kxy.dim == 4 and kxy.center_dim() == 4


def test_relation_order_does_not_matter():
    q = Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")])
    rels = ["a*b*c*a*b", "c*a*b*c"]
    dims = {build_quotient(q, [PathExpr.parse(r, q) for r in perm]).dim for perm in itertools.permutations(rels)}
    assert dims == {14}


def test_function_order_convention():
    q = Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")])
    traversal = PathExpr.parse("a*b*c*a*b", q)
    function = PathExpr.word(q, ["b", "a", "c", "b", "a"])
    assert traversal.terms == function.terms


def test_associativity_and_idempotents(ex4, kxy):
    for a in (ex4[0], kxy, opposite(ex4[0]), tensor(kxy, shipped("kx2"))):
        assert a.check_associative()
        assert a.check_idempotents()


def test_opposite_is_an_involution(ex4, kxy):
    a = ex4[0]
    assert opposite(opposite(a)) is a
    op = opposite(a)
    assert op.dim == 14
    assert [[op.cartan()[t][s] for s in range(3)] for t in range(3)] == [[a.cartan()[s][t] for s in range(3)]
                                                                         for t in range(3)]
    rng = random.Random(1)
    for _ in range(20):
        i, j = rng.randrange(kxy.dim), rng.randrange(kxy.dim)
        assert opposite(kxy).mul_basis(i, j) == kxy.mul_basis(i, j)


def test_tensor_and_enveloping_dims(ex4, kx2, kxy):
    assert tensor(kx2, kx2).dim == 4
    assert enveloping(kx2).dim == 4
    assert enveloping(kxy).dim == 16
    assert enveloping(ex4[0]).dim == 196
    k = ground_field_algebra()
    t = tensor(kxy, k)
    assert t.dim == kxy.dim and t.cartan() == kxy.cartan()


def test_tensor_sample_associativity(ex4):
    assert enveloping(ex4[0]).sample_associative(300, seed=3)


def test_corners(ex4, a2):
    a = ex4[0]
    assert corner(a, [0]).dim == 2
    assert corner(a, [0, 1]).dim == 7  # C11 + C12 + C21 + C22
    assert corner(a, [0, 1, 2]) is a
    for e in ([0], [1], [0, 2]):
        rest = [v for v in range(3) if v not in e]
        c1, c2 = corner(a, e).dim, corner(a, rest).dim
        assert c1 + c2 <= a.dim


def test_corner_rejects_non_idempotent(kx2):
    x = kx2.zero()
    x[0, 0] = QQ(2)
    with pytest.raises(NotIdempotent):
        corner(kx2, x)


def test_quotient_by_idempotent(a2, ex4):
    assert quotient_by_idempotent(a2, [0]).dim == 1
    assert quotient_by_idempotent(a2, []) is a2 or quotient_by_idempotent(a2, []).dim == a2.dim
    with pytest.raises(ZeroQuotient):
        quotient_by_idempotent(a2, [0, 1])


def test_not_finite_dimensional():
    q = Quiver(["1"], [("x", "1", "1")])
    with pytest.raises(NotFiniteDimensional):
        build_quotient(q, [], cap=6)


def test_not_admissible():
    q = Quiver(["1", "2"], [("a", "1", "2")])
    with pytest.raises(NotAdmissible):
        build_quotient(q, [PathExpr.parse("a", q)])


def test_parse_and_prime_field():
    text = "field = Fp(3)\nvertices = 1\narrow x : 1 -> 1\nrelation x*x*x  # cube\n"
    a = parse_algebra(text)
    assert a.field == GF(3) and a.dim == 3


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_algebra("vertices = 1\narrow x : 1 -> 1\nrelation x*y\n")
    with pytest.raises(ParseError):
        parse_algebra("arrow x : 1 -> 1\n")
    with pytest.raises(ParseError):
        parse_algebra("vertices = 1\nbogus line\n")


def test_field_mismatch(kx2):
    b = parse_algebra("field = Fp(5)\nvertices = 1\narrow x : 1 -> 1\nrelation x*x\n")
    with pytest.raises(Exception):
        tensor(kx2, b)
