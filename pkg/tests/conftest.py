import random

import pytest

from quiverhom.algebra import PathExpr, Quiver, build_quotient, load_algebra, tensor
from quiverhom.cli import data_path
from quiverhom.modules import direct_sum, injective, projective, simple


def shipped(name):
    return load_algebra(data_path(name))


def cycle_algebra(n, rels):
    labels = [str(i + 1) for i in range(n)]
    names = "abcdefgh"
    q = Quiver(labels, [(names[i], labels[i], labels[(i + 1) % n]) for i in range(n)])
    return build_quotient(q, [PathExpr.parse(r, q) for r in rels])


@pytest.fixture(scope="session")
def ex4():
    a = shipped("example4")
    P = [projective(a, v) for v in range(3)]
    S = [simple(a, v) for v in range(3)]
    I = [injective(a, v) for v in range(3)]
    for i in range(3):
        P[i].name, S[i].name, I[i].name = f"P{i + 1}", f"S{i + 1}", f"I{i + 1}"
    return a, P, S, I


@pytest.fixture(scope="session")
def tilt4(ex4):
    a, P, S, _ = ex4
    summands = [P[0], P[1], S[1]]
    return summands, direct_sum(summands)[0]


@pytest.fixture(scope="session")
def kx2():
    return shipped("kx2")


@pytest.fixture(scope="session")
def kxy():
    return shipped("kxy")


@pytest.fixture(scope="session")
def a2():
    return shipped("a2")


@pytest.fixture(scope="session")
def a3():
    return shipped("a3")


@pytest.fixture(scope="session")
def small_algebras():
    """Algebras of dimension at most 4 used by the randomized suites."""
    out = [shipped("kx2"), shipped("a2"), shipped("kronecker"), shipped("kxy")]
    q = Quiver(["1"], [("x", "1", "1")])
    out.append(build_quotient(q, [PathExpr.parse("x*x*x", q)], name="kx3"))
    return out


@pytest.fixture
def rng():
    return random.Random(20240611)
