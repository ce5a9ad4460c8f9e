import numpy as np
import pytest
import sympy
from sympy import GF as SGF
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, settings, strategies as st

from quiverhom import _kernels
from quiverhom.exactlin import GF, QQ, FieldError, parse_field

small_ints = st.integers(-4, 4)


def matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity_rationals(rows):
    a = QQ.array(rows)
    k = QQ.kernel(a)
    assert QQ.rank(a) + k.shape[1] == a.shape[1]
    assert QQ.is_zero(QQ.mul(a, k))


@settings(max_examples=60, deadline=None)
@given(matrices(), st.sampled_from([2, 3, 5, 7]))
def test_rank_nullity_prime_field(rows, p):
    F = GF(p)
    a = F.array(rows)
    k = F.kernel(a)
    assert F.rank(a) + k.shape[1] == a.shape[1]
    assert F.is_zero(F.mul(a, k))


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    assert QQ.rank(QQ.array(rows)) == sympy.Matrix(rows).rank()


@settings(max_examples=40, deadline=None)
@given(matrices(), st.sampled_from([3, 5]))
def test_rank_mod_p_matches_sympy(rows, p):
    m = sympy.Matrix(rows)
    dm = DomainMatrix.from_list_sympy(m.rows, m.cols, m.tolist()).convert_to(SGF(p))
    expected = dm.rank()
    assert GF(p).rank(GF(p).array(rows)) == expected


@settings(max_examples=40, deadline=None)
@given(matrices(), st.lists(small_ints, min_size=6, max_size=6))
def test_solve_returns_a_solution_or_none(rows, rhs):
    a = QQ.array(rows)
    b = QQ.array([[x] for x in rhs[:a.shape[0]]])
    x = QQ.solve(a, b)
    consistent = QQ.rank(a) == QQ.rank(np.concatenate([a, b], axis=1))
    assert (x is not None) == consistent
    if x is not None:
        assert (QQ.mul(a, x) == b).all()


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 30), st.integers(1, 30), st.integers(1, 4), st.randoms(use_true_random=False))
def test_sparse_mul_matches_dense(r, k, c, rnd):
    a = QQ.zeros(r, k)
    b = QQ.zeros(k, c)
    for _ in range(rnd.randrange(0, r * k // 3 + 2)):
        a[rnd.randrange(r), rnd.randrange(k)] = QQ(rnd.randint(-3, 3))
    for _ in range(rnd.randrange(0, k * c // 2 + 2)):
        b[rnd.randrange(k), rnd.randrange(c)] = QQ(rnd.randint(-3, 3))
    assert (QQ.mul(a, b) == a.dot(b)).all()


@settings(max_examples=40, deadline=None)
@given(matrices(8, 8), st.sampled_from([2, 3, 7, 101]))
def test_kernel_backends_agree(rows, p):
    a = np.array(rows, dtype=np.int64) % p
    r1, piv1 = _kernels.rref_mod_numpy(a.copy(), p)
    if _kernels.HAVE_NUMBA:
        r2, piv2 = _kernels.rref_mod_numba(a.copy(), p)
        assert (r1 == r2).all() and list(piv1) == list(piv2)
        assert (_kernels.matmul_mod_numba(a, a.T.copy(), p) == _kernels.matmul_mod_numpy(a, a.T.copy(), p)).all()
    assert (_kernels.matmul_mod_numpy(a, a.T.copy(), p) == (a @ a.T) % p).all()


def test_exact_fractions_do_not_round():
    a = QQ.array([[1, 3], [3, 10]])
    inv = QQ.inverse(a)
    assert inv[0, 0] == 10 and inv[0, 1] == -3
    x = QQ.solve(QQ.array([[3]]), QQ.array([[1]]))
    assert x[0, 0] * 3 == 1


def test_inverse_mod_p():
    F = GF(7)
    a = F.array([[2, 1], [1, 1]])
    assert (F.mul(a, F.inverse(a)) == F.eye(2)).all()


def test_singular_inverse_raises():
    with pytest.raises(FieldError):
        QQ.inverse(QQ.array([[1, 2], [2, 4]]))


def test_complement_columns():
    span = QQ.array([[1], [0], [0]])
    cands = QQ.array([[1, 0, 2], [0, 1, 0], [0, 0, 0]])
    assert QQ.complement_columns(span, cands) == (1,)


def test_parse_field():
    assert parse_field("Q") is QQ
    assert parse_field("Fp(5)").characteristic == 5
    with pytest.raises(FieldError):
        parse_field("R")


def test_backend_name():
    assert _kernels.backend() in ("numba", "numpy")
