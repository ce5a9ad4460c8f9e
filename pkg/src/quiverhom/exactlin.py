"""Exact dense linear algebra over the rationals and prime fields.

Matrices are plain numpy arrays.  Over ``QQ`` they have ``dtype=object`` and hold
``gmpy2.mpq`` values (``fractions.Fraction`` if gmpy2 is missing); over ``GF(p)``
they are ``int64`` arrays of canonical residues.  Every routine takes the field
explicitly, so the rest of the package never branches on the representation.

Pivoting is always "first nonzero entry in column order", which makes every
echelon form, kernel basis and particular solution reproducible bit for bit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels

try:
    from gmpy2 import mpq as _mpq

    def _to_q(x) -> object:
        if isinstance(x, str):
            return _mpq(Fraction(x))
        return _mpq(x)

except ImportError:  # pragma: no cover
    _mpq = Fraction

    def _to_q(x) -> object:
        return Fraction(x)


class FieldError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _as2d(m, rows, cols) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim == 2 and (rows is None or m.shape[0] == rows) and (cols is None or m.shape[1] == cols):
        return m
    if rows is not None:
        return m.reshape(rows, m.size // rows if rows else 0)
    return m.reshape(m.size // cols if cols else 0, cols)


class FieldSpec:
    """Ground field: ``QQ`` or ``GF(p)``."""

    characteristic: int
    kind: str

    # -- construction -----------------------------------------------------
    def __call__(self, x):
        return self.scalar(x)

    def zeros(self, r: int, c: int) -> np.ndarray:
        raise NotImplementedError

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = self.one
        return out

    def array(self, rows) -> np.ndarray:
        rows = [list(r) for r in rows]
        if not rows:
            return self.zeros(0, 0)
        out = self.zeros(len(rows), len(rows[0]))
        for i, row in enumerate(rows):
            if len(row) != out.shape[1]:
                raise FieldError("ragged matrix literal")
            for j, x in enumerate(row):
                out[i, j] = self.scalar(x)
        return out

    def column(self, values) -> np.ndarray:
        values = list(values)
        out = self.zeros(len(values), 1)
        for i, x in enumerate(values):
            out[i, 0] = self.scalar(x)
        return out

    def unit(self, n: int, i: int) -> np.ndarray:
        out = self.zeros(n, 1)
        out[i, 0] = self.one
        return out

    def hstack(self, mats: Sequence[np.ndarray], rows: int) -> np.ndarray:
        mats = [m for m in mats]
        if not mats:
            return self.zeros(rows, 0)
        return np.concatenate([_as2d(m, rows, None) for m in mats], axis=1)

    def vstack(self, mats: Sequence[np.ndarray], cols: int) -> np.ndarray:
        mats = [m for m in mats]
        if not mats:
            return self.zeros(0, cols)
        return np.concatenate([_as2d(m, None, cols) for m in mats], axis=0)

    def block_diag(self, mats: Sequence[np.ndarray]) -> np.ndarray:
        r = sum(m.shape[0] for m in mats)
        c = sum(m.shape[1] for m in mats)
        out = self.zeros(r, c)
        i = j = 0
        for m in mats:
            out[i:i + m.shape[0], j:j + m.shape[1]] = m
            i += m.shape[0]
            j += m.shape[1]
        return out

    # -- arithmetic -------------------------------------------------------
    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def smul(self, c, a):
        raise NotImplementedError

    def is_zero(self, a: np.ndarray) -> bool:
        return not np.any(a != 0)

    def kron(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def trace(self, a: np.ndarray):
        s = self.zero
        for i in range(min(a.shape)):
            s = s + a[i, i]
        return self.scalar(s)

    # -- elimination ------------------------------------------------------
    def rref(self, a: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
        raise NotImplementedError

    def rank(self, a: np.ndarray) -> int:
        if a.shape[0] == 0 or a.shape[1] == 0:
            return 0
        return len(self.rref(a)[1])

    def kernel(self, a: np.ndarray) -> np.ndarray:
        """Columns spanning the right kernel, one per free column of the rref."""
        m, n = a.shape
        if m == 0:
            return self.eye(n)
        r, piv = self.rref(a)
        free = [j for j in range(n) if j not in set(piv)]
        out = self.zeros(n, len(free))
        for k, f in enumerate(free):
            out[f, k] = self.one
            for i, pc in enumerate(piv):
                out[pc, k] = self.neg_scalar(r[i, f])
        return out

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """Particular solution ``x`` of ``a @ x = b`` (``b`` may have many columns) or None."""
        m, n = a.shape
        if b.shape[0] != m:
            raise FieldError(f"dimension mismatch: {a.shape} vs rhs {b.shape}")
        k = b.shape[1]
        if m == 0:
            return self.zeros(n, k)
        aug = np.concatenate([a, b], axis=1)
        r, piv = self.rref(aug)
        if piv and piv[-1] >= n:
            return None
        x = self.zeros(n, k)
        for i, pc in enumerate(piv):
            x[pc, :] = r[i, n:]
        return x

    def inverse(self, a: np.ndarray) -> np.ndarray:
        if a.shape[0] != a.shape[1]:
            raise FieldError("inverse of non-square matrix")
        x = self.solve(a, self.eye(a.shape[0]))
        if x is None or self.rank(a) != a.shape[0]:
            raise FieldError("matrix is singular")
        return x

    def independent_columns(self, a: np.ndarray) -> tuple[int, ...]:
        """Indices of the greedy (leftmost) maximal independent set of columns."""
        if a.shape[1] == 0 or a.shape[0] == 0:
            return ()
        return tuple(self.rref(a)[1])

    def complement_columns(self, span: np.ndarray, candidates: np.ndarray) -> tuple[int, ...]:
        """Indices of candidate columns forming a basis of span+candidates modulo span."""
        k = span.shape[1]
        both = np.concatenate([span, candidates], axis=1)
        piv = self.independent_columns(both)
        return tuple(j - k for j in piv if j >= k)

    def colspace(self, a: np.ndarray) -> np.ndarray:
        idx = self.independent_columns(a)
        return a[:, list(idx)]

    def neg_scalar(self, x):
        raise NotImplementedError

    def random_matrix(self, rng: random.Random, r: int, c: int, bound: int = 3) -> np.ndarray:
        out = self.zeros(r, c)
        for i in range(r):
            for j in range(c):
                out[i, j] = self.scalar(rng.randint(-bound, bound))
        return out

    def fmt(self, x) -> str:
        return str(x)

    def __repr__(self) -> str:
        return self.name

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and (self.kind, self.characteristic) == (other.kind, other.characteristic)

    def __hash__(self) -> int:
        return hash((self.kind, self.characteristic))


class Rationals(FieldSpec):
    kind = "Q"
    characteristic = 0
    name = "Q"

    def __init__(self):
        self.zero = _to_q(0)
        self.one = _to_q(1)
        self.dtype = object

    def scalar(self, x):
        return _to_q(x)

    def zeros(self, r: int, c: int) -> np.ndarray:
        out = np.empty((r, c), dtype=object)
        out.fill(self.zero)
        return out

    def mul(self, a, b):
        r, c = a.shape[0], b.shape[1]
        if a.shape[1] == 0 or r == 0 or c == 0:
            return self.zeros(r, c)
        if r * a.shape[1] * c < 512:
            return a @ b
        # object arithmetic is slow, so skip zero rows and columns and use
        # row updates when what is left of a is sparse
        nzb = b != 0
        ks = np.flatnonzero(nzb.any(axis=1))
        out = self.zeros(r, c)
        if ks.size == 0:
            return out
        a = a[:, ks]
        nza = a != 0
        keep = np.flatnonzero(nza.any(axis=0))
        if keep.size == 0:
            return out
        ks, a, nza = ks[keep], a[:, keep], nza[:, keep]
        rows = np.flatnonzero(nza.any(axis=1))
        cols = np.flatnonzero(nzb[ks].any(axis=0))
        ac = a[rows]
        bc = b[np.ix_(ks, cols)]
        nz = np.argwhere(nza[rows])
        if len(nz) * 4 < ac.size:
            oc = self.zeros(len(rows), len(cols))
            for i, k in nz:
                x = ac[i, k]
                oc[i] += bc[k] if x == 1 else x * bc[k]
        else:
            oc = ac @ bc
        out[np.ix_(rows, cols)] = oc
        return out

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def neg_scalar(self, x):
        return -x

    def smul(self, c, a):
        return self.scalar(c) * a

    def kron(self, a, b):
        out = self.zeros(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
        br, bc = b.shape
        for i in range(a.shape[0]):
            for j in range(a.shape[1]):
                x = a[i, j]
                if x:
                    out[i * br:(i + 1) * br, j * bc:(j + 1) * bc] = x * b
        return out

    def rref(self, a):
        m, n = a.shape
        rows = [[_to_q(x) for x in row] for row in a.tolist()]
        piv: list[int] = []
        r = 0
        for c in range(n):
            if r == m:
                break
            pr = -1
            for i in range(r, m):
                if rows[i][c]:
                    pr = i
                    break
            if pr < 0:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            prow = rows[r]
            inv = 1 / prow[c]
            nz = [j for j in range(c, n) if prow[j]]
            for j in nz:
                prow[j] = prow[j] * inv
            for i in range(m):
                if i != r:
                    row = rows[i]
                    f = row[c]
                    if f:
                        for j in nz:
                            row[j] = row[j] - f * prow[j]
            piv.append(c)
            r += 1
        out = self.zeros(m, n)
        if m and n:
            out[:, :] = np.array(rows, dtype=object).reshape(m, n)
        return out, tuple(piv)

    def fmt(self, x) -> str:
        x = _to_q(x)
        num, den = int(x.numerator), int(x.denominator)
        return str(num) if den == 1 else f"{num}/{den}"


class PrimeField(FieldSpec):
    kind = "Fp"

    def __init__(self, p: int):
        if not _is_prime(int(p)):
            raise FieldError(f"{p} is not prime")
        if p >= 2**31:
            raise FieldError("prime fields are limited to p < 2**31")
        self.p = int(p)
        self.characteristic = self.p
        self.name = f"Fp({self.p})"
        self.zero = np.int64(0)
        self.one = np.int64(1)
        self.dtype = np.int64

    def scalar(self, x):
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction) or (hasattr(x, "denominator") and not isinstance(x, (int, np.integer))):
            num, den = int(x.numerator), int(x.denominator)
            if den % self.p == 0:
                raise FieldError(f"denominator {den} vanishes in {self.name}")
            return np.int64((num * pow(den, self.p - 2, self.p)) % self.p)
        return np.int64(int(x) % self.p)

    def zeros(self, r, c):
        return np.zeros((r, c), dtype=np.int64)

    def mul(self, a, b):
        if a.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        return _kernels.matmul_mod(a, b, self.p)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def neg_scalar(self, x):
        return np.int64((-int(x)) % self.p)

    def smul(self, c, a):
        return (int(self.scalar(c)) * a) % self.p

    def kron(self, a, b):
        return np.kron(a, b) % self.p

    def trace(self, a):
        return np.int64(int(np.trace(a)) % self.p) if a.size else self.zero

    def rref(self, a):
        if a.shape[0] == 0 or a.shape[1] == 0:
            return a.copy(), ()
        r, piv = _kernels.rref_mod(a, self.p)
        return r, tuple(int(x) for x in piv)


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(text: str) -> FieldSpec:
    """``Q`` / ``QQ`` or ``Fp(5)`` / ``GF(5)``."""
    t = text.strip().replace(" ", "")
    if t in ("Q", "QQ", "Rationals"):
        return QQ
    for prefix in ("Fp(", "GF(", "F("):
        if t.startswith(prefix) and t.endswith(")"):
            return GF(int(t[len(prefix):-1]))
    raise FieldError(f"unknown field {text!r}")


# ---------------------------------------------------------------------------
# ExactMatrix: the public value type
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExactMatrix:
    field: FieldSpec
    data: np.ndarray

    @classmethod
    def from_rows(cls, field: FieldSpec, rows) -> "ExactMatrix":
        return cls(field, field.array(rows))

    @classmethod
    def zeros(cls, field: FieldSpec, r: int, c: int) -> "ExactMatrix":
        return cls(field, field.zeros(r, c))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "ExactMatrix":
        return cls(field, field.eye(n))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise FieldError("dimension mismatch in product")
        return ExactMatrix(self.field, self.field.mul(self.data, other.data))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExactMatrix)
            and self.field == other.field
            and self.data.shape == other.data.shape
            and not np.any(self.data != other.data)
        )

    def entries(self) -> list[list]:
        return self.data.tolist()

    def __repr__(self) -> str:
        body = "; ".join(" ".join(self.field.fmt(x) for x in row) for row in self.data.tolist())
        return f"ExactMatrix({self.field}, [{body}])"


def rank(m: ExactMatrix) -> int:
    return m.field.rank(m.data)


def kernel_basis(m: ExactMatrix) -> list[ExactMatrix]:
    k = m.field.kernel(m.data)
    return [ExactMatrix(m.field, k[:, [j]]) for j in range(k.shape[1])]


def solve_right(m: ExactMatrix, b: ExactMatrix) -> ExactMatrix | None:
    """A particular ``x`` with ``m @ x == b``, or None when ``b`` is not in the image."""
    if b.rows != m.rows:
        raise FieldError(f"dimension mismatch: matrix has {m.rows} rows, rhs has {b.rows}")
    x = m.field.solve(m.data, b.data)
    return None if x is None else ExactMatrix(m.field, x)
