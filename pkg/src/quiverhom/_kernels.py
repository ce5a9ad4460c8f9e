"""Prime-field elimination kernels.

Two interchangeable implementations of the same contract live here: numba
``@njit`` loops and a vectorised numpy path.  The numba path is used when numba
imports cleanly and ``QUIVERHOM_DISABLE_NUMBA`` is unset (or ``0``); otherwise
the numpy path is used.  Both operate on ``int64`` arrays holding canonical
residues ``0..p-1`` and require ``p < 2**31`` so that a product of two residues
fits in a signed 64-bit integer.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("QUIVERHOM_DISABLE_NUMBA", "0").lower() not in ("", "0", "false", "no")

try:  # pragma: no cover - exercised implicitly depending on environment
    if _DISABLED:
        raise ImportError("numba disabled by QUIVERHOM_DISABLE_NUMBA")
    import numba as nb

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    nb = None
    HAVE_NUMBA = False


def _inv_mod(a: int, p: int) -> int:
    return pow(int(a), p - 2, p)


# ---------------------------------------------------------------------------
# numpy reference path
# ---------------------------------------------------------------------------


def rref_mod_numpy(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    a = np.array(a, dtype=np.int64, copy=True) % p
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = _inv_mod(a[r, c], p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            a[rows] = (a[rows] - np.outer(col[rows], a[r])) % p
        pivots.append(c)
        r += 1
    return a, np.array(pivots, dtype=np.int64)


def matmul_mod_numpy(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    k = a.shape[1]
    if k == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    # chunk the inner dimension so partial sums cannot overflow int64
    step = max(1, (2**62) // ((p - 1) ** 2 + 1))
    if step >= k:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, k, step):
        out = (out + (a[:, s:s + step] @ b[s:s + step, :]) % p) % p
    return out


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @nb.njit(cache=True)
    def _inv_mod_nb(a, p):
        t, new_t = 0, 1
        r, new_r = p, a % p
        while new_r != 0:
            q = r // new_r
            t, new_t = new_t, t - q * new_t
            r, new_r = new_r, r - q * new_r
        if t < 0:
            t += p
        return t

    @nb.njit(cache=True)
    def _rref_mod_nb(a, p):
        m, n = a.shape
        pivots = np.empty(min(m, n), dtype=np.int64)
        r = 0
        for c in range(n):
            if r == m:
                break
            pr = -1
            for i in range(r, m):
                if a[i, c] != 0:
                    pr = i
                    break
            if pr < 0:
                continue
            if pr != r:
                for j in range(n):
                    tmp = a[r, j]
                    a[r, j] = a[pr, j]
                    a[pr, j] = tmp
            inv = _inv_mod_nb(a[r, c], p)
            for j in range(c, n):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(m):
                if i != r:
                    f = a[i, c]
                    if f != 0:
                        for j in range(c, n):
                            v = (a[i, j] - f * a[r, j]) % p
                            a[i, j] = v
            pivots[r] = c
            r += 1
        return a, pivots[:r]

    @nb.njit(cache=True)
    def _matmul_mod_nb(a, b, p):
        m, k = a.shape
        n = b.shape[1]
        out = np.zeros((m, n), dtype=np.int64)
        for i in range(m):
            for t in range(k):
                x = a[i, t]
                if x != 0:
                    for j in range(n):
                        out[i, j] = (out[i, j] + x * b[t, j]) % p
        return out

    def rref_mod_numba(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
        work = np.ascontiguousarray(np.array(a, dtype=np.int64, copy=True) % p)
        return _rref_mod_nb(work, np.int64(p))

    def matmul_mod_numba(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
        return _matmul_mod_nb(
            np.ascontiguousarray(a, dtype=np.int64), np.ascontiguousarray(b, dtype=np.int64), np.int64(p)
        )

else:  # pragma: no cover
    rref_mod_numba = None
    matmul_mod_numba = None


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def rref_mod(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    if HAVE_NUMBA:
        return rref_mod_numba(a, p)
    return rref_mod_numpy(a, p)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # numpy's integer matmul beats the numba loop at every size we benchmarked,
    # so the numba version is kept only for comparison
    return matmul_mod_numpy(a, b, p)
