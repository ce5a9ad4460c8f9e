"""Cochain complexes, projective resolutions of complexes, Hom complexes, lifting.

Grading is cohomological throughout: a projective resolution of a module M
lives in degrees <= 0 with P_n in degree -n.

A *resolution* of a bounded complex X is a bounded-above complex of free
modules Q with a chain map pi: Q -> X such that for every degree k the map
Q^k -> {(x, z) in X^k + Q^{k+1} : d z = 0, pi z = d x}, y -> (pi y, d y), is
onto.  This is what makes exact lifting possible, and it holds both for the
resolutions built here and for any degreewise-surjective quasi-isomorphism.
Resolutions are computed lazily downwards.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .algebra import FDAlgebra
from .exactlin import FieldSpec
from .modules import FDModule, FreeModule, ModuleMap, direct_sum, zero_module


class ComplexError(Exception):
    pass


class DegreeOverflow(ComplexError):
    pass


class Complex:
    """Bounded cochain complex of modules; ``diffs[i]: terms[i] -> terms[i+1]``."""

    def __init__(self, algebra: FDAlgebra, terms: dict[int, FDModule], diffs: dict[int, ModuleMap] | None = None,
                 name: str | None = None):
        self.algebra = algebra
        self.field: FieldSpec = algebra.field
        self.terms = {i: m for i, m in terms.items() if m.dim > 0}
        self.diffs = {}
        for i, f in (diffs or {}).items():
            if i in self.terms and i + 1 in self.terms:
                self.diffs[i] = f
        self.name = name
        self._zero = zero_module(algebra)

    @classmethod
    def stalk(cls, m: FDModule, degree: int = 0) -> "Complex":
        return cls(m.algebra, {degree: m}, {}, name=m.name)

    @property
    def lo(self) -> int:
        return min(self.terms) if self.terms else 0

    @property
    def hi(self) -> int:
        return max(self.terms) if self.terms else -1

    def is_zero(self) -> bool:
        return not self.terms

    def term(self, i: int) -> FDModule:
        return self.terms.get(i, self._zero)

    def diff(self, i: int) -> ModuleMap:
        f = self.diffs.get(i)
        if f is None:
            return ModuleMap.zero(self.term(i), self.term(i + 1))
        return f

    def check(self) -> bool:
        F = self.field
        for i, f in self.diffs.items():
            if not f.check():
                return False
            g = self.diffs.get(i + 1)
            if g is not None and not (g @ f).is_zero():
                return False
        return True

    def shift(self, k: int) -> "Complex":
        """X[k]: degree i holds X^{i+k}, differential multiplied by (-1)^k."""
        terms = {i - k: m for i, m in self.terms.items()}
        sign = -1 if k % 2 else 1
        diffs = {i - k: (f.scale(sign) if sign < 0 else f) for i, f in self.diffs.items()}
        return Complex(self.algebra, terms, diffs, name=f"{self.name}[{k}]" if self.name else None)

    def homology_dims(self, i: int) -> tuple[int, ...]:
        F = self.field
        M = self.term(i)
        out = []
        d_out, d_in = self.diff(i), self.diff(i - 1)
        for v in range(self.algebra.n_vertices):
            z = M.dims[v] - (F.rank(d_out.mats[v]) if d_out.mats[v].size else 0)
            b = F.rank(d_in.mats[v]) if d_in.mats[v].size else 0
            out.append(z - b)
        return tuple(out)

    def homology_dim(self, i: int) -> int:
        return sum(self.homology_dims(i))

    def homology_profile(self, lo: int, hi: int) -> list[int]:
        return [self.homology_dim(i) for i in range(lo, hi + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** (i % 2) * m.dim for i, m in self.terms.items())

    def __repr__(self) -> str:
        parts = ", ".join(f"{i}:{m.dims}" for i, m in sorted(self.terms.items()))
        return f"<Complex [{parts}] over {self.algebra.name}>"


def direct_sum_complex(xs: Sequence[Complex]) -> Complex:
    A = xs[0].algebra
    F = A.field
    degrees = sorted(set(i for x in xs for i in x.terms))
    terms, sums = {}, {}
    for i in degrees:
        mods = [x.term(i) for x in xs]
        total, inc, proj = direct_sum(mods)
        terms[i], sums[i] = total, (inc, proj)
    diffs = {}
    for i in degrees:
        if i + 1 not in terms:
            continue
        mats = []
        for v in range(A.n_vertices):
            blocks = [x.diff(i).mats[v] for x in xs]
            mats.append(F.block_diag(blocks))
        diffs[i] = ModuleMap(terms[i], terms[i + 1], mats)
    return Complex(A, terms, diffs)


def cone_of_identity(m: FDModule, degree: int) -> Complex:
    """The contractible complex m --id--> m in degrees (degree, degree+1)."""
    return Complex(m.algebra, {degree: m, degree + 1: m}, {degree: ModuleMap.identity(m)})


# ---------------------------------------------------------------------------
# Resolutions
# ---------------------------------------------------------------------------


class ProjectiveComplex:
    """Interface shared by resolutions: free terms, differential images, augmentation images."""

    algebra: FDAlgebra
    target: Complex
    terms: dict[int, FreeModule]
    d: dict[int, list[np.ndarray]]
    pi: dict[int, list[np.ndarray]]
    lo: int
    top: int

    def extend(self, lo: int) -> None:
        raise NotImplementedError

    def term(self, i: int) -> FreeModule:
        self.extend(i)
        t = self.terms.get(i)
        if t is None:
            t = FreeModule(self.algebra, [])
            self.terms[i] = t
        return t

    def d_map(self, i: int) -> ModuleMap:
        cache = self.__dict__.setdefault("_dmaps", {})
        if i not in cache:
            src = self.term(i)
            tgt = self.term(i + 1)
            cache[i] = src.map_from_images(self.d.get(i, [tgt.field.zeros(tgt.dims[v], 1) for v in src.gens]), tgt)
        return cache[i]

    def pi_map(self, i: int) -> ModuleMap:
        cache = self.__dict__.setdefault("_pimaps", {})
        if i not in cache:
            src = self.term(i)
            tgt = self.target.term(i)
            imgs = self.pi.get(i, [tgt.field.zeros(tgt.dims[v], 1) for v in src.gens])
            cache[i] = src.map_from_images(imgs, tgt)
        return cache[i]

    def gens_at(self, i: int) -> list[int]:
        return self.term(i).gens

    def as_complex(self, lo: int) -> Complex:
        """Brutal truncation to degrees >= lo as an ordinary complex."""
        self.extend(lo)
        terms = {i: self.term(i) for i in range(lo, self.top + 1)}
        diffs = {i: self.d_map(i) for i in range(lo, self.top)}
        return Complex(self.algebra, terms, diffs)


class Resolution(ProjectiveComplex):
    """Projective resolution of a bounded complex, computed lazily downwards."""

    def __init__(self, x: Complex, minimal_stalk: bool = True):
        self.algebra = x.algebra
        self.field = x.field
        self.target = x
        self.terms: dict[int, FreeModule] = {}
        self.d: dict[int, list[np.ndarray]] = {}
        self.pi: dict[int, list[np.ndarray]] = {}
        self.kernel_bases: dict[int, list[np.ndarray]] = {}
        self.top = x.hi
        self.lo = x.hi + 1
        self.done = x.is_zero()
        if self.done:
            self.top = -1
            self.lo = 0

    def extend(self, lo: int) -> None:
        while self.lo > lo and not self.done:
            self._step(self.lo - 1)

    def _step(self, i: int) -> None:
        """Build Q^i as the projective cover of K = {(q, y) in Q^{i+1} + X^i : dq = 0, pi q = d y}."""
        F = self.field
        A = self.algebra
        X = self.target
        nv = A.n_vertices
        Q1 = self.terms.get(i + 1, FreeModule(A, []))
        Xi = X.term(i)
        Q2 = self.terms.get(i + 2, FreeModule(A, []))
        Xi1 = X.term(i + 1)
        dq = self.d_map(i + 1) if i + 1 in self.terms and i + 2 in self.terms else ModuleMap.zero(Q1, Q2)
        pq = self.pi_map(i + 1) if i + 1 in self.terms else ModuleMap.zero(Q1, Xi1)
        dx = X.diff(i)
        bases, gens, images_q, images_y = [], [], [], []
        for v in range(nv):
            n1, n2 = Q1.dims[v], Xi.dims[v]
            rows = []
            top = F.zeros(Q2.dims[v], n1 + n2)
            if Q2.dims[v] and n1:
                top[:, :n1] = dq.mats[v]
            bottom = F.zeros(Xi1.dims[v], n1 + n2)
            if Xi1.dims[v]:
                if n1:
                    bottom[:, :n1] = pq.mats[v]
                if n2:
                    bottom[:, n1:] = F.neg(dx.mats[v])
            phi = F.vstack([top, bottom], n1 + n2)
            kb = F.kernel(phi) if phi.shape[0] else F.eye(n1 + n2)
            bases.append(kb)
        # radical of K inside Q^{i+1} + X^i and the top complement
        for v in range(nv):
            kb = bases[v]
            if kb.shape[1] == 0:
                continue
            n1 = Q1.dims[v]
            parts = []
            for k, a in enumerate(A.arrows):
                if a.target != v or bases[a.source].shape[1] == 0:
                    continue
                ks = bases[a.source]
                m1 = Q1.mats[k]
                m2 = Xi.mats[k]
                img = F.zeros(kb.shape[0], ks.shape[1])
                if n1 and Q1.dims[a.source]:
                    img[:n1, :] = F.mul(m1, ks[:Q1.dims[a.source], :])
                if Xi.dims[v] and Xi.dims[a.source]:
                    img[n1:, :] = F.mul(m2, ks[Q1.dims[a.source]:, :])
                parts.append(img)
            rad = F.hstack(parts, kb.shape[0]) if parts else F.zeros(kb.shape[0], 0)
            chosen = F.complement_columns(rad, kb)
            for c in chosen:
                col = kb[:, c:c + 1]
                gens.append(v)
                images_q.append(col[:n1, :].copy())
                images_y.append(col[n1:, :].copy())
        self.kernel_bases[i] = bases
        self.lo = i
        if not gens:
            if i < X.lo:
                self.done = True
            self.terms[i] = FreeModule(A, [])
            self.d[i] = []
            self.pi[i] = []
            return
        self.terms[i] = FreeModule(A, gens)
        self.d[i] = images_q
        self.pi[i] = images_y


def resolve(x: Complex | FDModule, lo: int | None = None) -> Resolution:
    if isinstance(x, FDModule):
        x = Complex.stalk(x)
    r = Resolution(x)
    if lo is not None:
        r.extend(lo)
    return r


# ---------------------------------------------------------------------------
# Hom complexes
# ---------------------------------------------------------------------------


class Cohomology:
    """A subquotient Z/B with chosen representatives."""

    def __init__(self, F: FieldSpec, ambient: int, Z: np.ndarray, B: np.ndarray):
        self.field = F
        self.ambient = ambient
        self.B = F.colspace(B) if B.shape[1] else F.zeros(ambient, 0)
        self.Z = Z
        idx = F.complement_columns(self.B, Z) if Z.shape[1] else ()
        self.reps = Z[:, list(idx)] if idx else F.zeros(ambient, 0)

    @property
    def dim(self) -> int:
        return self.reps.shape[1]

    def coords(self, z: np.ndarray) -> np.ndarray:
        """Class coordinates of cocycles (columns); raises if not a cocycle."""
        F = self.field
        if self.dim == 0:
            return F.zeros(0, z.shape[1])
        M = np.concatenate([self.reps, self.B], axis=1)
        x = F.solve(M, z)
        if x is None:
            raise ComplexError("vector is not a cocycle")
        return x[:self.dim, :]

    def is_coboundary(self, z: np.ndarray) -> bool:
        F = self.field
        if F.is_zero(z):
            return True
        if self.B.shape[1] == 0:
            return False
        return F.solve(self.B, z) is not None


class HomComplex:
    """Hom_A(Q, Y) for a projective complex Q and a bounded complex Y.

    Degree-n cochains are tuples of generator images: for each degree i of Q and
    each generator of Q^i an element of Y^{i+n}; ``layout(n)`` fixes the order.
    The differential is d_Y f - (-1)^n f d_Q.
    """

    def __init__(self, q: ProjectiveComplex, y: Complex):
        self.q = q
        self.y = y
        self.field = y.field
        self._diff: dict = {}
        self._layout: dict = {}
        self._coh: dict = {}

    def _range(self, n: int) -> list[int]:
        if self.y.is_zero():
            return []
        self.q.extend(self.y.lo - n)
        return [i for i in range(self.y.lo - n, self.y.hi - n + 1) if i <= self.q.top]

    def layout(self, n: int) -> tuple[list[tuple[int, int, int, int]], int]:
        """[(i, generator, offset, size)], total size."""
        if n not in self._layout:
            out, acc = [], 0
            for i in self._range(n):
                Qi = self.q.term(i)
                Yt = self.y.term(i + n)
                for l, v in enumerate(Qi.gens):
                    sz = Yt.dims[v]
                    out.append((i, l, acc, sz))
                    acc += sz
            self._layout[n] = (out, acc)
        return self._layout[n]

    def offsets(self, n: int) -> dict:
        lay, _ = self.layout(n)
        return {(i, l): (o, s) for i, l, o, s in lay}

    def size(self, n: int) -> int:
        return self.layout(n)[1]

    def differential(self, n: int) -> np.ndarray:
        if n in self._diff:
            return self._diff[n]
        F = self.field
        src_lay, src_size = self.layout(n)
        tgt_lay, tgt_size = self.layout(n + 1)
        src_off = self.offsets(n)
        D = F.zeros(tgt_size, src_size)
        sign = -1 if n % 2 else 1
        for i, l, o, s in tgt_lay:
            if s == 0:
                continue
            Qi = self.q.term(i)
            v = Qi.gens[l]
            # d_Y applied to f(g_l) with f(g_l) in Y^{i+n}
            if (i, l) in src_off:
                so, ss = src_off[(i, l)]
                if ss:
                    dy = self.y.diff(i + n).mats[v]
                    D[o:o + s, so:so + ss] = F.add(D[o:o + s, so:so + ss], dy)
            # -(-1)^n f(d_Q g_l) with f on Q^{i+1}
            if i + 1 <= self.q.top and (i + 1, 0) in src_off:
                Q1 = self.q.term(i + 1)
                x = self.q.d.get(i, [])
                if x:
                    E = Q1.eval_matrix(x[l], v, self.y.term(i + 1 + n))
                    first = [src_off[(i + 1, m)] for m in range(len(Q1.gens))]
                    lo_col = first[0][0]
                    hi_col = first[-1][0] + first[-1][1]
                    blk = E if sign < 0 else F.neg(E)
                    D[o:o + s, lo_col:hi_col] = F.add(D[o:o + s, lo_col:hi_col], blk)
        self._diff[n] = D
        return D

    def cohomology(self, n: int) -> Cohomology:
        if n not in self._coh:
            F = self.field
            size = self.size(n)
            dn = self.differential(n)
            Z = F.kernel(dn) if dn.shape[0] else F.eye(size)
            dm = self.differential(n - 1)
            self._coh[n] = Cohomology(F, size, Z, dm)
        return self._coh[n]

    def dim(self, n: int) -> int:
        return self.cohomology(n).dim

    def images(self, n: int, vec: np.ndarray) -> dict:
        """Split a degree-n cochain into ``{(i, l): image column}``."""
        out = {}
        for i, l, o, s in self.layout(n)[0]:
            out[(i, l)] = vec[o:o + s, :]
        return out

    def assemble(self, n: int, images: Callable[[int, int], np.ndarray]) -> np.ndarray:
        F = self.field
        lay, size = self.layout(n)
        out = F.zeros(size, 1)
        for i, l, o, s in lay:
            if s:
                out[o:o + s, :] = images(i, l)
        return out


def lift_cocycle(q: ProjectiveComplex, n: int, g: Callable[[int, int], np.ndarray], e: ProjectiveComplex,
                 lo: int) -> dict:
    """Lift a degree-n cocycle g: Q -> X to c: Q -> E with pi c = g, where E resolves X.

    ``g(i, l)`` returns the image in X^{i+n} of generator l of Q^i.  Returns
    ``{(i, l): image in E^{i+n}}`` for all i >= lo.  The chain condition is
    d_E c = (-1)^n c d_Q.
    """
    F = q.algebra.field
    X = e.target
    sign = -1 if n % 2 else 1
    c: dict = {}
    q.extend(lo)
    for i in range(q.top, lo - 1, -1):
        Qi = q.term(i)
        if not Qi.gens:
            continue
        j = i + n
        e.extend(j)
        Ej = e.term(j)
        Ej1 = e.term(j + 1)
        for l, v in enumerate(Qi.gens):
            gx = g(i, l)
            if i + 1 <= q.top and q.d.get(i):
                Q1 = q.term(i + 1)
                imgs = [c.get((i + 1, m), F.zeros(Ej1.dims[w], 1)) for m, w in enumerate(Q1.gens)]
                rhs = Q1.apply(imgs, q.d[i][l], v, Ej1)
                if sign < 0:
                    rhs = F.neg(rhs)
            else:
                rhs = F.zeros(Ej1.dims[v], 1)
            if Ej.dims[v] == 0:
                if not (F.is_zero(gx) and F.is_zero(rhs)):
                    raise ComplexError("lifting failed: empty target")
                c[(i, l)] = F.zeros(0, 1)
                continue
            pm = e.pi_map(j).mats[v]
            dm = e.d_map(j).mats[v] if Ej1.dims[v] else F.zeros(0, Ej.dims[v])
            M = F.vstack([pm, dm], Ej.dims[v])
            b = F.vstack([gx, rhs], 1)
            y = F.solve(M, b)
            if y is None:
                raise ComplexError("lifting failed: system has no solution")
            c[(i, l)] = y
    return c


def _composition_matrix(hom: HomComplex, n: int, lift: dict, p: int, target: HomComplex) -> np.ndarray:
    F = hom.field
    e = hom.q
    y = hom.y
    src_off = hom.offsets(n)
    lay, size = target.layout(n + p)
    M = F.zeros(size, hom.size(n))
    for i, l, o, s in lay:
        if s == 0:
            continue
        v = target.q.term(i).gens[l]
        x = lift.get((i, l))
        if x is None or x.shape[0] == 0 or F.is_zero(x):
            continue
        Ej = e.term(i + p)
        if not Ej.gens:
            continue
        E = Ej.eval_matrix(x, v, y.term(i + p + n))
        cols = [src_off[(i + p, m)] for m in range(len(Ej.gens))]
        lo_col = cols[0][0]
        hi_col = cols[-1][0] + cols[-1][1]
        M[o:o + s, lo_col:hi_col] = E
    return M


def composition_matrix(hom: HomComplex, n: int, lift: dict, p: int, target: HomComplex) -> np.ndarray:
    """Public form of the f -> f o L matrix between two Hom complexes with the same second argument."""
    return _composition_matrix(hom, n, lift, p, target)
