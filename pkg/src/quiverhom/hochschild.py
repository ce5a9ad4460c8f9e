"""Hochschild cohomology via minimal bimodule resolutions, cup products, and the action on Ext."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import FDAlgebra, enveloping, tensor
from .complexes import Complex, HomComplex, ProjectiveComplex, Resolution, lift_cocycle
from .homology import ExtClass, ExtTable, ProjResolution, ext_dims, yoneda_compose
from .modules import FDModule, FreeModule, module_from_action


# ---------------------------------------------------------------------------
# The regular bimodule
# ---------------------------------------------------------------------------


def _bimodule_blocks(a: FDAlgebra) -> list[list[int]]:
    n = a.n_vertices
    return [a.block.get(divmod(w, n), []) for w in range(n * n)]


def regular_bimodule(a: FDAlgebra) -> FDModule:
    """A as a left module over A^e; vertex (i, j) carries e_i A e_j."""
    cached = a.__dict__.get("_regular_bimodule")
    if cached is not None:
        return cached
    ae = enveloping(a)
    F = a.field
    blocks = _bimodule_blocks(a)
    pos = {b: k for blk in blocks for k, b in enumerate(blk)}

    def act(beta):
        p, q = ae.pair(beta)
        t, s = ae.ends[beta]
        out = F.zeros(len(blocks[t]), len(blocks[s]))
        for col, m in enumerate(blocks[s]):
            for k, c in a.mul_basis(p, m).items():
                for l, d in a.mul_basis(k, q).items():
                    out[pos[l], col] += c * d
        return out

    m = module_from_action(ae, [len(b) for b in blocks], act, name="A")
    a._regular_bimodule = m
    return m


# ---------------------------------------------------------------------------
# HH tables and classes
# ---------------------------------------------------------------------------


@dataclass
class HHTable:
    algebra: FDAlgebra
    dims: list[int]
    ext: ExtTable

    @property
    def cap(self) -> int:
        return len(self.dims) - 1

    @property
    def hom(self) -> HomComplex:
        return self.ext.hom

    @property
    def resolution(self) -> ProjectiveComplex:
        return self.ext.hom.q

    def representatives(self, n: int) -> np.ndarray:
        return self.hom.cohomology(n).reps

    def classes(self, n: int) -> list["CocycleRoof"]:
        reps = self.representatives(n)
        return [CocycleRoof(n, reps[:, k:k + 1], self) for k in range(reps.shape[1])]

    def unit(self) -> "CocycleRoof":
        r = self.resolution
        return CocycleRoof(0, self.hom.assemble(0, lambda i, l: r.pi[0][l]), self)


@dataclass
class CocycleRoof:
    """A cocycle eta: P_n -> A on the minimal bimodule resolution."""

    degree: int
    vector: np.ndarray
    table: HHTable

    def ext_class(self) -> ExtClass:
        return ExtClass(self.table.hom, self.degree, self.vector, self.table.cap)

    def coords(self) -> np.ndarray:
        return self.table.hom.cohomology(self.degree).coords(self.vector)

    def is_coboundary(self) -> bool:
        return self.table.hom.cohomology(self.degree).is_coboundary(self.vector)

    def __add__(self, other: "CocycleRoof") -> "CocycleRoof":
        return CocycleRoof(self.degree, self.table.algebra.field.add(self.vector, other.vector), self.table)

    def __sub__(self, other: "CocycleRoof") -> "CocycleRoof":
        return CocycleRoof(self.degree, self.table.algebra.field.sub(self.vector, other.vector), self.table)

    def scale(self, c) -> "CocycleRoof":
        return CocycleRoof(self.degree, self.table.algebra.field.smul(c, self.vector), self.table)


def hh_dims(a: FDAlgebra, cap: int = 5) -> HHTable:
    """dim HH^n(a) for n <= cap from the minimal resolution of a over a^e (cached per algebra)."""
    cached = a.__dict__.get("_hh_table")
    if cached is not None and cached.cap >= cap:
        return cached if cached.cap == cap else HHTable(a, cached.dims[:cap + 1], cached.ext)
    m = regular_bimodule(a)
    res = ProjResolution(m, cap + 1)
    ext = ext_dims(m, m, cap, resolution=res)
    table = HHTable(a, list(ext.dims), ext)
    a._hh_table = table
    return table


def cup_product(e1: CocycleRoof, e2: CocycleRoof) -> CocycleRoof:
    """Product of degree p and q classes as a Yoneda composite (e1 applied first)."""
    if e1.table.algebra is not e2.table.algebra:
        raise ValueError("classes over different algebras")
    table = e1.table if e1.table.cap >= e2.table.cap else e2.table
    x = yoneda_compose(ExtClass(table.hom, e1.degree, e1.vector, table.cap),
                       ExtClass(table.hom, e2.degree, e2.vector, table.cap))
    return CocycleRoof(x.degree, x.vector, table)


@dataclass(frozen=True)
class HHEvenSelector:
    """Degrees of HH^ev: even degrees, or all degrees in characteristic 2."""

    characteristic: int

    def selects(self, n: int) -> bool:
        return self.characteristic == 2 or n % 2 == 0

    def degrees(self, cap: int) -> list[int]:
        return [n for n in range(cap + 1) if self.selects(n)]


@dataclass(frozen=True)
class FullSelector:
    def selects(self, n: int) -> bool:
        return True

    def degrees(self, cap: int) -> list[int]:
        return list(range(cap + 1))


def selector(name: str, a: FDAlgebra):
    if name in ("ev", "HHev", "even"):
        return HHEvenSelector(a.field.characteristic)
    if name in ("full", "HH", "all"):
        return FullSelector()
    raise ValueError(f"unknown selector {name!r}")


def kunneth_check(a: FDAlgebra, b: FDAlgebra, cap: int = 4) -> bool:
    """dim HH^n(a (x) b) against the convolution of the factor dimensions."""
    if a.field.characteristic != 0:
        warnings.warn("Kunneth comparison outside characteristic zero", stacklevel=2)
    da = hh_dims(a, cap).dims
    db = hh_dims(b, cap).dims
    dt = hh_dims(tensor(a, b), cap).dims
    conv = [sum(da[p] * db[n - p] for p in range(n + 1)) for n in range(cap + 1)]
    return conv == dt[:cap + 1]


# ---------------------------------------------------------------------------
# The action on Ext through P (x)_A X
# ---------------------------------------------------------------------------


class TotComplex(ProjectiveComplex):
    """Tot(P (x)_A X) for the bimodule resolution P of A and a complex X of A-modules.

    (A e_i (x) e_j A) (x)_A X^k is free over A on generators [g, x] with x
    running through a basis of e_j X^k; the augmentation is eps (x) X.
    """

    def __init__(self, r: ProjectiveComplex, x: Complex):
        self.R = r
        self.target = x
        self.algebra = x.algebra
        self.field = x.field
        self.ae = r.algebra
        self.blocks = _bimodule_blocks(self.algebra)
        self.terms: dict = {}
        self.d: dict = {}
        self.pi: dict = {}
        self.keys: dict = {}
        self.top = x.hi
        self.lo = x.hi + 1
        self.done = x.is_zero()
        if self.done:
            self.top, self.lo = -1, 0

    def extend(self, lo: int) -> None:
        while self.lo > lo and not self.done:
            self._build(self.lo - 1)

    def _build(self, m: int) -> None:
        A, F, R, X = self.algebra, self.field, self.R, self.target
        n = A.n_vertices
        keys, gens = [], []
        for p in range(0, X.hi - m + 1):
            R.extend(-p)
            Rp = R.term(-p)
            Xd = X.term(m + p)
            for l, w in enumerate(Rp.gens):
                i, j = divmod(w, n)
                for y in range(Xd.dims[j]):
                    keys.append((p, l, y))
                    gens.append(i)
        index = {k: g for g, k in enumerate(keys)}
        T = FreeModule(A, gens)
        self.keys[m] = index
        self.terms[m] = T
        self.lo = m
        T1 = self.terms.get(m + 1)
        idx1 = self.keys.get(m + 1, {})
        d_imgs, pi_imgs = [], []
        for g, (p, l, y) in enumerate(keys):
            i = gens[g]
            w = R.term(-p).gens[l]
            j = w % n
            vec = F.zeros(T1.dims[i] if T1 is not None else 0, 1)
            if T1 is not None and p >= 1:
                Rp1 = R.term(-p + 1)
                img = R.d[-p][l]
                Xd = X.term(m + p)
                for pos in range(img.shape[0]):
                    c = img[pos, 0]
                    if c == 0:
                        continue
                    l2, beta = Rp1.basis[w][pos]
                    pa, qb = self.ae.pair(beta)
                    qx = Xd.act(qb)[:, y]
                    for y2 in range(qx.shape[0]):
                        if qx[y2] != 0:
                            g2 = idx1[(p - 1, l2, y2)]
                            vec[T1.index[i][(g2, pa)], 0] += c * qx[y2]
            if T1 is not None:
                dx = X.diff(m + p).mats[j]
                if dx.shape[0]:
                    sign = -1 if p % 2 else 1
                    col = dx[:, y]
                    for y2 in range(col.shape[0]):
                        if col[y2] != 0:
                            g2 = idx1[(p, l, y2)]
                            k = T1.index[i][(g2, A.idem[i])]
                            vec[k, 0] += col[y2] if sign > 0 else -col[y2]
            d_imgs.append(vec % F.characteristic if F.characteristic else vec)
            Xm = X.term(m)
            out = F.zeros(Xm.dims[i], 1)
            if p == 0:
                coeffs = R.pi[0][l]
                for k, b in enumerate(self.blocks[w]):
                    if coeffs[k, 0] != 0:
                        out = F.add(out, F.smul(coeffs[k, 0], Xm.act(b)[:, y:y + 1]))
            pi_imgs.append(out)
        self.d[m] = d_imgs
        self.pi[m] = pi_imgs
        if not gens and m < X.lo and getattr(R, "done", False):
            self.done = True


class PhiContext:
    """Shared data for the action of HH*(A) on Hom_D(X, X[*]) for one complex X."""

    def __init__(self, table: HHTable, x: Complex | FDModule, lo: int, q: Resolution | None = None):
        if isinstance(x, FDModule):
            x = Complex.stalk(x)
        self.table = table
        self.x = x
        self.q = q or Resolution(x)
        self.hom = HomComplex(self.q, x)
        self.tot = TotComplex(table.resolution, x)
        self.lo = lo
        q_ = self.q
        self.q.extend(lo)
        F = x.field
        self.c = lift_cocycle(self.q, 0, lambda i, l: q_.pi[i][l] if i in q_.pi else F.zeros(0, 1), self.tot, lo)
        self._lifts: dict = {}

    def phi(self, e: CocycleRoof) -> np.ndarray:
        """Degree-n cocycle of Hom(Q, X) representing phi_X(e)."""
        n = e.degree
        if self.x.lo - n < self.lo:
            raise ValueError("lift not computed deep enough for this degree")
        F = self.x.field
        blocks = self.tot.blocks
        eta = self.table.hom.images(n, e.vector)
        R = self.table.resolution
        nv = self.x.algebra.n_vertices

        def images(i, l):
            v = self.q.term(i).gens[l]
            tgt = self.x.term(i + n)
            ci = self.c.get((i, l))
            if ci is None or ci.shape[0] == 0:
                return F.zeros(tgt.dims[v], 1)
            T = self.tot.term(i)
            keys = self.tot.keys[i]
            gimgs = [None] * len(keys)
            for (p, l2, y), g in keys.items():
                u = T.gens[g]
                if p != n:
                    gimgs[g] = F.zeros(tgt.dims[u], 1)
                    continue
                w = R.term(-n).gens[l2]
                coeffs = eta[(-n, l2)]
                out = F.zeros(tgt.dims[u], 1)
                for k, b in enumerate(blocks[w]):
                    if coeffs[k, 0] != 0:
                        out = F.add(out, F.smul(coeffs[k, 0], tgt.act(b)[:, y:y + 1]))
                gimgs[g] = out
            return T.apply(gimgs, ci, v, tgt)

        return self.hom.assemble(n, images)

    def lift(self, e: CocycleRoof) -> dict:
        """The chain map Q -> Q of degree n lifting phi_X(e)."""
        key = id(e.vector)
        if key not in self._lifts:
            vec = self.phi(e)
            imgs = self.hom.images(e.degree, vec)
            F = self.x.field
            n = e.degree
            q = self.q

            def g(i, l):
                v = imgs.get((i, l))
                if v is None:
                    return F.zeros(self.x.term(i + n).dims[q.term(i).gens[l]], 1)
                return v

            self._lifts[key] = (e, lift_cocycle(q, n, g, q, self.lo))
        return self._lifts[key][1]


def phi_action(a: FDAlgebra, m: FDModule | Complex, e: CocycleRoof, context: PhiContext | None = None) -> ExtClass:
    """phi_m(e) as a class in Ext^n(m, m)."""
    if e.table.algebra is not a:
        raise ValueError("class belongs to a different algebra")
    ctx = context or PhiContext(e.table, m, (m.lo if isinstance(m, Complex) else 0) - e.degree - 1)
    return ExtClass(ctx.hom, e.degree, ctx.phi(e))
