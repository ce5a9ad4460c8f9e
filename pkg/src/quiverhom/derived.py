"""Bounded complexes: hyper-Hom, derived tensor of bimodule complexes, RHom(T, -), invariance checks."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .algebra import FDAlgebra, TensorAlgebra, opposite, tensor
from .complexes import Complex, ComplexError, HomComplex, Resolution
from .endo import EndAlgebra, HomFunctor, _end_algebra
from .fgcheck import ExtAction, support_fingerprint
from .hochschild import hh_dims
from .homology import Finite, projdim, combine
from .modules import FDModule, FreeModule, ModuleMap, cokernel, direct_sum, zero_module
from .tilting import basic_summands, check_tilting

BddComplex = Complex


class TiltingNotVerified(ComplexError):
    pass


def as_complex(x) -> Complex:
    return x if isinstance(x, Complex) else Complex.stalk(x)


# ---------------------------------------------------------------------------
# Hyper-Hom
# ---------------------------------------------------------------------------


@dataclass
class HyperHomTable:
    x: Complex
    y: Complex
    window: tuple[int, int]
    dims: dict

    def as_list(self) -> list[int]:
        return [self.dims[n] for n in range(self.window[0], self.window[1] + 1)]


def hyper_hom_dims(x, y, window: tuple[int, int] = (0, 4), resolution: Resolution | None = None) -> HyperHomTable:
    """dim Hom_D(x, y[n]) for n in the window, from a projective resolution of x."""
    x, y = as_complex(x), as_complex(y)
    if x.algebra is not y.algebra:
        raise ComplexError("complexes over different algebras")
    q = resolution or Resolution(x)
    hom = HomComplex(q, y)
    dims = {n: hom.dim(n) for n in range(window[0], window[1] + 1)}
    return HyperHomTable(x, y, window, dims)


# ---------------------------------------------------------------------------
# Duality and RHom(T, -)
# ---------------------------------------------------------------------------


def dual_complex(x: Complex) -> Complex:
    """Hom_k(x, k) over the opposite algebra, with D(x)^{-i} = D(x^i)."""
    op = opposite(x.algebra)
    terms, diffs = {}, {}
    for i in range(x.lo, x.hi + 1):
        m = x.term(i)
        terms[-i] = FDModule(op, m.dims, [a.T.copy() for a in m.mats])
    for i in range(x.lo, x.hi):
        f = x.diff(i)
        diffs[-i - 1] = ModuleMap(terms[-i - 1], terms[-i], [a.T.copy() for a in f.mats])
    return Complex(op, terms, diffs)


def injective_coresolution(x: Complex, top: int) -> Complex:
    """An injective complex J with x -> J a quasi-isomorphism, capped at degree top.

    Degrees below top are injective; degree top holds the cosyzygy
    J^{top-1} / im d, which keeps the complex quasi-isomorphic to x as long as
    top > x.hi.
    """
    if top <= x.hi:
        raise ValueError("cap must lie above the complex")
    dx = dual_complex(x)
    q = Resolution(dx)
    q.extend(-top)
    A = x.algebra
    terms, diffs = {}, {}
    lo = x.lo
    for k in range(lo, top):
        Q = q.term(-k)
        terms[k] = FDModule(A, Q.dims, [a.T.copy() for a in Q.mats])
    for k in range(lo, top - 1):
        g = q.d_map(-k - 1)
        diffs[k] = ModuleMap(terms[k], terms[k + 1], [a.T.copy() for a in g.mats])
    if top - 2 >= lo:
        c, proj = cokernel(diffs[top - 2])
    else:
        z = zero_module(A)
        c, proj = cokernel(ModuleMap.zero(z, terms[top - 1]))
    terms[top] = c
    diffs[top - 1] = proj
    return Complex(A, terms, diffs)


def tilting_functor(t: FDModule | Sequence[FDModule], seed: int = 0) -> HomFunctor:
    summands = list(t) if isinstance(t, (list, tuple)) else basic_summands(t, seed)
    return HomFunctor(_end_algebra(summands, "End(T)"))


def rhom_tilting(t, m, functor: HomFunctor | None = None, depth: int | None = None, verified: bool = False,
                 window: tuple[int, int] | None = None) -> Complex:
    """RHom_A(t, m) as a complex of left modules over B = End_A(t)^op.

    t is a module or its list of indecomposable summands; m is a module or a
    bounded complex.  Hom_A(t, -) is applied to an injective coresolution of m
    capped at degree m.hi + depth; any depth above pd t gives the same result
    up to quasi-isomorphism.  A window only raises the cap to window[1] + pd + 1.
    """
    m = as_complex(m)
    summands = list(t) if isinstance(t, (list, tuple)) else None
    tmod = direct_sum(summands)[0] if summands else t
    pd = None
    if not verified:
        rep = check_tilting(tmod)
        if not rep.is_yes:
            raise TiltingNotVerified("the module is not a verified tilting module")
        pd = rep.axiom_i.n
    functor = functor or tilting_functor(summands if summands else tmod)
    if pd is None:
        r = combine([projdim(s, 20) for s in functor.summands], 20)
        if not isinstance(r, Finite):
            raise TiltingNotVerified("infinite projective dimension")
        pd = r.n
    depth = depth if depth is not None else max(pd, 1) + 1
    if depth < max(pd, 1):
        raise ValueError("depth must be at least pd(t)")
    B = functor.B
    if m.is_zero():
        return Complex(B, {})
    top = m.hi + depth
    if window is not None:
        top = max(top, window[1] + pd + 1)
    C = injective_coresolution(m, top)
    terms = {k: functor.on_module(C.term(k)) for k in range(C.lo, C.hi + 1)}
    diffs = {k: functor.on_map(C.diff(k), terms[k], terms[k + 1]) for k in range(C.lo, C.hi)}
    return Complex(B, terms, diffs)


# ---------------------------------------------------------------------------
# Derived tensor products of bimodule complexes
# ---------------------------------------------------------------------------


def bimodule_algebra(a: FDAlgebra, b: FDAlgebra) -> TensorAlgebra:
    """A (x) B^op, over which (A, B)-bimodules are left modules."""
    return tensor(a, opposite(b))


def _factors(alg: TensorAlgebra) -> tuple[FDAlgebra, FDAlgebra]:
    return alg.a, opposite(alg.b)


def _free_left(a: FDAlgebra, i: int) -> FreeModule:
    cache = a.__dict__.setdefault("_proj_cache", {})
    if i not in cache:
        cache[i] = FreeModule(a, [i])
    return cache[i]


def _right_mult(a: FDAlgebra, i: int, i2: int, pa: int) -> list[np.ndarray]:
    """Right multiplication by pa in e_i A e_i2 as a map A e_i -> A e_i2, per vertex."""
    F = a.field
    U, U2 = _free_left(a, i), _free_left(a, i2)
    out = []
    for u in range(a.n_vertices):
        m = F.zeros(U2.dims[u], U.dims[u])
        for col, (_, b) in enumerate(U.basis[u]):
            for k, c in a.mul_basis(b, pa).items():
                m[U2.index[u][(0, k)], col] += c
        out.append(m)
    return out


def _row_module(m: FDModule, j: int, cop: FDAlgebra) -> FDModule:
    """e_j M as a left module over C^op for M over B (x) C^op."""
    alg = m.algebra
    nc = cop.n_vertices
    B = alg.a
    dims = [m.dims[j * nc + c] for c in range(nc)]
    mats = [m.act(B.idem[j] * cop.dim + y.index) for y in cop.arrows]
    return FDModule(cop, dims, mats)


def _external(U: FDModule, V: FDModule, alg: TensorAlgebra) -> FDModule:
    F = U.field
    A, Cop = alg.a, alg.b
    dims = [U.dims[u] * V.dims[c] for u in range(A.n_vertices) for c in range(Cop.n_vertices)]
    mats = []
    for xi, _ in enumerate(A.arrows):
        for k in range(Cop.n_vertices):
            mats.append(F.kron(U.mats[xi], F.eye(V.dims[k])))
    for yi, _ in enumerate(Cop.arrows):
        for i in range(A.n_vertices):
            mats.append(F.kron(F.eye(U.dims[i]), V.mats[yi]))
    return FDModule(alg, dims, mats)


def derived_tensor(l: Complex | FDModule, m: Complex | FDModule, window: tuple[int, int] = (-4, 4)) -> Complex:
    """l (x)^L_B m for l over A (x) B^op and m over B (x) C^op.

    The resolution of l is truncated so that the result is exact in degrees
    >= window[0]; the returned complex starts one degree below that.
    """
    l, m = as_complex(l), as_complex(m)
    LA, MA = l.algebra, m.algebra
    if not isinstance(LA, TensorAlgebra) or not isinstance(MA, TensorAlgebra):
        raise ComplexError("bimodule complexes are complexes over tensor algebras")
    A, B = _factors(LA)
    if MA.a is not B:
        raise ComplexError("middle algebras do not match")
    Cop = MA.b
    RA = tensor(A, Cop)
    F = A.field
    if l.is_zero() or m.is_zero():
        return Complex(RA, {})
    start = window[0] - 1
    s_min = start - m.hi
    P = Resolution(l)
    P.extend(s_min)
    nb = B.n_vertices
    rows = {}

    def row(j, q):
        if (j, q) not in rows:
            rows[(j, q)] = _row_module(m.term(q), j, Cop)
        return rows[(j, q)]

    # pieces of each total degree
    pieces: dict[int, list[tuple[int, int, int]]] = {}
    for s in range(s_min, P.top + 1):
        Ps = P.term(s)
        for g, w in enumerate(Ps.gens):
            for q in range(m.lo, m.hi + 1):
                k = s + q
                if k < start:
                    continue
                pieces.setdefault(k, []).append((s, g, q))
    if not pieces:
        return Complex(RA, {})
    terms, incl, proj, pos = {}, {}, {}, {}
    for k, plist in pieces.items():
        mods = []
        for s, g, q in plist:
            i, jj = divmod(P.term(s).gens[g], nb)
            mods.append(_external(_free_left(A, i), row(jj, q), RA))
        total, inc, pr = direct_sum(mods)
        terms[k], incl[k], proj[k] = total, inc, pr
        pos[k] = {key: n for n, key in enumerate(plist)}
    diffs = {}
    for k in sorted(terms):
        if k + 1 not in terms:
            continue
        src, tgt = terms[k], terms[k + 1]
        mats = [F.zeros(tgt.dims[v], src.dims[v]) for v in range(RA.n_vertices)]
        so = [_block_offsets(terms[k], incl[k], v) for v in range(RA.n_vertices)]
        to = [_block_offsets(terms[k + 1], incl[k + 1], v) for v in range(RA.n_vertices)]
        for n_src, (s, g, q) in enumerate(pieces[k]):
            w = P.term(s).gens[g]
            i, jj = divmod(w, nb)
            # 1 (x) d_M with sign (-1)^s
            if q + 1 <= m.hi and (s, g, q + 1) in pos[k + 1]:
                n_tgt = pos[k + 1][(s, g, q + 1)]
                dm = m.diff(q)
                U = _free_left(A, i)
                for v in range(RA.n_vertices):
                    u, c = divmod(v, Cop.n_vertices)
                    blk = F.kron(F.eye(U.dims[u]), dm.mats[jj * Cop.n_vertices + c])
                    if s % 2:
                        blk = F.neg(blk)
                    _add_block(F, mats[v], to[v][n_tgt], so[v][n_src], blk)
            # d_P (x) 1
            if s + 1 <= P.top and P.d.get(s):
                P1 = P.term(s + 1)
                img = P.d[s][g]
                for p_ in range(img.shape[0]):
                    c0 = img[p_, 0]
                    if c0 == 0:
                        continue
                    g2, beta = P1.basis[w][p_]
                    pa, qb = LA.pair(beta)
                    w2 = P1.gens[g2]
                    i2, j2 = divmod(w2, nb)
                    key = (s + 1, g2, q)
                    if key not in pos[k + 1]:
                        continue
                    n_tgt = pos[k + 1][key]
                    rm = _right_mult(A, i, i2, pa)
                    Mq = m.term(q)
                    for v in range(RA.n_vertices):
                        u, c = divmod(v, Cop.n_vertices)
                        left = Mq.act(qb * Cop.dim + Cop.idem[c])
                        blk = F.smul(c0, F.kron(rm[u], left))
                        _add_block(F, mats[v], to[v][n_tgt], so[v][n_src], blk)
        diffs[k] = ModuleMap(src, tgt, mats)
    out = Complex(RA, terms, diffs)
    out.valid_from = window[0]
    return out


def _block_offsets(total: FDModule, inc: list[ModuleMap], v: int) -> list[tuple[int, int]]:
    out, acc = [], 0
    for f in inc:
        d = f.source.dims[v]
        out.append((acc, d))
        acc += d
    return out


def _add_block(F, mat, tgt: tuple[int, int], src: tuple[int, int], blk) -> None:
    (to, ts), (so, ss) = tgt, src
    if ts == 0 or ss == 0:
        return
    mat[to:to + ts, so:so + ss] = F.add(mat[to:to + ts, so:so + ss], blk)


def homology_vectors(x: Complex, window: tuple[int, int]) -> dict:
    return {k: x.homology_dims(k) if x.lo <= k <= x.hi else tuple([0] * x.algebra.n_vertices)
            for k in range(window[0], window[1] + 1)}


def assoc_check(l, m, n, window: tuple[int, int] = (-2, 2)) -> bool:
    """Homology of (l (x) m) (x) n against l (x) (m (x) n) in the window."""
    l, m, n = as_complex(l), as_complex(m), as_complex(n)
    lm = derived_tensor(l, m, (window[0] - n.hi, window[1]))
    left = derived_tensor(lm, n, window)
    mn = derived_tensor(m, n, (window[0] - l.hi, window[1]))
    right = derived_tensor(l, mn, window)
    if left.algebra is not right.algebra:
        raise ComplexError("results over different algebras")
    return homology_vectors(left, window) == homology_vectors(right, window)


def regular_bimodule_stalk(a: FDAlgebra) -> Complex:
    """A as an (A, A)-bimodule stalk complex over A (x) A^op."""
    from .hochschild import regular_bimodule

    return Complex.stalk(regular_bimodule(a))


# ---------------------------------------------------------------------------
# Invariance under the tilting equivalence
# ---------------------------------------------------------------------------


@dataclass
class InvarianceReport:
    hh: tuple[list[int], list[int]]
    hyper_hom: list[tuple[str, list[int], list[int]]]
    fingerprints: list[tuple[str, list[int], list[int]]]
    convention: str = "images are left modules over End_A(T)^op"

    @property
    def hh_ok(self) -> bool:
        return self.hh[0] == self.hh[1]

    @property
    def hyper_hom_ok(self) -> bool:
        return all(x == y for _, x, y in self.hyper_hom)

    @property
    def fingerprint_ok(self) -> bool:
        return all(x == y for _, x, y in self.fingerprints)

    @property
    def passed(self) -> bool:
        return self.hh_ok and self.hyper_hom_ok and self.fingerprint_ok


def invariance_suite(a: FDAlgebra, t, pairs: Sequence[tuple], window: tuple[int, int] = (-1, 3), hh_cap: int = 4,
                     fp_cap: int = 4, fingerprints: bool = True) -> InvarianceReport:
    """Compare HH dimensions, hyper-Hom tables and HH^ev fingerprints across F = RHom_A(t, -)."""
    summands = list(t) if isinstance(t, (list, tuple)) else basic_summands(t)
    tmod = direct_sum(summands)[0]
    if not check_tilting(tmod).is_yes:
        raise TiltingNotVerified("the module is not a verified tilting module")
    functor = tilting_functor(summands)
    B = functor.B
    hh = (hh_dims(a, hh_cap).dims, hh_dims(B, hh_cap).dims)
    images: dict = {}

    def image(x):
        if id(x) not in images:
            images[id(x)] = (x, rhom_tilting(summands, x, functor, verified=True))
        return images[id(x)][1]

    def name(x):
        return getattr(x, "name", None) or "X"

    hyper = []
    for x, y in pairs:
        ta = hyper_hom_dims(x, y, window).as_list()
        tb = hyper_hom_dims(image(x), image(y), window).as_list()
        hyper.append((f"({name(x)},{name(y)})", ta, tb))
    fps = []
    if fingerprints:
        ta_tab, tb_tab = hh_dims(a, fp_cap), hh_dims(B, fp_cap)
        ctx: dict = {}

        def fingerprint(alg, table, x, y):
            act = ExtAction(alg, x, y, fp_cap, table, ctx.get((id(alg), id(x))))
            ctx[(id(alg), id(x))] = act.ctx
            return support_fingerprint(alg, x, y, "ev", fp_cap, table, act).as_list()

        for x, y in pairs:
            fa = fingerprint(a, ta_tab, x, y)
            fb = fingerprint(B, tb_tab, image(x), image(y))
            fps.append((f"({name(x)},{name(y)})", fa, fb))
    return InvarianceReport(hh, hyper, fps)
