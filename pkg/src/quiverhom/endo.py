"""Endomorphism algebras of modules, the Hom functor into them, and quiver presentations."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import (AlgebraError, FDAlgebra, PathExpr, PathQuotient, Quiver, TableAlgebra, build_quotient,
                      format_algebra, opposite)
from .modules import FDModule, ModuleMap, direct_sum, hom_basis, loewy_layers, regular_module
from .tilting import _local_radical, basic_summands


class CapTooSmall(AlgebraError):
    pass


def roman(n: int) -> str:
    vals = [(10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I")]
    out = ""
    for v, s in vals:
        while n >= v:
            out += s
            n -= v
    return out


class EndAlgebra(TableAlgebra):
    """End_A(T) of a basic module T = T_1 + ... + T_r with composition as product.

    Basis element b is a map ``maps[b]: T_s -> T_t`` where ``ends[b] = (t, s)``.
    """

    summands: list[FDModule]
    maps: list[ModuleMap]

    def coordinates(self, t: int, s: int, f: ModuleMap) -> np.ndarray:
        """Coordinates of f: T_s -> T_t in the basis block e_t E e_s."""
        F = self.field
        blk = self.block.get((t, s), [])
        out = self.zero()
        if not blk:
            return out
        M = F.hstack([self.maps[b].vector() for b in blk], f.vector().shape[0])
        x = F.solve(M, f.vector())
        if x is None:
            raise AlgebraError("map is not in the expected Hom space")
        for k, b in enumerate(blk):
            out[b, 0] = x[k, 0]
        return out


def _end_algebra(summands: Sequence[FDModule], name: str) -> EndAlgebra:
    F = summands[0].field
    r = len(summands)
    labels, ends, idem, maps = [], [], [], []
    for t in range(r):
        for s in range(r):
            H = hom_basis(summands[s], summands[t])
            if s == t:
                ident = ModuleMap.identity(summands[t])
                idem.append(len(labels))
                labels.append(f"e{roman(t + 1)}")
                ends.append((t, t))
                maps.append(ident)
                H = _local_radical(summands[t], H)
            for k, h in enumerate(H):
                labels.append(f"f_{roman(t + 1)}_{roman(s + 1)}_{k}")
                ends.append((t, s))
                maps.append(h)
    blocks: dict = {}
    for b, e in enumerate(ends):
        blocks.setdefault(e, []).append(b)
    solvers = {}
    for key, blk in blocks.items():
        solvers[key] = F.hstack([maps[b].vector() for b in blk], maps[blk[0]].vector().shape[0])
    table = {}
    for i, (ti, si) in enumerate(ends):
        for j, (tj, sj) in enumerate(ends):
            if si != tj:
                continue
            comp = maps[i] @ maps[j]
            if comp.is_zero():
                continue
            blk = blocks[(ti, sj)]
            x = F.solve(solvers[(ti, sj)], comp.vector())
            if x is None:
                raise AlgebraError("composition left the Hom space")
            table[(i, j)] = {blk[k]: x[k, 0] for k in range(len(blk)) if x[k, 0] != 0}
    E = EndAlgebra(F, [roman(t + 1) for t in range(r)], labels, ends, idem, table, name)
    E.summands = list(summands)
    E.maps = maps
    return E


def endomorphism_algebra(t: FDModule, convention: str = "opposite", summands: Sequence[FDModule] | None = None,
                         seed: int = 0) -> FDAlgebra:
    """End_A(t) for the basic version of t.

    ``convention="left"`` gives End_A(t) with composition; ``"opposite"`` gives
    End_A(t)^op, over which Hom_A(t, M) is a left module.
    """
    if convention not in ("left", "opposite"):
        raise ValueError("convention must be 'left' or 'opposite'")
    reps = list(summands) if summands is not None else basic_summands(t, seed)
    if not reps:
        raise AlgebraError("endomorphism algebra of the zero module")
    E = _end_algebra(reps, f"End({t.name or 'T'})")
    return E if convention == "left" else opposite(E)


def end_of(b: FDAlgebra) -> EndAlgebra:
    """The EndAlgebra underlying End or End^op."""
    base = b if isinstance(b, EndAlgebra) else getattr(b, "base", None)
    if not isinstance(base, EndAlgebra):
        raise AlgebraError("not an endomorphism algebra")
    return base


class HomFunctor:
    """F = Hom_A(T, -) from A-modules to left modules over B = End_A(T)^op.

    F(M) at vertex i is Hom_A(T_i, M); a basis element phi: T_s -> T_t of
    End_A(T) acts by precomposition F(M)_t -> F(M)_s.
    """

    def __init__(self, t: FDModule | EndAlgebra, seed: int = 0):
        self.E = t if isinstance(t, EndAlgebra) else endomorphism_algebra(t, "left", seed=seed)
        self.B = opposite(self.E)
        self._hom: dict = {}

    @property
    def summands(self) -> list[FDModule]:
        return self.E.summands

    def _basis(self, i: int, m: FDModule):
        key = (i, id(m))
        if key not in self._hom:
            H = hom_basis(self.summands[i], m)
            F = m.field
            size = sum(self.summands[i].dims[v] * m.dims[v] for v in range(len(m.dims)))
            M = F.hstack([h.vector() for h in H], size) if H else F.zeros(size, 0)
            self._hom[key] = (H, M, m)
        return self._hom[key]

    def _coords(self, i: int, m: FDModule, f: ModuleMap) -> np.ndarray:
        H, M, _ = self._basis(i, m)
        if not H:
            return m.field.zeros(0, 1)
        x = m.field.solve(M, f.vector())
        if x is None:
            raise AlgebraError("map not in Hom space")
        return x

    def on_module(self, m: FDModule) -> FDModule:
        F = m.field
        B = self.B
        dims = [len(self._basis(i, m)[0]) for i in range(B.n_vertices)]
        mats = []
        for a in B.arrows:
            # arrow of B from i to j is phi: T_j -> T_i in End
            phi = self.E.maps[a.index]
            src, tgt = a.source, a.target
            Hs = self._basis(src, m)[0]
            cols = [self._coords(tgt, m, h @ phi) for h in Hs]
            mats.append(F.hstack(cols, dims[tgt]) if cols else F.zeros(dims[tgt], 0))
        return FDModule(B, dims, mats, name=f"F({m.name})" if m.name else None)

    def on_map(self, g: ModuleMap, fm: FDModule | None = None, fn: FDModule | None = None) -> ModuleMap:
        F = g.field
        fm = fm or self.on_module(g.source)
        fn = fn or self.on_module(g.target)
        mats = []
        for i in range(self.B.n_vertices):
            Hs = self._basis(i, g.source)[0]
            cols = [self._coords(i, g.target, g @ h) for h in Hs]
            mats.append(F.hstack(cols, fn.dims[i]) if cols else F.zeros(fn.dims[i], 0))
        return ModuleMap(fm, fn, mats)


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------


@dataclass
class Presentation:
    quiver: Quiver
    relations: list[PathExpr]
    arrow_images: list
    cap: int
    algebra: PathQuotient

    def to_text(self) -> str:
        return format_algebra(self.quiver, self.relations, self.algebra.field)


def _arrow_names(e: FDAlgebra) -> list[str]:
    labels = [a.label for a in e.arrows]
    ok = all(re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", x) for x in labels) and len(set(labels)) == len(labels)
    return labels if ok else [f"x{k + 1}" for k in range(len(labels))]


def _times(u: tuple, r: dict, v: tuple, q: Quiver) -> dict:
    """u * r * v on path dictionaries; u and v are (source, word) paths."""
    out = {}
    for (src, w), c in r.items():
        out[(v[0], u[1] + w + v[1])] = c
    return out


def present_by_quiver(e: FDAlgebra, cap: int = 10) -> Presentation:
    """Quiver with relations for a basic algebra, verified by rebuilding the quotient."""
    F = e.field
    L = e.loewy_length()
    if L > cap:
        raise CapTooSmall(f"Loewy length {L} exceeds cap {cap}")
    arrows = e.arrows
    names = _arrow_names(e)
    nv = e.n_vertices
    q = Quiver(e.vertex_labels, [(names[k], e.vertex_labels[a.source], e.vertex_labels[a.target])
                                 for k, a in enumerate(arrows)])
    # images of all paths up to length L, grouped by length
    layers = [[((v, ()), e.basis_vector(e.idem[v])) for v in range(nv)]]
    for _ in range(L):
        nxt = []
        for (src, w), img in layers[-1]:
            t = q.target((src, w))
            for k, a in enumerate(arrows):
                if a.source == t:
                    nxt.append(((src, (k,) + w), F.mul(e.left_matrix(a.index), img)))
        layers.append(nxt)
    by_len = [[p for p, _ in layer] for layer in layers]
    images = {p: img for layer in layers for p, img in layer}
    rels: list[dict] = []
    rel_len: list[int] = []
    for ell in range(2, L + 1):
        for t in range(nv):
            for s in range(nv):
                paths = [p for n in range(2, ell + 1) for p in by_len[n] if p[0] == s and q.target(p) == t]
                if not paths:
                    continue
                pos = {p: i for i, p in enumerate(paths)}
                M = F.hstack([images[p] for p in paths], e.dim)
                K = F.kernel(M)
                if K.shape[1] == 0:
                    continue
                # ideal generated so far, truncated at length ell
                cols = []
                for r, m in zip(rels, rel_len):
                    (rs, rt) = next(iter((q.source(p), q.target(p)) for p in r))
                    for lu in range(0, ell - m + 1):
                        for u in by_len[lu]:
                            if u[0] != rt or q.target(u) != t:
                                continue
                            for lv in range(0, ell - m - lu + 1):
                                for v in by_len[lv]:
                                    if v[0] != s or q.target(v) != rs:
                                        continue
                                    col = F.zeros(len(paths), 1)
                                    for p, c in _times(u, r, v, q).items():
                                        col[pos[p], 0] = c
                                    cols.append(col)
                W = F.hstack(cols, len(paths)) if cols else F.zeros(len(paths), 0)
                for c in F.complement_columns(W, K):
                    vec = K[:, c]
                    r = {paths[i]: vec[i] for i in range(len(paths)) if vec[i] != 0}
                    rels.append(r)
                    rel_len.append(max(len(p[1]) for p in r))
    relations = [PathExpr(q, r, F) for r in rels]
    quot = build_quotient(q, relations, F, cap=max(cap, L) + 2, name=f"pres({e.name})")
    if quot.dim != e.dim or quot.cartan() != e.cartan():
        raise CapTooSmall("presentation does not reproduce the algebra")
    if _layer_dims(quot) != _layer_dims(e):
        raise CapTooSmall("radical layers do not match")
    imgs = [e.maps[a.index] if isinstance(e, EndAlgebra) else e.basis_vector(a.index) for a in arrows]
    return Presentation(q, relations, imgs, cap, quot)


def _layer_dims(a: FDAlgebra) -> list[int]:
    return [sum(x) for x in loewy_layers(regular_module(a))]


def basic_sum(summands: Sequence[FDModule]) -> FDModule:
    return direct_sum(list(summands))[0]
