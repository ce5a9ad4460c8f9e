"""Finite-dimensional left modules as quiver representations.

A module stores one vector space per vertex and one matrix per arrow of its
algebra (shape ``dims[target] x dims[source]``).  The action of an arbitrary
basis element of the algebra is derived from the algebra's word expansions.

Free modules (finite direct sums of indecomposable projectives ``A e_v``) have
their own class: their basis at vertex ``w`` is indexed by pairs
``(generator, basis element)``, and a homomorphism out of a free module is given
by the images of its generators.
"""

from __future__ import annotations

import random
from functools import cached_property
from typing import Sequence

import numpy as np

from .algebra import FDAlgebra, opposite
from .exactlin import FieldSpec


class ModuleError(Exception):
    pass


class AlgebraMismatch(ModuleError):
    pass


class FieldTooSmall(ModuleError):
    pass


class FDModule:
    def __init__(self, algebra: FDAlgebra, dims: Sequence[int], mats: Sequence[np.ndarray], name: str | None = None):
        self.algebra = algebra
        self.field: FieldSpec = algebra.field
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.n_vertices:
            raise ModuleError("dimension vector has the wrong length")
        arrows = algebra.arrows
        if len(mats) != len(arrows):
            raise ModuleError("one matrix per arrow is required")
        self.mats = []
        for a, m in zip(arrows, mats):
            m = np.asarray(m)
            if m.shape != (self.dims[a.target], self.dims[a.source]):
                raise ModuleError(f"arrow {a.label}: expected shape {(self.dims[a.target], self.dims[a.source])}, got {m.shape}")
            self.mats.append(m)
        self.name = name
        self._wcache: dict = {}
        self._acache: dict = {}

    # -- basic data ---------------------------------------------------------
    @property
    def dim(self) -> int:
        return sum(self.dims)

    @cached_property
    def offsets(self) -> list[int]:
        out, acc = [], 0
        for d in self.dims:
            out.append(acc)
            acc += d
        return out

    def is_zero(self) -> bool:
        return self.dim == 0

    def _word(self, src: int, word: tuple) -> np.ndarray:
        key = (src, word)
        m = self._wcache.get(key)
        if m is None:
            if not word:
                m = self.field.eye(self.dims[src])
            else:
                a = self.algebra.arrows[word[0]]
                m = self.field.mul(self.mats[word[0]], self._word(src, word[1:]))
                if a.target is None:  # pragma: no cover
                    raise ModuleError("bad word")
            self._wcache[key] = m
        return m

    def act(self, b: int) -> np.ndarray:
        """Matrix of basis element b, as a map M_{s(b)} -> M_{t(b)}."""
        m = self._acache.get(b)
        if m is None:
            t, s = self.algebra.ends[b]
            F = self.field
            m = F.zeros(self.dims[t], self.dims[s])
            for c, src, word in self.algebra.words[b]:
                w = self._word(src, word)
                m = F.add(m, w) if c == F.one else F.add(m, F.smul(c, w))
            self._acache[b] = m
        return m

    def total_matrix(self, b: int) -> np.ndarray:
        t, s = self.algebra.ends[b]
        out = self.field.zeros(self.dim, self.dim)
        o = self.offsets
        out[o[t]:o[t] + self.dims[t], o[s]:o[s] + self.dims[s]] = self.act(b)
        return out

    def element_action(self, x: np.ndarray) -> np.ndarray:
        F = self.field
        out = F.zeros(self.dim, self.dim)
        for b in range(self.algebra.dim):
            if x[b, 0] != 0:
                out = F.add(out, F.smul(x[b, 0], self.total_matrix(b)))
        return out

    def check(self) -> bool:
        """Exact check that the arrow matrices define a module (all relations act as zero)."""
        A, F = self.algebra, self.field
        for a in A.arrows:
            for b in range(A.dim):
                if A.ends[b][0] != a.source:
                    continue
                lhs = F.mul(self.mats[A.arrows.index(a)], self.act(b))
                t, s = a.target, A.ends[b][1]
                rhs = F.zeros(self.dims[t], self.dims[s])
                for k, c in A.mul_basis(a.index, b).items():
                    rhs = F.add(rhs, F.smul(c, self.act(k)))
                if np.any(lhs != rhs):
                    return False
        for v, i in enumerate(A.idem):
            if np.any(self.act(i) != F.eye(self.dims[v])):
                return False
        return True

    def dimension_vector(self) -> tuple[int, ...]:
        return self.dims

    def same_presentation(self, other: "FDModule") -> bool:
        return (self.algebra is other.algebra and self.dims == other.dims
                and all(np.array_equal(x, y) for x, y in zip(self.mats, other.mats)))

    def __repr__(self) -> str:
        label = self.name or "M"
        return f"<FDModule {label} dims={self.dims} over {self.algebra.name}>"


class ModuleMap:
    def __init__(self, source: FDModule, target: FDModule, mats: Sequence[np.ndarray]):
        if source.algebra is not target.algebra:
            raise AlgebraMismatch("map between modules over different algebras")
        self.source = source
        self.target = target
        self.mats = [np.asarray(m) for m in mats]
        for v, m in enumerate(self.mats):
            if m.shape != (target.dims[v], source.dims[v]):
                raise ModuleError(f"vertex {v}: expected {(target.dims[v], source.dims[v])}, got {m.shape}")

    @property
    def field(self) -> FieldSpec:
        return self.source.field

    @classmethod
    def zero(cls, source: FDModule, target: FDModule) -> "ModuleMap":
        F = source.field
        return cls(source, target, [F.zeros(target.dims[v], source.dims[v]) for v in range(len(source.dims))])

    @classmethod
    def identity(cls, m: FDModule) -> "ModuleMap":
        return cls(m, m, [m.field.eye(d) for d in m.dims])

    def check(self) -> bool:
        F = self.field
        for k, a in enumerate(self.source.algebra.arrows):
            lhs = F.mul(self.target.mats[k], self.mats[a.source])
            rhs = F.mul(self.mats[a.target], self.source.mats[k])
            if np.any(lhs != rhs):
                return False
        return True

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        if other.target is not self.source and other.target.dims != self.source.dims:
            raise ModuleError("maps are not composable")
        F = self.field
        return ModuleMap(other.source, self.target, [F.mul(x, y) for x, y in zip(self.mats, other.mats)])

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        F = self.field
        return ModuleMap(self.source, self.target, [F.add(x, y) for x, y in zip(self.mats, other.mats)])

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        F = self.field
        return ModuleMap(self.source, self.target, [F.sub(x, y) for x, y in zip(self.mats, other.mats)])

    def scale(self, c) -> "ModuleMap":
        F = self.field
        return ModuleMap(self.source, self.target, [F.smul(c, x) for x in self.mats])

    def is_zero(self) -> bool:
        return all(self.field.is_zero(m) for m in self.mats)

    def rank(self) -> int:
        return sum(self.field.rank(m) for m in self.mats)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_injective()

    def total(self) -> np.ndarray:
        F = self.field
        out = F.zeros(self.target.dim, self.source.dim)
        so, to = self.source.offsets, self.target.offsets
        for v, m in enumerate(self.mats):
            out[to[v]:to[v] + m.shape[0], so[v]:so[v] + m.shape[1]] = m
        return out

    def vector(self) -> np.ndarray:
        """Row-major flattening of all vertex blocks (coordinates in Hom)."""
        parts = [m.reshape(-1, 1) for m in self.mats]
        return self.field.vstack(parts, 1)

    def __repr__(self) -> str:
        return f"<ModuleMap {self.source.dims} -> {self.target.dims}>"


# ---------------------------------------------------------------------------
# Free modules
# ---------------------------------------------------------------------------


class FreeModule(FDModule):
    """Direct sum of indecomposable projectives ``A e_v``, one per generator."""

    def __init__(self, algebra: FDAlgebra, gens: Sequence[int], name: str | None = None):
        self.gens = list(gens)
        A = algebra
        n = A.n_vertices
        basis: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for l, v in enumerate(self.gens):
            for b in A.basis_from(v):
                basis[A.ends[b][0]].append((l, b))
        self.basis = basis
        self.index = [{key: i for i, key in enumerate(bw)} for bw in basis]
        F = A.field
        dims = [len(bw) for bw in basis]
        mats = []
        for a in A.arrows:
            m = F.zeros(dims[a.target], dims[a.source])
            tindex = self.index[a.target]
            for col, (l, b) in enumerate(basis[a.source]):
                for k, c in A.mul_basis(a.index, b).items():
                    m[tindex[(l, k)], col] = c
            mats.append(m)
        super().__init__(algebra, dims, mats, name)

    def act(self, b: int) -> np.ndarray:
        """Left multiplication by basis element b, read off the structure constants."""
        m = self._acache.get(b)
        if m is None:
            A = self.algebra
            t, s = A.ends[b]
            m = self.field.zeros(self.dims[t], self.dims[s])
            tindex = self.index[t]
            for col, (l, y) in enumerate(self.basis[s]):
                for k, c in A.mul_basis(b, y).items():
                    m[tindex[(l, k)], col] = c
            self._acache[b] = m
        return m

    @property
    def rank_count(self) -> int:
        return len(self.gens)

    def gen_vector(self, l: int) -> np.ndarray:
        v = self.gens[l]
        out = self.field.zeros(self.dims[v], 1)
        out[self.index[v][(l, self.algebra.idem[v])], 0] = self.field.one
        return out

    def image_slices(self, target: FDModule) -> list[tuple[int, int]]:
        """Column ranges of each generator in the concatenated image vector."""
        out, acc = [], 0
        for v in self.gens:
            out.append((acc, acc + target.dims[v]))
            acc += target.dims[v]
        return out

    def hom_dim_to(self, target: FDModule) -> int:
        return sum(target.dims[v] for v in self.gens)

    def map_from_images(self, images: Sequence[np.ndarray], target: FDModule) -> ModuleMap:
        F = self.field
        mats = []
        for w in range(len(self.dims)):
            m = F.zeros(target.dims[w], self.dims[w])
            for col, (l, b) in enumerate(self.basis[w]):
                img = images[l]
                if img.shape[0] and not F.is_zero(img):
                    m[:, col:col + 1] = F.mul(target.act(b), img)
            mats.append(m)
        return ModuleMap(self, target, mats)

    def eval_matrix(self, x: np.ndarray, w: int, target: FDModule) -> np.ndarray:
        """Matrix E with f(x) = E @ concat(images of generators) for x in F_w."""
        F = self.field
        slices = self.image_slices(target)
        total = slices[-1][1] if slices else 0
        out = F.zeros(target.dims[w], total)
        for pos in range(x.shape[0]):
            c = x[pos, 0]
            if c == 0:
                continue
            l, b = self.basis[w][pos]
            lo, hi = slices[l]
            blk = target.act(b)
            out[:, lo:hi] = F.add(out[:, lo:hi], blk if c == F.one else F.smul(c, blk))
        return out

    def apply(self, images: Sequence[np.ndarray], x: np.ndarray, w: int, target: FDModule) -> np.ndarray:
        """f(x) for x in F_w, f given by generator images."""
        F = self.field
        out = F.zeros(target.dims[w], 1)
        for pos in range(x.shape[0]):
            c = x[pos, 0]
            if c == 0:
                continue
            l, b = self.basis[w][pos]
            img = images[l]
            if F.is_zero(img):
                continue
            out = F.add(out, F.smul(c, F.mul(target.act(b), img)))
        return out

    def images_of_map(self, f: ModuleMap) -> list[np.ndarray]:
        out = []
        for l, v in enumerate(self.gens):
            out.append(self.field.mul(f.mats[v], self.gen_vector(l)))
        return out

    def radical_coordinates(self, x: np.ndarray, w: int) -> bool:
        """True when x in F_w lies in the radical (no generator coefficient)."""
        A = self.algebra
        for pos in range(x.shape[0]):
            if x[pos, 0] != 0:
                l, b = self.basis[w][pos]
                if not A.is_radical(b):
                    return False
        return True

    def __repr__(self) -> str:
        labels = [self.algebra.vertex_labels[v] for v in self.gens]
        return f"<FreeModule gens={labels} over {self.algebra.name}>"


# ---------------------------------------------------------------------------
# Standard modules
# ---------------------------------------------------------------------------


def simple(a: FDAlgebra, vertex: int) -> FDModule:
    dims = [1 if v == vertex else 0 for v in range(a.n_vertices)]
    mats = [a.field.zeros(dims[x.target], dims[x.source]) for x in a.arrows]
    return FDModule(a, dims, mats, name=f"S{a.vertex_labels[vertex]}")


def projective(a: FDAlgebra, vertex: int) -> FreeModule:
    return FreeModule(a, [vertex], name=f"P{a.vertex_labels[vertex]}")


def regular_module(a: FDAlgebra) -> FreeModule:
    return FreeModule(a, list(range(a.n_vertices)), name="A")


def injective(a: FDAlgebra, vertex: int) -> FDModule:
    m = dual(projective(opposite(a), vertex))
    m.name = f"I{a.vertex_labels[vertex]}"
    return m


def zero_module(a: FDAlgebra) -> FDModule:
    return FDModule(a, [0] * a.n_vertices, [a.field.zeros(0, 0) for _ in a.arrows], name="0")


def dual(m: FDModule) -> FDModule:
    """Hom_k(m, k) as a left module over the opposite algebra."""
    op = opposite(m.algebra)
    mats = [x.T.copy() for x in m.mats]
    return FDModule(op, m.dims, mats, name=f"D({m.name})" if m.name else None)


def dual_map(f: ModuleMap) -> ModuleMap:
    return ModuleMap(dual(f.target), dual(f.source), [x.T.copy() for x in f.mats])


def module_from_action(a: FDAlgebra, dims: Sequence[int], act, name: str | None = None) -> FDModule:
    """Module whose arrow matrices are ``act(b)`` for the arrow basis elements b."""
    return FDModule(a, dims, [act(x.index) for x in a.arrows], name)


def direct_sum(mods: Sequence[FDModule]) -> tuple[FDModule, list[ModuleMap], list[ModuleMap]]:
    """Direct sum with its canonical inclusions and projections."""
    if not mods:
        raise ModuleError("empty direct sum")
    A = mods[0].algebra
    F = A.field
    for m in mods:
        if m.algebra is not A:
            raise AlgebraMismatch("direct sum over different algebras")
    dims = [sum(m.dims[v] for m in mods) for v in range(A.n_vertices)]
    mats = [F.block_diag([m.mats[k] for m in mods]) for k in range(len(A.arrows))]
    names = [m.name for m in mods]
    total = FDModule(A, dims, mats, name="+".join(names) if all(names) else None)
    incl, proj = [], []
    starts = [[0] * A.n_vertices]
    for m in mods:
        starts.append([starts[-1][v] + m.dims[v] for v in range(A.n_vertices)])
    for i, m in enumerate(mods):
        im, pm = [], []
        for v in range(A.n_vertices):
            x = F.zeros(dims[v], m.dims[v])
            for r in range(m.dims[v]):
                x[starts[i][v] + r, r] = F.one
            im.append(x)
            pm.append(x.T.copy())
        incl.append(ModuleMap(m, total, im))
        proj.append(ModuleMap(total, m, pm))
    return total, incl, proj


def direct_sum_module(mods: Sequence[FDModule]) -> FDModule:
    if len(mods) == 1:
        return mods[0]
    return direct_sum(mods)[0]


def free_sum(free: Sequence[FreeModule]) -> FreeModule:
    gens = []
    for f in free:
        gens.extend(f.gens)
    return FreeModule(free[0].algebra, gens)


# ---------------------------------------------------------------------------
# Hom spaces
# ---------------------------------------------------------------------------


def hom_basis(m: FDModule, n: FDModule) -> list[ModuleMap]:
    """A basis of Hom_A(m, n)."""
    if m.algebra is not n.algebra:
        raise AlgebraMismatch("Hom between modules over different algebras")
    F = m.field
    A = m.algebra
    if isinstance(m, FreeModule):
        out = []
        for l, v in enumerate(m.gens):
            for r in range(n.dims[v]):
                images = [F.zeros(n.dims[u], 1) for u in m.gens]
                images[l][r, 0] = F.one
                out.append(m.map_from_images(images, n))
        return out
    nv = A.n_vertices
    offs, acc = [], 0
    for v in range(nv):
        offs.append(acc)
        acc += n.dims[v] * m.dims[v]
    if acc == 0:
        return []
    rows = []
    for k, a in enumerate(A.arrows):
        s, t = a.source, a.target
        neq = n.dims[t] * m.dims[s]
        if neq == 0:
            continue
        blk = F.zeros(neq, acc)
        if n.dims[s] * m.dims[s]:
            blk[:, offs[s]:offs[s] + n.dims[s] * m.dims[s]] = F.kron(n.mats[k], F.eye(m.dims[s]))
        if n.dims[t] * m.dims[t]:
            part = F.kron(F.eye(n.dims[t]), m.mats[k].T.copy())
            blk[:, offs[t]:offs[t] + n.dims[t] * m.dims[t]] = F.sub(blk[:, offs[t]:offs[t] + n.dims[t] * m.dims[t]], part)
        rows.append(blk)
    eq = F.vstack(rows, acc)
    ker = F.kernel(eq) if eq.shape[0] else F.eye(acc)
    out = []
    for j in range(ker.shape[1]):
        mats = []
        for v in range(nv):
            seg = ker[offs[v]:offs[v] + n.dims[v] * m.dims[v], j]
            mats.append(seg.reshape(n.dims[v], m.dims[v]).copy())
        out.append(ModuleMap(m, n, mats))
    return out


def hom_dim(m: FDModule, n: FDModule) -> int:
    return len(hom_basis(m, n))


def hom_coordinates(basis: Sequence[ModuleMap], f: ModuleMap) -> np.ndarray | None:
    """Coordinates of f in a Hom basis (None if f is not in the span)."""
    F = f.field
    if not basis:
        return F.zeros(0, 1) if f.is_zero() else None
    B = F.hstack([g.vector() for g in basis], basis[0].vector().shape[0])
    return F.solve(B, f.vector())


# ---------------------------------------------------------------------------
# Submodules, kernels, cokernels
# ---------------------------------------------------------------------------


def submodule(m: FDModule, bases: Sequence[np.ndarray]) -> tuple[FDModule, ModuleMap]:
    """The submodule spanned per vertex by the (independent, closed) columns of bases."""
    F = m.field
    A = m.algebra
    mats = []
    for k, a in enumerate(A.arrows):
        Ks, Kt = bases[a.source], bases[a.target]
        if Ks.shape[1] == 0 or Kt.shape[1] == 0:
            mats.append(F.zeros(Kt.shape[1], Ks.shape[1]))
            continue
        img = F.mul(m.mats[k], Ks)
        x = F.solve(Kt, img)
        if x is None:
            raise ModuleError("subspaces are not closed under the action")
        mats.append(x)
    s = FDModule(A, [b.shape[1] for b in bases], mats)
    return s, ModuleMap(s, m, list(bases))


def quotient(m: FDModule, bases: Sequence[np.ndarray]) -> tuple[FDModule, ModuleMap]:
    """m modulo the submodule spanned by bases; returns the quotient and the projection."""
    F = m.field
    A = m.algebra
    comps, projs = [], []
    for v in range(A.n_vertices):
        S = bases[v]
        d = m.dims[v]
        both = np.concatenate([S, F.eye(d)], axis=1)
        piv = F.independent_columns(both)
        chosen = [j - S.shape[1] for j in piv if j >= S.shape[1]]
        C = F.zeros(d, len(chosen))
        for c, j in enumerate(chosen):
            C[j, c] = F.one
        comps.append(C)
        if d == 0:
            projs.append(F.zeros(0, 0))
            continue
        inv = F.solve(np.concatenate([S, C], axis=1), F.eye(d))
        projs.append(inv[S.shape[1]:, :].copy())
    mats = []
    for k, a in enumerate(A.arrows):
        mats.append(F.mul(projs[a.target], F.mul(m.mats[k], comps[a.source])))
    q = FDModule(A, [c.shape[1] for c in comps], mats)
    return q, ModuleMap(m, q, projs)


def generated_submodule(m: FDModule, elements: Sequence[tuple[int, np.ndarray]]) -> tuple[FDModule, ModuleMap]:
    """Submodule generated by elements given as (vertex, column vector) pairs."""
    F = m.field
    A = m.algebra
    spans = [F.zeros(m.dims[v], 0) for v in range(A.n_vertices)]
    todo = [(v, x) for v, x in elements]
    while todo:
        v, x = todo.pop()
        if F.is_zero(x):
            continue
        cand = np.concatenate([spans[v], x], axis=1)
        if F.rank(cand) == spans[v].shape[1]:
            continue
        spans[v] = cand
        for k, a in enumerate(A.arrows):
            if a.source == v and m.dims[a.target]:
                todo.append((a.target, F.mul(m.mats[k], x)))
    return submodule(m, spans)


def random_quotient_module(a: FDAlgebra, rng, max_dim: int = 4, tries: int = 20) -> FDModule:
    """A random nonzero module of dim <= max_dim: a projective modulo a random submodule."""
    F = a.field
    for _ in range(tries):
        v = rng.randrange(a.n_vertices)
        P = projective(a, v)
        elems = []
        for _ in range(rng.randrange(0, 3)):
            w = rng.randrange(a.n_vertices)
            if P.dims[w]:
                elems.append((w, F.random_matrix(rng, P.dims[w], 1)))
        sub, inc = generated_submodule(P, elems)
        bases = inc.mats
        q, _ = quotient(P, bases)
        if 0 < q.dim <= max_dim:
            return q
    return simple(a, rng.randrange(a.n_vertices))


def kernel(f: ModuleMap) -> tuple[FDModule, ModuleMap]:
    F = f.field
    bases = [F.kernel(x) if x.shape[0] else F.eye(x.shape[1]) for x in f.mats]
    return submodule(f.source, bases)


def image(f: ModuleMap) -> tuple[FDModule, ModuleMap]:
    F = f.field
    bases = [F.colspace(x) if x.shape[1] else F.zeros(x.shape[0], 0) for x in f.mats]
    return submodule(f.target, bases)


def cokernel(f: ModuleMap) -> tuple[FDModule, ModuleMap]:
    F = f.field
    bases = [F.colspace(x) if x.shape[1] else F.zeros(x.shape[0], 0) for x in f.mats]
    return quotient(f.target, bases)


def radical_bases(m: FDModule) -> list[np.ndarray]:
    F = m.field
    A = m.algebra
    out = []
    for v in range(A.n_vertices):
        parts = [m.mats[k] for k, a in enumerate(A.arrows) if a.target == v and m.mats[k].shape[1]]
        if parts and m.dims[v]:
            out.append(F.colspace(F.hstack(parts, m.dims[v])))
        else:
            out.append(F.zeros(m.dims[v], 0))
    return out


def radical(m: FDModule) -> tuple[FDModule, ModuleMap]:
    return submodule(m, radical_bases(m))


def top(m: FDModule) -> tuple[FDModule, ModuleMap]:
    return quotient(m, radical_bases(m))


def socle(m: FDModule) -> tuple[FDModule, ModuleMap]:
    F = m.field
    A = m.algebra
    bases = []
    for v in range(A.n_vertices):
        parts = [m.mats[k] for k, a in enumerate(A.arrows) if a.source == v and m.mats[k].shape[0]]
        if parts and m.dims[v]:
            bases.append(F.kernel(F.vstack(parts, m.dims[v])))
        else:
            bases.append(F.eye(m.dims[v]))
    return submodule(m, bases)


def top_dims(m: FDModule) -> tuple[int, ...]:
    return tuple(m.dims[v] - b.shape[1] for v, b in enumerate(radical_bases(m)))


def loewy_layers(m: FDModule) -> list[tuple[int, ...]]:
    """Dimension vectors of rad^k m / rad^{k+1} m."""
    F = m.field
    A = m.algebra
    cur = [F.eye(d) for d in m.dims]
    layers = []
    while any(c.shape[1] for c in cur):
        nxt = []
        for v in range(A.n_vertices):
            parts = [F.mul(m.mats[k], cur[a.source]) for k, a in enumerate(A.arrows)
                     if a.target == v and cur[a.source].shape[1] and m.dims[v]]
            nxt.append(F.colspace(F.hstack(parts, m.dims[v])) if parts else F.zeros(m.dims[v], 0))
        layers.append(tuple(c.shape[1] - n.shape[1] for c, n in zip(cur, nxt)))
        cur = nxt
    return layers


def loewy_series(m: FDModule) -> list[str]:
    """For uniserial modules: the vertex label of each radical layer, top first."""
    out = []
    for layer in loewy_layers(m):
        if sum(layer) != 1:
            raise ModuleError("module is not uniserial")
        out.append(m.algebra.vertex_labels[layer.index(1)])
    return out


def projective_cover(m: FDModule) -> tuple[FreeModule, ModuleMap, list[np.ndarray]]:
    """Projective cover P -> m, with the generator images (chosen among standard basis vectors)."""
    F = m.field
    A = m.algebra
    rad = radical_bases(m)
    gens, images = [], []
    for v in range(A.n_vertices):
        d = m.dims[v]
        both = np.concatenate([rad[v], F.eye(d)], axis=1)
        k = rad[v].shape[1]
        for j in F.independent_columns(both):
            if j >= k:
                gens.append(v)
                images.append(F.unit(d, j - k))
    P = FreeModule(A, gens)
    return P, P.map_from_images(images, m), images


# ---------------------------------------------------------------------------
# Isomorphism and decomposition
# ---------------------------------------------------------------------------


def _is_invertible(f: ModuleMap) -> bool:
    F = f.field
    return all(x.shape[0] == x.shape[1] and F.rank(x) == x.shape[0] for x in f.mats)


def is_isomorphic(m: FDModule, n: FDModule, seed: int = 0, tries: int = 24) -> bool:
    """Search Hom(m, n) for an isomorphism: basis elements first, then seeded random combinations.

    A True answer is certified by an explicit invertible map; False means no
    isomorphism was found among the candidates (for modules that are isomorphic
    a random combination is invertible with high probability).
    """
    if m.dims != n.dims:
        return False
    if m.dim == 0:
        return True
    H = hom_basis(m, n)
    if not H:
        return False
    return find_isomorphism(H, seed, tries) is not None


def find_isomorphism(H: Sequence[ModuleMap], seed: int = 0, tries: int = 24) -> ModuleMap | None:
    for f in H:
        if _is_invertible(f):
            return f
    rng = random.Random(seed)
    F = H[0].field
    for _ in range(tries):
        f = None
        for g in H:
            c = rng.randint(-4, 4)
            if c:
                f = g.scale(c) if f is None else f + g.scale(c)
        if f is not None and _is_invertible(f):
            return f
    return None


def _trace_radical_codim(mats_total: list[np.ndarray], F: FieldSpec) -> int:
    """rank of the trace form tr(xy) on the span of the given matrices."""
    r = len(mats_total)
    G = F.zeros(r, r)
    for i in range(r):
        for j in range(r):
            G[i, j] = F.trace(F.mul(mats_total[i], mats_total[j]))
    return F.rank(G)


def _poly_eval_blocks(coeffs: list, mats: list[np.ndarray], F: FieldSpec) -> list[np.ndarray]:
    out = []
    for X in mats:
        n = X.shape[0]
        acc = F.zeros(n, n)
        for c in coeffs:
            acc = F.add(F.mul(acc, X), F.smul(c, F.eye(n)))
        out.append(acc)
    return out


def _charpoly_factors(total: np.ndarray, F: FieldSpec) -> list[list]:
    """Irreducible factors (coefficient lists, highest degree first) of the characteristic polynomial."""
    import sympy

    x = sympy.Symbol("x")
    n = total.shape[0]
    if F.characteristic == 0:
        M = sympy.Matrix(n, n, [sympy.Rational(int(v.numerator), int(v.denominator)) for v in total.flatten()])
        poly = M.charpoly(x)
        facs = sympy.factor_list(poly.as_expr(), x)[1]
        out = []
        for f, _ in facs:
            p = sympy.Poly(f, x)
            out.append([F(sympy.Rational(c).p) / F(sympy.Rational(c).q) for c in p.all_coeffs()])
        return out
    p = F.characteristic
    M = sympy.Matrix(n, n, [int(v) for v in total.flatten()])
    poly = sympy.Poly(M.charpoly(x).as_expr(), x, modulus=p)
    facs = poly.factor_list()[1]
    return [[F(int(c)) for c in f.all_coeffs()] for f, _ in facs]


def _split_once(m: FDModule, H: list[ModuleMap], seed: int) -> list[tuple[FDModule, ModuleMap]] | None:
    """Try to split m via a primary decomposition of some endomorphism."""
    F = m.field
    rng = random.Random(seed)
    cands: list[ModuleMap] = list(H)
    for i in range(len(H)):
        for j in range(i + 1, min(len(H), i + 4)):
            cands.append(H[i] + H[j])
    for _ in range(12):
        f = None
        for g in H:
            c = rng.randint(-3, 3)
            if c:
                f = g.scale(c) if f is None else f + g.scale(c)
        if f is not None:
            cands.append(f)
    for f in cands:
        facs = _charpoly_factors(f.total(), F)
        if len(facs) < 2:
            continue
        pieces = []
        for coeffs in facs:
            g = _poly_eval_blocks(coeffs, f.mats, F)
            powered = []
            for X in g:
                P = X
                for _ in range(max(1, X.shape[0]).bit_length() + 1):
                    P = F.mul(P, P)
                powered.append(P)
            bases = [F.kernel(P) if P.shape[0] else F.zeros(0, 0) for P in powered]
            if sum(b.shape[1] for b in bases) == 0:
                continue
            pieces.append(submodule(m, bases))
        if len(pieces) >= 2:
            return pieces
    return None


def indecomposable_summands(m: FDModule, seed: int = 0) -> list[tuple[FDModule, ModuleMap]]:
    """Indecomposable direct summands of m with split inclusions into m."""
    if m.dim == 0:
        return []
    F = m.field
    H = hom_basis(m, m)
    if len(H) == 1:
        return [(m, ModuleMap.identity(m))]
    if F.characteristic == 0 or F.characteristic > m.dim:
        codim = _trace_radical_codim([h.total() for h in H], F)
        if codim == 1:
            return [(m, ModuleMap.identity(m))]
    else:
        codim = None
    pieces = _split_once(m, H, seed)
    if pieces is None:
        if codim is None:
            raise FieldTooSmall(f"cannot decide indecomposability in characteristic {F.characteristic}")
        raise FieldTooSmall("endomorphism ring does not split over the ground field")
    out = []
    for sub, inc in pieces:
        for piece, inc2 in indecomposable_summands(sub, seed):
            out.append((piece, inc @ inc2))
    return out


def decompose(m: FDModule, seed: int = 0) -> list[tuple[FDModule, int]]:
    """Krull-Schmidt decomposition as a list of (indecomposable, multiplicity)."""
    groups: list[list] = []
    for piece, _ in indecomposable_summands(m, seed):
        for g in groups:
            if is_isomorphic(g[0], piece, seed):
                g[1] += 1
                break
        else:
            groups.append([piece, 1])
    return [(g[0], g[1]) for g in groups]


def multiset_matches(pieces: Sequence[tuple[FDModule, int]], expected: Sequence[FDModule]) -> bool:
    """Whether a decomposition agrees with a list of indecomposables (with repetition)."""
    remaining = [list(p) for p in pieces]
    for e in expected:
        for g in remaining:
            if g[1] > 0 and is_isomorphic(g[0], e):
                g[1] -= 1
                break
        else:
            return False
    return all(g[1] == 0 for g in remaining)


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def parse_module(text: str, a: FDAlgebra) -> FDModule:
    """``dims = 1 1 0`` followed by ``arrow a = [[1]]`` lines (row lists, target x source)."""
    import re

    from .algebra import ParseError

    dims = None
    given = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"dims\s*=\s*(.+)", line)
        if m:
            dims = [int(x) for x in m.group(1).split()]
            continue
        m = re.fullmatch(r"arrow\s+(\S+)\s*=\s*(.+)", line)
        if m:
            given[m.group(1)] = _parse_rows(m.group(2))
            continue
        raise ParseError(f"line {lineno}: cannot parse {raw.strip()!r}")
    if dims is None or len(dims) != a.n_vertices:
        raise ParseError("module needs 'dims =' with one entry per vertex")
    F = a.field
    mats = []
    for arr in a.arrows:
        shape = (dims[arr.target], dims[arr.source])
        if arr.label in given:
            rows = given[arr.label]
            m = F.array(rows) if rows and shape[0] else F.zeros(*shape)
            if m.shape != shape:
                raise ParseError(f"arrow {arr.label}: expected shape {shape}")
        else:
            m = F.zeros(*shape)
        mats.append(m)
    mod = FDModule(a, dims, mats)
    if not mod.check():
        raise ParseError("matrices do not satisfy the relations")
    return mod


def _parse_rows(text: str) -> list[list[str]]:
    import re

    rows = re.findall(r"\[([^\[\]]*)\]", text)
    return [[tok for tok in re.split(r"[,\s]+", r.strip()) if tok] for r in rows]
