"""Minimal projective resolutions, Ext, Yoneda products and homological dimensions."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .algebra import FDAlgebra, opposite
from .complexes import Complex, DegreeOverflow, HomComplex, Resolution, composition_matrix, lift_cocycle
from .modules import FDModule, FreeModule, dual, is_isomorphic, regular_module, submodule, projective

DEFAULT_DIM_CAP = 20
DEFAULT_EXT_CAP = 8


# ---------------------------------------------------------------------------
# Result types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Finite:
    n: int

    def __str__(self) -> str:
        return f"Finite({self.n})"


@dataclass(frozen=True)
class AtLeast:
    cap: int

    def __str__(self) -> str:
        return f"AtLeast({self.cap})"


@dataclass(frozen=True)
class InfinitePeriodic:
    period: int
    offset: int

    def __str__(self) -> str:
        return f"InfinitePeriodic(period={self.period}, offset={self.offset})"


ProjDimResult = Finite | AtLeast | InfinitePeriodic


# ---------------------------------------------------------------------------
# Minimal resolutions of modules
# ---------------------------------------------------------------------------


class ProjResolution:
    """Minimal projective resolution ``... -> P_1 -> P_0 -> M`` up to a cap.

    ``P(n)`` is the n-th term; the differential ``d_n: P_n -> P_{n-1}`` is stored
    through generator images, and ``augmentation`` maps P_0 onto M.
    """

    def __init__(self, module: FDModule, cap: int):
        if cap < 0:
            raise ValueError("cap must be non-negative")
        self.module = module
        self.cap = cap
        self.res = Resolution(Complex.stalk(module))
        self.res.extend(-cap)
        self.minimal = True

    @property
    def algebra(self) -> FDAlgebra:
        return self.module.algebra

    def P(self, n: int) -> FreeModule:
        if n > self.cap:
            raise DegreeOverflow(f"degree {n} beyond cap {self.cap}")
        return self.res.term(-n)

    def ranks(self) -> list[tuple[int, ...]]:
        """Multiplicity of each indecomposable projective in each term."""
        out = []
        for n in range(self.cap + 1):
            gens = self.P(n).gens
            out.append(tuple(gens.count(v) for v in range(self.algebra.n_vertices)))
        return out

    def length(self) -> int | None:
        """n with P_n != 0 = P_{n+1}, or None when nonzero up to the cap."""
        for n in range(self.cap + 1):
            if not self.P(n).gens:
                return n - 1
        return None

    def differential(self, n: int):
        """d_n: P_n -> P_{n-1} as a ModuleMap (n >= 1)."""
        return self.res.d_map(-n)

    def augmentation(self):
        return self.res.pi_map(0)

    def syzygy(self, n: int) -> FDModule:
        """Omega^n M (Omega^0 = M), as a submodule of P_{n-1}."""
        if n == 0:
            return self.module
        if n > self.cap:
            raise DegreeOverflow(f"syzygy {n} beyond cap {self.cap}")
        bases = self.res.kernel_bases[-n]
        P = self.P(n - 1)
        trimmed = [b[:P.dims[v], :] for v, b in enumerate(bases)]
        return submodule(P, trimmed)[0]

    def check_exact(self) -> bool:
        """Exactness at every stored degree: ranks of consecutive maps add up."""
        F = self.algebra.field
        nv = self.algebra.n_vertices
        eps = self.augmentation()
        for v in range(nv):
            if self.module.dims[v] and F.rank(eps.mats[v]) != self.module.dims[v]:
                return False
        prev = eps
        for n in range(1, self.cap + 1):
            d = self.differential(n)
            if not (prev @ d).is_zero():
                return False
            for v in range(nv):
                r_prev = F.rank(prev.mats[v]) if prev.mats[v].size else 0
                r_d = F.rank(d.mats[v]) if d.mats[v].size else 0
                if self.P(n - 1).dims[v] - r_prev != r_d:
                    return False
            prev = d
        return True

    def check_minimal(self) -> bool:
        for n in range(1, self.cap + 1):
            P = self.P(n - 1)
            for l, v in enumerate(self.P(n).gens):
                if not P.radical_coordinates(self.res.d[-n][l], v):
                    return False
        return True


def min_proj_resolution(m: FDModule, cap: int = DEFAULT_DIM_CAP) -> ProjResolution:
    return ProjResolution(m, cap)


# ---------------------------------------------------------------------------
# Ext
# ---------------------------------------------------------------------------


@dataclass
class ExtTable:
    m: FDModule
    n: FDModule
    dims: list[int]
    hom: HomComplex = dc_field(repr=False)

    def representatives(self, degree: int) -> np.ndarray:
        return self.hom.cohomology(degree).reps


def ext_dims(m: FDModule, n: FDModule, cap: int = DEFAULT_EXT_CAP, resolution: ProjResolution | None = None) -> ExtTable:
    if m.algebra is not n.algebra:
        raise ValueError("modules over different algebras")
    res = resolution or ProjResolution(m, cap + 1)
    hom = HomComplex(res.res, Complex.stalk(n))
    dims = [hom.dim(k) for k in range(cap + 1)]
    return ExtTable(m, n, dims, hom)


@dataclass
class ExtClass:
    """A cocycle of Hom(P_M, N) of degree p (the map P_p -> N)."""

    hom: HomComplex
    degree: int
    vector: np.ndarray
    cap: int | None = None


def ext_class(table: ExtTable, degree: int, index: int) -> ExtClass:
    reps = table.hom.cohomology(degree).reps
    return ExtClass(table.hom, degree, reps[:, index:index + 1], len(table.dims) - 1)


def yoneda_compose(e1: ExtClass, e2: ExtClass) -> ExtClass:
    """The product e2 . e1 for e1 in Ext^p(M, N), e2 in Ext^q(N, L): a class in Ext^{p+q}(M, L).

    e1 is lifted to a chain map P_M -> P_N of degree p and then composed with e2.
    """
    p, q = e1.degree, e2.degree
    res_m = e1.hom.q
    res_n = e2.hom.q
    if res_n.target.term(0) is not e1.hom.y.term(0):
        raise ValueError("middle modules differ")
    caps = [c for c in (e1.cap, e2.cap) if c is not None]
    if caps and p + q > min(caps):
        raise DegreeOverflow(f"degree {p + q} exceeds cap {min(caps)}")
    imgs = e1.hom.images(p, e1.vector)
    F = e1.hom.field

    def g(i, l):
        x = imgs.get((i, l))
        if x is None:
            return F.zeros(e1.hom.y.term(i + p).dims[res_m.term(i).gens[l]], 1)
        return x

    lo = -(p + q) - 1
    lift = lift_cocycle(res_m, p, g, res_n, lo)
    target = HomComplex(res_m, e2.hom.y)
    C = composition_matrix(e2.hom, q, lift, p, target)
    return ExtClass(target, p + q, F.mul(C, e2.vector), min(caps) if caps else None)


# ---------------------------------------------------------------------------
# Dimensions
# ---------------------------------------------------------------------------


def projdim(m: FDModule, cap: int = DEFAULT_DIM_CAP, seed: int = 0) -> ProjDimResult:
    """Finite(n), a syzygy-periodicity certificate, or AtLeast(cap)."""
    res = Resolution(Complex.stalk(m))
    syz: list[FDModule] = [m]
    for n in range(0, cap + 1):
        res.extend(-(n + 1))
        if not res.term(-(n + 1)).gens:
            return Finite(n)
        if n + 1 > cap:
            break
        P = res.term(-n)
        bases = res.kernel_bases[-(n + 1)]
        om = submodule(P, [b[:P.dims[v], :] for v, b in enumerate(bases)])[0]
        for i in range(len(syz) - 1, -1, -1):
            if syz[i].dims == om.dims and is_isomorphic(syz[i], om, seed):
                return InfinitePeriodic(n + 1 - i, i)
        syz.append(om)
    return AtLeast(cap)


def injdim(m: FDModule, cap: int = DEFAULT_DIM_CAP, seed: int = 0) -> ProjDimResult:
    return projdim(dual(m), cap, seed)


def combine(results: Sequence[ProjDimResult], cap: int) -> ProjDimResult:
    """Dimension of a direct sum from the dimensions of its summands."""
    for r in results:
        if isinstance(r, InfinitePeriodic):
            return r
    if all(isinstance(r, Finite) for r in results):
        return Finite(max((r.n for r in results), default=0))
    return AtLeast(cap)


@dataclass(frozen=True)
class GorensteinResult:
    left: ProjDimResult
    right: ProjDimResult
    verdict: str

    @property
    def is_yes(self) -> bool:
        return self.verdict == "Yes"


def is_gorenstein(a: FDAlgebra, cap: int = DEFAULT_DIM_CAP) -> GorensteinResult:
    """injdim of A as a left and as a right module."""
    op = opposite(a)
    left = combine([injdim(projective(a, v), cap) for v in range(a.n_vertices)], cap)
    right = combine([injdim(projective(op, v), cap) for v in range(a.n_vertices)], cap)
    if isinstance(left, Finite) and isinstance(right, Finite):
        verdict = "Yes"
    elif isinstance(left, InfinitePeriodic) or isinstance(right, InfinitePeriodic):
        verdict = "No"
    else:
        verdict = f"Unknown({cap})"
    return GorensteinResult(left, right, verdict)
