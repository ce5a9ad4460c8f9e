"""Tilting modules: axioms, minimal left approximations, complement mutation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .homology import AtLeast, Finite, ProjDimResult, combine, ext_dims, projdim
from .modules import (FDModule, FieldTooSmall, ModuleError, ModuleMap, cokernel, direct_sum, hom_basis,
                      indecomposable_summands, is_isomorphic, regular_module, zero_module, _charpoly_factors)


class ApproximationNotMono(ModuleError):
    pass


class NotAComplement(ModuleError):
    pass


def basic_summands(m: FDModule, seed: int = 0) -> list[FDModule]:
    """One representative per isomorphism class of indecomposable summands."""
    reps: list[FDModule] = []
    for piece, _ in indecomposable_summands(m, seed):
        if not any(r.dims == piece.dims and is_isomorphic(r, piece, seed) for r in reps):
            reps.append(piece)
    return reps


def _local_radical(m: FDModule, H: list[ModuleMap]) -> list[ModuleMap]:
    """Basis of rad End(m) for indecomposable m: the maps phi - lambda*id."""
    F = m.field
    v = min((v for v in range(len(m.dims)) if m.dims[v]), key=lambda v: m.dims[v])
    out = []
    ident = ModuleMap.identity(m)
    for h in H:
        block = h.mats[v]
        if block.shape[0] == 1:
            lam = block[0, 0]
        else:
            facs = _charpoly_factors(block, F)
            if len(facs) != 1 or len(facs[0]) != 2:
                raise FieldTooSmall("endomorphism ring is not split local")
            c = F.array([[facs[0][0]]])
            lam = F.neg_scalar(F.solve(c, F.array([[facs[0][1]]]))[0, 0])
        out.append(h - ident.scale(lam))
    vecs = F.hstack([g.vector() for g in out], out[0].vector().shape[0]) if out else None
    if vecs is None:
        return []
    keep = F.independent_columns(vecs)
    return [out[k] for k in keep]


@dataclass
class Approximation:
    """A left add(M)-approximation f: x -> E with E a direct sum of the listed summands."""

    map: ModuleMap
    summands: list[FDModule]
    counts: list[int]

    @property
    def target(self) -> FDModule:
        return self.map.target

    def is_mono(self) -> bool:
        return self.map.is_injective()


def left_add_approximation(x: FDModule, m: FDModule | Sequence[FDModule], seed: int = 0) -> Approximation:
    """Minimal left add(m)-approximation of x.

    For each indecomposable summand M_i of m (up to isomorphism) let R_i be the
    maps x -> M_i that factor through a radical map M_j -> M_i.  A basis of a
    complement of R_i in Hom(x, M_i) gives the components into M_i.
    """
    reps = list(m) if isinstance(m, (list, tuple)) else basic_summands(m, seed)
    F = x.field
    homs = [hom_basis(x, r) for r in reps]
    comps: list[ModuleMap] = []
    targets: list[FDModule] = []
    counts: list[int] = []
    for i, ri in enumerate(reps):
        Hi = homs[i]
        if not Hi:
            counts.append(0)
            continue
        rad_vecs = []
        for j, rj in enumerate(reps):
            if not homs[j]:
                continue
            if i == j:
                radmaps = _local_radical(ri, hom_basis(ri, ri))
            else:
                radmaps = hom_basis(rj, ri)
            for g in radmaps:
                for f in homs[j]:
                    rad_vecs.append((g @ f).vector())
        size = Hi[0].vector().shape[0]
        R = F.hstack(rad_vecs, size) if rad_vecs else F.zeros(size, 0)
        C = F.hstack([h.vector() for h in Hi], size)
        chosen = F.complement_columns(R, C)
        counts.append(len(chosen))
        for c in chosen:
            comps.append(Hi[c])
            targets.append(ri)
    if not comps:
        z = zero_module(x.algebra)
        return Approximation(ModuleMap.zero(x, z), reps, counts)
    E, inc, _ = direct_sum(targets)
    total = None
    for f, ic in zip(comps, inc):
        g = ic @ f
        total = g if total is None else total + g
    return Approximation(total, reps, counts)


def factors_through(f: ModuleMap, g: ModuleMap) -> bool:
    """Whether g: x -> Y equals h o f for some h: E -> Y (linear solvability)."""
    F = f.field
    H = hom_basis(f.target, g.target)
    if not H:
        return g.is_zero()
    cols = [(h @ f).vector() for h in H]
    M = F.hstack(cols, cols[0].shape[0])
    return F.solve(M, g.vector()) is not None


@dataclass
class TiltingReport:
    axiom_i: ProjDimResult
    axiom_ii_degree: int
    axiom_ii_failure: int | None
    axiom_iii: list[FDModule] | None
    axiom_iii_note: str
    verdict: str
    summand_count: int = 0

    @property
    def is_yes(self) -> bool:
        return self.verdict == "Yes"


def _projdim_of_sum(summands: Sequence[FDModule], cap: int) -> ProjDimResult:
    return combine([projdim(s, cap) for s in summands], cap)


def coresolution_in_add(t: FDModule, reps: Sequence[FDModule], steps: int) -> tuple[list[FDModule] | None, str]:
    """Iterate approximations 0 -> A -> T_0 -> T_1 -> ... until the cokernel vanishes."""
    x = regular_module(t.algebra)
    terms = []
    for k in range(steps + 1):
        if x.dim == 0:
            return terms, f"exact coresolution of length {len(terms) - 1}"
        ap = left_add_approximation(x, list(reps))
        if not ap.is_mono():
            return None, f"approximation at step {k} is not injective"
        terms.append(ap.target)
        x, _ = cokernel(ap.map)
    return None, f"cokernel nonzero after {steps} steps"


def check_tilting(t: FDModule, cap: int = 10, seed: int = 0) -> TiltingReport:
    reps = basic_summands(t, seed)
    pd = _projdim_of_sum(reps, max(cap, 20))
    if not isinstance(pd, Finite):
        return TiltingReport(pd, 0, None, None, "not attempted", "No" if not isinstance(pd, AtLeast) else
                             f"Unknown({cap})", len(reps))
    deg = pd.n + t.algebra.loewy_length()
    failure = None
    dims = ext_dims(t, t, deg).dims
    for i in range(1, deg + 1):
        if dims[i] != 0:
            failure = i
            break
    if failure is not None:
        return TiltingReport(pd, deg, failure, None, "not attempted", "No", len(reps))
    terms, note = coresolution_in_add(t, reps, cap)
    verdict = "Yes" if terms is not None else "No"
    return TiltingReport(pd, deg, None, terms, note, verdict, len(reps))


def is_almost_complete(t: FDModule, cap: int = 20, seed: int = 0) -> bool:
    reps = basic_summands(t, seed)
    if len(reps) != t.algebra.n_vertices - 1:
        return False
    pd = _projdim_of_sum(reps, cap)
    if not isinstance(pd, Finite):
        return False
    dims = ext_dims(t, t, max(pd.n, 1)).dims
    return all(d == 0 for d in dims[1:])


def mutate_complement(m: FDModule, x: FDModule, verify: bool = False, seed: int = 0) -> FDModule:
    """Replace the complement x of the almost complete tilting module m by Coker(x -> E)."""
    reps = basic_summands(m, seed)
    for piece in basic_summands(x, seed):
        if any(r.dims == piece.dims and is_isomorphic(r, piece, seed) for r in reps):
            raise NotAComplement("x shares a summand with m")
    ap = left_add_approximation(x, reps, seed)
    if not ap.is_mono():
        raise ApproximationNotMono("the minimal left approximation has a kernel")
    y, _ = cokernel(ap.map)
    if verify:
        total = direct_sum(reps + [y])[0]
        if not check_tilting(total).is_yes:
            raise ModuleError("mutation did not produce a tilting module")
    return y
