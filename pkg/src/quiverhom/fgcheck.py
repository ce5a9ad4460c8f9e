"""Degree-bounded (Fg) evidence, the eAe reduction, and support-variety fingerprints."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .algebra import FDAlgebra, NotIdempotent, _as_element, _vertex_support, corner, opposite, AlgebraError
from .complexes import Complex, HomComplex, composition_matrix
from .hochschild import CocycleRoof, HHTable, PhiContext, cup_product, hh_dims, selector as make_selector
from .homology import DEFAULT_DIM_CAP, Finite, ProjDimResult, combine, projdim
from .modules import FDModule, direct_sum, module_from_action, simple
from .nakayama import fg_certificate_nakayama, is_nakayama


def semisimple_top(a: FDAlgebra) -> FDModule:
    """A/rad A as a left module."""
    return direct_sum([simple(a, v) for v in range(a.n_vertices)])[0]


# ---------------------------------------------------------------------------
# The H-action on hyper-Ext
# ---------------------------------------------------------------------------


class ExtAction:
    """Action of H = HH^sel(A) on E = Hom_D(M, N[k]) for 0 <= k <= cap, via right composition.

    For h in HH^d the class phi_M(h) is lifted to a chain map L_h on the
    resolution Q of M, and x in E_k goes to x o L_h in E_{k+d}.
    """

    def __init__(self, a: FDAlgebra, m: Complex | FDModule, n: Complex | FDModule, cap: int,
                 table: HHTable | None = None, context: PhiContext | None = None):
        if isinstance(m, FDModule):
            m = Complex.stalk(m)
        if isinstance(n, FDModule):
            n = Complex.stalk(n)
        self.a = a
        self.cap = cap
        self.table = table or hh_dims(a, cap)
        lo = min(m.lo, n.lo) - cap - 1
        self.ctx = context if context is not None and context.lo <= lo else PhiContext(self.table, m, lo)
        self.hom = HomComplex(self.ctx.q, n)
        self.e_dims = [self.hom.dim(k) for k in range(cap + 1)]

    def matrix(self, h: CocycleRoof, k: int) -> np.ndarray:
        """Matrix of x -> x o L_h from E_k to E_{k+d} in class coordinates."""
        F = self.a.field
        d = h.degree
        src = self.hom.cohomology(k)
        tgt = self.hom.cohomology(k + d)
        if src.dim == 0 or tgt.dim == 0:
            return F.zeros(tgt.dim, src.dim)
        lift = self.ctx.lift(h)
        C = composition_matrix(self.hom, k, lift, d, self.hom)
        return tgt.coords(F.mul(C, src.reps))

    def action_vector(self, h: CocycleRoof) -> np.ndarray:
        """All blocks E_k -> E_{k+d} inside the window, flattened into one column."""
        F = self.a.field
        parts = []
        for k in range(0, self.cap - h.degree + 1):
            M = self.matrix(h, k)
            if M.size:
                parts.append(M.reshape(-1, 1))
        if not parts:
            return F.zeros(0, 1)
        return F.vstack(parts, 1)


@dataclass
class SupportFingerprint:
    pair: tuple
    selector: str
    cap: int
    dims: dict
    h_dims: dict
    e_dims: list[int]
    note: str = "annihilator taken on the truncated Ext module; entries are lower bounds that can only grow with cap"

    def as_list(self) -> list[int]:
        return [self.dims[d] for d in sorted(self.dims)]


def support_fingerprint(a: FDAlgebra, m, n, sel: str = "ev", cap: int = 4, table: HHTable | None = None,
                        action: ExtAction | None = None) -> SupportFingerprint:
    """dim of H_d / Ann(E)_d for the selected degrees d <= cap."""
    s = make_selector(sel, a)
    act = action or ExtAction(a, m, n, cap, table)
    F = a.field
    dims, hd = {}, {}
    for d in s.degrees(cap):
        classes = act.table.classes(d)
        hd[d] = len(classes)
        cols = [act.action_vector(h) for h in classes]
        if not cols or cols[0].shape[0] == 0:
            dims[d] = 0
            continue
        dims[d] = F.rank(F.hstack(cols, cols[0].shape[0]))
    return SupportFingerprint((getattr(m, "name", None), getattr(n, "name", None)), sel, cap, dims, hd, act.e_dims)


# ---------------------------------------------------------------------------
# (Fg) evidence
# ---------------------------------------------------------------------------


@dataclass
class FgEvidence:
    algebra: FDAlgebra
    selector: str
    cap: int
    ring_generator_degrees: list[int]
    module_generator_degrees: list[int]
    window: tuple[int, int] | None
    verdict: str
    note: str = ""
    e_dims: list[int] = dc_field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.verdict.startswith("Certified")


def _span_rank(F, cols: list[np.ndarray], rows: int) -> int:
    if not cols:
        return 0
    return F.rank(F.hstack(cols, rows))


def ring_generator_degrees(table: HHTable, degrees: Sequence[int]) -> list[int]:
    """Degrees d > 0 where H_d is not spanned by products of lower positive-degree classes."""
    F = table.algebra.field
    out = []
    for d in degrees:
        if d == 0 or table.dims[d] == 0:
            continue
        prods = []
        for e in degrees:
            if 0 < e < d and (d - e) in degrees:
                for x in table.classes(e):
                    for y in table.classes(d - e):
                        prods.append(cup_product(x, y).coords())
        if _span_rank(F, prods, table.dims[d]) < table.dims[d]:
            out.append(d)
    return out


def module_generator_dims(act: ExtAction, degrees: Sequence[int]) -> list[int]:
    """dim of E_k modulo the images of H_d E_{k-d} for selected d > 0."""
    F = act.a.field
    out = []
    for k in range(act.cap + 1):
        ek = act.e_dims[k]
        cols = []
        for d in degrees:
            if d == 0 or d > k:
                continue
            for h in act.table.classes(d):
                M = act.matrix(h, k - d)
                for c in range(M.shape[1]):
                    cols.append(M[:, c:c + 1])
        out.append(ek - _span_rank(F, cols, ek))
    return out


def fg_evidence(a: FDAlgebra, sel: str = "ev", cap: int = 6, dim_cap: int = DEFAULT_DIM_CAP) -> FgEvidence:
    """Certified verdict for Nakayama algebras, windowed evidence otherwise."""
    if is_nakayama(a):
        cert = fg_certificate_nakayama(a, dim_cap)
        if cert.verdict in ("CertifiedYes", "CertifiedNo"):
            return FgEvidence(a, sel, cap, [], [], None, cert.verdict,
                              f"Nakayama algebra with Kupisch series {cert.series}; Gorenstein = {cert.gorenstein.verdict}")
    s = make_selector(sel, a)
    table = hh_dims(a, cap)
    degrees = s.degrees(cap)
    top = semisimple_top(a)
    act = ExtAction(a, top, top, cap, table)
    gens = module_generator_dims(act, degrees)
    mod_degs = [k for k, g in enumerate(gens) if g]
    ring_degs = ring_generator_degrees(table, degrees)
    w = math.ceil(cap / 3)
    window = (cap - w + 1, cap)
    late = [k for k in mod_degs if k >= window[0]]
    verdict = f"CounterSignal({late[0]})" if late else f"EvidenceYes({cap})"
    note = f"heuristic: no new module generators of Ext*(A/rad A, A/rad A) in degrees {window[0]}..{window[1]}"
    return FgEvidence(a, sel, cap, ring_degs, mod_degs, window, verdict, note, act.e_dims)


# ---------------------------------------------------------------------------
# eAe reduction
# ---------------------------------------------------------------------------


@dataclass
class EAeReport:
    support: list[int]
    projdim_top: ProjDimResult
    projdim_ae: ProjDimResult
    applicable: bool
    corner: FDAlgebra | None
    corner_verdict: FgEvidence | None = None


def ae_right_module(a: FDAlgebra, support: Sequence[int]) -> FDModule:
    """Ae as a left module over (eAe)^op for e the sum of the given vertex idempotents."""
    c = corner(a, list(support))
    op = opposite(c)
    F = a.field
    if c is a:
        keep, verts = list(range(a.dim)), list(range(a.n_vertices))
    else:
        keep, verts = c.parent_basis, c.parent_vertices
    cols = [a.basis_from(v) for v in verts]
    pos = [{b: k for k, b in enumerate(col)} for col in cols]

    def act(b):
        # b is the element keep[b] in e_t A e_s; it acts by right multiplication A e_t -> A e_s
        t, s = c.ends[b]
        x = keep[b]
        out = F.zeros(len(cols[s]), len(cols[t]))
        for j, y in enumerate(cols[t]):
            for k, coef in a.mul_basis(y, x).items():
                out[pos[s][k], j] += coef
        return out

    return module_from_action(op, [len(col) for col in cols], act, name="Ae")


def eAe_reduction(a: FDAlgebra, e, cap: int = DEFAULT_DIM_CAP, fg_cap: int | None = None) -> EAeReport:
    """Check projdim_A(B/rad B) < inf and projdim_{(eAe)^op}(Ae) < inf for B = A/AeA."""
    vec = _as_element(a, e)
    if not np.all(a.mul(vec, vec) == vec):
        raise NotIdempotent("element is not idempotent")
    support = _vertex_support(a, vec)
    if support is None:
        raise AlgebraError("only sums of vertex idempotents are supported")
    if not support:
        raise NotIdempotent("the zero idempotent gives no corner algebra")
    rest = [v for v in range(a.n_vertices) if v not in support]
    pd_top = combine([projdim(simple(a, v), cap) for v in rest], cap) if rest else Finite(0)
    pd_ae = projdim(ae_right_module(a, support), cap)
    ok = isinstance(pd_top, Finite) and isinstance(pd_ae, Finite)
    c = corner(a, support) if ok else None
    verdict = fg_evidence(c, cap=fg_cap) if (ok and fg_cap) else None
    return EAeReport(list(support), pd_top, pd_ae, ok, c, verdict)


def nontrivial_vertex_sums(a: FDAlgebra) -> list[list[int]]:
    n = a.n_vertices
    out = []
    for mask in range(1, 2 ** n - 1):
        out.append([v for v in range(n) if mask >> v & 1])
    return out
