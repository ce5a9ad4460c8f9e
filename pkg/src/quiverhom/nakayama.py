"""Nakayama algebras: detection, Kupisch series, and the Gorenstein route to (Fg)."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraError, FDAlgebra
from .homology import DEFAULT_DIM_CAP, GorensteinResult, is_gorenstein


class NotNakayama(AlgebraError):
    pass


class NoQuiverProvenance(AlgebraError):
    pass


@dataclass(frozen=True)
class KupischSeries:
    entries: tuple[int, ...]
    cyclic: bool
    vertex_order: tuple[str, ...]

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.entries) + ")"


def _quiver_of(a: FDAlgebra):
    q = getattr(a, "quiver", None)
    if q is None:
        raise NoQuiverProvenance("algebra has no quiver")
    return q


def is_nakayama(a: FDAlgebra) -> bool:
    """At most one arrow into and one arrow out of every vertex."""
    q = _quiver_of(a)
    n = len(q.vertices)
    out_deg = [0] * n
    in_deg = [0] * n
    for arr in q.arrows:
        out_deg[arr.source] += 1
        in_deg[arr.target] += 1
    return all(x <= 1 for x in out_deg) and all(x <= 1 for x in in_deg)


def _components(a: FDAlgebra) -> list[tuple[list[int], bool]]:
    """Connected components as vertex lists in arrow order, with a cyclic flag."""
    q = a.quiver
    n = len(q.vertices)
    succ = {arr.source: arr.target for arr in q.arrows}
    pred = {arr.target: arr.source for arr in q.arrows}
    seen = set()
    comps = []
    for v in range(n):
        if v in seen:
            continue
        # walk back to a source, or detect a cycle
        start, cyclic = v, False
        w = v
        visited = {v}
        while w in pred:
            w = pred[w]
            if w in visited:
                cyclic = True
                break
            visited.add(w)
        if not cyclic:
            start = w
        order = [start]
        w = start
        while w in succ and succ[w] != start:
            w = succ[w]
            order.append(w)
        seen.update(order)
        comps.append((order, cyclic))
    return comps


def admissible_sequence(a: FDAlgebra) -> KupischSeries:
    """Loewy lengths of the projectives in arrow order; cycles use the lexicographically least rotation."""
    if not is_nakayama(a):
        raise NotNakayama("quiver has a vertex with two incoming or two outgoing arrows")
    cartan = a.cartan()
    lengths = [sum(cartan[i][v] for i in range(a.n_vertices)) for v in range(a.n_vertices)]
    pieces = []
    any_cyclic = False
    for order, cyclic in _components(a):
        seq = [lengths[v] for v in order]
        if cyclic:
            any_cyclic = True
            rots = [(tuple(seq[k:] + seq[:k]), tuple(order[k:] + order[:k])) for k in range(len(seq))]
            best = min(rots, key=lambda r: (r[0], [a.vertex_labels[v] for v in r[1]]))
            pieces.append(best)
        else:
            pieces.append((tuple(seq), tuple(order)))
    pieces.sort()
    entries = tuple(x for p in pieces for x in p[0])
    verts = tuple(a.vertex_labels[v] for p in pieces for v in p[1])
    return KupischSeries(entries, any_cyclic, verts)


@dataclass(frozen=True)
class NakayamaCertificate:
    verdict: str  # CertifiedYes | CertifiedNo | Unknown(cap)
    gorenstein: GorensteinResult
    series: KupischSeries


def fg_certificate_nakayama(a: FDAlgebra, cap: int = DEFAULT_DIM_CAP) -> NakayamaCertificate:
    """For a Nakayama algebra, (Fg) holds exactly when the algebra is Gorenstein."""
    series = admissible_sequence(a)
    g = is_gorenstein(a, cap)
    if g.verdict == "Yes":
        verdict = "CertifiedYes"
    elif g.verdict == "No":
        verdict = "CertifiedNo"
    else:
        verdict = g.verdict
    return NakayamaCertificate(verdict, g, series)
