"""Finite-dimensional algebras presented by quivers with relations.

Conventions
-----------
Paths are stored in *function order*: the word ``(b, a)`` means "first ``a``,
then ``b``", so that the product ``x * y`` of two paths is plain tuple
concatenation.  A path is the pair ``(source_vertex, word)``; the source is
needed for trivial paths and is redundant otherwise.

Every algebra built here has an *adapted* basis: one basis element per vertex
idempotent, every other basis element lies in the radical, and every basis
element ``b`` satisfies ``b = e_t b e_s`` for a pair of vertices ``ends[b] = (t, s)``.
Each algebra also carries a set of arrows (basis elements spanning a complement
of rad^2 in rad) together with, for every basis element, an expansion as a
linear combination of arrow words.  Modules only need the arrows and those
expansions.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .exactlin import QQ, FieldSpec, parse_field


class AlgebraError(Exception):
    pass


class NotFiniteDimensional(AlgebraError):
    pass


class NotAdmissible(AlgebraError):
    pass


class NotIdempotent(AlgebraError):
    pass


class ZeroQuotient(AlgebraError):
    pass


class FieldMismatch(AlgebraError):
    pass


class ParseError(AlgebraError):
    pass


# ---------------------------------------------------------------------------
# Quivers and path expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Arrow:
    label: str
    source: int
    target: int


class Quiver:
    """Vertices are labels; arrows are ``(label, source, target)`` with vertex labels."""

    def __init__(self, vertices: Iterable, arrows: Iterable[tuple] = ()):
        self.vertices = [str(v) for v in vertices]
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("duplicate vertex labels")
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self.arrows: list[Arrow] = []
        for label, s, t in arrows:
            for v in (s, t):
                if str(v) not in self._vindex:
                    raise AlgebraError(f"arrow {label}: unknown vertex {v}")
            self.arrows.append(Arrow(str(label), self._vindex[str(s)], self._vindex[str(t)]))
        labels = [a.label for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise AlgebraError("duplicate arrow labels")
        self._aindex = {a.label: i for i, a in enumerate(self.arrows)}

    def vertex_index(self, label) -> int:
        try:
            return self._vindex[str(label)]
        except KeyError:
            raise AlgebraError(f"unknown vertex {label}") from None

    def arrow_index(self, label: str) -> int:
        try:
            return self._aindex[label]
        except KeyError:
            raise AlgebraError(f"unknown arrow {label}") from None

    def source(self, path) -> int:
        src, word = path
        return src

    def target(self, path) -> int:
        src, word = path
        return self.arrows[word[0]].target if word else src

    def paths_of_length(self, n: int) -> list[tuple[int, tuple[int, ...]]]:
        """All paths of length n, ordered by source then traversal sequence."""
        layer = [(v, ()) for v in range(len(self.vertices))]
        for _ in range(n):
            nxt = []
            for src, word in layer:
                t = self.target((src, word))
                for ai, a in enumerate(self.arrows):
                    if a.source == t:
                        nxt.append((src, (ai,) + word))
            layer = nxt
        return layer

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [(a.label, self.vertices[a.target], self.vertices[a.source]) for a in self.arrows])

    def path_label(self, path) -> str:
        src, word = path
        if not word:
            return f"e{self.vertices[src]}"
        labels = [self.arrows[i].label for i in word]
        sep = "" if all(len(x) == 1 for x in labels) else "."
        return sep.join(labels)

    def __repr__(self) -> str:
        arr = ", ".join(f"{a.label}:{self.vertices[a.source]}->{self.vertices[a.target]}" for a in self.arrows)
        return f"Quiver(vertices={self.vertices}, arrows=[{arr}])"


class PathExpr:
    """Linear combination of paths, stored as ``{(source, word): coefficient}``."""

    def __init__(self, quiver: Quiver, terms: dict, field: FieldSpec = QQ):
        self.quiver = quiver
        self.field = field
        self.terms = {p: field(c) for p, c in terms.items() if c != 0}
        for p in self.terms:
            self._check_composable(p)

    def _check_composable(self, path):
        src, word = path
        prev = src
        for ai in reversed(word):
            a = self.quiver.arrows[ai]
            if a.source != prev:
                raise AlgebraError(f"non-composable path {self.quiver.path_label(path)}")
            prev = a.target

    @classmethod
    def parse(cls, text: str, quiver: Quiver, field: FieldSpec = QQ) -> "PathExpr":
        """Parse ``a*b*c - 2*d*e``; arrows are listed in traversal order (leftmost first)."""
        src_text = text
        text = text.strip()
        if not text:
            raise ParseError("empty relation")
        pieces = re.findall(r"[+-]?[^+-]+", text.replace(" - ", " -").replace(" + ", " +"))
        terms: dict = {}
        for piece in pieces:
            piece = piece.strip()
            sign = 1
            if piece[0] in "+-":
                sign = -1 if piece[0] == "-" else 1
                piece = piece[1:].strip()
            tokens = [t for t in re.split(r"[*\s]+", piece) if t]
            if not tokens:
                raise ParseError(f"malformed term in {src_text!r}")
            coef = field(sign)
            arrows = []
            for tok in tokens:
                if re.fullmatch(r"\d+(/\d+)?", tok):
                    if arrows:
                        raise ParseError(f"coefficient after arrows in {src_text!r}")
                    coef = coef * field(tok)
                elif re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
                    if tok not in quiver._aindex:
                        raise ParseError(f"unknown arrow {tok!r} in {src_text!r}")
                    arrows.append(quiver._aindex[tok])
                else:
                    raise ParseError(f"bad token {tok!r} in {src_text!r}")
            if not arrows:
                raise ParseError(f"constant term in relation {src_text!r}")
            for x, y in zip(arrows, arrows[1:]):
                if quiver.arrows[x].target != quiver.arrows[y].source:
                    raise ParseError(f"non-composable path in {src_text!r}")
            word = tuple(reversed(arrows))
            key = (quiver.arrows[arrows[0]].source, word)
            terms[key] = terms.get(key, field(0)) + coef
        return cls(quiver, terms, field)

    @classmethod
    def word(cls, quiver: Quiver, labels_function_order: str | Sequence[str], field: FieldSpec = QQ) -> "PathExpr":
        """A single path given in function order, e.g. ``"bacba"`` (rightmost arrow first)."""
        labels = list(labels_function_order)
        word = tuple(quiver.arrow_index(x) for x in labels)
        src = quiver.arrows[word[-1]].source
        return cls(quiver, {(src, word): 1}, field)

    def __add__(self, other: "PathExpr") -> "PathExpr":
        terms = dict(self.terms)
        for p, c in other.terms.items():
            terms[p] = terms.get(p, self.field(0)) + c
        return PathExpr(self.quiver, terms, self.field)

    def __neg__(self) -> "PathExpr":
        return PathExpr(self.quiver, {p: -c for p, c in self.terms.items()}, self.field)

    def __sub__(self, other: "PathExpr") -> "PathExpr":
        return self + (-other)

    def __rmul__(self, c) -> "PathExpr":
        return PathExpr(self.quiver, {p: self.field(c) * v for p, v in self.terms.items()}, self.field)

    def lengths(self) -> list[int]:
        return [len(w) for (_, w) in self.terms]

    def components(self) -> list["PathExpr"]:
        """Split into the pieces ``e_t r e_s``."""
        groups: dict = {}
        for p, c in self.terms.items():
            key = (self.quiver.source(p), self.quiver.target(p))
            groups.setdefault(key, {})[p] = c
        return [PathExpr(self.quiver, g, self.field) for _, g in sorted(groups.items())]

    def to_text(self) -> str:
        """Traversal-order text accepted by :meth:`parse`."""
        out = []
        for (src, word), c in self.terms.items():
            names = "*".join(self.quiver.arrows[i].label for i in reversed(word))
            cs = self.field.fmt(c)
            if cs == "1":
                term = names
            elif cs == "-1":
                term = "-" + names
            else:
                term = f"{cs}*{names}"
            out.append(term)
        text = " + ".join(out)
        return text.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"PathExpr({self.to_text()})"


# ---------------------------------------------------------------------------
# Algebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgArrow:
    label: str
    index: int  # basis index of the arrow
    source: int
    target: int


class FDAlgebra:
    """Base class; subclasses provide ``_mul_basis`` and the arrow data."""

    def __init__(self, field: FieldSpec, vertex_labels: Sequence[str], labels: Sequence[str],
                 ends: Sequence[tuple[int, int]], idem: Sequence[int], name: str | None = None):
        self.field = field
        self.vertex_labels = [str(v) for v in vertex_labels]
        self.labels = list(labels)
        self.ends = [tuple(e) for e in ends]
        self.idem = list(idem)
        self.name = name or "A"
        self._mcache: dict = {}
        self._lmat: dict = {}
        self._idem_set = set(self.idem)
        self.provenance: tuple | None = None

    # -- basic data ---------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_labels)

    def is_radical(self, b: int) -> bool:
        return b not in self._idem_set

    @cached_property
    def block(self) -> dict:
        """``(t, s) -> list of basis indices`` of e_t A e_s."""
        out: dict = {}
        for b, e in enumerate(self.ends):
            out.setdefault(e, []).append(b)
        return out

    def basis_from(self, s: int) -> list[int]:
        """Basis of A e_s (the indecomposable projective at s)."""
        return [b for b, (t, src) in enumerate(self.ends) if src == s]

    def basis_to(self, t: int) -> list[int]:
        return [b for b, (tt, _) in enumerate(self.ends) if tt == t]

    def _mul_basis(self, i: int, j: int) -> dict:
        raise NotImplementedError

    def mul_basis(self, i: int, j: int) -> dict:
        key = (i, j)
        r = self._mcache.get(key)
        if r is None:
            if self.ends[i][1] != self.ends[j][0]:
                r = {}
            else:
                r = {k: c for k, c in self._mul_basis(i, j).items() if c != 0}
            self._mcache[key] = r
        return r

    def zero(self) -> np.ndarray:
        return self.field.zeros(self.dim, 1)

    def basis_vector(self, i: int) -> np.ndarray:
        return self.field.unit(self.dim, i)

    def one(self) -> np.ndarray:
        v = self.zero()
        for i in self.idem:
            v[i, 0] = self.field.one
        return v

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = self.zero()
        xs = [(i, x[i, 0]) for i in range(self.dim) if x[i, 0] != 0]
        ys = [(j, y[j, 0]) for j in range(self.dim) if y[j, 0] != 0]
        for i, a in xs:
            for j, b in ys:
                for k, c in self.mul_basis(i, j).items():
                    out[k, 0] = out[k, 0] + a * b * c
        return out

    def left_matrix(self, i: int) -> np.ndarray:
        """Matrix of left multiplication by basis element i."""
        m = self._lmat.get(i)
        if m is None:
            m = self.field.zeros(self.dim, self.dim)
            for j in range(self.dim):
                for k, c in self.mul_basis(i, j).items():
                    m[k, j] = c
            self._lmat[i] = m
        return m

    def right_matrix(self, i: int) -> np.ndarray:
        m = self.field.zeros(self.dim, self.dim)
        for j in range(self.dim):
            for k, c in self.mul_basis(j, i).items():
                m[k, j] = c
        return m

    def element_left_matrix(self, x: np.ndarray) -> np.ndarray:
        m = self.field.zeros(self.dim, self.dim)
        for i in range(self.dim):
            if x[i, 0] != 0:
                m = self.field.add(m, self.field.smul(x[i, 0], self.left_matrix(i)))
        return m

    # -- arrows and word expansions ------------------------------------------
    @cached_property
    def arrows(self) -> list[AlgArrow]:
        return self._radical_arrows()

    def _radical_arrows(self) -> list[AlgArrow]:
        """Arrows as a complement of rad^2 in rad, chosen blockwise among basis elements."""
        F = self.field
        rad = [b for b in range(self.dim) if self.is_radical(b)]
        prods = []
        for i in rad:
            for j in rad:
                p = self.mul_basis(i, j)
                if p:
                    v = self.zero()
                    for k, c in p.items():
                        v[k, 0] = c
                    prods.append(v)
        rad2 = F.hstack(prods, self.dim)
        out = []
        for (t, s), members in sorted(self.block.items()):
            cand = [b for b in members if self.is_radical(b)]
            if not cand:
                continue
            span = rad2[members, :] if rad2.shape[1] else F.zeros(len(members), 0)
            units = F.zeros(len(members), len(cand))
            for c, b in enumerate(cand):
                units[members.index(b), c] = F.one
            for c in F.complement_columns(span, units):
                b = cand[c]
                out.append(AlgArrow(self.labels[b], b, s, t))
        return out

    @cached_property
    def words(self) -> list[list[tuple]]:
        """For each basis element a list of ``(coef, source_vertex, word)`` with words in arrow positions."""
        return self._bfs_words()

    def _bfs_words(self) -> list[list[tuple]]:
        F = self.field
        elems = []  # (vector, source, word)
        for v, i in enumerate(self.idem):
            elems.append((self.basis_vector(i), v, ()))
        span = F.hstack([e[0] for e in elems], self.dim)
        frontier = list(elems)
        while frontier and span.shape[1] < self.dim:
            nxt = []
            for pos, a in enumerate(self.arrows):
                L = self.left_matrix(a.index)
                for vec, src, word in frontier:
                    tgt = a.source
                    if word:
                        if self.arrows[word[0]].target != tgt:
                            continue
                    elif src != tgt:
                        continue
                    w = F.mul(L, vec)
                    if F.is_zero(w):
                        continue
                    if F.rank(np.concatenate([span, w], axis=1)) > span.shape[1]:
                        span = np.concatenate([span, w], axis=1)
                        item = (w, src, (pos,) + word)
                        elems.append(item)
                        nxt.append(item)
            frontier = nxt
        if span.shape[1] < self.dim:
            raise AlgebraError("arrows and idempotents do not generate the algebra")
        coords = F.solve(span, F.eye(self.dim))
        out = []
        for b in range(self.dim):
            expansion = []
            for k, (_, src, word) in enumerate(elems):
                c = coords[k, b]
                if c != 0:
                    expansion.append((c, src, word))
            out.append(expansion)
        return out

    # -- derived data ---------------------------------------------------------
    def cartan(self) -> list[list[int]]:
        """``C[i][j] = dim e_i A e_j``; column j is the dimension vector of P_j."""
        n = self.n_vertices
        c = [[0] * n for _ in range(n)]
        for t, s in self.ends:
            c[t][s] += 1
        return c

    @cached_property
    def quiver(self) -> Quiver:
        """The (Gabriel) quiver read off from the arrows."""
        return Quiver(self.vertex_labels,
                      [(a.label, self.vertex_labels[a.source], self.vertex_labels[a.target]) for a in self.arrows])

    def check_associative(self, triples: Iterable[tuple[int, int, int]] | None = None) -> bool:
        if triples is None:
            triples = itertools.product(range(self.dim), repeat=3)
        for i, j, k in triples:
            left: dict = {}
            for m, c in self.mul_basis(i, j).items():
                for r, d in self.mul_basis(m, k).items():
                    left[r] = left.get(r, 0) + c * d
            right: dict = {}
            for m, c in self.mul_basis(j, k).items():
                for r, d in self.mul_basis(i, m).items():
                    right[r] = right.get(r, 0) + c * d
            left = {r: v for r, v in left.items() if v != 0}
            right = {r: v for r, v in right.items() if v != 0}
            if left != right:
                return False
        return True

    def sample_associative(self, count: int, seed: int = 0) -> bool:
        rng = random.Random(seed)
        n = self.dim
        return self.check_associative((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(count))

    def check_idempotents(self) -> bool:
        F = self.field
        s = self.zero()
        for v, i in enumerate(self.idem):
            s[i, 0] = s[i, 0] + F.one
            for w, j in enumerate(self.idem):
                p = self.mul_basis(i, j)
                want = {i: F.one} if v == w else {}
                if p != want:
                    return False
        one = self.one()
        for b in range(self.dim):
            e = self.basis_vector(b)
            if not (np.all(self.mul(one, e) == e) and np.all(self.mul(e, one) == e)):
                return False
        return True

    def center_dim(self) -> int:
        """dim Z(A), by solving za = az for the arrows and idempotents."""
        F = self.field
        gens = list(self.idem) + [a.index for a in self.arrows]
        rows = []
        for g in gens:
            rows.append(F.sub(self.right_matrix(g), self.left_matrix(g)))
        m = F.vstack(rows, self.dim)
        return self.dim - F.rank(m)

    def loewy_length(self) -> int:
        """Smallest L with rad^L = 0."""
        F = self.field
        rad = [self.basis_vector(b) for b in range(self.dim) if self.is_radical(b)]
        if not rad:
            return 1
        cur = F.colspace(F.hstack(rad, self.dim))
        L = 1
        arrows = [self.left_matrix(a.index) for a in self.arrows]
        while cur.shape[1]:
            nxt = [F.mul(m, cur) for m in arrows]
            cur = F.colspace(F.hstack(nxt, self.dim)) if nxt else F.zeros(self.dim, 0)
            L += 1
        return L

    def element_from_dict(self, d: dict) -> np.ndarray:
        v = self.zero()
        for k, c in d.items():
            v[k, 0] = self.field(c)
        return v

    def idempotent_sum(self, vertices: Iterable[int]) -> np.ndarray:
        v = self.zero()
        for x in vertices:
            v[self.idem[x], 0] = self.field.one
        return v

    def vertex_index(self, label) -> int:
        label = str(label)
        if label in self.vertex_labels:
            return self.vertex_labels.index(label)
        raise AlgebraError(f"unknown vertex {label}")

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} dim={self.dim} field={self.field} vertices={self.n_vertices}>"


class PathQuotient(FDAlgebra):
    """kQ / I with a basis of paths."""

    def __init__(self, quiver: Quiver, relations: list[PathExpr], field: FieldSpec, basis_paths: list,
                 reduction: dict, bound: int, name: str | None = None):
        self._quiver = quiver
        self.relations = relations
        self.basis_paths = basis_paths
        self.bound = bound
        self._reduction = reduction
        self._pindex = {p: i for i, p in enumerate(basis_paths)}
        idem = [self._pindex[(v, ())] for v in range(len(quiver.vertices))]
        labels = [quiver.path_label(p) for p in basis_paths]
        ends = [(quiver.target(p), quiver.source(p)) for p in basis_paths]
        super().__init__(field, quiver.vertices, labels, ends, idem, name)
        self.provenance = (quiver, relations)

    def _mul_basis(self, i, j):
        (si, wi), (sj, wj) = self.basis_paths[i], self.basis_paths[j]
        if not wi:
            return {j: self.field.one}
        if not wj:
            return {i: self.field.one}
        word = wi + wj
        if len(word) >= self.bound:
            return {}
        return dict(self._reduction[(sj, word)])

    def reduce_path(self, path) -> dict:
        src, word = path
        if len(word) >= self.bound:
            return {}
        return dict(self._reduction[path])

    def element(self, expr: PathExpr) -> np.ndarray:
        v = self.zero()
        for p, c in expr.terms.items():
            for k, d in self.reduce_path(p).items():
                v[k, 0] = v[k, 0] + c * d
        return v

    @cached_property
    def arrows(self) -> list[AlgArrow]:
        out = []
        for ai, a in enumerate(self._quiver.arrows):
            p = (a.source, (ai,))
            if p not in self._pindex:
                raise NotAdmissible(f"arrow {a.label} vanishes in the quotient")
            out.append(AlgArrow(a.label, self._pindex[p], a.source, a.target))
        return out

    @cached_property
    def words(self):
        return [[(self.field.one, src, word)] for (src, word) in self.basis_paths]

    @cached_property
    def quiver(self) -> Quiver:
        return self._quiver


def _paths_upto(q: Quiver, n: int) -> list:
    out = []
    for k in range(n + 1):
        out.extend(q.paths_of_length(k))
    return out


def _multiply_paths(q: Quiver, u, expr: dict, v, maxlen: int | None) -> dict:
    """u * expr * v on path dictionaries, dropping terms longer than maxlen when given."""
    out = {}
    us, uw = u
    vs, vw = v
    for (src, word), c in expr.items():
        w = uw + word + vw
        if maxlen is not None and len(w) > maxlen:
            continue
        out[(vs if vw or word or uw else src, w)] = c
    return out


def build_quotient(q: Quiver, rels: Sequence[PathExpr], field: FieldSpec = QQ, cap: int = 30,
                   name: str | None = None) -> PathQuotient:
    """kQ modulo the two-sided ideal generated by rels, computed lengthwise.

    The ideal is certified to contain all paths of some length l <= cap (every
    path of length l is written exactly as a combination of u*r*v lying in
    paths of length <= l).  The quotient is then kQ_{<l} modulo the truncated
    ideal.
    """
    comps: list[PathExpr] = []
    for r in rels:
        if r.quiver is not q:
            r = PathExpr(q, r.terms, field)
        for c in r.components():
            if not c.terms:
                continue
            if min(c.lengths()) < 2:
                raise NotAdmissible(f"relation {c.to_text()} has a component of length < 2")
            comps.append(c)
    n_v = len(q.vertices)

    def ideal_span(paths_index, length_of_uv_ok, truncate_at):
        cols = []
        by_len: dict = {}
        for p in paths_index:
            by_len.setdefault(len(p[1]), []).append(p)
        for r in comps:
            t = q.target(next(iter(r.terms)))
            s = q.source(next(iter(r.terms)))
            lo, hi = min(r.lengths()), max(r.lengths())
            for lu in range(0, truncate_at + 1):
                for lv in range(0, truncate_at + 1):
                    if not length_of_uv_ok(lu, lv, lo, hi):
                        continue
                    us = [p for p in by_len.get(lu, []) if q.source(p) == t]
                    vs = [p for p in by_len.get(lv, []) if q.target(p) == s]
                    for u in us:
                        for v in vs:
                            terms = {}
                            for (src, word), c in r.terms.items():
                                w = u[1] + word + v[1]
                                if len(w) > truncate_at:
                                    continue
                                key = (v[0] if v[1] else src, w)
                                terms[key] = c
                            if terms:
                                col = field.zeros(len(paths_index), 1)
                                for key, c in terms.items():
                                    col[paths_index[key], 0] = c
                                cols.append(col)
        return field.hstack(cols, len(paths_index))

    if not q.arrows:
        bound = 1
    else:
        bound = None
        for ell in range(1, cap + 1):
            paths = _paths_upto(q, ell)
            index = {p: i for i, p in enumerate(paths)}
            top = [p for p in paths if len(p[1]) == ell]
            if not top:
                bound = ell
                break
            W = ideal_span(index, lambda lu, lv, lo, hi, ell=ell: lu + hi + lv <= ell, ell)
            r0 = field.rank(W) if W.shape[1] else 0
            units = field.zeros(len(paths), len(top))
            for c, p in enumerate(top):
                units[index[p], c] = field.one
            if field.rank(np.concatenate([W, units], axis=1)) == r0:
                bound = ell
                break
        if bound is None:
            raise NotFiniteDimensional(f"paths of length {cap} survive the relations")

    paths = _paths_upto(q, bound - 1)
    index = {p: i for i, p in enumerate(paths)}
    N = len(paths)
    U = ideal_span(index, lambda lu, lv, lo, hi, b=bound: lu + lo + lv < b, max(bound - 1, 0))
    both = np.concatenate([U, field.eye(N)], axis=1)
    piv = field.independent_columns(both)
    chosen = [j - U.shape[1] for j in piv if j >= U.shape[1]]
    basis_paths = [paths[j] for j in chosen]
    B = field.zeros(N, len(chosen))
    for c, j in enumerate(chosen):
        B[j, c] = field.one
    sol = field.solve(np.concatenate([B, U], axis=1), field.eye(N))
    reduction = {}
    for pi, p in enumerate(paths):
        reduction[p] = {k: sol[k, pi] for k in range(len(chosen)) if sol[k, pi] != 0}
    for v in range(n_v):
        if (v, ()) not in set(basis_paths):
            raise NotAdmissible("a vertex idempotent lies in the ideal")
    return PathQuotient(q, list(rels), field, basis_paths, reduction, bound, name)


def path_algebra(q: Quiver, field: FieldSpec = QQ, cap: int = 30) -> PathQuotient:
    return build_quotient(q, [], field, cap)


class TableAlgebra(FDAlgebra):
    """Algebra given by an explicit sparse multiplication table."""

    def __init__(self, field, vertex_labels, labels, ends, idem, table: dict, name=None):
        super().__init__(field, vertex_labels, labels, ends, idem, name)
        self._table = table

    def _mul_basis(self, i, j):
        return self._table.get((i, j), {})


class OppositeAlgebra(FDAlgebra):
    def __init__(self, base: FDAlgebra):
        labels = [f"{x}" for x in base.labels]
        ends = [(s, t) for (t, s) in base.ends]
        super().__init__(base.field, base.vertex_labels, labels, ends, base.idem, f"{base.name}^op")
        self.base = base
        if base.provenance is not None:
            q, rels = base.provenance
            qop = q.opposite()
            self.provenance = (qop, [PathExpr(qop, {(q.target(p), tuple(reversed(p[1]))): c for p, c in r.terms.items()},
                                              base.field) for r in rels])

    def _mul_basis(self, i, j):
        return self.base.mul_basis(j, i)

    @cached_property
    def arrows(self):
        return [AlgArrow(a.label, a.index, a.target, a.source) for a in self.base.arrows]

    @cached_property
    def words(self):
        out = []
        for b, exp in enumerate(self.base.words):
            new = []
            for c, src, word in exp:
                # the source in the opposite algebra is the target in the base
                tgt = self.base.arrows[word[0]].target if word else src
                new.append((c, tgt, tuple(reversed(word))))
            out.append(new)
        return out

    @cached_property
    def quiver(self) -> Quiver:
        return self.base.quiver.opposite()


class TensorAlgebra(FDAlgebra):
    """A ⊗_k B with basis indexed by pairs ``(p, q) -> p * dim(B) + q``."""

    def __init__(self, a: FDAlgebra, b: FDAlgebra):
        if a.field != b.field:
            raise FieldMismatch("tensor factors over different fields")
        self.a, self.b = a, b
        nb = b.n_vertices
        vlabels = [f"({x},{y})" for x in a.vertex_labels for y in b.vertex_labels]
        labels, ends = [], []
        for p in range(a.dim):
            for q in range(b.dim):
                labels.append(f"{a.labels[p]}|{b.labels[q]}")
                (ta, sa), (tb, sb) = a.ends[p], b.ends[q]
                ends.append((ta * nb + tb, sa * nb + sb))
        idem = [a.idem[x] * b.dim + b.idem[y] for x in range(a.n_vertices) for y in range(nb)]
        super().__init__(a.field, vlabels, labels, ends, idem, f"({a.name})x({b.name})")

    def pair(self, k: int) -> tuple[int, int]:
        return divmod(k, self.b.dim)

    def vertex_pair(self, v: int) -> tuple[int, int]:
        return divmod(v, self.b.n_vertices)

    def _mul_basis(self, i, j):
        pa, qa = divmod(i, self.b.dim)
        pb, qb = divmod(j, self.b.dim)
        x = self.a.mul_basis(pa, pb)
        if not x:
            return {}
        y = self.b.mul_basis(qa, qb)
        out = {}
        for k, c in x.items():
            for l, d in y.items():
                out[k * self.b.dim + l] = c * d
        return out

    @cached_property
    def arrows(self):
        a, b = self.a, self.b
        out = []
        for x in a.arrows:
            for k in range(b.n_vertices):
                out.append(AlgArrow(f"{x.label}|e{b.vertex_labels[k]}", x.index * b.dim + b.idem[k],
                                    x.source * b.n_vertices + k, x.target * b.n_vertices + k))
        for y in b.arrows:
            for i in range(a.n_vertices):
                out.append(AlgArrow(f"e{a.vertex_labels[i]}|{y.label}", a.idem[i] * b.dim + y.index,
                                    i * b.n_vertices + y.source, i * b.n_vertices + y.target))
        return out

    @cached_property
    def _arrow_pos(self):
        a, b = self.a, self.b
        left = {}
        right = {}
        na = len(a.arrows)
        for xi in range(na):
            for k in range(b.n_vertices):
                left[(xi, k)] = xi * b.n_vertices + k
        base = na * b.n_vertices
        for yi in range(len(b.arrows)):
            for i in range(a.n_vertices):
                right[(yi, i)] = base + yi * a.n_vertices + i
        return left, right

    @cached_property
    def words(self):
        a, b = self.a, self.b
        left, right = self._arrow_pos
        nb = b.n_vertices
        out = []
        for p in range(a.dim):
            for q in range(b.dim):
                tq = b.ends[q][0]
                sp = a.ends[p][1]
                exp = []
                for c1, s1, w1 in a.words[p]:
                    for c2, s2, w2 in b.words[q]:
                        word = tuple(left[(x, tq)] for x in w1) + tuple(right[(y, sp)] for y in w2)
                        exp.append((c1 * c2, s1 * nb + s2, word))
                out.append(exp)
        return out


_OP_CACHE: dict = {}


def opposite(a: FDAlgebra) -> FDAlgebra:
    """The opposite algebra; ``opposite(opposite(a)) is a``."""
    if isinstance(a, OppositeAlgebra):
        return a.base
    op = getattr(a, "_opposite", None)
    if op is None:
        op = OppositeAlgebra(a)
        a._opposite = op
    return op


def tensor(a: FDAlgebra, b: FDAlgebra) -> TensorAlgebra:
    cache = a.__dict__.setdefault("_tensor_cache", {})
    key = id(b)
    if key not in cache:
        cache[key] = (b, TensorAlgebra(a, b))
    return cache[key][1]


def enveloping(a: FDAlgebra) -> TensorAlgebra:
    return tensor(a, opposite(a))


def ground_field_algebra(field: FieldSpec = QQ) -> PathQuotient:
    return build_quotient(Quiver(["1"]), [], field, name="k")


def _vertex_support(a: FDAlgebra, e: np.ndarray) -> list[int] | None:
    """Vertices S when e = sum_{v in S} e_v, else None."""
    F = a.field
    support = []
    for b in range(a.dim):
        x = e[b, 0]
        if x == 0:
            continue
        if b not in a._idem_set or x != F.one:
            return None
        support.append(a.idem.index(b))
    return sorted(support)


def _as_element(a: FDAlgebra, e) -> np.ndarray:
    if isinstance(e, np.ndarray):
        return e
    return a.idempotent_sum(e)


def _check_idempotent(a: FDAlgebra, e: np.ndarray):
    if not np.all(a.mul(e, e) == e):
        raise NotIdempotent("element is not idempotent")


def _sub_table_algebra(a: FDAlgebra, keep: list[int], verts: list[int], name: str) -> TableAlgebra:
    pos = {b: i for i, b in enumerate(keep)}
    vpos = {v: i for i, v in enumerate(verts)}
    table = {}
    for i, bi in enumerate(keep):
        for j, bj in enumerate(keep):
            p = a.mul_basis(bi, bj)
            if p:
                table[(i, j)] = {pos[k]: c for k, c in p.items()}
    ends = [(vpos[a.ends[b][0]], vpos[a.ends[b][1]]) for b in keep]
    idem = [pos[a.idem[v]] for v in verts]
    out = TableAlgebra(a.field, [a.vertex_labels[v] for v in verts], [a.labels[b] for b in keep], ends, idem, table,
                       name)
    out.parent_basis = list(keep)
    out.parent_vertices = list(verts)
    return out


def corner(a: FDAlgebra, e) -> FDAlgebra:
    """eAe for e a sum of vertex idempotents (given as a vector or a list of vertex indices)."""
    e = _as_element(a, e)
    _check_idempotent(a, e)
    support = _vertex_support(a, e)
    if support is None:
        raise AlgebraError("corner algebras are supported for sums of vertex idempotents only")
    if len(support) == a.n_vertices:
        return a
    if not support:
        raise AlgebraError("corner by the zero idempotent")
    keep = [b for b, (t, s) in enumerate(a.ends) if t in support and s in support]
    return _sub_table_algebra(a, keep, support, f"e({a.name})e")


def quotient_by_idempotent(a: FDAlgebra, e) -> FDAlgebra:
    """A / AeA for e a sum of vertex idempotents."""
    F = a.field
    e = _as_element(a, e)
    _check_idempotent(a, e)
    support = _vertex_support(a, e)
    if support is None:
        raise AlgebraError("quotients are supported for sums of vertex idempotents only")
    if not support:
        return a
    if len(support) == a.n_vertices:
        raise ZeroQuotient("the idempotent generates the whole algebra")
    cols = []
    for v in support:
        ev = a.idem[v]
        for x in range(a.dim):
            if a.ends[x][1] != v:
                continue
            for y in range(a.dim):
                if a.ends[y][0] != v:
                    continue
                xe = a.mul_basis(x, ev)
                for k, c in xe.items():
                    for l, d in a.mul_basis(k, y).items():
                        col = a.zero()
                        col[l, 0] = c * d
                        cols.append(col)
    U = F.colspace(F.hstack(cols, a.dim))
    both = np.concatenate([U, F.eye(a.dim)], axis=1)
    keep = [j - U.shape[1] for j in F.independent_columns(both) if j >= U.shape[1]]
    verts = [v for v in range(a.n_vertices) if v not in support]
    B = F.zeros(a.dim, len(keep))
    for c, b in enumerate(keep):
        B[b, c] = F.one
    sol = F.solve(np.concatenate([B, U], axis=1), F.eye(a.dim))
    pos = {b: i for i, b in enumerate(keep)}
    vpos = {v: i for i, v in enumerate(verts)}
    table = {}
    for i, bi in enumerate(keep):
        for j, bj in enumerate(keep):
            prod = a.mul_basis(bi, bj)
            out: dict = {}
            for k, c in prod.items():
                for r in range(len(keep)):
                    s = sol[r, k]
                    if s != 0:
                        out[r] = out.get(r, F.zero) + c * s
            out = {r: v for r, v in out.items() if v != 0}
            if out:
                table[(i, j)] = out
    ends = [(vpos[a.ends[b][0]], vpos[a.ends[b][1]]) for b in keep]
    idem = [pos[a.idem[v]] for v in verts]
    return TableAlgebra(F, [a.vertex_labels[v] for v in verts], [a.labels[b] for b in keep], ends, idem, table,
                        f"{a.name}/<e>")


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def parse_algebra(text: str, field: FieldSpec | None = None, cap: int = 30, name: str | None = None) -> PathQuotient:
    """Parse the line-oriented algebra format.

    ::

        field = Q            # or Fp(5)
        vertices = 1 2 3
        arrow a : 1 -> 2
        relation a*b*c*a*b   # traversal order: a first
    """
    fld = None
    vertices = None
    arrows = []
    rel_lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"field\s*=\s*(.+)", line)
        if m:
            try:
                fld = parse_field(m.group(1))
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
            continue
        m = re.fullmatch(r"vertices\s*=\s*(.+)", line)
        if m:
            vertices = m.group(1).split()
            continue
        m = re.fullmatch(r"arrow\s+([A-Za-z_][A-Za-z0-9_']*)\s*:\s*(\S+)\s*->\s*(\S+)", line)
        if m:
            arrows.append((m.group(1), m.group(2), m.group(3)))
            continue
        m = re.fullmatch(r"relation\s+(.+)", line)
        if m:
            rel_lines.append((lineno, m.group(1)))
            continue
        m = re.fullmatch(r"name\s*=\s*(.+)", line)
        if m:
            name = name or m.group(1).strip()
            continue
        raise ParseError(f"line {lineno}: cannot parse {raw.strip()!r}")
    if vertices is None:
        raise ParseError("missing 'vertices =' line")
    if field is not None:
        fld = field
    fld = fld or QQ
    try:
        q = Quiver(vertices, arrows)
    except AlgebraError as exc:
        raise ParseError(str(exc)) from None
    rels = []
    for lineno, body in rel_lines:
        try:
            rels.append(PathExpr.parse(body, q, fld))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        except AlgebraError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return build_quotient(q, rels, fld, cap, name)


def load_algebra(path: str, field: FieldSpec | None = None, cap: int = 30) -> PathQuotient:
    with open(path) as fh:
        text = fh.read()
    import os

    return parse_algebra(text, field, cap, name=os.path.splitext(os.path.basename(path))[0])


def format_algebra(q: Quiver, rels: Sequence[PathExpr], field: FieldSpec) -> str:
    lines = [f"field = {field.name}", "vertices = " + " ".join(q.vertices)]
    for a in q.arrows:
        lines.append(f"arrow {a.label} : {q.vertices[a.source]} -> {q.vertices[a.target]}")
    for r in rels:
        lines.append(f"relation {r.to_text()}")
    return "\n".join(lines) + "\n"
