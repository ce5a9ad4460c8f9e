"""Command-line driver.

Every subcommand prints a report of ``key = value`` lines.  Human mode adds a
header and indentation; ``--machine`` prints the bare lines.  Exit codes:
0 success, 2 parse or usage error, 3 negative mathematical verdict,
4 internal error.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass, field
from importlib import resources

from .algebra import FDAlgebra, ParseError, load_algebra, tensor
from .exactlin import FieldError, parse_field

EXIT_OK, EXIT_PARSE, EXIT_NEGATIVE, EXIT_INTERNAL = 0, 2, 3, 4
VALUE_FLAGS = ("--field", "--max-degree", "--window", "--selector", "--seed")
SCENARIOS = ("example4", "hhsquare")
CONVENTION = "F(M) = RHom_A(T, M) is a left module over End_A(T)^op"


class UnknownScenario(ValueError):
    pass


@dataclass
class RunConfig:
    field: str | None = None
    max_degree: int = 4
    window: tuple[int, int] = (-1, 3)
    selector: str = "ev"
    seed: int = 0
    machine: bool = False

    def __post_init__(self):
        if self.max_degree < 0:
            raise ValueError("--max-degree must be non-negative")
        if self.window[0] > self.window[1]:
            raise ValueError("empty window")


@dataclass
class Report:
    title: str
    lines: list[tuple[str, str]] = field(default_factory=list)
    negative: bool = False
    text: str = ""

    def add(self, key: str, value) -> None:
        self.lines.append((key, fmt(value)))

    def render(self, machine: bool) -> str:
        if machine:
            return "".join(f"{k} = {v}\n" for k, v in self.lines)
        out = [f"# {self.title}"]
        out += [f"  {k} = {v}" for k, v in self.lines]
        return "\n".join(out) + "\n"


def fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(fmt(x) for x in v) + ")"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {fmt(x)}" for k, x in v.items()) + "}"
    return str(v)


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------


def parse_window(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError("window must look like a..b")
    return int(m.group(1)), int(m.group(2))


def data_path(name: str) -> str:
    return str(resources.files("quiverhom") / "data" / f"{name}.alg")


def shipped_algebras() -> list[str]:
    root = resources.files("quiverhom") / "data"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".alg"))


def load(ref: str, cfg: RunConfig) -> FDAlgebra:
    """An algebra from a file path or the name of a shipped algebra."""
    fld = parse_field(cfg.field) if cfg.field else None
    path = ref if os.path.exists(ref) else data_path(ref)
    if not os.path.exists(path):
        raise ParseError(f"no algebra file or shipped algebra named {ref!r}")
    return load_algebra(path, fld)


def module_ref(a: FDAlgebra, text: str):
    """``P1+P2+S2``: summands P<v>, I<v>, S<v>, A (regular) or @file with a module literal."""
    from .modules import direct_sum, injective, parse_module, projective, regular_module, simple

    labels = a.vertex_labels
    parts = []
    for tok in text.split("+"):
        tok = tok.strip()
        if not tok:
            raise ParseError(f"empty summand in {text!r}")
        if tok.startswith("@"):
            with open(tok[1:]) as fh:
                m = parse_module(fh.read(), a)
            m.name = os.path.basename(tok[1:])
        elif tok == "A":
            m = regular_module(a)
            m.name = "A"
        elif tok[0] in "PIS" and tok[1:] in labels:
            v = labels.index(tok[1:])
            m = {"P": projective, "I": injective, "S": simple}[tok[0]](a, v)
            m.name = tok
        else:
            raise ParseError(f"unknown summand {tok!r}")
        parts.append(m)
    return parts


def single_module(a, text):
    from .modules import direct_sum

    parts = module_ref(a, text)
    if len(parts) == 1:
        return parts[0]
    m = direct_sum(parts)[0]
    m.name = text
    return m


def pair_list(a, texts):
    if not texts:
        from .modules import simple

        S = []
        for v, lab in enumerate(a.vertex_labels):
            s = simple(a, v)
            s.name = f"S{lab}"
            S.append(s)
        return [(x, y) for x in S for y in S]
    cache: dict = {}

    def get(t):
        if t not in cache:
            cache[t] = single_module(a, t)
        return cache[t]

    out = []
    for t in texts:
        bits = t.split(",")
        if len(bits) != 2:
            raise ParseError(f"pair must look like X,Y: {t!r}")
        out.append((get(bits[0]), get(bits[1])))
    return out


def identify(m, a) -> str:
    """Name m if it is isomorphic to a simple, projective or injective module."""
    from .modules import injective, is_isomorphic, projective, simple

    for v, lab in enumerate(a.vertex_labels):
        for kind, fn in (("S", simple), ("P", projective), ("I", injective)):
            x = fn(a, v)
            if x.dims == m.dims and is_isomorphic(x, m):
                return f"{kind}{lab}"
    return "unnamed"


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_build(args, cfg: RunConfig) -> Report:
    from .modules import loewy_layers, projective

    a = load(args.algebra, cfg)
    r = Report(f"build {a.name}")
    r.add("field", a.field.name)
    r.add("dim", a.dim)
    r.add("vertices", a.n_vertices)
    r.add("arrows", len(a.arrows))
    r.add("cartan", a.cartan())
    r.add("loewy_length", a.loewy_length())
    r.add("center_dim", a.center_dim())
    for v, lab in enumerate(a.vertex_labels):
        layers = loewy_layers(projective(a, v))
        r.add(f"P{lab}.layers", [list(x) for x in layers])
    return r


def cmd_nakayama(args, cfg: RunConfig) -> Report:
    from .nakayama import fg_certificate_nakayama, is_nakayama

    a = load(args.algebra, cfg)
    r = Report(f"nakayama {a.name}")
    ok = is_nakayama(a)
    r.add("nakayama", ok)
    if ok:
        cert = fg_certificate_nakayama(a, args.cap)
        r.add("kupisch_series", str(cert.series))
        r.add("cyclic", cert.series.cyclic)
        r.add("gorenstein", cert.gorenstein.verdict)
        r.add("fg_certificate", cert.verdict)
    r.negative = not ok
    return r


def cmd_gorenstein(args, cfg: RunConfig) -> Report:
    from .homology import is_gorenstein

    a = load(args.algebra, cfg)
    g = is_gorenstein(a, args.cap)
    r = Report(f"gorenstein {a.name}")
    r.add("injdim_left", g.left)
    r.add("injdim_right", g.right)
    r.add("gorenstein", g.verdict)
    r.negative = g.verdict != "Yes"
    return r


def cmd_fg(args, cfg: RunConfig) -> Report:
    from .fgcheck import fg_evidence

    a = load(args.algebra, cfg)
    ev = fg_evidence(a, cfg.selector, max(cfg.max_degree, 1))
    r = Report(f"fg {a.name}")
    r.add("selector", ev.selector)
    r.add("cap", ev.cap)
    r.add("verdict", ev.verdict)
    r.add("ring_generator_degrees", ev.ring_generator_degrees)
    r.add("module_generator_degrees", ev.module_generator_degrees)
    r.add("window", ev.window if ev.window else "none")
    r.add("note", ev.note)
    r.negative = ev.verdict == "CertifiedNo" or ev.verdict.startswith("CounterSignal")
    return r


def cmd_hochschild(args, cfg: RunConfig) -> Report:
    from .fgcheck import ring_generator_degrees
    from .hochschild import hh_dims, selector

    a = load(args.algebra, cfg)
    t = hh_dims(a, cfg.max_degree)
    r = Report(f"hochschild {a.name}")
    r.add("max_degree", cfg.max_degree)
    r.add("hh_dims", t.dims)
    degs = selector(cfg.selector, a).degrees(cfg.max_degree)
    r.add("selector", cfg.selector)
    r.add("generator_degrees", ring_generator_degrees(t, degs))
    return r


def cmd_tilt_check(args, cfg: RunConfig) -> Report:
    from .modules import direct_sum
    from .tilting import check_tilting

    a = load(args.algebra, cfg)
    parts = module_ref(a, args.module)
    t = direct_sum(parts)[0]
    rep = check_tilting(t, args.cap, cfg.seed)
    r = Report(f"tilt-check {a.name} {args.module}")
    r.add("summands", rep.summand_count)
    r.add("projdim", rep.axiom_i)
    r.add("self_ext_checked_to", rep.axiom_ii_degree)
    r.add("self_ext_failure", rep.axiom_ii_failure if rep.axiom_ii_failure is not None else "none")
    r.add("coresolution", rep.axiom_iii_note)
    r.add("verdict", rep.verdict)
    r.negative = not rep.is_yes
    return r


def cmd_mutate(args, cfg: RunConfig) -> Report:
    from .modules import direct_sum, loewy_layers
    from .tilting import check_tilting, mutate_complement

    a = load(args.algebra, cfg)
    parts = module_ref(a, args.module)
    names = [p.name for p in parts]
    r = Report(f"mutate {a.name} {args.module}")
    for step, lab in enumerate(args.sequence, 1):
        if lab not in names:
            raise ParseError(f"summand {lab!r} is not in the current module")
        k = names.index(lab)
        rest = parts[:k] + parts[k + 1:]
        y = mutate_complement(direct_sum(rest)[0], parts[k], seed=cfg.seed)
        y.name = f"Y{step}"
        r.add(f"step{step}.removed", lab)
        r.add(f"step{step}.new_dims", list(y.dims))
        r.add(f"step{step}.new_layers", [list(x) for x in loewy_layers(y)])
        r.add(f"step{step}.identified_as", identify(y, a))
        parts = rest + [y]
        names = [p.name for p in parts]
    total = direct_sum(parts)[0]
    verdict = check_tilting(total, seed=cfg.seed).verdict
    r.add("summands", names)
    r.add("tilting", verdict)
    r.negative = verdict != "Yes"
    return r


def cmd_endo(args, cfg: RunConfig) -> Report:
    from .endo import endomorphism_algebra, present_by_quiver
    from .modules import direct_sum

    a = load(args.algebra, cfg)
    parts = module_ref(a, args.module)
    t = direct_sum(parts)[0]
    conv = "left" if args.convention == "left" else "opposite"
    e = endomorphism_algebra(t, conv, summands=parts if len(parts) > 1 else None, seed=cfg.seed)
    pres = present_by_quiver(e, args.cap)
    r = Report(f"endo {a.name} {args.module}")
    r.add("convention", "End_A(T)" if conv == "left" else "End_A(T)^op")
    r.add("dim", e.dim)
    r.add("cartan", e.cartan())
    r.add("arrows", [f"{pres.quiver.vertices[x.source]}->{pres.quiver.vertices[x.target]}"
                     for x in pres.quiver.arrows])
    r.add("relations", [x.to_text() for x in pres.relations])
    text = pres.to_text()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        r.add("written", args.output)
    else:
        r.text = text
    return r


def cmd_fingerprint(args, cfg: RunConfig) -> Report:
    from .fgcheck import support_fingerprint
    from .hochschild import hh_dims

    a = load(args.algebra, cfg)
    pairs = pair_list(a, args.pairs)
    table = hh_dims(a, cfg.max_degree)
    r = Report(f"fingerprint {a.name}")
    r.add("selector", cfg.selector)
    r.add("cap", cfg.max_degree)
    for x, y in pairs:
        fp = support_fingerprint(a, x, y, cfg.selector, cfg.max_degree, table)
        r.add(f"({x.name},{y.name})", fp.dims)
    r.add("note", "entries are lower bounds computed on the truncated Ext module")
    return r


def cmd_derived_compare(args, cfg: RunConfig) -> Report:
    from .derived import invariance_suite

    a = load(args.algebra, cfg)
    parts = module_ref(a, args.tilting)
    pairs = pair_list(a, args.pairs)
    rep = invariance_suite(a, parts, pairs, cfg.window, cfg.max_degree, cfg.max_degree,
                           fingerprints=not args.no_fingerprints)
    r = Report(f"derived-compare {a.name} {args.tilting}")
    r.add("convention", CONVENTION)
    r.add("window", cfg.window)
    r.add("hh_dims_A", rep.hh[0])
    r.add("hh_dims_B", rep.hh[1])
    for name, x, y in rep.hyper_hom:
        r.add(f"hyper_hom{name}", f"{fmt(x)} vs {fmt(y)}")
    for name, x, y in rep.fingerprints:
        r.add(f"fingerprint{name}", f"{fmt(x)} vs {fmt(y)}")
    r.add("hh_equal", rep.hh_ok)
    r.add("hyper_hom_equal", rep.hyper_hom_ok)
    r.add("fingerprints_equal", rep.fingerprint_ok)
    r.add("passed", rep.passed)
    r.negative = not rep.passed
    return r


def cmd_reproduce(args, cfg: RunConfig) -> Report:
    if args.name not in SCENARIOS:
        raise UnknownScenario(f"unknown scenario {args.name!r}; known: {', '.join(SCENARIOS)}")
    checks = reproduce_example4(cfg) if args.name == "example4" else reproduce_hhsquare(cfg)
    r = Report(f"reproduce {args.name}")
    for key, val, ok in checks:
        r.add(key, f"{fmt(val)} [{'PASS' if ok else 'FAIL'}]")
    passed = all(ok for _, _, ok in checks)
    r.add("result", "ALL CHECKS PASSED" if passed else "SOME CHECKS FAILED")
    r.negative = not passed
    return r


def reproduce_example4(cfg: RunConfig) -> list[tuple[str, object, bool]]:
    from .derived import invariance_suite
    from .endo import endomorphism_algebra, present_by_quiver
    from .fgcheck import eAe_reduction, fg_evidence, nontrivial_vertex_sums
    from .homology import InfinitePeriodic, is_gorenstein, projdim
    from .modules import direct_sum, is_isomorphic, loewy_series, projective, simple
    from .nakayama import admissible_sequence, is_nakayama
    from .tilting import check_tilting, is_almost_complete, left_add_approximation, mutate_complement

    out = []
    a = load("example4", RunConfig(field=cfg.field))
    P = [projective(a, v) for v in range(3)]
    S = [simple(a, v) for v in range(3)]
    for i, s in enumerate(S):
        s.name = f"S{i + 1}"
    out.append(("dim_A", a.dim, a.dim == 14))
    series = [loewy_series(p) for p in P]
    want = [["1", "2", "3", "1", "2"], ["2", "3", "1", "2", "3"], ["3", "1", "2", "3"]]
    out.append(("projective_loewy_series", ["".join(s) for s in series], series == want))
    cart = [[a.cartan()[t][s] for t in range(3)] for s in range(3)]
    out.append(("cartan_columns", cart, cart == [[2, 2, 1], [1, 2, 2], [1, 1, 2]]))
    out.append(("nakayama", is_nakayama(a), is_nakayama(a)))
    seq = admissible_sequence(a)
    out.append(("admissible_sequence", str(seq), seq.entries == (4, 5, 5)))
    g = is_gorenstein(a)
    out.append(("gorenstein", g.verdict, g.verdict == "Yes"))
    fg = fg_evidence(a)
    out.append(("fg", fg.verdict, fg.verdict == "CertifiedYes"))
    m = direct_sum([P[0], P[1]])[0]
    out.append(("P1+P2_almost_complete", is_almost_complete(m), is_almost_complete(m)))
    ap = left_add_approximation(P[2], [P[0], P[1]])
    into_p2 = ap.counts == [0, 1]
    out.append(("approximation_P3_mono_into_P2", ap.is_mono() and into_p2, ap.is_mono() and into_p2))
    y = mutate_complement(m, P[2])
    iso = y.dim == 1 and is_isomorphic(y, S[1])
    out.append(("mutation_is_S2", iso, iso))
    summands = [P[0], P[1], S[1]]
    t = direct_sum(summands)[0]
    tv = check_tilting(t).verdict
    out.append(("T_tilting", tv, tv == "Yes"))
    e = endomorphism_algebra(t, "left", summands=summands)
    out.append(("dim_End", e.dim, e.dim == 10))
    pres = present_by_quiver(e)
    arrows = sorted(f"{pres.quiver.vertices[x.source]}->{pres.quiver.vertices[x.target]}" for x in pres.quiver.arrows)
    want_arrows = sorted(["I->II", "II->I", "II->III", "III->I"])
    out.append(("End_quiver", arrows, arrows == want_arrows))
    rho = load("endo_example4", RunConfig(field=cfg.field))
    same = rho.dim == 10 and rho.cartan() == e.cartan()
    out.append(("rho_prime_quotient", (rho.dim, rho.cartan()), same))
    b = endomorphism_algebra(t, "opposite", summands=summands)
    pds = [projdim(simple(b, v), 20) for v in range(3)]
    out.append(("B_simples_projdim", [str(x) for x in pds], all(isinstance(x, InfinitePeriodic) for x in pds)))
    reds = [eAe_reduction(b, s).applicable for s in nontrivial_vertex_sums(b)]
    out.append(("eAe_reduction_applicable", any(reds), not any(reds)))
    rep = invariance_suite(a, summands, [(x, z) for x in S for z in S], (-1, 3), 4, 4)
    out.append(("hh_dims_A_vs_B", (rep.hh[0], rep.hh[1]), rep.hh_ok))
    out.append(("hyper_hom_invariance", rep.hyper_hom_ok, rep.hyper_hom_ok))
    out.append(("fingerprint_invariance", rep.fingerprint_ok, rep.fingerprint_ok))
    return out


def reproduce_hhsquare(cfg: RunConfig) -> list[tuple[str, object, bool]]:
    from .hochschild import hh_dims, kunneth_check

    a = load("kx2", RunConfig(field=cfg.field))
    sq = load("kxy", RunConfig(field=cfg.field))
    d = hh_dims(a, 5).dims
    out = [("hh_dims_kx2", d, d == [2, 1, 1, 1, 1, 1])]
    # graded dims of C[s,t,u]/(s^2,t^2,su,ut) in even degrees: 2, then 1 per degree
    even = [d[n] for n in range(0, 6, 2)]
    out.append(("even_degrees_match_presentation", even, even == [2, 1, 1]))
    k = kunneth_check(a, a, 4)
    out.append(("kunneth_kx2_kx2", k, k))
    ds = hh_dims(sq, 4).dims
    dt = hh_dims(tensor(a, a), 4).dims
    out.append(("hh_dims_kxy", ds, ds == dt))
    out.append(("hh0_kxy", ds[0], ds[0] == 4))
    return out


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=None, help="Q or Fp(p); overrides the file")
    common.add_argument("--max-degree", type=int, default=4)
    common.add_argument("--window", type=parse_window, default=(-1, 3))
    common.add_argument("--selector", choices=["ev", "full"], default="ev")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--machine", action="store_true", help="bare key = value lines")
    p = argparse.ArgumentParser(prog="quiverhom", description="Homological computations for quiver algebras")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.set_defaults(fn=fn)
        return s

    s = add("build", cmd_build, "dimension, Cartan matrix and projective layers")
    s.add_argument("algebra")
    s = add("nakayama", cmd_nakayama, "Nakayama detection and Kupisch series")
    s.add_argument("algebra")
    s.add_argument("--cap", type=int, default=20)
    s = add("gorenstein", cmd_gorenstein, "injective dimensions of A on both sides")
    s.add_argument("algebra")
    s.add_argument("--cap", type=int, default=20)
    s = add("fg", cmd_fg, "(Fg) certificate or windowed evidence")
    s.add_argument("algebra")
    s = add("hochschild", cmd_hochschild, "Hochschild cohomology dimensions")
    s.add_argument("algebra")
    s = add("tilt-check", cmd_tilt_check, "tilting axioms for a module")
    s.add_argument("algebra")
    s.add_argument("--module", required=True)
    s.add_argument("--cap", type=int, default=10)
    s = add("mutate", cmd_mutate, "mutate summands in the given order")
    s.add_argument("algebra")
    s.add_argument("--module", required=True)
    s.add_argument("--sequence", nargs="+", required=True)
    s = add("endo", cmd_endo, "quiver presentation of an endomorphism algebra")
    s.add_argument("algebra")
    s.add_argument("--module", required=True)
    s.add_argument("--convention", choices=["left", "opposite"], default="opposite")
    s.add_argument("--output", default=None, help="write the presentation as an algebra file")
    s.add_argument("--cap", type=int, default=10)
    s = add("fingerprint", cmd_fingerprint, "support-variety fingerprints of module pairs")
    s.add_argument("algebra")
    s.add_argument("--pairs", nargs="*", default=None)
    s = add("derived-compare", cmd_derived_compare, "invariants across RHom_A(T, -)")
    s.add_argument("algebra")
    s.add_argument("--tilting", required=True)
    s.add_argument("--pairs", nargs="*", default=None)
    s.add_argument("--no-fingerprints", action="store_true")
    s = add("reproduce", cmd_reproduce, "run a shipped scenario")
    s.add_argument("name")
    return p


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # negative windows such as "-1..3" would otherwise be read as options
    for k in range(len(argv) - 1):
        if argv[k] == "--window":
            argv[k:k + 2] = [f"--window={argv[k + 1]}", ""]
    argv = [x for x in argv if x != ""]
    # global flags may also precede the subcommand
    lead = []
    while argv and argv[0].startswith("--") and argv[0] not in ("--help",):
        flag = argv.pop(0)
        lead.append(flag)
        if "=" not in flag and flag in VALUE_FLAGS and argv:
            lead.append(argv.pop(0))
    argv += lead
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig(args.field, args.max_degree, args.window, args.selector, args.seed, args.machine)
        if cfg.field:
            parse_field(cfg.field)
    except (ValueError, FieldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        rep = args.fn(args, cfg)
    except (ParseError, FieldError, UnknownScenario, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as exc:  # noqa: BLE001 - reported as internal error
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    rep.lines.insert(0, ("seed", str(cfg.seed)))
    out.write(rep.render(cfg.machine))
    if rep.text and not cfg.machine:
        out.write("".join("  " + x + "\n" for x in rep.text.splitlines()))
    return EXIT_NEGATIVE if rep.negative else EXIT_OK


def main() -> None:
    sys.exit(run())
