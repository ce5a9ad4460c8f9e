import pytest

from quiverhom import fgcheck
from quiverhom.algebra import NotIdempotent, PathExpr, Quiver, build_quotient
from quiverhom.endo import endomorphism_algebra
from quiverhom.fgcheck import (ExtAction, eAe_reduction, fg_evidence, nontrivial_vertex_sums, semisimple_top,
                               support_fingerprint)
from quiverhom.hochschild import PhiContext, hh_dims, phi_action
from quiverhom.homology import ExtClass, Finite, InfinitePeriodic, yoneda_compose
from quiverhom.modules import simple

from conftest import shipped


@pytest.fixture(scope="module")
def b4(tilt4):
    summands, t = tilt4
    return endomorphism_algebra(t, "opposite", summands=summands)


def two_loops():
    q = Quiver(["1"], [("x", "1", "1"), ("y", "1", "1")])
    return build_quotient(q, [PathExpr.parse(s, q) for s in ["x*x", "y*y", "x*y"]])


def test_fg_verdicts(ex4, kx2):
    assert fg_evidence(ex4[0]).verdict == "CertifiedYes"
    assert fg_evidence(kx2).verdict == "CertifiedYes"
    assert fg_evidence(shipped("nakayama34")).verdict == "CertifiedNo"


def test_fg_evidence_kxy(kxy):
    e = fg_evidence(kxy, cap=6)
    assert e.verdict == "EvidenceYes(6)"
    assert e.window == (5, 6)
    assert not e.certified


def test_fg_counter_signal():
    e = fg_evidence(two_loops(), cap=6)
    assert e.verdict.startswith("CounterSignal")
    assert e.e_dims == [1, 2, 3, 4, 5, 6, 7]


def test_no_evidence_for_certified_no(monkeypatch):
    # the generic route must not claim evidence for an algebra certified to fail
    a = shipped("nakayama34")
    monkeypatch.setattr(fgcheck, "is_nakayama", lambda _: False)
    assert not fg_evidence(a, cap=6).verdict.startswith("EvidenceYes")


@pytest.mark.parametrize("name", ["kx2", "a3", "kronecker", "example4", "nakayama34"])
def test_selectors_agree(name):
    a = shipped(name)
    assert fg_evidence(a, "ev", cap=5).verdict == fg_evidence(a, "full", cap=5).verdict


def test_fingerprint_dual_numbers(kx2):
    s = simple(kx2, 0)
    fp = support_fingerprint(kx2, s, s, "ev", cap=6)
    assert fp.as_list() == [1, 1, 1, 1]
    assert sorted(fp.dims) == [0, 2, 4, 6]


def test_fingerprint_projective(ex4):
    a, P, _, _ = ex4
    fp = support_fingerprint(a, P[0], P[0], "ev", cap=4)
    assert fp.dims[0] > 0
    assert all(fp.dims[d] == 0 for d in fp.dims if d > 0)


def test_fingerprint_bounded_by_h(ex4):
    a, P, S, _ = ex4
    for m in S:
        for n in S:
            fp = support_fingerprint(a, m, n, "ev", cap=4)
            assert all(fp.dims[d] <= fp.h_dims[d] for d in fp.dims)


def test_fingerprint_grows_with_cap(ex4):
    # the truncated annihilator can only shrink as the window grows
    a, _, S, _ = ex4
    for m, n in [(S[0], S[0]), (S[0], S[1]), (S[2], S[1])]:
        small = support_fingerprint(a, m, n, "ev", cap=4).dims
        big = support_fingerprint(a, m, n, "ev", cap=6).dims
        assert all(small[d] <= big[d] for d in small)


@pytest.mark.parametrize("name,vertex", [("kx2", 0), ("example4", 0), ("example4", 2)])
def test_hh_action_is_graded_central(name, vertex):
    a = shipped(name)
    t = hh_dims(a, 4)
    m = simple(a, vertex)
    ctx = PhiContext(t, m, -6)
    coh = ctx.hom.cohomology
    xs = [ExtClass(ctx.hom, k, coh(k).reps[:, j:j + 1], 4) for k in range(3) for j in range(coh(k).dim)]
    for d in range(1, 3):
        for h in t.classes(d):
            ph = phi_action(a, m, h, ctx)
            for x in xs:
                if x.degree + d > 4:
                    continue
                left = yoneda_compose(ph, x)
                right = yoneda_compose(x, ph)
                sign = (-1) ** (d * x.degree)
                n = x.degree + d
                assert (coh(n).coords(left.vector) == coh(n).coords(right.vector) * sign).all()


def test_ext_action_dims(kx2):
    top = semisimple_top(kx2)
    act = ExtAction(kx2, top, top, 4)
    assert act.e_dims == [1, 1, 1, 1, 1]


def test_eAe_identity(ex4):
    a = ex4[0]
    r = eAe_reduction(a, list(range(3)))
    assert r.applicable and r.corner is a


def test_eAe_triangular():
    a = shipped("a2")
    r = eAe_reduction(a, [0])
    assert r.applicable
    assert isinstance(r.projdim_top, Finite) and isinstance(r.projdim_ae, Finite)
    assert r.corner.dim == 1


def test_eAe_inapplicable_for_b(b4):
    for v in range(3):
        assert isinstance(fgcheck.projdim(simple(b4, v), 20), InfinitePeriodic)
    for e in nontrivial_vertex_sums(b4):
        assert not eAe_reduction(b4, e).applicable


def test_eAe_errors(ex4):
    a = ex4[0]
    with pytest.raises(NotIdempotent):
        eAe_reduction(a, a.basis_vector(a.arrows[0].index))
