import io
import subprocess
import sys

import pytest

from quiverhom.algebra import load_algebra
from quiverhom.cli import EXIT_NEGATIVE, EXIT_OK, EXIT_PARSE, RunConfig, parse_window, run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def kv(text):
    return dict(line.strip().split(" = ", 1) for line in text.splitlines() if " = " in line)


def test_build():
    code, out = call("build", "example4", "--machine")
    assert code == EXIT_OK
    d = kv(out)
    assert d["dim"] == "14" and d["seed"] == "0"
    assert d["cartan"] == "((2, 1, 1), (2, 2, 1), (1, 2, 2))"


def test_human_mode_has_header():
    code, out = call("build", "a2")
    assert out.startswith("# build a2\n")
    assert "  dim = 3" in out


def test_nakayama_negative():
    code, out = call("nakayama", "kxy", "--machine")
    assert code == EXIT_NEGATIVE
    assert "nakayama = false" in out


def test_nakayama_example():
    code, out = call("nakayama", "example4", "--machine")
    assert code == EXIT_OK
    assert kv(out)["kupisch_series"] == "(4, 5, 5)"
    assert kv(out)["fg_certificate"] == "CertifiedYes"


def test_parse_error(tmp_path):
    p = tmp_path / "bad.alg"
    p.write_text("field = Q\nvertices = 1 2\narrow a : 1 -> 2\nrelation a*q\n")
    code, _ = call("build", str(p))
    assert code == EXIT_PARSE
    assert call("build", "no_such_algebra")[0] == EXIT_PARSE
    assert call("build", "example4", "--field", "F(4)")[0] == EXIT_PARSE
    assert call("frobnicate")[0] == EXIT_PARSE


def test_unknown_scenario():
    assert call("reproduce", "nope")[0] == EXIT_PARSE


def test_reproduce_example4():
    code, out = call("reproduce", "example4")
    assert code == EXIT_OK
    assert out.rstrip().endswith("ALL CHECKS PASSED")


def test_reproduce_hhsquare():
    code, out = call("reproduce", "hhsquare")
    assert code == EXIT_OK
    assert out.rstrip().endswith("ALL CHECKS PASSED")


def test_tilt_check_and_mutate():
    code, out = call("tilt-check", "example4", "--module", "P1+P2+S2", "--machine")
    assert code == EXIT_OK and kv(out)["verdict"] == "Yes"
    code, out = call("tilt-check", "example4", "--module", "P1+S2", "--machine")
    assert code == EXIT_NEGATIVE
    code, out = call("mutate", "example4", "--module", "P1+P2+P3", "--sequence", "P3", "--machine")
    assert code == EXIT_OK
    assert "S2" in out


def test_endo_round_trip(tmp_path):
    target = tmp_path / "b.alg"
    code, out = call("endo", "example4", "--module", "P1+P2+S2", "--output", str(target), "--machine")
    assert code == EXIT_OK
    b = load_algebra(str(target))
    assert b.dim == 10


def test_hochschild():
    code, out = call("hochschild", "kx2", "--max-degree", "5", "--machine")
    assert code == EXIT_OK
    assert kv(out)["hh_dims"] == "(2, 1, 1, 1, 1, 1)"


def test_global_flags_before_subcommand():
    a = call("--machine", "--seed", "7", "build", "a2")
    b = call("build", "a2", "--machine", "--seed", "7")
    assert a == b
    assert kv(a[1])["seed"] == "7"


def test_negative_window():
    code, out = call("derived-compare", "example4", "--tilting", "P1+P2+S2", "--window", "-1..3",
                     "--pairs", "S1,S2", "--machine")
    assert code == EXIT_OK


def test_determinism():
    first = call("fingerprint", "kx2", "--machine", "--max-degree", "4")
    assert first == call("fingerprint", "kx2", "--machine", "--max-degree", "4")


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(max_degree=-1)
    with pytest.raises(ValueError):
        RunConfig(window=(3, 1))
    assert parse_window("-2..4") == (-2, 4)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "quiverhom", "build", "a2", "--machine"], capture_output=True,
                         text=True)
    assert res.returncode == 0
    assert "dim = 3" in res.stdout


def test_internal_error(monkeypatch):
    from quiverhom import cli

    def boom(args, cfg):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "cmd_build", boom)
    assert call("build", "a2")[0] == cli.EXIT_INTERNAL
