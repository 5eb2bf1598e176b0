import json
from importlib import resources

import pytest

from holantlab.cli import run

DATA = resources.files("holantlab.data")


def path(name):
    return str(DATA.joinpath(name))


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_pm_commands(capsys):
    assert call(capsys, "pm", "fkt", path("k4.graph"))[:2] == (0, "3\n")
    assert call(capsys, "pm", "brute", path("k33.graph"))[:2] == (0, "6\n")
    code, out, _ = call(capsys, "pm", "apex", path("apex2.graph"))
    assert code == 0 and out.strip() == call(capsys, "pm", "brute", path("apex2.graph"))[1].strip()


def test_pretty_adds_decimal(capsys):
    code, out, _ = call(capsys, "--pretty", "pm", "apex", path("apex2.graph"))
    assert out.startswith("143/18 (~7.94")


def test_non_planar_is_format_error(capsys):
    code, _, err = call(capsys, "pm", "fkt", path("k33.graph"))
    assert code == 2 and "format error" in err


def test_usage_errors(capsys):
    assert call(capsys, "bogus")[0] == 1
    assert call(capsys, "pm")[0] == 1
    assert call(capsys, "--jobs", "0", "ring", "1", "2", "--m", "3")[0] == 1


def test_missing_file(capsys):
    assert call(capsys, "gridtiling", "count", "/no/such/file")[0] == 2


def test_budget_exit(capsys):
    assert call(capsys, "pm", "brute", path("k4.graph"), "--vertex-budget", "2")[0] == 3


def test_perm(capsys):
    assert call(capsys, "perm", path("matrix4.json"))[1] == "24\n"
    assert call(capsys, "perm", path("matrix4.json"), "--mod-log", "3")[1] == "0 (mod 2^3)\n"


def test_ring(capsys):
    out = call(capsys, "ring", "5", "6", "--m", "3")[1]
    assert "sum=3" in out and "product=6" in out


def test_matchgate_verify(capsys):
    for name in ("PASS", "GAMMA_PRE", "act", "DUMMY"):
        code, out, _ = call(capsys, "matchgate", "verify", name)
        assert code == 0 and out.endswith("inputs match\n")
    code, out, _ = call(capsys, "matchgate", "verify", path("gamma_pass.gate"))
    assert (code, out) == (0, "16/16 inputs match\n")


def test_gate_sig(capsys):
    out = call(capsys, "gate", "sig", path("gamma_pass.gate"))[1]
    assert out.splitlines()[-1] == "1111 -1"


def test_holant_eval(capsys):
    assert call(capsys, "holant", "eval", path("k4.graph"))[1] == "3\n"


def test_genus(capsys):
    code, out, _ = call(capsys, "genus", "pm", path("k33_torus.model"))
    assert (code, out) == (0, "6\nconstituents=4 fkt_calls=4\n")
    code, out, _ = call(capsys, "genus", "pm", path("k33_projective.model"))
    assert (code, out) == (0, "6\nconstituents=2 fkt_calls=2\n")
    out = call(capsys, "genus", "pm", path("torus3x4.model"), "--terms")[1]
    assert out.startswith("50\n") and out.count("term=") == 4


def test_gridtiling(capsys, tmp_path):
    odd = path("fixture_odd.gt")
    assert call(capsys, "gridtiling", "count", odd)[1] == "3\n"
    assert call(capsys, "gridtiling", "parity", odd)[1] == "1\n"
    out_file = tmp_path / "b.gt"
    code, out, _ = call(capsys, "gridtiling", "balance", odd, "--out", str(out_file))
    assert code == 0 and json.loads(out_file.read_text())["format"] == "gridtiling"


def test_reduce_round_trip(capsys, tmp_path):
    out_file = tmp_path / "t.gt"
    # verification goes to stderr so stdout stays a clean document
    code, _, err = call(capsys, "reduce", "psub", path("psub_path.json"), "--verify", "--out", str(out_file))
    assert code == 0 and "copies=3 tilings=3" in err
    assert call(capsys, "gridtiling", "count", str(out_file))[1] == "3\n"
    code, _, err = call(capsys, "reduce", "clique", path("k5.json"), "--k", "3", "--verify",
                        "--out", str(tmp_path / "p.json"))
    assert code == 0 and "copies=60 cliques=10 multiplier=6" in err
    assert json.loads((tmp_path / "p.json").read_text())["multiplier"] == 6


def test_pipelines(capsys, tmp_path):
    code, out, _ = call(capsys, "pipeline", "apex", path("fixture_odd.gt"), "--verify",
                        "--emit-branches", str(tmp_path / "br"))
    assert code == 0 and "ok=True" in out
    assert len(list((tmp_path / "br").iterdir())) == 2
    code, out, _ = call(capsys, "pipeline", "mod2k", path("fixture_odd.gt"), "--transcript",
                        str(tmp_path / "tr.txt"))
    assert (code, out) == (0, "parity=1 (sum = M mod 2M)\n")
    assert (tmp_path / "tr.txt").read_text()
    code, out, _ = call(capsys, "pipeline", "mod2k", path("fixture_even.gt"))
    assert out.startswith("parity=0")


def test_output_is_deterministic(capsys):
    a = call(capsys, "genus", "pm", path("torus3x4.model"), "--terms")
    b = call(capsys, "--jobs", "2", "genus", "pm", path("torus3x4.model"), "--terms")
    assert a == b
