import json
import subprocess
import sys

import pytest


def run_cli(args, **kw):
    return subprocess.run([sys.executable, "-m", "anosovkit.cli"] + args,
                          capture_output=True, text=True, **kw)


@pytest.fixture(scope="module")
def inputs(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    (d / "cat.json").write_text(json.dumps(
        {"dim": 2, "generators": [[2, 1, 1, 1]], "labels": ["A"]}))
    (d / "ident.json").write_text(json.dumps(
        {"dim": 2, "generators": [[1, 0, 0, 1]]}))
    (d / "t3.json").write_text(json.dumps(
        {"dim": 3, "generators": [[0, 0, -1, 1, 0, 2, 0, 1, 1],
                                  [-2, -1, -1, 0, 0, 1, 1, 1, 1]]}))
    (d / "bands.json").write_text(json.dumps(
        {"intervals": [["-1386294/1000000", "-1386294/1000000"],
                       ["-693147/1000000", "-693147/1000000"]],
         "block_dims": [1, 1]}))
    (d / "badbands.json").write_text(json.dumps(
        {"intervals": [["-1", "-0.5"], ["-0.7", "-0.2"]], "block_dims": [1, 1]}))
    (d / "cubic.json").write_text(json.dumps(
        {"bands": {"intervals": [["-1386294/1000000", "-1386294/1000000"],
                                 ["-693147/1000000", "-693147/1000000"]],
                   "block_dims": [1, 1]},
         "degree": 3,
         "terms": [{"coord": 0, "exponents": [1, 0], "value": "1/4"},
                   {"coord": 0, "exponents": [0, 3], "value": "1"},
                   {"coord": 1, "exponents": [0, 1], "value": "1/2"}]}))
    return d


def test_analyze_cat_rank_gate(inputs):
    out = run_cli(["analyze", "--input", str(inputs / "cat.json")])
    assert out.returncode == 0
    rep = json.loads(out.stdout)
    assert rep["result"]["rigidity_hypotheses"] == "not applicable (k < 2)"
    assert rep["result"]["generator_anosov"]
    assert rep["schema_version"] == "1"
    assert len(rep["input_sha256"]) == 64


def test_analyze_t3_passes(inputs):
    out = run_cli(["analyze", "--input", str(inputs / "t3.json")])
    assert out.returncode == 0
    rep = json.loads(out.stdout)
    assert rep["verdict"] == "pass"
    assert rep["result"]["rigidity_hypotheses"]["verdict"] == "pass"
    assert rep["result"]["chambers"]["count"] == 6


def test_analyze_identity_fails(inputs):
    out = run_cli(["analyze", "--input", str(inputs / "ident.json")])
    assert out.returncode == 2
    rep = json.loads(out.stdout)
    assert "NotAnosov" in rep["result"]["failure_certificate"]


def test_analyze_parse_error(inputs, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    out = run_cli(["analyze", "--input", str(bad)])
    assert out.returncode == 1


def test_resonances_descriptor(inputs):
    out = run_cli(["resonances", "--input", str(inputs / "bands.json")])
    assert out.returncode == 0
    rep = json.loads(out.stdout)
    rels = rep["result"]["descriptor"]["relations"]
    nontrivial = [r for r in rels if not r["trivial"]]
    assert nontrivial == [{"exponents": [0, 2], "target_block": 1,
                           "trivial": False}]


def test_resonances_malformed_exit1(inputs):
    out = run_cli(["resonances", "--input", str(inputs / "badbands.json")])
    assert out.returncode == 1


def test_normalform_cubic(inputs):
    out = run_cli(["normalform", "--input", str(inputs / "cubic.json")])
    assert out.returncode == 0
    rep = json.loads(out.stdout)
    assert rep["result"]["residual"] == "0"
    terms = rep["result"]["change"]["terms"]
    cubic = [t for t in terms if t["exponents"] == [0, 3]]
    assert cubic and cubic[0]["value"] == "8"


def test_conjugate_trivial_eps_zero():
    out = run_cli(["conjugate", "--preset", "cat-sin", "--eps", "0",
                   "--grid", "32"])
    assert out.returncode == 0
    rep = json.loads(out.stdout)
    assert rep["result"]["residual"] == 0.0
    assert rep["result"]["iterations"] == 1


def test_conjugate_psi_preset_recovery():
    out = run_cli(["conjugate", "--preset", "psi-cat", "--grid", "64"])
    assert out.returncode == 0
    rep = json.loads(out.stdout)
    assert rep["result"]["ground_truth_recovery_error"] < 1e-8


def test_conjugate_oversized_eps_exit2():
    out = run_cli(["conjugate", "--preset", "cat-sin", "--eps", "0.5",
                   "--grid", "32"])
    assert out.returncode == 2
    rep = json.loads(out.stdout)
    assert rep["result"]["error"] == "Diverged"


def test_conjugate_grid_power_of_two():
    out = run_cli(["conjugate", "--preset", "cat-sin", "--grid", "100"])
    assert out.returncode == 1


def test_rootsys_reports():
    for t, rank, klass in [("A", 2, "C4"), ("BC", 2, "C6")]:
        out = run_cli(["rootsys", "--type", t, "--rank", str(rank)])
        rep = json.loads(out.stdout)
        assert rep["result"]["smoothness"]["class"] == klass
    warn = run_cli(["rootsys", "--type", "A", "--rank", "1"])
    assert json.loads(warn.stdout)["result"]["smoothness"]["rank_warning"]


def test_byte_determinism_all_commands(inputs, tmp_path):
    runs = [
        ["analyze", "--input", str(inputs / "t3.json"), "--seed", "7"],
        ["resonances", "--input", str(inputs / "bands.json")],
        ["normalform", "--input", str(inputs / "cubic.json")],
        ["conjugate", "--preset", "cat-sin", "--grid", "64", "--probe"],
        ["rootsys", "--type", "BC", "--rank", "2"],
    ]
    for args in runs:
        a = run_cli(args).stdout
        b = run_cli(args).stdout
        assert a == b, args
        assert a.strip()
