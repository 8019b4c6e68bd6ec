import json
import shutil
import subprocess
import sys

import pytest

from ordercx import artifacts
from ordercx.cli import main


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def fano(tmp_path):
    path = tmp_path / "fano.json"
    assert run("build", "subspace", "--q", 2, "--m", 3, "-o", path) == 0
    return path


def test_fano_pipeline(tmp_path, fano):
    cert = tmp_path / "cert.json"
    assert run("certify", fano, "-o", cert) == 0
    _, payload = artifacts.read_artifact(cert, ("certificate",))
    assert payload["d"] == 1 and payload["weakly_independent"]
    assert payload["config"]["grid"] == [[1, 2, 3], [4, 5, 6]]
    again = tmp_path / "again.json"
    assert run("verify", "--poset", fano, "--config", cert, "-o", again) == 0
    assert again.read_bytes() == cert.read_bytes()


def test_config_then_verify(tmp_path):
    L = tmp_path / "l34.json"
    cfg = tmp_path / "cfg.json"
    rep = tmp_path / "rep.json"
    assert run("build", "subspace", "--q", 3, "--m", 4, "-o", L) == 0
    assert run("config", "typeA", "--q", 3, "--d", 2, "-o", cfg) == 0
    assert run("verify", "--poset", L, "--config", cfg, "-o", rep) == 0
    _, payload = artifacts.read_artifact(rep)
    assert payload["independent"] and payload["indconf_criterion"]


def test_polar_certify(tmp_path):
    W = tmp_path / "w.json"
    assert run("build", "polar", "--kind", "hermitian", "--q", 2, "--m", 4, "-o", W) == 0
    assert run("certify", "--poset", W, "-o", tmp_path / "c.json") == 0


def test_boolean_has_no_certificate(tmp_path, capsys):
    B = tmp_path / "b.json"
    assert run("build", "boolean", "--n", 4, "-o", B) == 0
    capsys.readouterr()
    assert run("certify", B) == 4
    out = json.loads(capsys.readouterr().out)
    assert out["payload"]["failure"]["error"] == "NotThick"


def test_check_lattice(fano, capsys):
    capsys.readouterr()
    assert run("check", "lattice", fano) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["is_geometric"] and report["is_modular_rank"] and report["elements"] == 16


def test_export_graph_stats(fano, capsys):
    capsys.readouterr()
    assert run("export", "--poset", fano, "--format", "graph-stats") == 0
    stats = json.loads(capsys.readouterr().out)
    assert (stats["vertices"], stats["edges"], stats["girth"]) == (14, 21, 6)


def test_vk_commands(tmp_path, capsys):
    K = tmp_path / "k.json"
    assert run("build", "d3power", "--d", 1, "-o", K) == 0
    capsys.readouterr()
    assert run("vk", "--complex", K, "--seed", 2) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "nonzero"
    C = tmp_path / "c.json"
    assert run("build", "complex", "--facets", "[[1,2],[2,3],[3,1]]", "-o", C) == 0
    capsys.readouterr()
    assert run("vk", "--complex", C, "--ordered") == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "zero"


def test_vk_out_of_budget(tmp_path, capsys, monkeypatch):
    K = tmp_path / "k.json"
    assert run("build", "d3power", "--d", 2, "-o", K) == 0
    capsys.readouterr()
    monkeypatch.setenv("OC_BUDGET", "10")
    assert run("vk", "--complex", K) == 3
    assert json.loads(capsys.readouterr().out)["verdict"] == "out-of-budget"


def test_usage_errors(tmp_path, fano):
    assert run("build", "subspace", "--q", 2) == 2
    assert run("bogus") == 2
    assert run("verify", "--poset", fano, "--config", tmp_path / "missing.json") == 2


def test_tampered_artifact_is_rejected(tmp_path, fano):
    env = json.loads(fano.read_text())
    env["payload"]["poset"]["covers"].pop()
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(env))
    assert run("certify", bad) == 2


def test_jobs_flag_is_accepted(fano):
    assert run("--jobs", 4, "check", "lattice", fano) == 0


@pytest.mark.skipif(shutil.which("oc") is None, reason="console script not installed")
def test_console_script(tmp_path):
    path = str(tmp_path / "a.json")
    out = subprocess.run(["oc", "build", "affine", "--q", "3", "-o", path], capture_output=True, text=True)
    assert out.returncode == 0
    cert = subprocess.run([sys.executable, "-m", "ordercx.cli", "certify", path],
                          capture_output=True, text=True)
    assert cert.returncode == 0 and "R^2" in cert.stderr
