import io
import json
import subprocess
import sys

import pytest

from linerecon.cli import main
from linerecon.counterexample import build_hypercube
from linerecon.experiments import (GIANT_COLUMNS, LEMMA_COLUMNS, ExperimentConfig, read_csv, replay_giant_row,
                                   rows_equal_for_replay, run_giant_experiment, run_lemma_checks,
                                   witness_fixtures, write_csv)
from linerecon.graph_core import read_instance, write_instance
from linerecon.reconstruct import cross_stats

C4 = "4 4\n0 0\n1 1\n2 3\n3 2\n0 1\n1 2\n2 3\n0 3\n"


def run(argv, stdin=None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv, out)
    return code, out.getvalue()


@pytest.fixture
def c4_file(tmp_path):
    p = tmp_path / "c4.txt"
    p.write_text(C4)
    return str(p)


def test_rigid_check(c4_file):
    code, text = run(["rigid", "check", c4_file])
    res = json.loads(text)
    assert code == 0 and res["globally_rigid"] is False and "certificate" in res


def test_recon_commands(c4_file):
    code, text = run(["recon", "subsets", c4_file])
    assert code == 0 and json.loads(text)["largest"] == 2
    code, text = run(["recon", "pairs", c4_file])
    assert code == 0 and [0, 1] in json.loads(text)["reconstructible_pairs"]
    code, text = run(["recon", "witness", c4_file, "--u", "0", "--v", "2"])
    res = json.loads(text)
    assert code == 0 and res["valid"] and 0 in res["blocks"][0] and 2 in res["blocks"][1]


def test_decomp_commands(c4_file):
    for what in ("core", "kernel", "phi", "good"):
        code, text = run(["decomp", what, c4_file])
        assert code == 0
        json.loads(text)
    assert json.loads(run(["decomp", "phi", c4_file])[1])["phi"] == "1/2"


def test_extract_commands(c4_file):
    code, text = run(["extract", "weakbt", c4_file])
    last = json.loads(text.strip().splitlines()[-1])
    assert code == 0 and len(last["final"]) == 2 and last["certified"]
    code, text = run(["extract", "dense", c4_file, "--eps", "1/4"])
    assert code == 0


def test_sim_and_replay():
    code, a = run(["sim", "gnp", "--n", "50", "--p", "0.05", "--seed", "3"])
    _, b = run(["sim", "gnp", "--n", "50", "--p", "0.05", "--seed", "3"])
    assert code == 0 and a == b and "# seed=3" in a
    eg = read_instance(a)
    assert eg.n == 50
    code, d = run(["sim", "dlp", "--n", "2000", "--lam", "1.5", "--seed", "1", "--style", "integer-range"])
    assert code == 0 and "# kernel_vertices=" in d


def test_counterexample_command(tmp_path):
    out = tmp_path / "cube.txt"
    code, text = run(["counterexample", "hypercube", "--k", "3", "--out", str(out)])
    res = json.loads(text)
    assert code == 0 and res["ok"] and res["edges"] == 12
    assert read_instance(out.read_text()) == build_hypercube(3).eg


def test_bad_input_exit_code(tmp_path, monkeypatch, capsys):
    code, _ = run(["recon", "subsets", "-"], stdin="3 1\n0 0\n1 0\n2 5\n0 1\n", monkeypatch=monkeypatch)
    assert code == 2
    assert "line 3" in capsys.readouterr().err
    code, _ = run(["recon", "subsets", str(tmp_path / "missing.txt")])
    assert code == 2


def test_stdin_instance(monkeypatch):
    code, text = run(["recon", "subsets", "-"], stdin=C4, monkeypatch=monkeypatch)
    assert code == 0


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "linerecon.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip()


# --------------------------------------------------------------------------
# experiments


def test_config_round_trip_and_overrides():
    cfg = ExperimentConfig(model="dlp", n_grid=[100, 200], eps_grid=[0.3], seeds=3, master_seed=9)
    again = ExperimentConfig.from_text(cfg.to_text())
    assert again == cfg
    over = ExperimentConfig.from_text(cfg.to_text(), seeds=5, n_grid="50")
    assert over.seeds == 5 and over.n_grid == [50]
    with pytest.raises(ValueError):
        ExperimentConfig.from_text("bogus = 1\n")
    with pytest.raises(ValueError):
        ExperimentConfig.from_text("model = ising\n")


def test_giant_rows_replay_exactly():
    cfg = ExperimentConfig(n_grid=[60, 120], eps_grid=[0.5], seeds=3, master_seed=4)
    rows = run_giant_experiment(cfg)
    assert len(rows) == 6 and all(r["status"] == "ok" for r in rows)
    text = write_csv(rows, GIANT_COLUMNS)
    assert text.startswith("# schema=1\n")
    back = read_csv(text)
    for r in back:
        again = replay_giant_row(cfg, int(r["cell"]), int(r["rep"]))
        assert rows_equal_for_replay(r, again)


def test_giant_threads_match_serial():
    cfg = ExperimentConfig(n_grid=[80], eps_grid=[0.5], seeds=4, master_seed=2)
    a = run_giant_experiment(cfg)
    b = run_giant_experiment(ExperimentConfig(n_grid=[80], eps_grid=[0.5], seeds=4, master_seed=2, threads=2))
    assert all(rows_equal_for_replay(x, y) for x, y in zip(a, b))


def test_lemma_checks_shape():
    cfg = ExperimentConfig(model="dlp", n_grid=[20_000], eps_grid=[0.3], seeds=2)
    rows = run_lemma_checks(cfg, witness_trials=2000)
    checks = {r["check"] for r in rows}
    assert {"kernel_vertices", "kernel_edges", "kernel_max_degree", "long_bare_paths"} <= checks
    wit = [r for r in rows if r["check"].startswith("witness:")]
    assert len(wit) == len(witness_fixtures()) and all(r["passed"] for r in wit)
    write_csv(rows, LEMMA_COLUMNS)


def test_fixture_exponents():
    exps = set()
    for name, g, blocks in witness_fixtures():
        v, c2, k = cross_stats(g, blocks)
        exps.add(v - c2 - (k - 1))
    assert exps == {0, 1, 2}


def test_exp_cli(tmp_path):
    cfgp = tmp_path / "cfg.txt"
    cfgp.write_text("model = gnp\nn_grid = 50\neps_grid = 0.5\nseeds = 2\n")
    out = tmp_path / "rows.csv"
    code, _ = run(["exp", "giant", "--config", str(cfgp), "--output", str(out), "--master-seed", "1"])
    assert code == 0
    rows = read_csv(out.read_text())
    assert len(rows) == 2 and rows[0]["master_seed"] == "1"
