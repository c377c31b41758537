import json
import subprocess
import sys

import numpy as np
import pytest

from symfisher.cli import main
from symfisher.fim import FisherMatrix, ParamLabel, write_fim

CONFIG = """
[model]
kind = "identity"

[inputs]
names = ["E", "L"]
mu = [69e9, 0.45]
sigma = [11.5e9, 0.045]

[run]
normalization = "stddev"
seed = 1
"""


@pytest.fixture
def config(tmp_path):
    p = tmp_path / "run.toml"
    p.write_text(CONFIG)
    return p


def fim_file(tmp_path, diag):
    labels = tuple(ParamLabel(v, k, 1.0) for v in "ab" for k in ("mean", "stddev"))
    path = tmp_path / "fim.txt"
    write_fim(FisherMatrix(np.diag(diag), labels), path)
    return path


def test_run_writes_report(config, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", "--config", str(config), "--seed", "3", "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["symplectic_eigenvalues"] == pytest.approx([2**0.5] * 2)
    doc = json.loads((out / "report.json").read_text())
    assert doc["metadata"]["seed"] == 3
    assert doc["condition_numbers"]["raw"] == pytest.approx(1.3061728395061728e23)


def test_decompose(tmp_path, capsys):
    path = fim_file(tmp_path, [1.0, 2.0, 3.0, 4.0])
    assert main(["decompose", "--fim", str(path), "--pairs", "mu_a:mu_b,sigma_a:sigma_b",
                 "--out", str(tmp_path / "d")]) == 0
    summary = json.loads(capsys.readouterr().out)
    # pairs (mu_a, mu_b) -> sqrt(1 * 3) and (sigma_a, sigma_b) -> sqrt(2 * 4)
    assert summary["symplectic_eigenvalues"] == pytest.approx([8**0.5, 3**0.5])
    assert (tmp_path / "d" / "symplectic.csv").exists()


def test_compare_pairings(config, tmp_path, capsys):
    out = tmp_path / "cmp"
    code = main(["compare-pairings", "--config", str(config), "--pairs", "",
                 "--pairs", "mu_E:mu_L,sigma_E:sigma_L", "--out", str(out)])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["pairings"]) == 2
    assert (out / "compare.json").exists() and (out / "symplectic_pairing2.csv").exists()


def test_exit_config_error(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("[model]\nkind = 'nope'\n")
    assert main(["run", "--config", str(bad)]) == 2


def test_exit_bad_pairing(tmp_path):
    assert main(["decompose", "--fim", str(fim_file(tmp_path, [1.0, 2.0, 3.0, 4.0])), "--pairs", "0:0"]) == 2


def test_exit_numerical(tmp_path):
    assert main(["decompose", "--fim", str(fim_file(tmp_path, [1.0, 0.0, 1.0, 1.0]))]) == 3


def test_exit_io(tmp_path):
    assert main(["run", "--config", str(tmp_path / "missing.toml")]) == 4


def test_module_entry_point(config):
    proc = subprocess.run([sys.executable, "-m", "symfisher", "run", "--config", str(config)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["labels"] == ["mu_E", "sigma_E", "mu_L", "sigma_L"]
