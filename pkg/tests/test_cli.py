import csv
import io
import json

import numpy as np
import pytest

from hminus_vqe.cli import main, optimizer_name
from hminus_vqe.experiment import (
    PRESETS,
    ExperimentConfig,
    UsageError,
    load_reference_table,
    run_vqe,
)

PAPER_DUMP = "0.578125 II\n-0.328125 IZ\n-0.328125 ZI\n0.078125 ZZ\n"


def cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def read_trace(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], [(int(i), float(e)) for i, e in rows[1:]]


def test_dump_paper_literal():
    code, text = cli("--dump-hamiltonian", "--signs", "paper")
    assert code == 0
    assert text == PAPER_DUMP


def test_dump_physical_and_bk():
    _, text = cli("--dump-hamiltonian")
    assert text == "-0.421875 II\n0.171875 IZ\n0.171875 ZI\n0.078125 ZZ\n"
    _, bk = cli("--dump-hamiltonian", "--encoding", "bk")
    _, parity = cli("--dump-hamiltonian", "--encoding", "parity")
    assert bk == parity
    assert "0.171875 ZZ" in bk and "0.078125 IZ" in bk


def test_exact_run_outputs(tmp_path):
    code, text = cli("--restarts", "20", "--seed", "7", "--out", str(tmp_path), "--plot")
    assert code == 0
    header, rows = read_trace(tmp_path / "trace.csv")
    assert header == ["iteration", "energy_hartree"]
    its = [i for i, _ in rows]
    assert its == sorted(set(its)) and its[0] == 1
    energies = [e for _, e in rows]
    assert all(b <= a for a, b in zip(energies, energies[1:]))

    summary = json.loads((tmp_path / "summary.json").read_text())
    for key in ("final_energy", "exact_minimum", "gap", "terminal_reason", "config"):
        assert key in summary
    assert summary["exact_minimum"] == pytest.approx(-0.6875, abs=1e-12)
    assert summary["gap"] < 1e-6
    assert summary["gap"] == abs(summary["final_energy"] - summary["exact_minimum"])
    assert summary["config"]["seed"] == 7
    assert len(summary["final_angles"]) == 12
    assert all(0 <= a < 2 * np.pi for a in summary["final_angles"])

    svg = (tmp_path / "convergence.svg").read_text()
    assert svg.startswith("<svg") and "-0.52952" in svg


def test_bit_identical_outputs(tmp_path):
    args = ["--shots", "1024", "--restarts", "3", "--seed", "11", "--max-iterations", "150"]
    cli(*args, "--out", str(tmp_path / "a"))
    cli(*args, "--jobs", "3", "--out", str(tmp_path / "b"))
    for name in ("trace.csv", "summary.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_shot_run_close_to_minimum(tmp_path):
    code, _ = cli("--shots", "8192", "--seed", "3", "--restarts", "4", "--out", str(tmp_path))
    assert code == 0
    _, rows = read_trace(tmp_path / "trace.csv")
    energies = [e for _, e in rows]
    assert all(b <= a for a, b in zip(energies, energies[1:]))
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert abs(summary["final_energy"] + 0.6875) < 0.03


def test_paper_literal_run():
    result = run_vqe(ExperimentConfig(sign_convention="paper_literal", restarts=5, seed=1))
    assert result.summary["exact_minimum"] == pytest.approx(0.0, abs=1e-12)
    assert result.summary["gap"] < 1e-6


@pytest.mark.parametrize("flag", ["cobyla", "COBYLA", "l-bfgs-b", "bfgs"])
def test_unsupported_optimizer(flag, capsys):
    code, _ = cli("--optimizer", flag)
    assert code == 2
    assert "nelder-mead, powell, spsa" in capsys.readouterr().err


def test_optimizer_spelling():
    assert optimizer_name("Nelder-Mead") == "nelder_mead"
    assert optimizer_name("spsa") == "spsa"
    with pytest.raises(UsageError):
        optimizer_name("cobyla")


@pytest.mark.parametrize(
    "argv",
    [
        ["--shots", "-1"],
        ["--restarts", "0"],
        ["--depth", "0"],
        ["--encoding", "ternary"],
        ["--compare", "powell"],
        ["--plot"],
        ["--f-tolerance", "0"],
        ["--fermion-file", "/nonexistent/op.txt"],
    ],
)
def test_usage_errors(argv):
    assert cli(*argv)[0] == 2


def test_non_diagonal_fermion_file_with_shots(tmp_path):
    op_file = tmp_path / "hop.txt"
    op_file.write_text("0.5 0^ 1\n0.5 1^ 0\n")
    assert cli("--fermion-file", str(op_file), "--shots", "100")[0] == 2
    code, text = cli("--fermion-file", str(op_file), "--restarts", "3")
    assert code == 0 and "exact minimum -0.5000000000" in text


def test_numerical_failure_exit_code(monkeypatch):
    import hminus_vqe.experiment as experiment

    monkeypatch.setattr(experiment, "energy_function", lambda *a, **k: (lambda p: float("nan")))
    assert cli("--max-iterations", "5")[0] == 3


def test_preset_all_zero():
    code, text = cli("--preset", "all_zero")
    report = json.loads(text)
    assert code == 0
    assert report["exact_energy"] == 0.0
    assert abs(report["variance"]) < 1e-10


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_deterministic(name):
    a = cli("--preset", name, "--seed", "5")[1]
    b = cli("--preset", name, "--seed", "5")[1]
    assert a == b
    report = json.loads(a)
    assert report["shots"] == 8192
    assert report["variance"] >= -1e-10


def test_preset_eigenstate_variance():
    report = json.loads(cli("--preset", "initial_pi_final_zero")[1])
    assert report["exact_energy"] == pytest.approx(-0.5, abs=1e-12)
    assert abs(report["variance"]) < 1e-10
    assert report["published_hardware"]["ibmqx2"] == -0.507891


def test_compare(tmp_path):
    code, text = cli("--compare", "nelder-mead", "powell", "--restarts", "20", "--seed", "7",
                     "--out", str(tmp_path))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO((tmp_path / "comparison.csv").read_text())))
    assert [r["method"] for r in rows] == ["nelder_mead", "powell"]
    for r in rows:
        assert abs(float(r["best_energy"]) + 0.6875) < 1e-6
        assert int(r["evaluations"]) > 0
    assert "-0.46513997401" in text


def test_reference_tables():
    nm = load_reference_table("nelder_mead_simulator")
    hw = load_reference_table("cobyla_ibmqx2")
    assert len(hw) == 109
    assert len(nm) >= 125
    assert all(t == -0.52952 for _, t, _ in nm + hw)
    with pytest.raises(UsageError):
        load_reference_table("powell")


def test_overlay_plot(tmp_path):
    code, _ = cli("--max-iterations", "50", "--out", str(tmp_path), "--plot",
                  "--overlay", "cobyla_ibmqx2")
    assert code == 0
    assert "published cobyla_ibmqx2" in (tmp_path / "convergence.svg").read_text()
