from __future__ import annotations

import csv
import io

import pytest

from hopfcyc.cli import EXIT_NOT_FOUND, EXIT_OK, EXIT_PARSE, EXIT_RESOURCE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def pairs(text, sep=": "):
    out = {}
    for line in text.splitlines():
        k, _, v = line.partition(sep)
        out[k] = v
    return out


@pytest.fixture
def linear_file(tmp_path):
    p = tmp_path / "linear.sys"
    p.write_text("lambda = 1\n")
    return p


@pytest.fixture
def flat_file(tmp_path):
    # the perturbation only touches z^2, so every focal coefficient vanishes identically
    p = tmp_path / "flat.sys"
    p.write_text("lambda = 1\nparams = a, b\nG3 = a*z^2 + b*x*z\n")
    return p


def test_focal_prints_first_linear_part(capsys):
    code, out, _ = run(capsys, "focal", "thm38", "-K", "3", "-T", "1")
    assert code == EXIT_OK
    L11 = pairs(out)["L1^1"]
    assert L11.startswith("22/45*a011 + 4*a020")
    assert "-2*b200" in L11.replace(" - ", " -")


def test_focal_of_linear_system_is_zero(capsys, linear_file):
    code, out, _ = run(capsys, "focal", str(linear_file), "-K", "4")
    assert code == EXIT_OK
    values = [v for k, v in pairs(out).items() if k.startswith("L")]
    assert values and set(values) == {"0"}


def test_focal_on_sampled_center(capsys):
    code, out, _ = run(capsys, "focal", "thm31a1", "--sample", "seed=7", "-K", "12")
    assert code == EXIT_OK
    kv = pairs(out)
    assert kv["seed"] == "7"
    assert [kv[f"L{k}^0"] for k in range(1, 13)] == ["0"] * 12


def test_rank_of_thirteen_cycle_system(capsys):
    code, out, _ = run(capsys, "rank", "thm38", "-K", "13")
    kv = pairs(out)
    assert code == EXIT_OK
    assert kv["rank"] == "9" and kv["bound_with_trace"] == "9"
    assert kv["order_zero_vanishes"] == "true"


def test_rank_of_flat_perturbation(capsys, flat_file):
    code, out, _ = run(capsys, "rank", str(flat_file), "-K", "3")
    assert code == EXIT_OK and pairs(out)["rank"] == "0"


def test_verify_hot_without_quadratic_parts(capsys, flat_file):
    code, out, _ = run(capsys, "verify-hot", str(flat_file), "-K", "2")
    assert code == EXIT_NOT_FOUND
    assert pairs(out)["result"] == "NOT-FOUND"


def test_machine_format_and_output_file(capsys, tmp_path):
    target = tmp_path / "out.txt"
    code, out, _ = run(capsys, "rank", "thm34a", "--format", "machine", "-o", str(target))
    assert code == EXIT_OK and out == ""
    kv = pairs(target.read_text(), " = ")
    assert kv["input"] == "thm34a" and kv["rank"] == "3"


def test_output_is_deterministic(capsys):
    first = run(capsys, "focal", "thm33a", "--sample", "seed=3", "-K", "4")[1]
    assert run(capsys, "focal", "thm33a", "--sample", "seed=3", "-K", "4")[1] == first


def test_simulate_center(capsys):
    code, out, _ = run(capsys, "simulate", "thm38", "--rho0", "1e-3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK and len(rows) == 1
    assert abs(float(rows[0]["d"])) <= 1e-9


def test_simulate_several_amplitudes(capsys):
    code, out, _ = run(capsys, "simulate", "thm31a1", "--sample", "a100=1, a010=2, a001=0, b20=1, b11=-1, b02=3",
                       "--rho0", "1e-3,2e-3", "--set", "u200=0.05,v011=-0.03")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK and [r["rho0"] for r in rows] == ["0.001", "0.002"]


def test_catalog_listing(capsys):
    code, out, _ = run(capsys, "catalog", "--list")
    assert code == EXIT_OK and len(out.splitlines()) >= 16
    code, out, _ = run(capsys, "catalog", "thm38")
    assert "F_1 = x + 2y + 3z" in out


def test_rigidity_verdicts(capsys, tmp_path):
    code, out, _ = run(capsys, "rigidity", "thm38")
    assert code == EXIT_OK and pairs(out)["cylindrically_rigid"] == "true"
    p = tmp_path / "control.sys"
    p.write_text("lambda = 1\nQ = x^2\n")
    code, out, _ = run(capsys, "rigidity", str(p), "-N", "3")
    kv = pairs(out)
    assert kv["cylindrically_rigid"] == "false"
    assert kv["rigid_on_center_manifold_through_N"] == "false"
    assert kv["defect"] == "x^3"


@pytest.mark.parametrize("text", ["lambda = 1\nP = x^2 +\n", "lambda = 1\nP = x\n", "lambda = 0\n"])
def test_bad_files_exit_with_parse_code(capsys, tmp_path, text):
    p = tmp_path / "bad.sys"
    p.write_text(text)
    code, _, err = run(capsys, "focal", str(p))
    assert code == EXIT_PARSE and err.startswith("error:")


def test_center_condition_violation_exits_with_parse_code(capsys):
    code, _, err = run(capsys, "focal", "thm33f", "--sample", "a100=1, a010=2, a001=0, b002=1")
    assert code == EXIT_PARSE and "division by zero" in err


def test_missing_input_exits_with_parse_code(capsys):
    assert run(capsys, "focal", "no-such-entry")[0] == EXIT_PARSE


def test_memory_budget_exits_with_resource_code(capsys):
    code, _, err = run(capsys, "focal", "thm38", "-K", "6", "--max-entries", "100")
    assert code == EXIT_RESOURCE and "completed" in err


@pytest.mark.slow
def test_verify_hot_round_trip(capsys, tmp_path):
    cert = tmp_path / "cert.txt"
    code, _, _ = run(capsys, "verify-hot", "thm38", "-K", "13", "--extra", "4", "-T", "2",
                     "--format", "machine", "-o", str(cert))
    kv = pairs(cert.read_text(), " = ")
    assert code == EXIT_OK
    assert kv["verified"] == "true" and kv["total_bound"] == "13"
    assert kv["alpha_degree"] == "3" and kv["eta_b200"] == "1/3*alpha"
    code, out, _ = run(capsys, "verify-hot", "thm38", "-K", "13", "--extra", "4", "-T", "2",
                       "--eta-file", str(cert))
    assert code == EXIT_OK and pairs(out)["verified"] == "true"
    # a certificate nudged off the line no longer verifies
    nudged = cert.read_text().replace("eta_b101 = 1\n", "eta_b101 = 1001/1000\n")
    cert.write_text(nudged)
    code, out, _ = run(capsys, "verify-hot", "thm38", "-K", "13", "--extra", "4", "-T", "2",
                       "--eta-file", str(cert))
    assert code == EXIT_NOT_FOUND and pairs(out)["verified"] == "false"
