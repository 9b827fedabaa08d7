"""Command line, file formats and environment settings"""
import csv
import io
import json

import numpy as np
import pytest

from cli import main
from domain.channels import update_channel
from domain.enums import Ordering
from domain.errors import FileFormatError
from domain.states import canonical, random_density_matrix
from infrastructure.config import AppSettings
from infrastructure.serialization import (
    dump_channel, dump_state, load_channel, load_state, parse_ordering, read_state_file,
)

THIRD = 1 / 9
STEADY_STATE = np.array([
    [5 / 18, 0, 0, -THIRD],
    [0, 5 / 18, -THIRD, 0],
    [0, -THIRD, 2 / 9, 0],
    [-THIRD, 0, 0, 2 / 9],
])


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def _value(text: str, label: str) -> float:
    for line in text.splitlines():
        if line.strip().startswith(label):
            return float(line.strip()[len(label):].split()[0])
    raise AssertionError(f"{label} not in output")


# ============================================================================
# SIMULATE
# ============================================================================

def test_simulate_single_step():
    code, out, _ = run("simulate", "--steps", "1")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    assert rows[0]["step"] == "0"
    assert abs(float(rows[0]["W_lost"])) < 1e-10


def test_simulate_writes_file(tmp_path):
    target = tmp_path / "run.csv"
    code, out, _ = run("simulate", "--steps", "2", "--out", str(target))
    assert code == 0
    assert out == ""
    assert len(target.read_text().splitlines()) == 3


@pytest.mark.parametrize("argv", [
    ("simulate", "--p", "1.5"),
    ("simulate", "--steps", "0"),
    ("simulate", "--kdt", "-1"),
    ("simulate", "--beta", "0"),
    ("simulate", "--kappa", "0", "--steps", "1"),
    ("steady-state", "--periodic", "--kappa", "0"),
    ("steady-state", "--kappa", "0"),
])
def test_simulate_rejects_bad_parameters(argv):
    code, out, err = run(*argv)
    assert code == 2
    assert out == ""
    assert err.startswith("error:")


def test_unknown_command_is_usage_error():
    code, _, _ = run("teleport")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ("simulate", "--bogus"),
    ("simulate", "--ordering", "XS"),
    ("analyze", "--steps", "3", "fixtures/bell.json"),
])
def test_unknown_flag_is_usage_error(argv):
    code, out, _ = run(*argv)
    assert code == 2
    assert out == ""


# ============================================================================
# ANALYZE
# ============================================================================

def test_analyze_bell(fixtures_dir):
    code, out, _ = run("analyze", str(fixtures_dir / "bell.json"))
    assert code == 0
    assert _value(out, "I(S:X)") == pytest.approx(2.0, abs=1e-9)
    assert _value(out, "delta(S|X)") == pytest.approx(1.0, abs=1e-9)
    assert _value(out, "H(S|X)") == pytest.approx(-1.0, abs=1e-9)


def test_analyze_product_state_has_no_correlations(fixtures_dir):
    code, out, _ = run("analyze", str(fixtures_dir / "product.json"))
    assert code == 0
    for label in ("I(S:X)", "I^C(S|X)", "delta(S|X)", "I^C(X|S)", "delta(X|S)"):
        assert _value(out, label) == pytest.approx(0.0, abs=1e-9)
    assert _value(out, "beta W/ln2") == pytest.approx(0.0, abs=1e-9)


def test_analyze_with_channel_reports_both_sides(fixtures_dir):
    code, out, _ = run("analyze", str(fixtures_dir / "bell.json"), str(fixtures_dir / "dephasing_channel.json"))
    assert code == 0
    assert "work ledger, measured on X" in out
    assert "work ledger, measured on S" in out


def test_analyze_steady_state_fixture(fixtures_dir):
    code, out, _ = run("analyze", str(fixtures_dir / "steady_state.json"))
    assert code == 0
    measured_on_x = out.split("measured on X:")[1].split("measured on S:")[0]
    assert "(computational)" in measured_on_x


def test_analyze_missing_file(tmp_path):
    code, _, err = run("analyze", str(tmp_path / "nope.json"))
    assert code == 2
    assert "cannot read" in err


def test_analyze_invalid_state_is_numerical_failure(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "dims": [2, 2],
        "matrix": [[v, 0.0] for v in np.diag([0.7, 0.5, -0.1, -0.1]).reshape(-1)],
    }))
    code, _, _ = run("analyze", str(path))
    assert code == 3


# ============================================================================
# VALIDATE
# ============================================================================

def test_validate_fixtures(fixtures_dir):
    files = sorted(str(p) for p in fixtures_dir.glob("*.json"))
    code, out, _ = run("validate", *files)
    assert code == 0
    assert out.count(": ok") == len(files)


def test_validate_reports_invalid_state(tmp_path, fixtures_dir):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "dims": [2, 2],
        "matrix": [[v, 0.0] for v in np.diag([0.7, 0.5, -0.1, 0.0]).reshape(-1)],
    }))
    code, out, _ = run("validate", str(fixtures_dir / "bell.json"), str(path))
    assert code == 3
    assert "INVALID" in out
    assert "positive-semidefinite" in out


def test_validate_rejects_non_json(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("not json")
    code, _, _ = run("validate", str(path))
    assert code == 2


# ============================================================================
# STEADY STATE
# ============================================================================

def test_steady_state_file(tmp_path):
    target = tmp_path / "ss.json"
    code, _, _ = run("steady-state", "--out", str(target))
    assert code == 0
    np.testing.assert_allclose(read_state_file(target).mat, STEADY_STATE, atol=1e-8)


def test_steady_state_independent_of_kappa():
    _, slow, _ = run("steady-state")
    _, fast, _ = run("steady-state", "--kappa", "2")
    np.testing.assert_allclose(load_state(slow).mat, load_state(fast).mat, atol=1e-10)


def test_steady_state_in_x_first_order():
    code, out, _ = run("steady-state", "--ordering", "XS")
    assert code == 0
    assert json.loads(out)["ordering"] == "XS"
    state = load_state(out)
    assert state.ordering is Ordering.XS
    np.testing.assert_allclose(canonical(state).mat, STEADY_STATE, atol=1e-8)


def test_periodic_steady_state_is_a_state():
    code, out, _ = run("steady-state", "--periodic", "--p", "0.7")
    assert code == 0
    state = load_state(out)
    assert state.trace() == pytest.approx(1.0, abs=1e-10)


# ============================================================================
# FILE FORMATS AND SETTINGS
# ============================================================================

def test_state_dump_is_bit_exact(rng):
    state = random_density_matrix((2, 2), rng)
    assert np.array_equal(load_state(dump_state(state)).mat, state.mat)


def test_channel_dump_keeps_operators():
    channel = update_channel(0.7)
    loaded = load_channel(dump_channel(channel))
    assert loaded.label == channel.label
    for a, b in zip(loaded.operators, channel.operators):
        assert np.array_equal(a, b)


@pytest.mark.parametrize("text", [
    "{",
    '{"dims": [2, 2], "matrix": [[1.0, 0.0]]}',
    '{"dims": [2, 2], "ordering": "SY", "matrix": []}',
])
def test_malformed_state_documents(text):
    with pytest.raises(FileFormatError):
        load_state(text)


def test_ordering_accepts_name_or_symbol():
    assert parse_ordering("SX") is Ordering.SX
    assert parse_ordering("X⊗S") is Ordering.XS


def test_settings_from_environment():
    settings = AppSettings.from_env({"QPP_LOG_LEVEL": "debug", "QPP_THETA_STEP_DEG": "5"})
    assert settings.log_level == "DEBUG"
    assert settings.optimizer().theta_step_deg == 5.0
    assert settings.optimizer().phi_step_deg == 4.0


def test_bad_environment_is_usage_error(monkeypatch):
    monkeypatch.setenv("QPP_LOG_LEVEL", "chatty")
    code, _, err = run("steady-state")
    assert code == 2
    assert "environment" in err
