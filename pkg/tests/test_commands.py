"""
Tests for the bench commands on desk-scale inputs
"""

import io
import json

import numpy as np
import pytest

from src.bench.commands import (
    cmd_drazin_table,
    cmd_hilbert_bench,
    cmd_invert,
    cmd_precond_bench,
    cmd_verify_coeffs,
    fan_out,
)
from src.bench.config import ExperimentConfig
from src.linalg.dense import diag
from src.linalg.generators import drazin_example_matrix
from src.linalg.scalar import extended
from src.linalg.matrix_market import read_dense, write_dense
from src.utils.errors import ConfigurationError


def run(command, **fields):
    stream = io.StringIO()
    result = command(ExperimentConfig(**fields), stream)
    return result, stream.getvalue()


def test_fan_out_keeps_order():
    assert fan_out(lambda v: v * v, range(10), threads=4) == [v * v for v in range(10)]
    assert fan_out(lambda v: v + 1, [1], threads=1) == [2]


def test_verify_coeffs_passes():
    result, text = run(cmd_verify_coeffs)
    assert result.exit_code == 0
    assert "1/2" in text
    assert "PASS" in text
    assert result.payload["value_at_one"] == pytest.approx(18.0)
    row = result.frame.set_index("name").loc["a3"]
    assert row["closed_form"] == "1/2"


def test_verify_coeffs_detects_perturbation():
    result, text = run(cmd_verify_coeffs, perturb={"mu": 1e-3})
    assert result.exit_code == 1
    polynomial = result.payload["polynomial"].set_index("degree")
    assert polynomial.loc[3, "double"] == pytest.approx(1e-3)
    assert polynomial.loc[3, "extended"] == pytest.approx(1e-3)
    assert "FAIL" in text


def test_drazin_table_fallback_is_deterministic(tmp_path):
    out = tmp_path / "table"
    result, text = run(cmd_drazin_table, digits=40, schemes=["SM", "FM", "PM"], out=str(out))
    assert list(result.frame["scheme"]) == ["SM", "PM"]
    assert set(result.frame["terminated"]) == {"converged"}
    assert result.payload["relative"] is True
    assert (result.frame["drazin_residual"] < 1e-4).all()
    first = (tmp_path / "table.csv").read_text(encoding="utf-8")
    run(cmd_drazin_table, digits=40, schemes=["SM", "FM", "PM"], out=str(out), threads=2)
    assert (tmp_path / "table.csv").read_text(encoding="utf-8") == first
    assert "seconds" not in first.splitlines()[0]


def test_hilbert_bench_small():
    result, _ = run(cmd_hilbert_bench, sizes=["8x6"], epsilons=[1e-5], schemes=["SM", "CM", "PM"])
    frame = result.frame
    assert result.exit_code == 0
    assert len(frame) == 3
    assert set(frame["terminated"]) == {"converged"}
    assert (frame["loops"] < 100).all()
    assert {"outer", "inner", "sym_ax", "sym_xa", "total_products"} <= set(frame.columns)


def test_hilbert_bench_outer_residual_at_tight_epsilon():
    result, _ = run(cmd_hilbert_bench, sizes=["8x6"], epsilons=[1e-8], schemes=["PM"])
    row = result.frame.iloc[0]
    assert row["terminated"] == "converged"
    assert row["outer"] <= 1e-8


def test_precond_bench_small(tmp_path):
    out = tmp_path / "gmres"
    result, text = run(cmd_precond_bench, grid=6, tols=[1e-4, 1e-8], out=str(out))
    frame = result.frame
    assert list(frame["configuration"].unique()) == ["none", "jacobi", "SM:5", "CM:3", "PM:1"]
    assert frame["converged"].all()
    for tol in (1e-4, 1e-8):
        rows = frame[frame["tol"] == tol].set_index("configuration")
        assert rows.loc["PM:1", "iterations"] < rows.loc["none", "iterations"]
    assert (tmp_path / "gmres.csv").exists()
    curves = (tmp_path / "gmres_curves.csv").read_text(encoding="utf-8").splitlines()
    assert curves[0] == "configuration,tol,iteration,preconditioned_residual,true_residual"


def test_precond_bench_random_rhs_follows_seed():
    first, _ = run(cmd_precond_bench, grid=5, tols=[1e-8], schemes=["none", "PM:1"], rhs="random", seed=7)
    again, _ = run(cmd_precond_bench, grid=5, tols=[1e-8], schemes=["none", "PM:1"], rhs="random", seed=7)
    ones, _ = run(cmd_precond_bench, grid=5, tols=[1e-8], schemes=["none", "PM:1"])
    assert first.frame["converged"].all()
    assert first.frame["iterations"].tolist() == again.frame["iterations"].tolist()
    assert first.frame["true_residual"].tolist() == again.frame["true_residual"].tolist()
    assert first.frame["true_residual"].tolist() != ones.frame["true_residual"].tolist()


def test_precond_bench_marks_bad_configuration():
    result, _ = run(cmd_precond_bench, grid=4, tols=[1e-6], schemes=["none", "XM:2"])
    rows = result.frame.set_index("configuration")
    assert bool(rows.loc["none", "converged"])
    assert not bool(rows.loc["XM:2", "converged"])
    assert rows.loc["XM:2", "status"] == "ConfigurationError"


def test_invert_diagonal(tmp_path):
    source = write_dense(tmp_path / "a.mtx", diag([2.0, 4.0]))
    target = tmp_path / "x.mtx"
    result, text = run(cmd_invert, matrix=str(source), init="diagonal", out=str(target))
    assert result.exit_code == 0
    payload = json.loads(text)
    assert payload["loops"] <= 2
    assert payload["checks_passed"] is True
    assert np.allclose(read_dense(target).to_numpy(), np.diag([0.5, 0.25]))


def test_invert_needs_matrix():
    with pytest.raises(ConfigurationError):
        run(cmd_invert)


def test_invert_rejects_unknown_stop(tmp_path):
    source = write_dense(tmp_path / "a.mtx", diag([2.0, 4.0]))
    with pytest.raises(ConfigurationError):
        run(cmd_invert, matrix=str(source), stop="never")


def test_invert_drazin_example_at_150_digits(tmp_path):
    source = write_dense(tmp_path / "drazin.mtx", drazin_example_matrix(extended(150)))
    result, text = run(cmd_invert, matrix=str(source), scheme="PM", init="drazin", digits=150, stop="step")
    payload = json.loads(text)
    assert result.exit_code == 0
    assert payload["index"] == 3
    assert payload["check_tolerance"] <= 1e-40
    assert set(payload["checks"]) == {"outer", "commute", "power"}
    assert max(payload["checks"].values()) <= 1e-40
