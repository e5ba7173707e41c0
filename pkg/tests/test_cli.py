"""
Tests for the command line
"""

import json

import numpy as np

from src.bench.cli import build_parser, main, resolve_config
from src.linalg.generators import hilbert
from src.linalg.matrix_market import read_dense, write_dense


def test_parser_maps_flags_onto_config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text('{"digits": 60, "sizes": ["12x9"]}', encoding="utf-8")
    args = build_parser().parse_args([
        "hilbert-bench", "--config", str(path), "--schemes", "SM,PM", "--epsilons", "1e-5,1e-6", "--threads", "2",
    ])
    cfg = resolve_config(args)
    assert cfg.schemes == ["SM", "PM"]
    assert cfg.epsilons == [1e-5, 1e-6]
    assert cfg.digits == 60
    assert cfg.sizes == ["12x9"]
    assert cfg.threads == 2


def test_seed_flag_reaches_config():
    args = build_parser().parse_args(["precond-bench", "--rhs", "random", "--seed", "42"])
    cfg = resolve_config(args)
    assert cfg.seed == 42 and cfg.rhs == "random"
    assert resolve_config(build_parser().parse_args(["precond-bench"])).seed == 0


def test_perturb_flag():
    args = build_parser().parse_args(["verify-coeffs", "--perturb", "mu=1e-3", "--perturb", "c1=-2e-4"])
    assert resolve_config(args).perturb == {"mu": 1e-3, "c1": -2e-4}


def test_verify_coeffs_exit_codes(capsys):
    assert main(["verify-coeffs"]) == 0
    assert "1/2" in capsys.readouterr().out
    assert main(["verify-coeffs", "--perturb", "mu=1e-3"]) == 1


def test_invert_hilbert(tmp_path, capsys):
    source = write_dense(tmp_path / "h.mtx", hilbert(8, 6))
    target = tmp_path / "x.mtx"
    code = main(["invert", "--matrix", str(source), "--scheme", "PM", "--init", "pan-schreiber",
                 "--digits", "30", "--out", str(target)])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["terminated"] == "converged"
    assert max(payload["checks"].values()) <= 1e-8
    x = read_dense(target).to_numpy()
    assert x.shape == (6, 8)
    assert np.allclose(x, np.linalg.pinv(hilbert(8, 6).to_numpy()), rtol=1e-4, atol=1e-4)


def test_invert_missing_file_prints_error_json(tmp_path, capsys):
    code = main(["invert", "--matrix", str(tmp_path / "absent.mtx")])
    payload = json.loads(capsys.readouterr().out)
    assert code == 2
    assert payload["error"] == "MatrixMarketError"
    assert payload["command"] == "invert"


def test_invert_degenerate_input(tmp_path, capsys):
    source = write_dense(tmp_path / "z.mtx", hilbert(2, 2) * 0.0)
    code = main(["invert", "--matrix", str(source), "--init", "adjoint"])
    assert code == 2
    assert json.loads(capsys.readouterr().out)["error"] == "DegenerateInputError"


def test_bad_scheme_is_configuration_error(tmp_path, capsys):
    source = write_dense(tmp_path / "a.mtx", hilbert(2, 2))
    assert main(["invert", "--matrix", str(source), "--scheme", "XM"]) == 2
    assert json.loads(capsys.readouterr().out)["error"] == "ConfigurationError"
