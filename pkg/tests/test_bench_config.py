"""
Tests for experiment configuration documents
"""

import pytest

from src.bench.config import ExperimentConfig
from src.utils.errors import ConfigurationError


def test_json_round_trip_is_fixed_point():
    cfg = ExperimentConfig(schemes=["SM", "PM"], digits=170, epsilon=1e-50, perturb={"mu": 1e-3})
    text = cfg.to_json()
    assert ExperimentConfig.from_json(text).to_json() == text


def test_defaults():
    cfg = ExperimentConfig()
    assert cfg.scheme == "PM"
    assert cfg.stop == "relative-step"
    assert cfg.parsed_sizes() == [(100, 90), (200, 190), (300, 290)]
    assert cfg.tols == [1e-2, 1e-4, 1e-6, 1e-8, 1e-10]


def test_flags_override_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text('{"digits": 60, "epsilon": 1e-20, "schemes": ["CM"]}', encoding="utf-8")
    cfg = ExperimentConfig.from_file(str(path)).merged({"digits": 80, "schemes": None})
    assert cfg.digits == 80
    assert cfg.epsilon == 1e-20
    assert cfg.schemes == ["CM"]


def test_yaml_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("sizes: [8x6, 12X9]\nepsilons: [1.0e-5]\n", encoding="utf-8")
    cfg = ExperimentConfig.from_file(str(path))
    assert cfg.parsed_sizes() == [(8, 6), (12, 9)]


@pytest.mark.parametrize("text", [
    '{"sizes": ["6x8"]}',
    '{"sizes": ["big"]}',
    '{"digits": 0}',
    '{"threads": 0}',
    '{"unknown": 1}',
    'not json',
])
def test_invalid_documents(text):
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_json(text)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_file(str(tmp_path / "absent.json"))


def test_bad_override():
    with pytest.raises(ConfigurationError):
        ExperimentConfig().merged({"threads": -2})
