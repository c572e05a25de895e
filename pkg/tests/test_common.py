import json
import pathlib
import sys

import numpy as np
import pytest

ROOT = pathlib.Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.common.config import ConfigLoaderError, load_config, resolve_threads
from src.common.errors import ConfigurationError
from src.common.logging import setup_logging
from src.common.seeding import derive_seed, make_rng
from src.common.storage import (
    StorageError,
    dumps_json,
    read_sample_csv,
    round_significant,
    write_csv,
    write_json,
)


def test_base_config_loads_with_defaults():
    cfg = load_config(reload=True)
    assert cfg.logging.name == "mmdlab"
    assert cfg.tracking.tracking_uri is None
    assert cfg.complexity.exact_enumeration_cutoff == 20
    assert cfg.oracle.monte_carlo_draws == 1_000_000
    assert cfg.paths.outputs_reports.is_absolute()


def test_overrides_and_pipeline_overlay_merge():
    cfg = load_config(
        config_name=["pipelines/experiments"],
        overrides=["compute.seed=5", "oracle.block_size=64"],
        reload=True,
    )
    assert cfg.compute.seed == 5
    assert cfg.oracle.block_size == 64
    assert cfg.logging.json_format is True


def test_missing_overlay_is_a_configuration_error():
    with pytest.raises(ConfigLoaderError):
        load_config(config_name=["pipelines/does_not_exist"], reload=True)
    with pytest.raises(ConfigurationError):
        load_config(overrides=["oracle.block_size=1"], reload=True)


def test_resolve_threads_precedence(monkeypatch):
    monkeypatch.delenv("MMDLAB_THREADS", raising=False)
    assert resolve_threads(3) == 3
    assert resolve_threads(0) == 1
    monkeypatch.setenv("MMDLAB_THREADS", "2")
    assert resolve_threads(None) == 2
    monkeypatch.setenv("MMDLAB_THREADS", "many")
    with pytest.raises(ConfigurationError):
        resolve_threads(None)


def test_derive_seed_is_stable_and_keyed():
    assert derive_seed(7, 1, 3) == derive_seed(7, 1, 3)
    assert derive_seed(7, 1, 3) != derive_seed(7, 1, 4)
    assert derive_seed(7, 1) != derive_seed(8, 1)
    assert 0 <= derive_seed(2**70, 1) < 2**63

    first = make_rng(derive_seed(11, 0)).standard_normal(5)
    second = make_rng(derive_seed(11, 0)).standard_normal(5)
    assert np.array_equal(first, second)


def test_round_significant_handles_nested_and_non_finite_values():
    payload = {"a": 1 / 3, "b": [2.0 / 3.0, float("nan")], "c": np.float64(123456789.0), "d": True, "e": 4}
    rounded = round_significant(payload)
    assert rounded == {"a": 0.3333333, "b": [0.6666667, None], "c": 123456800.0, "d": True, "e": 4}
    assert '"a": 0.3333333' in dumps_json(payload)


def test_write_json_is_atomic_and_leaves_no_temp_files(tmp_path):
    target = tmp_path / "summary.json"
    write_json({"value": 0.1621192}, target)
    assert target.read_text(encoding="utf-8").strip().startswith("{")
    assert [path.name for path in tmp_path.iterdir()] == ["summary.json"]


def test_write_json_requires_existing_parent(tmp_path):
    with pytest.raises(StorageError):
        write_json({}, tmp_path / "missing" / "summary.json")


def test_write_csv_writes_header_for_empty_tables(tmp_path):
    target = tmp_path / "trials.csv"
    write_csv([], target, columns=["trial", "deviation"])
    assert target.read_bytes() == b"trial,deviation\r\n"

    write_csv([{"trial": 0, "deviation": 1 / 3}], target, columns=["trial", "deviation"])
    assert target.read_bytes() == b"trial,deviation\r\n0,0.3333333\r\n"


def test_read_sample_csv(tmp_path):
    target = tmp_path / "x.csv"
    target.write_text("1,2\n3,4\n5,6\n", encoding="utf-8")
    data = read_sample_csv(target)
    assert data.shape == (3, 2)
    assert data[2, 1] == 6.0

    bad = tmp_path / "bad.csv"
    bad.write_text("1,a\n", encoding="utf-8")
    with pytest.raises(StorageError):
        read_sample_csv(bad)
    with pytest.raises(StorageError):
        read_sample_csv(tmp_path / "absent.csv")


def test_json_logging_goes_to_stderr(capsys):
    cfg = load_config(config_name=["pipelines/experiments"], reload=True)
    logger = setup_logging(cfg, run_name="test").logger
    logger.info("Coverage study finished", extra={"coverage": 0.95})
    captured = capsys.readouterr()
    assert captured.out == ""
    entry = json.loads(captured.err.strip().splitlines()[-1])
    assert entry["msg"] == "Coverage study finished"
    assert entry["context"] == {"coverage": 0.95}
