import numpy as np
import pytest

from trainer import compas_like_table, example1_table, preprocess
from trainer.preprocess import Table, encode_and_scale


def test_numeric_columns_scaled_into_unit_interval(compas_like_pre):
    pre = compas_like_pre
    n_num = len(pre.numeric_names)
    for split in (pre.train, pre.test):
        assert split.X[:, :n_num].min() >= 0.0
        assert split.X[:, :n_num].max() <= 1.0


def test_scaler_parameters_recorded(compas_like_pre):
    scaler = compas_like_pre.manifest["scaler"]
    assert set(scaler) == set(compas_like_pre.numeric_names)
    assert scaler["age"]["min"] < scaler["age"]["max"]


def test_categorical_becomes_k_tier_columns():
    table = compas_like_table(seed=1)
    X, names, categories, _ = encode_and_scale(table)
    members = categories["race"]
    assert len(members) == 3  # three distinct raw values
    cols = [names.index(m) for m in members]
    block = X[:, cols]
    assert np.all(np.isin(block, (0.0, 1.0)))
    assert np.all(block.sum(axis=1) == 1.0)


def test_split_is_deterministic():
    table = example1_table(seed=3)
    a = preprocess("example1", table=table, seed=5)
    b = preprocess("example1", table=table, seed=5)
    assert np.array_equal(a.train.X, b.train.X)
    assert np.array_equal(a.test.y, b.test.y)


def test_access_restricted_dataset_skipped_with_note():
    result = preprocess("health")
    assert result.skipped
    assert "access-restricted" in result.note


def test_failed_download_skips_with_note():
    result = preprocess("german", download_timeout=0.001)
    assert result.skipped
    assert "download failed" in result.note


def test_unknown_dataset_rejected():
    with pytest.raises(ValueError):
        preprocess("not-a-dataset")


def test_single_valued_categorical_rejected():
    table = Table(
        numeric_names=["a"],
        numeric=np.array([[1.0], [2.0]]),
        categorical_names=["c"],
        categorical=[["only", "only"]],
        labels=np.array([1, -1]),
    )
    with pytest.raises(ValueError):
        encode_and_scale(table)
