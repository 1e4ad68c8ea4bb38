from pathlib import Path

import pytest

from svmcert.model_io import load_dataset, load_model

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture(scope="session")
def example1():
    return load_model(GOLDEN / "example1_model.json")


@pytest.fixture(scope="session")
def cex_model():
    return load_model(GOLDEN / "cex_model.json")


@pytest.fixture(scope="session")
def lin7():
    model = load_model(GOLDEN / "lin7_model.json")
    data = load_dataset(GOLDEN / "lin7_data.csv", model.schema)
    return model, data


@pytest.fixture(scope="session")
def catmix():
    models = {
        kind: load_model(GOLDEN / f"catmix_{kind}_model.json")
        for kind in ("linear", "polynomial", "rbf")
    }
    data = load_dataset(GOLDEN / "catmix_data.csv", models["linear"].schema)
    return models, data
