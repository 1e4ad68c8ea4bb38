import pytest

from trainer import compas_like_table, preprocess


@pytest.fixture(scope="session")
def compas_like_pre():
    return preprocess("compas-like", table=compas_like_table(seed=0), seed=0)


@pytest.fixture(scope="session")
def bundle_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("bundles")
