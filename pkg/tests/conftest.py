from __future__ import annotations

from pathlib import Path

import pytest

from guiflow import modeldb
from guiflow.bundle import load_bundle
from guiflow.ripper import rip
from guiflow.universe import build_static_universe

REPO_ROOT = Path(__file__).resolve().parent.parent
CORPORA_DIR = REPO_ROOT / "corpora"
CORPUS_NAMES = ("demo-app", "notes", "wizard", "gallery")
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


def corpus_path(name: str) -> Path:
    return CORPORA_DIR / name


@pytest.fixture(scope="session")
def demo_bundle():
    return load_bundle(corpus_path("demo-app"))


@pytest.fixture(scope="session")
def demo_graph(demo_bundle):
    return rip(demo_bundle)


@pytest.fixture(scope="session")
def demo_universe(demo_bundle):
    return build_static_universe(demo_bundle)


@pytest.fixture(scope="session")
def demo_db(demo_bundle, demo_graph, demo_universe, tmp_path_factory):
    db_dir = tmp_path_factory.mktemp("demo-db") / "db"
    meta = modeldb.make_meta(demo_bundle.app_id, demo_bundle.version, demo_graph.truncated, "0.1.0")
    modeldb.save(db_dir, demo_universe, demo_graph, meta)
    return modeldb.load(db_dir)
