import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from relmap.corpus import ingest, ingest_dir
from relmap.dataset import Dataset
from relmap.planted import PlantedConfig, generate_planted_corpus


def write_corpus(tmp_path, texts, prefix="doc"):
    """One file per text snippet; returns the ingested index."""
    paths = []
    for i, text in enumerate(texts):
        p = tmp_path / f"{prefix}{i:03d}.txt"
        p.write_text(text, encoding="utf-8")
        paths.append(p)
    return ingest(paths)


@pytest.fixture(scope="session")
def planted_all(tmp_path_factory):
    """Five m=5 problems with every index pair planted; ~100k tokens."""
    root = tmp_path_factory.mktemp("planted_all")
    data = generate_planted_corpus(root, PlantedConfig(seed=11))
    index = ingest_dir(data.corpus_dir)
    return data, index


@pytest.fixture(scope="session")
def planted_star(tmp_path_factory):
    """Five m=7 problems planted as a star around term 0; for coherence."""
    root = tmp_path_factory.mktemp("planted_star")
    data = generate_planted_corpus(
        root, PlantedConfig(n_problems=5, m=7, pair_mode="star",
                            target_tokens=60_000, seed=12))
    index = ingest_dir(data.corpus_dir)
    return data, index


@pytest.fixture(scope="session")
def planted_dataset(planted_all):
    data, _ = planted_all
    return Dataset(data.problems)
