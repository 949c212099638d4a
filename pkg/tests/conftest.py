from pathlib import Path

import numpy as np
import pytest

from erarec import BipartiteDataset, SplitPair, ingest

MOVIELENS = Path(__file__).resolve().parent.parent / "data" / "ml-100k" / "u.data"


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def toy():
    """u0 -> {o0, o1}, u1 -> {o1, o2}."""
    return BipartiteDataset.from_edges([(0, 0), (0, 1), (1, 1), (1, 2)], 2, 3)


@pytest.fixture
def toy_split(toy):
    # full network has u0 -> o2 as well, held out as the only probe link
    return SplitPair(toy, np.array([[0, 2]]), seed=0, train_fraction=0.8)


@pytest.fixture(scope="session")
def movielens():
    if not MOVIELENS.exists():
        pytest.skip("MovieLens u.data not present")
    return ingest(MOVIELENS)
