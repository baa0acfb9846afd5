import io
from pathlib import Path

import pytest

from rsc_miner.dataset_io.parsers import parse_native
from rsc_miner.datagen import GenParams, generate
from rsc_miner.model import SequenceDatabase, Threshold

TABLE1 = (Path(__file__).parent / "table1.usdb").read_text(encoding="utf-8")


def _load(text: str) -> SequenceDatabase:
    return parse_native(io.StringIO(text)).unwrap()


def _random_db(seed: int) -> SequenceDatabase:
    # at most 8 sequences of at most 8 events over at most 6 items
    return generate(
        GenParams(
            num_sequences=1 + seed % 8,
            alphabet_size=2 + seed % 5,
            avg_length=3.0 + seed % 3,
            max_length=8,
            utility_min=1,
            utility_max=9,
            item_skew=0.5,
            seed=seed,
        )
    )


@pytest.fixture
def load_db():
    return _load


@pytest.fixture
def random_db():
    return _random_db


@pytest.fixture
def table1_text() -> str:
    return TABLE1


@pytest.fixture
def table1() -> SequenceDatabase:
    return _load(TABLE1)


@pytest.fixture
def fig2_scope() -> SequenceDatabase:
    """Sequences s1..s3 of the worked example."""
    return _load("".join(TABLE1.splitlines(keepends=True)[:3]))


@pytest.fixture
def minutil_table1() -> Threshold:
    # delta = 0.1 of u(D) = 64
    return Threshold(64, 10)


@pytest.fixture
def minconf_default() -> Threshold:
    return Threshold(6, 10)


@pytest.fixture
def item(table1):
    def _item(token: str) -> int:
        return table1.items.lookup(token).id

    return _item
