import io

import pytest
from returns.result import Failure, Success

from rsc_miner.datagen import PRESETS, GenParams, generate
from rsc_miner.dataset_io.features import database_features
from rsc_miner.dataset_io.parsers import parse_native
from rsc_miner.dataset_io.writers import write_native


def _serialized(db):
    out = io.StringIO()
    write_native(db, out)
    return out.getvalue()


class TestGenerate:
    def test_same_seed_gives_identical_bytes(self):
        # Arrange
        params = GenParams(num_sequences=200, alphabet_size=30, seed=7)

        # Act
        first = _serialized(generate(params))
        second = _serialized(generate(params))

        # Assert
        assert first == second

    def test_different_seeds_differ(self):
        # Act
        first = _serialized(generate(GenParams(num_sequences=50, seed=1)))
        second = _serialized(generate(GenParams(num_sequences=50, seed=2)))

        # Assert
        assert first != second

    def test_generated_database_parses_back(self):
        # Arrange
        db = generate(GenParams(num_sequences=100, alphabet_size=40, seed=11))

        # Act
        result = parse_native(io.StringIO(_serialized(db)))

        # Assert
        reread = result.unwrap()
        assert reread.total_utility == db.total_utility
        assert [len(s) for s in reread] == [len(s) for s in db]

    def test_zero_sequences_gives_empty_database(self):
        # Act
        db = generate(GenParams(num_sequences=0))

        # Assert
        assert len(db) == 0
        assert db.total_utility == 0

    def test_respects_shape_limits(self):
        # Arrange
        params = GenParams(num_sequences=300, alphabet_size=12, max_length=9, utility_min=2, utility_max=4, seed=3)

        # Act
        db = generate(params)

        # Assert
        assert len(db) == 300
        assert all(1 <= len(s) <= 9 for s in db)
        assert all(2 <= e.utility <= 4 for s in db for e in s.events)
        assert {db.items.token(i) for i in db.distinct_items} <= {str(k) for k in range(1, 13)}

    def test_syn_like_average_length(self):
        # Arrange
        params = GenParams(
            num_sequences=10_000,
            alphabet_size=7312,
            avg_length=27.0,
            max_length=213,
            seed=1,
        )

        # Act
        features = database_features(generate(params))

        # Assert
        assert features.avg_length == pytest.approx(27.0, rel=0.1)
        assert features.max_length <= 213


class TestGenParams:
    @pytest.mark.parametrize(
        "params",
        [
            GenParams(num_sequences=-1),
            GenParams(alphabet_size=0),
            GenParams(avg_length=60.0, max_length=50),
            GenParams(utility_min=5, utility_max=2),
            GenParams(item_skew=-0.5),
            GenParams(seed=-1),
            GenParams(num_sequences=2, max_length=50, utility_min=2**64 - 1, utility_max=2**64 - 1),
            GenParams(num_sequences=10, max_length=10, utility_max=2**58),
        ],
    )
    def test_validate_rejects_invalid_params(self, params):
        # Act / Assert
        assert isinstance(params.validate(), Failure)

    def test_presets_are_valid(self):
        # Act / Assert
        for name, params in PRESETS.items():
            assert params.validate() == Success(params), name
        assert PRESETS["syn10k"].num_sequences == 10_000
        assert PRESETS["syn10k"].alphabet_size == 7312
