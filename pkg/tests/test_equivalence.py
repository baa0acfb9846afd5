import pytest

from rsc_miner.miner import MiningConfig, mine, minutil_from_delta
from rsc_miner.model import Threshold
from rsc_miner.oracle import OracleConfig, OracleMiner

pytestmark = pytest.mark.slow

DELTAS = [Threshold(1, 100), Threshold(5, 100), Threshold(1, 10), Threshold(3, 10)]
MINCONFS = [Threshold(4, 10), Threshold(6, 10), Threshold(8, 10), Threshold(1, 1)]


def _identities(rules):
    return sorted((r.key, r.utility, r.support, r.antecedent_support) for r in rules)


class TestOracleEquivalence:
    @pytest.mark.parametrize("seed", range(500))
    def test_miner_matches_oracle_over_threshold_grid(self, random_db, seed):
        # Arrange
        db = random_db(seed)
        found = OracleMiner(OracleConfig(Threshold(0), Threshold(1))).patterns(db)

        for delta in DELTAS:
            for minconf in MINCONFS:
                minutil = minutil_from_delta(db, delta)
                expected = OracleMiner(OracleConfig(minutil, minconf)).rules(db, found)

                # Act
                rules, stats = mine(db, MiningConfig(minutil, minconf))

                # Assert
                assert _identities(rules) == _identities(expected), (delta, minconf)
                assert stats.rules == len(rules)
