"""Brute-force reference miner, no pruning and no shared code with the miner."""

import logging
from dataclasses import dataclass

from rsc_miner.config import Conf, config
from rsc_miner.model import (
    Rule,
    Sequence,
    SequenceDatabase,
    Threshold,
    compare_at_least,
    confidence_at_least,
)

logger = logging.getLogger(__name__)

LOG_MESSAGES = {
    "cap_hit": "Oracle pattern length cap %d reached, e.g. at pattern %s; results may be truncated",
}


@dataclass(frozen=True, slots=True)
class OracleConfig:
    minutil: Threshold
    minconf: Threshold
    max_len: int = config[Conf.ORACLE_MAX_LEN]

    def __post_init__(self):
        if self.max_len < 2:
            raise ValueError(f"max_len must be at least 2, got {self.max_len}")


@dataclass(frozen=True, slots=True)
class PatternStats:
    utility: int
    support: int


def max_embedding_utility(sequence: Sequence, pattern: tuple[int, ...]) -> int | None:
    """Maximum summed utility over all strictly increasing embeddings, None if there is none."""
    # best[j]: best utility of pattern[:j] embedded in the events seen so far
    best: list[int | None] = [0] + [None] * len(pattern)
    for item, utility in sequence.events:
        for j in range(len(pattern), 0, -1):
            if pattern[j - 1] == item and best[j - 1] is not None:
                candidate = best[j - 1] + utility
                if best[j] is None or candidate > best[j]:
                    best[j] = candidate
    return best[len(pattern)]


def contains(sequence: Sequence, pattern: tuple[int, ...]) -> bool:
    j = 0
    for event in sequence.events:
        if j < len(pattern) and event.item == pattern[j]:
            j += 1
    return j == len(pattern)


def support_of(db: SequenceDatabase, pattern: tuple[int, ...]) -> int:
    return sum(1 for sequence in db if contains(sequence, pattern))


def utility_of(db: SequenceDatabase, pattern: tuple[int, ...]) -> int:
    total = 0
    for sequence in db:
        value = max_embedding_utility(sequence, pattern)
        if value is not None:
            total += value
    return total


class OracleMiner:
    def __init__(self, cfg: OracleConfig):
        self._cfg = cfg
        self._cap_hit = False

    @property
    def cap_hit(self) -> bool:
        return self._cap_hit

    def patterns(self, db: SequenceDatabase) -> dict[tuple[int, ...], PatternStats]:
        """Every distinct-item pattern up to max_len occurring in db, with utility and support."""
        self._cap_hit = False
        found: dict[tuple[int, ...], PatternStats] = {}
        stack: list[tuple[int, ...]] = [(item,) for item in sorted(db.distinct_items, reverse=True)]

        while stack:
            pattern = stack.pop()
            found[pattern] = PatternStats(utility_of(db, pattern), support_of(db, pattern))

            extensions = self._extensions(db, pattern)
            if not extensions:
                continue
            if len(pattern) >= self._cfg.max_len:
                if not self._cap_hit:
                    logger.warning(LOG_MESSAGES["cap_hit"], self._cfg.max_len, pattern)
                self._cap_hit = True
                continue
            stack.extend(pattern + (item,) for item in sorted(extensions, reverse=True))
        return found

    @staticmethod
    def _extensions(db: SequenceDatabase, pattern: tuple[int, ...]) -> set[int]:
        """Items that follow a leftmost embedding of pattern in some sequence."""
        items: set[int] = set()
        for sequence in db:
            j = 0
            for k, event in enumerate(sequence.events):
                if event.item == pattern[j]:
                    j += 1
                    if j == len(pattern):
                        items.update(e.item for e in sequence.events[k + 1 :])
                        break
        return items - set(pattern)

    def rules(
        self, db: SequenceDatabase, found: dict[tuple[int, ...], PatternStats]
    ) -> list[Rule]:
        """Rules over a pattern table from ``patterns``, which may be shared across thresholds."""
        cfg = self._cfg
        rules = []
        for pattern, stats in found.items():
            if len(pattern) < 2 or not compare_at_least(stats.utility, cfg.minutil):
                continue
            for cut in range(1, len(pattern)):
                antecedent_support = found[pattern[:cut]].support
                if confidence_at_least(stats.support, antecedent_support, cfg.minconf):
                    rules.append(
                        Rule(
                            antecedent=tuple(db.items[i] for i in pattern[:cut]),
                            consequent=tuple(db.items[i] for i in pattern[cut:]),
                            utility=stats.utility,
                            support=stats.support,
                            antecedent_support=antecedent_support,
                        )
                    )
        rules.sort(key=lambda r: r.key)
        logger.debug(f"Oracle found {len(found)} patterns and {len(rules)} rules")
        return rules

    def mine(self, db: SequenceDatabase) -> list[Rule]:
        return self.rules(db, self.patterns(db))


def oracle_mine(db: SequenceDatabase, cfg: OracleConfig) -> list[Rule]:
    return OracleMiner(cfg).mine(db)
