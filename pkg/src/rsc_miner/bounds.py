"""Utility upper bounds: SEU per item, RU and RRU per position, per-item RRU sums."""

import logging
from dataclasses import dataclass

from rsc_miner.model import (
    Sequence,
    SequenceDatabase,
    Threshold,
    compare_at_least,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class PositionRef:
    sid: int
    pos: int


@dataclass(frozen=True, slots=True)
class ItemBoundSummary:
    item: int
    seu: int
    rru_sum: int


def sequence_seu_term(sequence: Sequence, literal: bool = False) -> int:
    """Contribution of one sequence to the SEU of every item it contains."""
    if literal:
        return sequence.utility
    best: dict[int, int] = {}
    for event in sequence.events:
        if event.utility > best.get(event.item, -1):
            best[event.item] = event.utility
    return sum(best.values())


def seu_per_item(db: SequenceDatabase, literal: bool = False) -> dict[int, int]:
    seu: dict[int, int] = {}
    for sequence in db:
        term = sequence_seu_term(sequence, literal)
        for item in sequence.items:
            seu[item] = seu.get(item, 0) + term
    return seu


def prune_unpromising(
    db: SequenceDatabase, minutil: Threshold, literal: bool = False
) -> SequenceDatabase:
    """Single pass of early item pruning. Survivors keep their sids; minutil is not recomputed."""
    seu = seu_per_item(db, literal)
    unpromising = {item for item, value in seu.items() if not compare_at_least(value, minutil)}
    if not unpromising:
        return db

    survivors = []
    for sequence in db:
        events = tuple(e for e in sequence.events if e.item not in unpromising)
        if events:
            survivors.append(Sequence(sequence.sid, events))

    pruned = db.replace_sequences(survivors)
    logger.info(
        f"Early item pruning removed {len(unpromising)} of {len(seu)} items, "
        f"{len(pruned)} of {len(db)} sequences survive"
    )
    return pruned


def suffix_ru(sequence: Sequence) -> list[int]:
    """RU for every position (0-based list index = position - 1)."""
    values = [0] * len(sequence)
    running = 0
    for k in range(len(sequence) - 1, -1, -1):
        running += sequence.events[k].utility
        values[k] = running
    return values


def suffix_rru(sequence: Sequence) -> list[int]:
    """RRU for every position: own utility plus the distinct-item suffix maxima, own item excluded."""
    values = [0] * len(sequence)
    maxima: dict[int, int] = {}
    maxima_sum = 0
    for k in range(len(sequence) - 1, -1, -1):
        item, utility = sequence.events[k]
        previous = maxima.get(item, 0)
        values[k] = utility + maxima_sum - previous
        if utility > previous:
            maxima[item] = utility
            maxima_sum += utility - previous
    return values


def remaining_utilities(sequence: Sequence, use_rru: bool = True) -> list[int]:
    return suffix_rru(sequence) if use_rru else suffix_ru(sequence)


def _position(db: SequenceDatabase, p: PositionRef) -> tuple[Sequence, int]:
    for sequence in db:
        if sequence.sid == p.sid:
            if not 1 <= p.pos <= len(sequence):
                raise IndexError(f"position {p.pos} outside sequence {p.sid}")
            return sequence, p.pos - 1
    raise KeyError(f"no sequence with sid {p.sid}")


def ru_at(db: SequenceDatabase, p: PositionRef) -> int:
    sequence, k = _position(db, p)
    return sum(e.utility for e in sequence.events[k:])


def rru_at(db: SequenceDatabase, p: PositionRef) -> int:
    sequence, k = _position(db, p)
    own = sequence.events[k]
    maxima: dict[int, int] = {}
    for event in sequence.events[k + 1 :]:
        if event.item != own.item and event.utility > maxima.get(event.item, -1):
            maxima[event.item] = event.utility
    return own.utility + sum(maxima.values())


def rru_sum_per_item(db: SequenceDatabase, use_rru: bool = True) -> dict[int, int]:
    """Per item: sum over sequences of the maximum RRU among the item's occurrences there."""
    sums: dict[int, int] = {}
    for sequence in db:
        best: dict[int, int] = {}
        for event, value in zip(sequence.events, remaining_utilities(sequence, use_rru)):
            if value > best.get(event.item, -1):
                best[event.item] = value
        for item, value in best.items():
            sums[item] = sums.get(item, 0) + value
    return sums


def item_bound_summaries(db: SequenceDatabase, literal_seu: bool = False) -> list[ItemBoundSummary]:
    seu = seu_per_item(db, literal_seu)
    rru = rru_sum_per_item(db)
    return [ItemBoundSummary(item, seu[item], rru[item]) for item in sorted(seu)]
