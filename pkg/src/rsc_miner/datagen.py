"""Seeded synthetic sequence databases shaped like the Syn* benchmark family."""

import logging
from dataclasses import dataclass

import numpy as np
from returns.result import Failure, Result, Success

from rsc_miner.model import (
    MAX_UTILITY,
    Event,
    ItemDictionary,
    Sequence,
    SequenceDatabase,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class GenParams:
    num_sequences: int = 1000
    alphabet_size: int = 100
    avg_length: float = 10.0
    max_length: int = 50
    utility_min: int = 1
    utility_max: int = 10
    item_skew: float = 1.0
    seed: int = 0

    def validate(self) -> Result["GenParams", str]:
        if self.num_sequences < 0:
            return Failure(f"num_sequences must be non-negative, got {self.num_sequences}")
        if self.alphabet_size < 1:
            return Failure(f"alphabet_size must be at least 1, got {self.alphabet_size}")
        if not 1 <= self.avg_length <= self.max_length:
            return Failure(
                f"need 1 <= avg_length <= max_length, got {self.avg_length} and {self.max_length}"
            )
        if not 0 <= self.utility_min <= self.utility_max <= MAX_UTILITY:
            return Failure(
                f"need 0 <= utility_min <= utility_max, got {self.utility_min} and {self.utility_max}"
            )
        if self.num_sequences * self.max_length * self.utility_max > MAX_UTILITY:
            return Failure(
                f"{self.num_sequences} sequences of up to {self.max_length} events with utility up to "
                f"{self.utility_max} can exceed the 64-bit utility total"
            )
        if self.item_skew < 0:
            return Failure(f"item_skew must be non-negative, got {self.item_skew}")
        if not 0 <= self.seed < 2**64:
            return Failure(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        return Success(self)


# |D| and |Σ| of the Syn10K..Syn400K benchmark family; avg 27, max 213 throughout
PRESETS: dict[str, GenParams] = {
    name: GenParams(
        num_sequences=sequences,
        alphabet_size=alphabet,
        avg_length=27.0,
        max_length=213,
        utility_min=1,
        utility_max=10,
    )
    for name, sequences, alphabet in (
        ("syn10k", 10_000, 7312),
        ("syn20k", 20_000, 7442),
        ("syn40k", 40_000, 7537),
        ("syn80k", 79_718, 7584),
        ("syn160k", 159_501, 7609),
        ("syn240k", 239_211, 7617),
        ("syn320k", 318_889, 7620),
        ("syn400k", 398_716, 7621),
    )
}


def _zipf_probabilities(alphabet_size: int, skew: float) -> np.ndarray:
    weights = np.arange(1, alphabet_size + 1, dtype=np.float64) ** -skew
    return weights / weights.sum()


def generate(params: GenParams) -> SequenceDatabase:
    items = ItemDictionary()
    if params.num_sequences == 0:
        return SequenceDatabase((), items, 0)

    # drawn in a fixed order: lengths, then items, then utilities
    rng = np.random.default_rng(params.seed)
    lengths = np.clip(
        rng.geometric(1.0 / params.avg_length, size=params.num_sequences),
        1,
        params.max_length,
    )
    total_events = int(lengths.sum())
    drawn_items = rng.choice(
        params.alphabet_size,
        size=total_events,
        p=_zipf_probabilities(params.alphabet_size, params.item_skew),
    )
    drawn_utilities = rng.integers(
        params.utility_min, params.utility_max, size=total_events, endpoint=True, dtype=np.uint64
    )

    ids = [items.intern(str(label + 1)).id for label in drawn_items.tolist()]
    utilities = drawn_utilities.tolist()

    sequences = []
    offset = 0
    for sid, length in enumerate(lengths.tolist(), start=1):
        events = tuple(
            Event(ids[k], utilities[k]) for k in range(offset, offset + length)
        )
        sequences.append(Sequence(sid, events))
        offset += length

    db = SequenceDatabase.build(sequences, items)
    logger.info(
        f"Generated {len(db)} sequences, {total_events} events, "
        f"{len(items)} distinct items (seed {params.seed})"
    )
    return db
