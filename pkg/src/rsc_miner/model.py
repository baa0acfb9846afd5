"""Shared domain types: interned items, utility-annotated sequences, exact thresholds and rules."""

import logging
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple

from returns.result import Failure, Result, Success

logger = logging.getLogger(__name__)

MAX_UTILITY = 2**64 - 1


class InvariantViolation(AssertionError):
    """Raised when an internal invariant of the miner is broken. Always a bug."""


class UtilityOverflow(ValueError):
    pass


def checked_add(total: int, value: int) -> int:
    total += value
    if total > MAX_UTILITY:
        raise UtilityOverflow(f"utility sum {total} exceeds 64-bit range")
    return total


@dataclass(frozen=True, slots=True)
class ItemId:
    id: int
    token: str

    def __str__(self) -> str:
        return self.token


class ItemDictionary:
    """Bijective token <-> dense id interning, ids handed out in first-appearance order."""

    def __init__(self):
        self._by_token: dict[str, ItemId] = {}
        self._by_id: list[ItemId] = []

    def intern(self, token: str) -> ItemId:
        try:
            return self._by_token[token]
        except KeyError:
            item = ItemId(len(self._by_id), token)
            self._by_token[token] = item
            self._by_id.append(item)
            return item

    def lookup(self, token: str) -> ItemId | None:
        return self._by_token.get(token)

    def __getitem__(self, item_id: int) -> ItemId:
        return self._by_id[item_id]

    def token(self, item_id: int) -> str:
        return self._by_id[item_id].token

    def __len__(self) -> int:
        return len(self._by_id)

    def __iter__(self) -> Iterator[ItemId]:
        return iter(self._by_id)


class Event(NamedTuple):
    item: int
    utility: int


@dataclass(frozen=True, slots=True)
class Sequence:
    sid: int
    events: tuple[Event, ...]

    def __len__(self) -> int:
        return len(self.events)

    @property
    def utility(self) -> int:
        return sum(e.utility for e in self.events)

    @property
    def items(self) -> set[int]:
        return {e.item for e in self.events}


@dataclass(frozen=True, slots=True)
class SequenceDatabase:
    sequences: tuple[Sequence, ...]
    items: ItemDictionary = field(compare=False)
    total_utility: int = 0

    @classmethod
    def build(cls, sequences: Iterable[Sequence], items: ItemDictionary) -> "SequenceDatabase":
        sequences = tuple(sequences)
        total = 0
        for sequence in sequences:
            for event in sequence.events:
                total = checked_add(total, event.utility)
        return cls(sequences, items, total)

    def replace_sequences(self, sequences: Iterable[Sequence]) -> "SequenceDatabase":
        return SequenceDatabase.build(sequences, self.items)

    def __len__(self) -> int:
        return len(self.sequences)

    def __iter__(self) -> Iterator[Sequence]:
        return iter(self.sequences)

    @property
    def distinct_items(self) -> set[int]:
        found = set()
        for sequence in self.sequences:
            found.update(sequence.items)
        return found

    def by_sid(self) -> dict[int, Sequence]:
        return {s.sid: s for s in self.sequences}


@dataclass(frozen=True, slots=True)
class Threshold:
    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError(f"threshold denominator must be positive, got {self.denominator}")
        if self.numerator < 0:
            raise ValueError(f"threshold must be non-negative, got {self.numerator}")

    @classmethod
    def from_decimal(cls, text: str) -> Result["Threshold", str]:
        try:
            value = Decimal(text.strip())
        except InvalidOperation:
            return Failure(f"'{text}' is not a decimal number")
        if not value.is_finite() or value < 0:
            return Failure(f"'{text}' must be a finite non-negative decimal")

        _, digits, exponent = value.as_tuple()
        numerator = int("".join(map(str, digits)) or "0")
        if exponent >= 0:
            return Success(cls(numerator * 10**exponent, 1))
        return Success(cls(numerator, 10 ** (-exponent)))

    def scaled(self, factor: int) -> "Threshold":
        return Threshold(self.numerator * factor, self.denominator)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __str__(self) -> str:
        if self.denominator == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"


def compare_at_least(value: int, threshold: Threshold) -> bool:
    return value * threshold.denominator >= threshold.numerator


def confidence_at_least(sup: int, ant_sup: int, minconf: Threshold) -> bool:
    return sup * minconf.denominator >= ant_sup * minconf.numerator


@dataclass(frozen=True, slots=True)
class Rule:
    antecedent: tuple[ItemId, ...]
    consequent: tuple[ItemId, ...]
    utility: int
    support: int
    antecedent_support: int

    @property
    def confidence(self) -> Fraction:
        return Fraction(self.support, self.antecedent_support)

    @property
    def key(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        return (
            tuple(i.token for i in self.antecedent),
            tuple(i.token for i in self.consequent),
        )

    def __str__(self) -> str:
        ant = ",".join(i.token for i in self.antecedent)
        con = ",".join(i.token for i in self.consequent)
        return f"{{{ant}}} -> {{{con}}}"


def sort_rules(rules: Iterable[Rule]) -> list[Rule]:
    return sorted(rules, key=lambda r: (-r.utility, r.key))
