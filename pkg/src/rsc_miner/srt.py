"""Sequence record table: one row per prefix length of the current search path."""

import logging
from collections.abc import Callable
from dataclasses import dataclass

from rsc_miner.model import InvariantViolation
from rsc_miner.ult import NO_NODE, UtilityLinkedTable

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class SeqOccurrences:
    seq_index: int
    sid: int
    # every end position of the prefix, (pos, best prefix utility) sorted by ascending pos
    entries: tuple[tuple[int, int], ...]
    best_utility: int

    @property
    def frontier(self) -> int:
        return self.entries[0][0]


@dataclass(frozen=True, slots=True)
class SrtRow:
    item: int
    occurrences: tuple[SeqOccurrences, ...]
    support: int
    # sum over sequences of best_utility
    until_utility: int
    rrs: int


@dataclass(frozen=True, slots=True)
class Extension:
    item: int
    rrs: int
    row: SrtRow | None


class SequenceRecordTable:
    def __init__(self):
        self._rows: list[SrtRow] = []
        self._items: set[int] = set()

    @property
    def rows(self) -> list[SrtRow]:
        return self._rows

    @property
    def items(self) -> list[int]:
        return [row.item for row in self._rows]

    @property
    def item_set(self) -> frozenset[int]:
        return frozenset(self._items)

    @property
    def supports(self) -> list[int]:
        return [row.support for row in self._rows]

    @property
    def last(self) -> SrtRow:
        return self._rows[-1]

    def __len__(self) -> int:
        return len(self._rows)

    def __contains__(self, item: int) -> bool:
        return item in self._items

    def push_row(self, row: SrtRow) -> "SequenceRecordTable":
        if row.item in self._items:
            raise InvariantViolation(f"item {row.item} already in prefix {self.items}")
        if self._rows and row.support > self._rows[-1].support:
            raise InvariantViolation(
                f"support {row.support} exceeds previous row support {self._rows[-1].support}"
            )
        if row.support != len(row.occurrences) or row.support < 1:
            raise InvariantViolation(f"row support {row.support} does not match its occurrences")
        self._rows.append(row)
        self._items.add(row.item)
        return self

    def pop_row(self) -> "SequenceRecordTable":
        if not self._rows:
            raise InvariantViolation("pop from an empty sequence record table")
        row = self._rows.pop()
        self._items.discard(row.item)
        return self

    def __repr__(self):
        return f"{type(self).__name__}({self.items})"


def init_row(ult: UtilityLinkedTable, item: int) -> SrtRow:
    """First row of a path: every occurrence of ``item``, RRS = the item's RRU sum."""
    header = ult.header(item)
    if header is None:
        raise InvariantViolation(f"item {item} has no header in the utility-linked table")

    # the same-item chain visits occurrences grouped by sequence, in position order
    grouped: dict[int, list[tuple[int, int]]] = {}
    node = header.first_node
    while node != NO_NODE:
        grouped.setdefault(ult.seq_index[node], []).append((ult.pos[node], ult.utility[node]))
        node = ult.next_same_item[node]

    occurrences = tuple(
        SeqOccurrences(
            seq_index,
            ult.seq_sids[seq_index],
            tuple(entries),
            max(utility for _, utility in entries),
        )
        for seq_index, entries in grouped.items()
    )
    until_utility = sum(occ.best_utility for occ in occurrences)
    return SrtRow(item, occurrences, len(occurrences), until_utility, header.rru_sum)


def _extension_bounds(ult: UtilityLinkedTable, srt: SequenceRecordTable) -> dict[int, int]:
    item_of, rru_of = ult.item, ult.rru
    prefix = srt.item_set
    rrs: dict[int, int] = {}

    for occ in srt.last.occurrences:
        start = ult.seq_start[occ.seq_index]
        end = ult.seq_end[occ.seq_index]
        entries = occ.entries
        prefix_best = entries[0][1]
        cursor = 1
        next_node = start + entries[1][0] - 1 if len(entries) > 1 else end
        seq_bound: dict[int, int] = {}

        for node in range(start + occ.frontier, end):
            while next_node < node:
                if entries[cursor][1] > prefix_best:
                    prefix_best = entries[cursor][1]
                cursor += 1
                next_node = start + entries[cursor][0] - 1 if cursor < len(entries) else end
            item = item_of[node]
            if item in prefix:
                continue
            bound = prefix_best + rru_of[node]
            if bound > seq_bound.get(item, -1):
                seq_bound[item] = bound

        for item, bound in seq_bound.items():
            rrs[item] = rrs.get(item, 0) + bound

    return rrs


def _extension_rows(
    ult: UtilityLinkedTable, srt: SequenceRecordTable, bounds: dict[int, int]
) -> dict[int, SrtRow]:
    item_of, utility_of = ult.item, ult.utility
    occurrences: dict[int, list[SeqOccurrences]] = {item: [] for item in bounds}
    until: dict[int, int] = dict.fromkeys(bounds, 0)

    for occ in srt.last.occurrences:
        start = ult.seq_start[occ.seq_index]
        end = ult.seq_end[occ.seq_index]
        entries = occ.entries
        prefix_best = entries[0][1]
        cursor = 1
        next_node = start + entries[1][0] - 1 if len(entries) > 1 else end
        found: dict[int, list[tuple[int, int]]] = {}
        best: dict[int, int] = {}

        for node in range(start + occ.frontier, end):
            while next_node < node:
                if entries[cursor][1] > prefix_best:
                    prefix_best = entries[cursor][1]
                cursor += 1
                next_node = start + entries[cursor][0] - 1 if cursor < len(entries) else end
            item = item_of[node]
            if item not in bounds:
                continue
            value = utility_of[node] + prefix_best
            item_entries = found.get(item)
            if item_entries is None:
                found[item] = [(node - start + 1, value)]
                best[item] = value
            else:
                item_entries.append((node - start + 1, value))
                if value > best[item]:
                    best[item] = value

        for item, item_entries in found.items():
            occurrences[item].append(
                SeqOccurrences(occ.seq_index, occ.sid, tuple(item_entries), best[item])
            )
            until[item] += best[item]

    return {
        item: SrtRow(item, tuple(occurrences[item]), len(occurrences[item]), until[item], rrs)
        for item, rrs in bounds.items()
    }


def scan_extensions(
    ult: UtilityLinkedTable,
    srt: SequenceRecordTable,
    gate: Callable[[int], bool] | None = None,
) -> list[Extension]:
    """All items extending the current prefix with their RRS, in discovery order.

    For every supporting sequence the scan starts right after the earliest end position of the
    prefix. A position ``q`` bearing candidate ``c`` gets best utility
    ``u(c@q) + max{best(p) : p < q}`` and contributes ``max{best(p) : p < q} + RRU(q)`` to
    the per-sequence RRS maximum. Rows are built only for items whose RRS passes ``gate``;
    rejected extensions carry ``row=None``.
    """
    if not len(srt):
        raise InvariantViolation("cannot extend an empty sequence record table")

    bounds = _extension_bounds(ult, srt)
    admitted = {item: rrs for item, rrs in bounds.items() if gate is None or gate(rrs)}
    rows = _extension_rows(ult, srt, admitted) if admitted else {}
    return [Extension(item, rrs, rows.get(item)) for item, rrs in bounds.items()]


def push_row(srt: SequenceRecordTable, row: SrtRow) -> SequenceRecordTable:
    return srt.push_row(row)


def pop_row(srt: SequenceRecordTable) -> SequenceRecordTable:
    return srt.pop_row()
