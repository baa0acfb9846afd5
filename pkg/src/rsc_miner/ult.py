"""Utility-linked table: a header table plus one contiguous node array."""

import logging
from dataclasses import dataclass
from typing import Iterator

from rsc_miner.bounds import remaining_utilities, sequence_seu_term
from rsc_miner.model import ItemDictionary, SequenceDatabase

logger = logging.getLogger(__name__)

NO_NODE = -1


@dataclass(frozen=True, slots=True)
class UltNode:
    index: int
    sid: int
    pos: int
    item: int
    utility: int
    rru: int
    next_in_sequence: int | None
    next_same_item: int | None


@dataclass(frozen=True, slots=True)
class UltHeader:
    item: int
    seu: int
    rru_sum: int
    first_node: int


class UtilityLinkedTable:
    def __init__(self, items: ItemDictionary):
        self._items = items

        # node arrays indexed by node index, each sequence a contiguous run
        self.sid: list[int] = []
        self.seq_index: list[int] = []
        self.pos: list[int] = []
        self.item: list[int] = []
        self.utility: list[int] = []
        self.rru: list[int] = []
        self.next_in_sequence: list[int] = []
        self.next_same_item: list[int] = []

        # per sequence (0-based sequence index)
        self.seq_sids: list[int] = []
        self.seq_start: list[int] = []
        self.seq_end: list[int] = []

        self._headers: list[UltHeader] = []
        self._header_by_item: dict[int, UltHeader] = {}

    @property
    def items(self) -> ItemDictionary:
        return self._items

    @property
    def headers(self) -> list[UltHeader]:
        return self._headers

    def header(self, item: int) -> UltHeader | None:
        return self._header_by_item.get(item)

    @property
    def node_count(self) -> int:
        return len(self.item)

    @property
    def sequence_count(self) -> int:
        return len(self.seq_sids)

    def node(self, index: int) -> UltNode:
        nis = self.next_in_sequence[index]
        nsi = self.next_same_item[index]
        return UltNode(
            index=index,
            sid=self.sid[index],
            pos=self.pos[index],
            item=self.item[index],
            utility=self.utility[index],
            rru=self.rru[index],
            next_in_sequence=None if nis == NO_NODE else nis,
            next_same_item=None if nsi == NO_NODE else nsi,
        )

    def node_at(self, seq_index: int, pos: int) -> int:
        return self.seq_start[seq_index] + pos - 1

    def scan_forward(self, start: int) -> Iterator[UltNode]:
        """Nodes of the same sequence after ``start``, in position order."""
        index = self.next_in_sequence[start]
        while index != NO_NODE:
            yield self.node(index)
            index = self.next_in_sequence[index]

    def occurrences_of(self, item: int) -> Iterator[UltNode]:
        header = self._header_by_item.get(item)
        if header is None:
            return
        index = header.first_node
        while index != NO_NODE:
            yield self.node(index)
            index = self.next_same_item[index]

    def __repr__(self):
        return f"{type(self).__name__}({self.sequence_count} sequences, {self.node_count} nodes, {len(self._headers)} items)"


def build_ult(
    db: SequenceDatabase, use_rru: bool = True, literal_seu: bool = False
) -> UtilityLinkedTable:
    """Single forward scan over the (already pruned) database.

    With ``use_rru`` disabled the node bound is RU instead of RRU, which is how the RU
    ablation reaches every bound role.
    """
    ult = UtilityLinkedTable(db.items)
    last_node: dict[int, int] = {}
    first_node: dict[int, int] = {}
    seu: dict[int, int] = {}
    rru_sum: dict[int, int] = {}

    for seq_index, sequence in enumerate(db):
        start = ult.node_count
        ult.seq_sids.append(sequence.sid)
        ult.seq_start.append(start)
        ult.seq_end.append(start + len(sequence))

        seu_term = sequence_seu_term(sequence, literal_seu)
        best_rru: dict[int, int] = {}
        bounds = remaining_utilities(sequence, use_rru)

        for offset, (event, bound) in enumerate(zip(sequence.events, bounds)):
            index = start + offset
            ult.sid.append(sequence.sid)
            ult.seq_index.append(seq_index)
            ult.pos.append(offset + 1)
            ult.item.append(event.item)
            ult.utility.append(event.utility)
            ult.rru.append(bound)
            ult.next_in_sequence.append(index + 1 if offset + 1 < len(sequence) else NO_NODE)
            ult.next_same_item.append(NO_NODE)

            previous = last_node.get(event.item)
            if previous is None:
                first_node[event.item] = index
            else:
                ult.next_same_item[previous] = index
            last_node[event.item] = index

            if bound > best_rru.get(event.item, -1):
                best_rru[event.item] = bound

        for item, bound in best_rru.items():
            seu[item] = seu.get(item, 0) + seu_term
            rru_sum[item] = rru_sum.get(item, 0) + bound

    # first_node is filled in first-appearance order
    for item, node in first_node.items():
        header = UltHeader(item, seu[item], rru_sum[item], node)
        ult._headers.append(header)
        ult._header_by_item[item] = header

    logger.debug(f"Built {ult!r}")
    return ult
