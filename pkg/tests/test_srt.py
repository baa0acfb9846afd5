import pytest

from rsc_miner.model import InvariantViolation
from rsc_miner.srt import (
    SeqOccurrences,
    SequenceRecordTable,
    SrtRow,
    init_row,
    pop_row,
    push_row,
    scan_extensions,
)
from rsc_miner.ult import build_ult


def _extension(ult, srt, item):
    return next(e for e in scan_extensions(ult, srt) if e.item == item)


def _row(item, support, until_utility=0):
    occurrences = tuple(SeqOccurrences(k, k + 1, ((1, 0),), 0) for k in range(support))
    return SrtRow(item, occurrences, support, until_utility, until_utility)


class TestSequenceRecordTable:
    def test_rows_of_the_worked_example(self, fig2_scope, item):
        # Arrange
        ult = build_ult(fig2_scope)
        srt = SequenceRecordTable()

        # Act
        push_row(srt, init_row(ult, item("a")))
        first = srt.last
        push_row(srt, _extension(ult, srt, item("c")).row)
        second = srt.last
        push_row(srt, _extension(ult, srt, item("f")).row)
        third = srt.last

        # Assert
        assert (first.support, first.until_utility, first.rrs) == (2, 3, 18)
        assert (second.support, second.until_utility, second.rrs) == (2, 8, 18)
        assert (third.support, third.until_utility, third.rrs) == (1, 14, 14)
        assert srt.items == [item("a"), item("c"), item("f")]
        assert srt.supports == [2, 2, 1]

    def test_rows_keep_every_end_position(self, fig2_scope, item):
        # Arrange
        ult = build_ult(fig2_scope)
        srt = push_row(SequenceRecordTable(), init_row(ult, item("a")))

        # Act
        row = _extension(ult, srt, item("c")).row

        # Assert
        s1 = row.occurrences[0]
        assert (s1.sid, s1.entries) == (1, ((2, 3), (3, 4)))
        assert s1.frontier == 2
        assert s1.best_utility == 4

    def test_extensions_in_first_encounter_order(self, fig2_scope, item):
        # Arrange
        ult = build_ult(fig2_scope)
        srt = push_row(SequenceRecordTable(), init_row(ult, item("a")))

        # Act
        extensions = scan_extensions(ult, srt)

        # Assert
        assert [(e.item, e.rrs, e.row.until_utility) for e in extensions] == [
            (item("c"), 18, 8),
            (item("f"), 12, 12),
        ]

    def test_rrs_on_the_full_database(self, table1, item):
        # Arrange
        ult = build_ult(table1)
        srt = push_row(SequenceRecordTable(), init_row(ult, item("a")))

        # Act
        with_c = _extension(ult, srt, item("c"))
        push_row(srt, _extension(ult, srt, item("b")).row)
        after_b = _extension(ult, srt, item("c"))

        # Assert
        assert with_c.rrs == 26
        assert after_b.rrs == 14

    def test_pop_restores_the_previous_prefix(self, fig2_scope, item):
        # Arrange
        ult = build_ult(fig2_scope)
        srt = push_row(SequenceRecordTable(), init_row(ult, item("a")))
        push_row(srt, _extension(ult, srt, item("c")).row)

        # Act
        pop_row(srt)

        # Assert
        assert srt.items == [item("a")]
        assert item("c") not in srt
        assert item("c") in [e.item for e in scan_extensions(ult, srt)]

    def test_gate_builds_rows_only_for_admitted_items(self, fig2_scope, item):
        # Arrange
        ult = build_ult(fig2_scope)
        srt = push_row(SequenceRecordTable(), init_row(ult, item("a")))

        # Act
        extensions = scan_extensions(ult, srt, lambda rrs: rrs >= 15)

        # Assert
        assert [(e.item, e.rrs) for e in extensions] == [(item("c"), 18), (item("f"), 12)]
        assert extensions[0].row == _extension(ult, srt, item("c")).row
        assert extensions[1].row is None

    def test_gate_rejecting_everything_keeps_the_bounds(self, table1, item):
        # Arrange
        ult = build_ult(table1)
        srt = push_row(SequenceRecordTable(), init_row(ult, item("a")))

        # Act
        extensions = scan_extensions(ult, srt, lambda rrs: False)

        # Assert
        assert all(e.row is None for e in extensions)
        assert [(e.item, e.rrs) for e in extensions] == [
            (e.item, e.rrs) for e in scan_extensions(ult, srt)
        ]

    @pytest.mark.parametrize("seed", range(40))
    def test_gated_rows_match_ungated_rows(self, random_db, seed):
        # Arrange
        ult = build_ult(random_db(seed))

        for header in ult.headers:
            srt = push_row(SequenceRecordTable(), init_row(ult, header.item))
            full = scan_extensions(ult, srt)
            threshold = sorted(e.rrs for e in full)[len(full) // 2] if full else 0

            # Act
            gated = scan_extensions(ult, srt, lambda rrs: rrs >= threshold)

            # Assert
            assert [(e.item, e.rrs) for e in gated] == [(e.item, e.rrs) for e in full]
            for kept, reference in zip(gated, full):
                expected = reference.row if reference.rrs >= threshold else None
                assert kept.row == expected
                if kept.row is not None:
                    for occ in kept.row.occurrences:
                        assert occ.best_utility == max(best for _, best in occ.entries)


class TestSrtInvariants:
    def test_push_rejects_repeated_item(self):
        # Arrange
        srt = push_row(SequenceRecordTable(), _row(0, 2))

        # Act / Assert
        with pytest.raises(InvariantViolation):
            push_row(srt, _row(0, 1))

    def test_push_rejects_support_increase(self):
        # Arrange
        srt = push_row(SequenceRecordTable(), _row(0, 1))

        # Act / Assert
        with pytest.raises(InvariantViolation):
            push_row(srt, _row(1, 2))

    def test_push_rejects_support_mismatch(self):
        # Arrange
        row = SrtRow(0, (), 1, 0, 0)

        # Act / Assert
        with pytest.raises(InvariantViolation):
            push_row(SequenceRecordTable(), row)

    def test_pop_and_scan_reject_an_empty_table(self, fig2_scope):
        # Arrange
        ult = build_ult(fig2_scope)

        # Act / Assert
        with pytest.raises(InvariantViolation):
            pop_row(SequenceRecordTable())
        with pytest.raises(InvariantViolation):
            scan_extensions(ult, SequenceRecordTable())

    def test_init_row_requires_a_header(self, fig2_scope, item):
        # Arrange
        ult = build_ult(fig2_scope)

        # Act / Assert
        with pytest.raises(InvariantViolation):
            init_row(ult, item("d"))
