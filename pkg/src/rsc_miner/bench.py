"""Ablation benchmark: run miner variants over a threshold grid and compare them."""

import dataclasses
import logging
import statistics
from dataclasses import dataclass
from typing import TextIO

import psutil
from returns.result import Failure, Result, Success

from rsc_miner.dataset_io.writers import write_pairs
from rsc_miner.miner import MiningConfig, MiningStats, Miner, minutil_from_delta
from rsc_miner.model import SequenceDatabase, Threshold
from rsc_miner.variant import Variant

logger = logging.getLogger(__name__)

LOG_MESSAGES = {
    "mismatch": "Rule sets differ between %s and %s at minutil=%s minconf=%s",
}


@dataclass(frozen=True, slots=True)
class GridPoint:
    label: str
    minutil: Threshold
    minconf: Threshold


@dataclass(frozen=True, slots=True)
class BenchRow:
    point: GridPoint
    variant: Variant
    stats: MiningStats
    median_runtime_ms: float
    rss_mib: float

    def items(self) -> list[tuple[str, object]]:
        return [
            ("variant", self.variant.value),
            ("threshold", self.point.label),
            ("minutil", str(self.point.minutil)),
            ("minconf", str(self.point.minconf)),
            ("candidates", self.stats.candidates),
            ("srtgrowth_calls", self.stats.srt_growth_calls),
            ("rrs_prunes", self.stats.rrs_prunes),
            ("rules", self.stats.rules),
            ("median_runtime_ms", f"{self.median_runtime_ms:.1f}"),
            # implementation dependent, whole-process resident set size
            ("rss_mib", f"{self.rss_mib:.1f}"),
        ]


def grid(
    db: SequenceDatabase,
    deltas: list[Threshold] | None,
    minutils: list[Threshold] | None,
    minconfs: list[Threshold],
) -> list[GridPoint]:
    points = []
    for minconf in minconfs:
        if deltas is not None:
            for delta in deltas:
                points.append(GridPoint(f"delta={delta}", minutil_from_delta(db, delta), minconf))
        for minutil in minutils or []:
            points.append(GridPoint(f"minutil={minutil}", minutil, minconf))
    return points


def _resident_mib() -> float:
    try:
        return psutil.Process().memory_info().rss / (1024 * 1024)
    except psutil.Error:
        return float("nan")


def run_bench(
    db: SequenceDatabase,
    points: list[GridPoint],
    variants: list[Variant],
    repeat: int,
    base: MiningConfig | None = None,
) -> Result[list[BenchRow], str]:
    """Every variant at every grid point; fails if any two variants disagree on the rule set."""
    rows: list[BenchRow] = []
    for point in points:
        reference: frozenset | None = None
        for variant in variants:
            if base is None:
                cfg = MiningConfig(point.minutil, point.minconf)
            else:
                cfg = dataclasses.replace(base, minutil=point.minutil, minconf=point.minconf)
            miner = Miner(cfg.for_variant(variant))

            runtimes = []
            for _ in range(repeat):
                rules, stats = miner.mine(db)
                runtimes.append(stats.runtime_ms)

            keys = frozenset((r.key, r.utility, r.support, r.antecedent_support) for r in rules)
            if reference is None:
                reference = keys
            elif keys != reference:
                msg = LOG_MESSAGES["mismatch"] % (
                    variants[0].value,
                    variant.value,
                    point.minutil,
                    point.minconf,
                )
                logger.error(msg)
                return Failure(msg)

            rows.append(
                BenchRow(point, variant, stats, statistics.median(runtimes), _resident_mib())
            )
            logger.debug(f"{point.label} {variant.value}: {stats.candidates} candidates")
    return Success(rows)


def write_table(rows: list[BenchRow], stream: TextIO) -> None:
    if not rows:
        return
    header = [key for key, _ in rows[0].items()]
    cells = [[str(value) for _, value in row.items()] for row in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(header)]
    stream.write("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip() + "\n")
    for line in cells:
        stream.write("  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() + "\n")


def write_blocks(rows: list[BenchRow], stream: TextIO) -> None:
    for row in rows:
        stream.write("\n")
        write_pairs(row.items(), stream)
