import bisect
import dataclasses
import logging
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from rsc_miner.bounds import prune_unpromising
from rsc_miner.dataset_io.preprocess import dedup_max_utility
from rsc_miner.model import (
    Rule,
    SequenceDatabase,
    Threshold,
    compare_at_least,
    confidence_at_least,
)
from rsc_miner.srt import (
    SequenceRecordTable,
    SrtRow,
    init_row,
    pop_row,
    push_row,
    scan_extensions,
)
from rsc_miner.ult import UtilityLinkedTable, build_ult
from rsc_miner.variant import Variant

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class MiningConfig:
    minutil: Threshold
    minconf: Threshold
    use_seu_prune: bool = True
    use_rrs_prune: bool = True
    use_rru: bool = True
    dedup: bool = False
    max_prefix_len: int | None = None
    gate_top_level: bool = True
    literal_seu: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.minconf.numerator == 0 or self.minconf.numerator > self.minconf.denominator:
            raise ValueError(f"minconf must lie in (0, 1], got {self.minconf}")
        if self.max_prefix_len is not None and self.max_prefix_len < 1:
            raise ValueError(f"max_prefix_len must be positive, got {self.max_prefix_len}")
        if self.threads < 1:
            raise ValueError(f"threads must be positive, got {self.threads}")

    def for_variant(self, variant: Variant) -> "MiningConfig":
        return dataclasses.replace(
            self,
            use_seu_prune=variant.use_seu_prune,
            use_rrs_prune=variant.use_rrs_prune,
            use_rru=variant.use_rru,
        )


@dataclass(slots=True)
class MiningStats:
    sequences: int = 0
    distinct_items: int = 0
    items_after_pruning: int = 0
    minutil: Threshold = field(default_factory=lambda: Threshold(0))
    candidates: int = 0
    rules: int = 0
    srt_growth_calls: int = 0
    rrs_prunes: int = 0
    runtime_ms: int = 0

    def absorb(self, other: "MiningStats"):
        self.candidates += other.candidates
        self.rules += other.rules
        self.srt_growth_calls += other.srt_growth_calls
        self.rrs_prunes += other.rrs_prunes

    def items(self) -> list[tuple[str, object]]:
        return [
            ("sequences", self.sequences),
            ("distinct_items", self.distinct_items),
            ("items_after_pruning", self.items_after_pruning),
            ("minutil_num", self.minutil.numerator),
            ("minutil_den", self.minutil.denominator),
            ("candidates", self.candidates),
            ("rules", self.rules),
            ("srtgrowth_calls", self.srt_growth_calls),
            ("rrs_prunes", self.rrs_prunes),
            ("runtime_ms", self.runtime_ms),
        ]


class RuleSink:
    """Collects the rules and counters of one top-level item."""

    def __init__(self, ult: UtilityLinkedTable):
        self._ult = ult
        self.rules: list[Rule] = []
        self.stats = MiningStats()

    def emit(self, items: list[int], cut: int, utility: int, support: int, antecedent_support: int):
        dictionary = self._ult.items
        self.rules.append(
            Rule(
                antecedent=tuple(dictionary[i] for i in items[:cut]),
                consequent=tuple(dictionary[i] for i in items[cut:]),
                utility=utility,
                support=support,
                antecedent_support=antecedent_support,
            )
        )
        self.stats.rules += 1


def minutil_from_delta(db: SequenceDatabase, delta: Threshold) -> Threshold:
    """minutil = delta * u(D), kept as an exact rational."""
    return delta.scaled(db.total_utility)


def find_cut_start(supports: list[int], sup_n: int, minconf: Threshold) -> int:
    """Smallest 1-based k with sup_n / supports[k] >= minconf.

    Supports are non-increasing along a path, so the predicate flips from false to true once.
    """
    index = bisect.bisect_left(
        range(len(supports)),
        True,
        key=lambda k: confidence_at_least(sup_n, supports[k], minconf),
    )
    return index + 1


def rule_produce(srt: SequenceRecordTable, cfg: MiningConfig, sink: RuleSink) -> None:
    n = len(srt)
    if n < 2:
        return
    last = srt.last
    supports = srt.supports
    if not compare_at_least(last.until_utility, cfg.minutil):
        return
    if not confidence_at_least(last.support, supports[n - 2], cfg.minconf):
        return

    k = find_cut_start(supports, last.support, cfg.minconf)
    items = srt.items
    for cut in range(k, n):
        sink.emit(items, cut, last.until_utility, last.support, supports[cut - 1])


def _rrs_gate(cfg: MiningConfig, enabled: bool = True) -> Callable[[int], bool] | None:
    if not (enabled and cfg.use_rrs_prune):
        return None
    return lambda rrs: compare_at_least(rrs, cfg.minutil)


def _grow_extensions(
    ult: UtilityLinkedTable,
    srt: SequenceRecordTable,
    cfg: MiningConfig,
    sink: RuleSink,
    gate: Callable[[int], bool] | None,
) -> None:
    for extension in scan_extensions(ult, srt, gate):
        if extension.row is None:
            sink.stats.rrs_prunes += 1
            continue
        srt_growth(ult, srt, extension.row, cfg, sink)


def srt_growth(
    ult: UtilityLinkedTable,
    srt: SequenceRecordTable,
    row: SrtRow,
    cfg: MiningConfig,
    sink: RuleSink,
) -> None:
    sink.stats.srt_growth_calls += 1
    push_row(srt, row)
    sink.stats.candidates += 1

    rule_produce(srt, cfg, sink)

    if cfg.max_prefix_len is None or len(srt) < cfg.max_prefix_len:
        _grow_extensions(ult, srt, cfg, sink, _rrs_gate(cfg))

    pop_row(srt)


def mine_item(ult: UtilityLinkedTable, item: int, cfg: MiningConfig) -> RuleSink:
    """Depth-first search of every candidate sequence starting with ``item``."""
    sink = RuleSink(ult)
    srt = SequenceRecordTable()
    push_row(srt, init_row(ult, item))

    if cfg.max_prefix_len is None or cfg.max_prefix_len > 1:
        _grow_extensions(ult, srt, cfg, sink, _rrs_gate(cfg, cfg.gate_top_level))

    pop_row(srt)
    return sink


class Miner:
    def __init__(self, cfg: MiningConfig):
        self._cfg = cfg

    @property
    def cfg(self) -> MiningConfig:
        return self._cfg

    def prepare(self, db: SequenceDatabase) -> UtilityLinkedTable:
        cfg = self._cfg
        if cfg.dedup:
            db = dedup_max_utility(db)
        if cfg.use_seu_prune:
            db = prune_unpromising(db, cfg.minutil, cfg.literal_seu)
        return build_ult(db, use_rru=cfg.use_rru, literal_seu=cfg.literal_seu)

    def mine(self, db: SequenceDatabase) -> tuple[list[Rule], MiningStats]:
        started = time.perf_counter()
        cfg = self._cfg
        stats = MiningStats(
            sequences=len(db),
            distinct_items=len(db.distinct_items),
            minutil=cfg.minutil,
        )

        ult = self.prepare(db)
        stats.items_after_pruning = len(ult.headers)
        items = [header.item for header in ult.headers]

        if cfg.threads > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
                # map keeps header order, so output equals the single-threaded run
                sinks = list(pool.map(lambda item: mine_item(ult, item, cfg), items))
        else:
            sinks = [mine_item(ult, item, cfg) for item in items]

        rules: list[Rule] = []
        for sink in sinks:
            rules.extend(sink.rules)
            stats.absorb(sink.stats)

        stats.runtime_ms = int((time.perf_counter() - started) * 1000)
        logger.info(
            f"Mined {stats.rules} rules from {stats.candidates} candidates in {stats.runtime_ms} ms"
        )
        return rules, stats


def mine(db: SequenceDatabase, cfg: MiningConfig) -> tuple[list[Rule], MiningStats]:
    return Miner(cfg).mine(db)
