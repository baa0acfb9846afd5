import argparse
import dataclasses
import enum
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, TextIO

from returns.pipeline import flow
from returns.pointfree import bind
from returns.result import Failure, Result, Success

from rsc_miner.bench import grid, run_bench, write_blocks, write_table
from rsc_miner.config import Conf, config
from rsc_miner.datagen import PRESETS, GenParams, generate
from rsc_miner.dataset_io.features import database_features
from rsc_miner.dataset_io.parsers import DatasetFormat, load_database
from rsc_miner.dataset_io.preprocess import dedup_max_utility
from rsc_miner.dataset_io.writers import (
    format_rule,
    write_native,
    write_pairs,
    write_rules,
    write_stats,
)
from rsc_miner.miner import MiningConfig, mine, minutil_from_delta
from rsc_miner.model import (
    InvariantViolation,
    Rule,
    SequenceDatabase,
    Threshold,
    sort_rules,
)
from rsc_miner.oracle import OracleConfig, OracleMiner
from rsc_miner.variant import Variant

logger = logging.getLogger(__name__)

LOG_MESSAGES = {
    "mutually_exclusive": "mutually exclusive flags: --delta and --minutil",
    "threshold_missing": "one of --delta or --minutil is required",
    "minconf_range": "minconf must lie in (0, 1], got %s",
    "resolved": "Resolved configuration: %s",
    "verify_ok": "Miner and oracle agree on %d rules",
    "verify_diff": "Miner and oracle disagree: %d rules only in miner, %d only in oracle",
    "cap_hit": "Oracle length cap hit; raise --max-len to verify this input",
}


class ExitCode(enum.IntEnum):
    OK = 0
    FAILURE = 1
    USAGE = 2
    ORACLE_CAP = 3


@contextmanager
def _output(path: str | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        yield f


def _usage_error(msg: str) -> int:
    logger.error(msg)
    print(f"error: {msg}", file=sys.stderr)
    return ExitCode.USAGE


def _parse_thresholds(text: str) -> Result[list[Threshold], str]:
    values = []
    for part in text.split(","):
        match Threshold.from_decimal(part):
            case Success(value):
                values.append(value)
            case Failure(msg):
                return Failure(msg)
    return Success(values)


def _check_minconf(minconf: Threshold) -> Result[Threshold, str]:
    if minconf.numerator == 0 or minconf.numerator > minconf.denominator:
        return Failure(LOG_MESSAGES["minconf_range"] % minconf)
    return Success(minconf)


def _minconf(args: argparse.Namespace) -> Result[Threshold, str]:
    return flow(
        Threshold.from_decimal(args.minconf or config[Conf.DEFAULT_MINCONF]),
        bind(_check_minconf),
    )


def _check_threshold_flags(args: argparse.Namespace) -> Result[None, str]:
    if args.delta is not None and args.minutil is not None:
        return Failure(LOG_MESSAGES["mutually_exclusive"])
    if args.delta is None and args.minutil is None:
        return Failure(LOG_MESSAGES["threshold_missing"])
    return Success(None)


def _minutil(args: argparse.Namespace, db: SequenceDatabase) -> Result[Threshold, str]:
    """minutil from --delta is scaled by u(D) of the database as loaded, before any preprocessing."""
    if args.delta is not None:
        return flow(
            Threshold.from_decimal(args.delta),
            bind(lambda delta: Success(minutil_from_delta(db, delta))),
        )
    return Threshold.from_decimal(args.minutil)


def _load(args: argparse.Namespace) -> Result[SequenceDatabase, str]:
    fmt = DatasetFormat(args.format) if args.format else None
    match load_database(Path(args.input), fmt):
        case Success(db):
            return Success(db)
        case Failure(diagnostics):
            return Failure(f"{args.input}: {diagnostics}")
    return Failure(f"{args.input}: unreadable")


def _mining_config(args: argparse.Namespace, db: SequenceDatabase) -> Result[MiningConfig, str]:
    match _check_threshold_flags(args):
        case Failure(msg):
            return Failure(msg)
    match (_minutil(args, db), _minconf(args)):
        case (Success(minutil), Success(minconf)):
            pass
        case (Failure(msg), _) | (_, Failure(msg)):
            return Failure(msg)

    try:
        cfg = MiningConfig(
            minutil=minutil,
            minconf=minconf,
            use_seu_prune=not getattr(args, "no_seu_prune", False),
            use_rrs_prune=not getattr(args, "no_rrs_prune", False),
            use_rru=not getattr(args, "use_ru", False),
            dedup=args.dedup,
            max_prefix_len=getattr(args, "max_prefix_len", None),
            gate_top_level=not args.no_top_gate,
            literal_seu=args.literal_seu,
            threads=args.threads,
        )
    except ValueError as e:
        return Failure(str(e))
    return Success(cfg)


def _echo(args: argparse.Namespace, cfg: object | None = None):
    resolved = {k: v for k, v in vars(args).items() if k != "func"}
    if cfg is not None:
        resolved["resolved"] = cfg
    logger.info(LOG_MESSAGES["resolved"], resolved)


def cmd_mine(args: argparse.Namespace) -> int:
    match _check_threshold_flags(args):
        case Failure(msg):
            return _usage_error(msg)

    match flow(_load(args), bind(lambda db: _mining_config(args, db).map(lambda c: (db, c)))):
        case Success((db, cfg)):
            pass
        case Failure(msg):
            return _usage_error(msg)
    _echo(args, cfg)

    try:
        rules, stats = mine(db, cfg)
    except InvariantViolation as e:
        logger.critical(f"Internal invariant violated: {e}")
        return ExitCode.FAILURE

    if args.sort:
        rules = sort_rules(rules)
    with _output(args.out) as out:
        write_rules(rules, out)
    if args.stats:
        with _output(args.stats) as out:
            write_stats(stats, out)
    for key, value in stats.items():
        logger.info("%s=%s", key, value)
    return ExitCode.OK


def cmd_oracle(args: argparse.Namespace) -> int:
    match _check_threshold_flags(args):
        case Failure(msg):
            return _usage_error(msg)
    match flow(_load(args), bind(lambda db: _mining_config(args, db).map(lambda c: (db, c)))):
        case Success((db, cfg)):
            pass
        case Failure(msg):
            return _usage_error(msg)
    if args.max_len < 2:
        return _usage_error(f"--max-len must be at least 2, got {args.max_len}")
    _echo(args, cfg)

    oracle_db = dedup_max_utility(db) if cfg.dedup else db
    oracle = OracleMiner(OracleConfig(cfg.minutil, cfg.minconf, args.max_len))
    rules = oracle.mine(oracle_db)
    with _output(args.out) as out:
        write_rules(rules, out)
    return ExitCode.ORACLE_CAP if oracle.cap_hit else ExitCode.OK


def _rule_identity(rule: Rule) -> tuple:
    return rule.key, rule.utility, rule.support, rule.antecedent_support


def cmd_verify(args: argparse.Namespace) -> int:
    match _check_threshold_flags(args):
        case Failure(msg):
            return _usage_error(msg)

    match flow(_load(args), bind(lambda db: _mining_config(args, db).map(lambda c: (db, c)))):
        case Success((db, cfg)):
            pass
        case Failure(msg):
            return _usage_error(msg)
    if args.max_len < 2:
        return _usage_error(f"--max-len must be at least 2, got {args.max_len}")
    _echo(args, cfg)

    try:
        mined, _ = mine(db, cfg)
    except InvariantViolation as e:
        logger.critical(f"Internal invariant violated: {e}")
        return ExitCode.FAILURE

    oracle_db = dedup_max_utility(db) if cfg.dedup else db
    oracle = OracleMiner(OracleConfig(cfg.minutil, cfg.minconf, args.max_len))
    expected = oracle.mine(oracle_db)

    mined_by_id = {_rule_identity(r): r for r in mined}
    expected_by_id = {_rule_identity(r): r for r in expected}
    only_mined = sorted(mined_by_id.keys() - expected_by_id.keys())
    only_oracle = sorted(expected_by_id.keys() - mined_by_id.keys())

    for identity in only_mined:
        print(f"+ {format_rule(mined_by_id[identity])}")
    for identity in only_oracle:
        print(f"- {format_rule(expected_by_id[identity])}")

    if oracle.cap_hit:
        logger.warning(LOG_MESSAGES["cap_hit"])
        return ExitCode.ORACLE_CAP
    if only_mined or only_oracle or len(mined) != len(mined_by_id):
        logger.error(LOG_MESSAGES["verify_diff"], len(only_mined), len(only_oracle))
        return ExitCode.FAILURE
    logger.info(LOG_MESSAGES["verify_ok"], len(expected))
    return ExitCode.OK


def cmd_bench(args: argparse.Namespace) -> int:
    match _check_threshold_flags(args):
        case Failure(msg):
            return _usage_error(msg)
    try:
        variants = [Variant(v.strip().lower()) for v in args.variants.split(",") if v.strip()]
    except ValueError as e:
        return _usage_error(str(e))
    if not variants:
        return _usage_error("--variants must name at least one variant")
    if args.repeat < 1:
        return _usage_error(f"--repeat must be positive, got {args.repeat}")

    match _load(args):
        case Success(db):
            pass
        case Failure(msg):
            return _usage_error(msg)

    deltas = minutils = None
    parsed = _parse_thresholds(args.delta if args.delta is not None else args.minutil)
    minconfs = flow(
        _parse_thresholds(args.minconf or config[Conf.DEFAULT_MINCONF]),
        bind(lambda values: _all_valid_minconf(values)),
    )
    match (parsed, minconfs):
        case (Success(values), Success(confs)):
            if args.delta is not None:
                deltas = values
            else:
                minutils = values
        case (Failure(msg), _) | (_, Failure(msg)):
            return _usage_error(msg)

    points = grid(db, deltas, minutils, confs)
    try:
        base = MiningConfig(
            minutil=points[0].minutil,
            minconf=points[0].minconf,
            dedup=args.dedup,
            gate_top_level=not args.no_top_gate,
            literal_seu=args.literal_seu,
            threads=args.threads,
        )
    except ValueError as e:
        return _usage_error(str(e))
    _echo(args, base)

    try:
        result = run_bench(db, points, variants, args.repeat, base)
    except InvariantViolation as e:
        logger.critical(f"Internal invariant violated: {e}")
        return ExitCode.FAILURE

    match result:
        case Success(rows):
            with _output(args.out) as out:
                write_table(rows, out)
                write_blocks(rows, out)
            return ExitCode.OK
        case Failure(msg):
            print(f"error: {msg}", file=sys.stderr)
            return ExitCode.FAILURE
    return ExitCode.FAILURE


def _all_valid_minconf(values: list[Threshold]) -> Result[list[Threshold], str]:
    for value in values:
        match _check_minconf(value):
            case Failure(msg):
                return Failure(msg)
    return Success(values)


_GEN_FLAGS = {
    "sequences": "num_sequences",
    "alphabet": "alphabet_size",
    "avg_length": "avg_length",
    "max_length": "max_length",
    "utility_min": "utility_min",
    "utility_max": "utility_max",
    "skew": "item_skew",
    "seed": "seed",
}


def cmd_gen(args: argparse.Namespace) -> int:
    params = PRESETS[args.preset] if args.preset else GenParams()
    overrides = {
        field: getattr(args, flag)
        for flag, field in _GEN_FLAGS.items()
        if getattr(args, flag) is not None
    }
    params = dataclasses.replace(params, **overrides)
    _echo(args, params)

    match params.validate():
        case Success(valid):
            db = generate(valid)
        case Failure(msg):
            return _usage_error(msg)

    with _output(args.out) as out:
        write_native(db, out)
    return ExitCode.OK


def cmd_stats(args: argparse.Namespace) -> int:
    match _load(args):
        case Success(db):
            pass
        case Failure(msg):
            return _usage_error(msg)
    _echo(args)
    write_pairs(database_features(db).items(), sys.stdout)
    return ExitCode.OK


def _add_input(parser: argparse.ArgumentParser):
    parser.add_argument("input", help="Sequence database file")
    parser.add_argument(
        "--format",
        choices=[f.value for f in DatasetFormat],
        help="Input format, detected from the file when omitted",
    )


def _add_thresholds(parser: argparse.ArgumentParser, multiple: bool = False):
    suffix = " (comma separated list)" if multiple else ""
    parser.add_argument("--delta", help="minutil as a fraction of the database utility" + suffix)
    parser.add_argument("--minutil", help="Absolute minimum utility" + suffix)
    parser.add_argument(
        "--minconf",
        help=f"Minimum confidence in (0, 1], default {config[Conf.DEFAULT_MINCONF]}" + suffix,
    )
    parser.add_argument("--dedup", action="store_true", help="Keep only the max-utility duplicate per item")
    parser.add_argument("--no-top-gate", action="store_true", help="Skip the RRS gate for depth-1 extensions")
    parser.add_argument("--literal-seu", action="store_true", help="Use the literal sequence utility for SEU")
    parser.add_argument("--threads", type=int, default=1, help="Mine top-level items on N threads")


def init_argparse() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rsc-miner",
        description="High-utility sequential rule mining with confidence-guided segmentation.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="Only warnings and errors")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("mine", help="Mine all high-utility sequential rules")
    _add_input(p)
    _add_thresholds(p)
    p.add_argument("--no-seu-prune", action="store_true", help="Disable early item pruning")
    p.add_argument("--no-rrs-prune", action="store_true", help="Disable the RRS gate")
    p.add_argument("--use-ru", action="store_true", help="Use RU instead of RRU in every bound")
    p.add_argument("--max-prefix-len", type=int, help="Cap on candidate sequence length")
    p.add_argument("--sort", action="store_true", help="Sort by utility, then lexicographically")
    p.add_argument("--out", help="Rule output file, stdout when omitted")
    p.add_argument("--stats", help="Statistics output file")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("oracle", help="Mine with the brute-force reference miner")
    _add_input(p)
    _add_thresholds(p)
    p.add_argument("--max-len", type=int, default=config[Conf.ORACLE_MAX_LEN])
    p.add_argument("--out", help="Rule output file, stdout when omitted")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="Compare the miner against the brute-force oracle")
    _add_input(p)
    _add_thresholds(p)
    p.add_argument("--max-len", type=int, default=config[Conf.ORACLE_MAX_LEN])
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="Compare ablation variants")
    _add_input(p)
    _add_thresholds(p, multiple=True)
    p.add_argument("--variants", default=",".join(v.value for v in Variant))
    p.add_argument("--repeat", type=int, default=config[Conf.BENCH_REPEAT])
    p.add_argument("--out", help="Report output file, stdout when omitted")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="Generate a synthetic sequence database")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--sequences", type=int)
    p.add_argument("--alphabet", type=int)
    p.add_argument("--avg-length", type=float)
    p.add_argument("--max-length", type=int)
    p.add_argument("--utility-min", type=int)
    p.add_argument("--utility-max", type=int)
    p.add_argument("--skew", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="Database output file, stdout when omitted")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser(
        "stats",
        help="Print the dataset feature row",
        description="Print sequences, distinct_items, avg_length, max_length and total_utility, "
        "where total_utility is the database utility u(D) that --delta scales.",
    )
    _add_input(p)
    p.set_defaults(func=cmd_stats)

    return parser


def run(argv: list[str] | None = None) -> int:
    args = init_argparse().parse_args(argv)
    return int(args.func(args))
