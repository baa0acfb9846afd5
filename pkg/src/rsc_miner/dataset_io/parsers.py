import enum
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

from returns.result import Failure, Result, Success

from rsc_miner.model import (
    MAX_UTILITY,
    Event,
    ItemDictionary,
    Sequence,
    SequenceDatabase,
)

logger = logging.getLogger(__name__)

LOG_MESSAGES = {
    "malformed_token": "malformed token '%s', expected item:utility",
    "malformed_spmf_token": "malformed token '%s', expected item[utility]",
    "empty_item": "empty item label in token '%s'",
    "comment_label": "item label in token '%s' starts with '#'",
    "negative_utility": "negative utility in token '%s'",
    "non_integer_utility": "non-integer utility in token '%s'",
    "utility_overflow": "utility in token '%s' exceeds the 64-bit range",
    "total_overflow": "database utility exceeds the 64-bit range",
    "simultaneous_events": "simultaneous events unsupported (itemset with %d items)",
    "unexpected_after_terminator": "unexpected token '%s' after -2",
    "unknown_format": "Cannot read %s: unknown dataset format '%s'",
    "file_missing": "Dataset file %s does not exist",
}

_SPMF_ITEM = re.compile(r"^([^\[\]\s]+)\[([^\[\]]*)\]$")
_SPMF_TRAILER = re.compile(r"^SUtility:", re.IGNORECASE)


class DatasetFormat(enum.Enum):
    NATIVE = "native"
    SPMF = "spmf"


@dataclass(frozen=True, slots=True)
class ParseDiagnostics:
    line_number: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line_number}: {self.message}"


class _ParseError(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


def _parse_utility(text: str, token: str) -> int:
    if text.startswith("-") and text[1:].isdigit():
        raise _ParseError(LOG_MESSAGES["negative_utility"] % token)
    if not text.isdigit() or not text.isascii():
        raise _ParseError(LOG_MESSAGES["non_integer_utility"] % token)
    utility = int(text)
    if utility > MAX_UTILITY:
        raise _ParseError(LOG_MESSAGES["utility_overflow"] % token)
    return utility


def _native_line(line: str, items: ItemDictionary) -> list[Event]:
    events = []
    for token in line.split():
        label, sep, utility = token.rpartition(":")
        if not sep or not utility:
            raise _ParseError(LOG_MESSAGES["malformed_token"] % token)
        if not label:
            raise _ParseError(LOG_MESSAGES["empty_item"] % token)
        if label.startswith("#"):
            raise _ParseError(LOG_MESSAGES["comment_label"] % token)
        events.append(Event(items.intern(label).id, _parse_utility(utility, token)))
    return events


def _spmf_line(line: str, items: ItemDictionary) -> list[Event]:
    events = []
    itemset: list[Event] = []
    terminated = False
    for token in line.split():
        if terminated:
            if _SPMF_TRAILER.match(token):
                continue
            raise _ParseError(LOG_MESSAGES["unexpected_after_terminator"] % token)
        if token in ("-1", "-2"):
            if len(itemset) > 1:
                raise _ParseError(LOG_MESSAGES["simultaneous_events"] % len(itemset))
            events.extend(itemset)
            itemset = []
            terminated = token == "-2"
            continue
        if _SPMF_TRAILER.match(token):
            # trailer without explicit -2, the line ends the sequence anyway
            terminated = True
            continue
        match = _SPMF_ITEM.match(token)
        if match is None:
            raise _ParseError(LOG_MESSAGES["malformed_spmf_token"] % token)
        label, utility = match.groups()
        if label.startswith("#"):
            raise _ParseError(LOG_MESSAGES["comment_label"] % token)
        itemset.append(Event(items.intern(label).id, _parse_utility(utility, token)))

    if len(itemset) > 1:
        raise _ParseError(LOG_MESSAGES["simultaneous_events"] % len(itemset))
    events.extend(itemset)
    return events


def _parse(
    lines: Iterable[str], line_parser, skip_prefixes: tuple[str, ...]
) -> Result[SequenceDatabase, ParseDiagnostics]:
    items = ItemDictionary()
    sequences: list[Sequence] = []
    total = 0

    for line_number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith(skip_prefixes):
            continue
        try:
            events = line_parser(stripped, items)
        except _ParseError as e:
            diagnostics = ParseDiagnostics(line_number, e.message)
            logger.error(diagnostics)
            return Failure(diagnostics)
        if not events:
            continue

        total += sum(e.utility for e in events)
        if total > MAX_UTILITY:
            diagnostics = ParseDiagnostics(line_number, LOG_MESSAGES["total_overflow"])
            logger.error(diagnostics)
            return Failure(diagnostics)
        sequences.append(Sequence(len(sequences) + 1, tuple(events)))

    db = SequenceDatabase(tuple(sequences), items, total)
    logger.debug(f"Parsed {len(db)} sequences over {len(items)} items, u(D)={db.total_utility}")
    return Success(db)


def parse_native(stream: TextIO) -> Result[SequenceDatabase, ParseDiagnostics]:
    """One sequence per line, whitespace separated ``item:utility`` tokens, ``#`` comments."""
    return _parse(stream, _native_line, ("#",))


def parse_spmf(stream: TextIO) -> Result[SequenceDatabase, ParseDiagnostics]:
    """SPMF utility sequence subset: ``item[utility]`` tokens, ``-1`` itemset ends, ``-2`` sequence end.

    The optional ``SUtility:<n>`` trailer is ignored, u(D) is recomputed from the events.
    """
    return _parse(stream, _spmf_line, ("#", "@", "%"))


def detect_format(path: Path) -> DatasetFormat:
    match path.suffix.lower():
        case ".spmf":
            return DatasetFormat.SPMF
        case ".usdb":
            return DatasetFormat.NATIVE

    # SPMF files are commonly shipped as .txt, sniff the first data line
    with path.open(encoding="utf-8") as f:
        for line in f:
            stripped = line.strip()
            if not stripped or stripped.startswith(("#", "@", "%")):
                continue
            tokens = stripped.split()
            if "-1" in tokens or "-2" in tokens:
                return DatasetFormat.SPMF
            break
    return DatasetFormat.NATIVE


def load_database(
    path: Path, fmt: DatasetFormat | None = None
) -> Result[SequenceDatabase, ParseDiagnostics]:
    if not path.is_file():
        msg = LOG_MESSAGES["file_missing"] % path
        logger.error(msg)
        return Failure(ParseDiagnostics(1, msg))

    if fmt is None:
        fmt = detect_format(path)
    logger.info(f"Loading {path} as {fmt.value}")

    with path.open(encoding="utf-8") as f:
        match fmt:
            case DatasetFormat.NATIVE:
                return parse_native(f)
            case DatasetFormat.SPMF:
                return parse_spmf(f)
    msg = LOG_MESSAGES["unknown_format"] % (path, fmt)
    logger.error(msg)
    return Failure(ParseDiagnostics(1, msg))
