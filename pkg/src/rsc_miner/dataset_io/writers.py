from typing import TYPE_CHECKING, Iterable, TextIO

from rsc_miner.model import Rule, SequenceDatabase

if TYPE_CHECKING:
    from rsc_miner.miner import MiningStats


def format_confidence(support: int, antecedent_support: int, places: int = 4) -> str:
    """Exact decimal rendering of support/antecedent_support, rounded half up."""
    scale = 10**places
    scaled = (2 * support * scale + antecedent_support) // (2 * antecedent_support)
    return f"{scaled // scale}.{scaled % scale:0{places}d}"


def format_rule(rule: Rule) -> str:
    ant = ",".join(i.token for i in rule.antecedent)
    con = ",".join(i.token for i in rule.consequent)
    conf = format_confidence(rule.support, rule.antecedent_support)
    return f"{ant} ==> {con} #UTIL: {rule.utility} #SUP: {rule.support} #CONF: {conf}"


def write_rules(rules: Iterable[Rule], stream: TextIO) -> None:
    for rule in rules:
        stream.write(format_rule(rule))
        stream.write("\n")


def write_pairs(pairs: Iterable[tuple[str, object]], stream: TextIO) -> None:
    for key, value in pairs:
        stream.write(f"{key}={value}\n")


def write_stats(stats: "MiningStats", stream: TextIO) -> None:
    write_pairs(stats.items(), stream)


def write_native(db: SequenceDatabase, stream: TextIO) -> None:
    for sequence in db:
        stream.write(
            " ".join(f"{db.items.token(e.item)}:{e.utility}" for e in sequence.events)
        )
        stream.write("\n")
