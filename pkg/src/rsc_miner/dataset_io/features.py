from dataclasses import dataclass

from rsc_miner.model import SequenceDatabase


@dataclass(frozen=True, slots=True)
class DatabaseFeatures:
    sequences: int
    distinct_items: int
    avg_length: float
    max_length: int
    total_utility: int

    def items(self) -> list[tuple[str, object]]:
        return [
            ("sequences", self.sequences),
            ("distinct_items", self.distinct_items),
            ("avg_length", f"{self.avg_length:.2f}"),
            ("max_length", self.max_length),
            ("total_utility", self.total_utility),
        ]


def database_features(db: SequenceDatabase) -> DatabaseFeatures:
    lengths = [len(s) for s in db]
    return DatabaseFeatures(
        sequences=len(lengths),
        distinct_items=len(db.distinct_items),
        avg_length=sum(lengths) / len(lengths) if lengths else 0.0,
        max_length=max(lengths, default=0),
        total_utility=db.total_utility,
    )
