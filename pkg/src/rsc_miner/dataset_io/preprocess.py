import logging

from rsc_miner.model import Sequence, SequenceDatabase

logger = logging.getLogger(__name__)


def dedup_sequence(sequence: Sequence) -> Sequence:
    best: dict[int, int] = {}
    for pos, event in enumerate(sequence.events):
        kept = best.get(event.item)
        # strict comparison keeps the earliest occurrence on ties
        if kept is None or event.utility > sequence.events[kept].utility:
            best[event.item] = pos
    if len(best) == len(sequence.events):
        return sequence
    keep = sorted(best.values())
    return Sequence(sequence.sid, tuple(sequence.events[p] for p in keep))


def dedup_max_utility(db: SequenceDatabase) -> SequenceDatabase:
    """Keep, per sequence and item, only the occurrence with the maximum utility."""
    deduped = db.replace_sequences(dedup_sequence(s) for s in db)
    logger.info(f"Duplicate removal: u(D) {db.total_utility} -> {deduped.total_utility}")
    return deduped
