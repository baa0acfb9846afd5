import enum


class Variant(enum.Enum):
    """Ablation variants of the miner.

    RSC is the full algorithm. RSCN disables early item pruning (SEU), RSCP disables the
    RRS gate during the depth-first search and RSCR substitutes RU for RRU in every bound.
    """

    RSC = "rsc"
    RSCN = "rscn"
    RSCP = "rscp"
    RSCR = "rscr"

    @property
    def use_seu_prune(self) -> bool:
        return self is not Variant.RSCN

    @property
    def use_rrs_prune(self) -> bool:
        return self is not Variant.RSCP

    @property
    def use_rru(self) -> bool:
        return self is not Variant.RSCR
