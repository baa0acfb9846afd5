import enum
from typing import Any


class Conf(enum.Enum):
    DEFAULT_MINCONF = enum.auto()
    ORACLE_MAX_LEN = enum.auto()
    BENCH_REPEAT = enum.auto()
    LOG_FORMAT = enum.auto()
    LOG_DATE_FORMAT = enum.auto()


class Config:
    def __init__(self):
        self._values = {
            Conf.DEFAULT_MINCONF: "0.6",
            Conf.ORACLE_MAX_LEN: 8,
            Conf.BENCH_REPEAT: 3,
            Conf.LOG_FORMAT: "[%(asctime)s.%(msecs)03d][%(name)s] [%(levelname)8s] - %(message)s",
            Conf.LOG_DATE_FORMAT: "%H:%M:%S",
        }

    @property
    def config(self) -> dict[Conf, Any]:
        return self._values


config = Config().config
