import logging
import sys

from rsc_miner.cli import init_argparse
from rsc_miner.config import Conf, config

logger = logging.getLogger(__name__)


def main(argv: list[str] | None = None) -> int:
    parser = init_argparse()
    args = parser.parse_args(argv)

    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING

    # stdout carries rules and reports, diagnostics go to stderr
    logging.basicConfig(
        level=level,
        format=config[Conf.LOG_FORMAT],
        datefmt=config[Conf.LOG_DATE_FORMAT],
        handlers=[
            logging.StreamHandler(sys.stderr),
        ],
    )

    return int(args.func(args))


if __name__ == "__main__":
    sys.exit(main())
