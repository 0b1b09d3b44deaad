import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from config.settings import settings
from cli.commands import COMMANDS
from domain.errors import HvlclError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PROCESSING = 2


class CliParser(argparse.ArgumentParser):
    """Argument parser reporting usage errors with exit status 1"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        prog="hvlcl",
        description=f"{settings.app_name}: reversible data hiding in encrypted grayscale images",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    # Include commands
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=settings.log_level)
    try:
        return args.handler(args)
    except ValidationError as e:
        message = "; ".join(error["msg"] for error in e.errors())
        logger.error(f"Invalid arguments: {message}")
        print(f"error: {message}", file=sys.stderr)
        return EXIT_USAGE
    except (HvlclError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PROCESSING


if __name__ == "__main__":
    sys.exit(main())
