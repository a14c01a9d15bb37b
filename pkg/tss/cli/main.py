from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from tss.cli.commands import COMMAND_TABLE
from tss.cli.config import COMMANDS, load_config
from tss.errors import TssError

logger = logging.getLogger("tss")

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tss", description="Sawtooth / DDIM sampling for multichannel time series")
    p.add_argument("command", nargs="?", choices=COMMANDS, help="stage to run (defaults to [run] command)")
    p.add_argument("--config", dest="config", default=None, help="INI config file")
    p.add_argument("--seed", dest="seed", type=int, default=None, help="override the master seed")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE",
                   help="override a config value; repeatable")
    verbosity = p.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")
    return p


def configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def one_line(text: str) -> str:
    return " ".join(str(text).split())


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        cfg = load_config(args.config, args.command, args.overrides, args.seed)
        written = COMMAND_TABLE[cfg.command](cfg)
    except TssError as e:
        print(f"tss: error: {e.__class__.__name__}: {one_line(e)}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as e:  # noqa: BLE001 - surfaced as a single parsable line
        logger.debug("unexpected failure", exc_info=True)
        print(f"tss: error: {e.__class__.__name__}: {one_line(e)}", file=sys.stderr)
        return EXIT_UNEXPECTED
    for path in written:
        print(f"[OK] {cfg.command} output saved to {path}")
    return EXIT_OK
