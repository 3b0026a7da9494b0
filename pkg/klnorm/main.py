"""
main.py
Ponto de entrada da CLI: configura o logging e registra todos os subcomandos.

Códigos de saída: 0 sucesso, 1 erro de uso ou de entrada, 2 falha de validação.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from . import config
from .commands import EXIT_INPUT, bench, gen, normalize, redundancy, validate
from .errors import KlnormError

logger = logging.getLogger("klnorm")


class _Parser(argparse.ArgumentParser):
    """argparse com erros de uso no código 1 (o padrão do argparse é 2, reservado à validação)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="klnorm", description="KL-optimal integer frequency normalization")
    parser.add_argument("--log-level", default=config.LOG_LEVEL, help="logging level (default from KLNORM_LOG_LEVEL)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Registrar subcomandos
    normalize.register(subparsers)
    validate.register(subparsers)
    redundancy.register(subparsers)
    bench.register(subparsers)
    gen.register(subparsers)
    return parser


def _one_line(e: Exception) -> str:
    if isinstance(e, ValidationError):
        errs = e.errors()
        return errs[0]["msg"] if errs else str(e)
    return str(e) or type(e).__name__


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except (KlnormError, ValidationError, OSError, ValueError) as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        print(f"error: {_one_line(e)}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
