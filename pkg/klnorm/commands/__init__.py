"""
commands/
Um módulo por subcomando; cada um expõe `register(subparsers)` e um handler `run(args)`.
"""
import argparse
import sys
from typing import List

import pandas as pd

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VALIDATION = 2


def int_list(text: str) -> List[int]:
    """Lista separada por vírgulas; aceita notação 1e6."""
    try:
        return [int(float(x)) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated integer list, got {text!r}") from None


def str_list(text: str) -> List[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def int_value(text: str) -> int:
    try:
        return int(float(text)) if any(ch in text for ch in "eE.") else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None


def emit_frame(df: pd.DataFrame) -> None:
    sys.stdout.write(df.to_csv(index=False))
