"""Plain-text record files: optional ``#`` comment lines, then one key per line.

Keys are written with ``repr``, the shortest decimal that reads back to the
same double, so a write/read cycle is exact to the bit.
"""

from __future__ import annotations

import math
import os
import re
from collections.abc import Iterable

from .errors import NonFiniteKey, RecordFileError

_DECIMAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_NON_FINITE = re.compile(r"[+-]?(?:nan|inf|infinity)", re.IGNORECASE)


def parse_records(lines: Iterable[str]) -> tuple[list[float], list[str]]:
    """Return ``(keys, comments)``; blank lines are skipped."""
    keys: list[float] = []
    comments: list[str] = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text:
            continue
        if text.startswith("#"):
            comments.append(text)
            continue
        if _DECIMAL.fullmatch(text):
            x = float(text)
            if not math.isfinite(x):
                # e.g. 1e400
                raise NonFiniteKey(len(keys), x, line=lineno)
        elif _NON_FINITE.fullmatch(text):
            raise NonFiniteKey(len(keys), float(text), line=lineno)
        else:
            raise RecordFileError(lineno, text)
        keys.append(x)
    return keys, comments


def read_records(path: str | os.PathLike) -> list[float]:
    with open(path, encoding="ascii", errors="replace") as fh:
        return parse_records(fh)[0]


def format_records(keys: Iterable[float], header: Iterable[str] = ()) -> str:
    lines = [h if h.startswith("#") else f"# {h}" for h in header]
    lines.extend(map(repr, map(float, keys)))
    return "".join(line + "\n" for line in lines)


def write_records(
    path: str | os.PathLike, keys: Iterable[float], header: Iterable[str] = ()
) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_records(keys, header))
