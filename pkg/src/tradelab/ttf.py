"""Plain-text trade files.

::

    trade t=2 k=3
    0 2 4
    0 3 5
    ---
    0 2 5
    0 3 4

One block per line with labels ascending, blocks in lexicographic order, a
repeated block on consecutive lines, ``---`` between the sides, LF line
endings and a trailing newline.  Full lines starting with ``#`` are comments.
"""
from __future__ import annotations

import re
from pathlib import Path

from .core import CandidatePair, Side, Trade, TradeError

_HEADER = re.compile(r"trade t=(\d+) k=(\d+)")


class FormatError(TradeError):
    """A trade file does not follow the format."""


def write_ttf(tr) -> str:
    """Serialize a :class:`Trade` or :class:`CandidatePair`."""
    lines = [f"trade t={tr.t} k={tr.k}"]
    lines += [" ".join(map(str, b)) for b in tr.t1]
    lines.append("---")
    lines += [" ".join(map(str, b)) for b in tr.t2]
    return "\n".join(lines) + "\n"


def _parse_block(line, k, lineno):
    try:
        block = tuple(int(a) for a in line.split(" "))
    except ValueError:
        raise FormatError(f"line {lineno}: not a list of labels: {line!r}") from None
    if len(block) != k:
        raise FormatError(f"line {lineno}: block has {len(block)} labels, header says k={k}")
    if any(a < 0 for a in block):
        raise FormatError(f"line {lineno}: negative label")
    if any(a >= b for a, b in zip(block, block[1:])):
        raise FormatError(f"line {lineno}: labels not strictly ascending: {line!r}")
    return block


def read_ttf(text: str) -> CandidatePair:
    """Parse a trade file into an unvalidated :class:`CandidatePair`."""
    if "\r" in text:
        raise FormatError("CR characters are not allowed; use LF line endings")
    lines = [(n, line) for n, line in enumerate(text.split("\n"), 1)
             if line and not line.startswith("#")]
    if not lines:
        raise FormatError("empty file")
    n, head = lines[0]
    m = _HEADER.fullmatch(head)
    if not m:
        raise FormatError(f"line {n}: bad header {head!r}")
    t, k = int(m.group(1)), int(m.group(2))
    if not 0 < t < k:
        raise FormatError(f"line {n}: need 0 < t < k")
    sides = [[]]
    for n, line in lines[1:]:
        if line == "---":
            if len(sides) == 2:
                raise FormatError(f"line {n}: second separator")
            sides.append([])
            continue
        block = _parse_block(line, k, n)
        if sides[-1] and block < sides[-1][-1]:
            raise FormatError(f"line {n}: blocks out of lexicographic order")
        sides[-1].append(block)
    if len(sides) != 2:
        raise FormatError("missing '---' separator")
    return CandidatePair(t, Side.from_blocks(sides[0], k=k), Side.from_blocks(sides[1], k=k))


def save_ttf(tr, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        fh.write(write_ttf(tr))
    return path


def load_ttf(path) -> CandidatePair:
    with open(path, newline="") as fh:
        return read_ttf(fh.read())
