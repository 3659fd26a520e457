"""Inclusion matrices of t-subsets versus k-subsets.

A pair of sides is t-balanced exactly when its signed block vector lies in
the kernel of the t-vs-k inclusion matrix.  This gives a linear-algebra check
that shares no code with :func:`tradelab.core.validate`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .core import ParameterError, Trade

# Entries of a signed vector are bounded by the volume; keep products exact.
_MAX_ENTRY = 2**31


@dataclass(frozen=True)
class InclusionMatrix:
    t: int
    k: int
    labels: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]
    cols: tuple[tuple[int, ...], ...]
    entries: np.ndarray = field(repr=False, compare=False)

    @property
    def shape(self):
        return self.entries.shape

    def column_index(self) -> dict:
        return {c: j for j, c in enumerate(self.cols)}

    def dump(self) -> str:
        """Whitespace-separated 0/1 grid, one row per line."""
        return "\n".join(" ".join(str(int(e)) for e in row) for row in self.entries) + "\n"


def build_matrix(labels: Sequence[int], t: int, k: int) -> InclusionMatrix:
    labels = tuple(sorted(labels))
    if len(set(labels)) != len(labels):
        raise ParameterError("labels must be distinct")
    if not 0 <= t < k <= len(labels):
        raise ParameterError(f"need t < k <= |labels|, got t={t}, k={k}, |labels|={len(labels)}")
    rows = tuple(combinations(labels, t))
    cols = tuple(combinations(labels, k))
    row_index = {r: i for i, r in enumerate(rows)}
    entries = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for j, col in enumerate(cols):
        for sub in combinations(col, t):
            entries[row_index[sub], j] = 1
    return InclusionMatrix(t, k, labels, rows, cols, entries)


def signed_vector(tr: Trade, labels: Sequence[int]) -> np.ndarray:
    """Multiplicity in T1 minus multiplicity in T2, indexed by k-subsets of ``labels``."""
    labels = tuple(sorted(labels))
    if not set(tr.foundation) <= set(labels):
        raise ParameterError("labels do not cover the foundation")
    index = {c: j for j, c in enumerate(combinations(labels, tr.k))}
    vec = np.zeros(len(index), dtype=np.int64)
    for block, mult in tr.t1.items:
        vec[index[block]] += mult
    for block, mult in tr.t2.items:
        vec[index[block]] -= mult
    return vec


def pair_vector(t1_items, t2_items, m: InclusionMatrix) -> np.ndarray:
    """Signed vector of raw side items (no trade required)."""
    index = m.column_index()
    vec = np.zeros(len(m.cols), dtype=np.int64)
    for block, mult in t1_items:
        vec[index[block]] += mult
    for block, mult in t2_items:
        vec[index[block]] -= mult
    return vec


def kernel_check(m: InclusionMatrix, v) -> bool:
    """True iff ``m @ v == 0`` exactly."""
    v = np.asarray(v)
    if v.shape != (len(m.cols),):
        raise ParameterError(f"vector of length {v.shape} against {len(m.cols)} columns")
    if not np.issubdtype(v.dtype, np.integer):
        raise ParameterError("kernel_check takes integer vectors only")
    if v.size and int(np.abs(v).max()) >= _MAX_ENTRY:
        raise OverflowError("vector entries too large for exact int64 products")
    return not np.any(m.entries @ v.astype(np.int64))
