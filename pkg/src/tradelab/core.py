"""Blocks, sides and validated t-(v,k) trades.

A block is a sorted tuple of distinct non-negative integer labels.  A side is
a multiset of equal-size blocks, stored as sorted ``(block, multiplicity)``
pairs.  A :class:`Trade` can only be obtained from :func:`validate`, so every
``Trade`` value is t-balanced by construction.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

Block = tuple[int, ...]

LABEL_LIMIT = 2**32


class TradeError(ValueError):
    """Base class for all errors raised by this package."""


class ParameterError(TradeError):
    """An argument is outside the operation's domain."""


class ValidationError(TradeError):
    """A candidate pair is not a trade.

    ``imbalances`` lists every t-subset whose coverage differs, in
    lexicographic order, as ``(subset, (count_in_t1, count_in_t2))``.
    ``subset`` and ``counts`` name the first one.
    """

    def __init__(self, message, imbalances=()):
        super().__init__(message)
        self.imbalances = list(imbalances)
        if self.imbalances:
            self.subset, self.counts = self.imbalances[0]
        else:
            self.subset, self.counts = None, None


def make_block(labels: Iterable[int]) -> Block:
    """Return ``labels`` as a canonical block, rejecting repeats and bad labels."""
    block = tuple(sorted(labels))
    if not block:
        raise ParameterError("a block needs at least one element")
    for a in block:
        if not isinstance(a, int) or isinstance(a, bool) or not 0 <= a < LABEL_LIMIT:
            raise ParameterError(f"invalid element label {a!r}")
    if len(set(block)) != len(block):
        raise ParameterError(f"repeated element in block {block}")
    return block


@dataclass(frozen=True)
class Side:
    """One leg of a trade: a multiset of k-blocks."""

    items: tuple[tuple[Block, int], ...]
    k: int

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], k: int | None = None) -> "Side":
        counts = Counter(make_block(b) for b in blocks)
        sizes = {len(b) for b in counts}
        if len(sizes) > 1:
            raise ParameterError(f"blocks of mixed sizes {sorted(sizes)} in one side")
        if sizes:
            (size,) = sizes
            if k is not None and k != size:
                raise ParameterError(f"expected blocks of size {k}, got {size}")
            k = size
        elif k is None:
            raise ParameterError("block size of an empty side must be given")
        return cls(tuple(sorted(counts.items())), k)

    @classmethod
    def from_counter(cls, counts: Counter, k: int) -> "Side":
        return cls(tuple(sorted((b, m) for b, m in counts.items() if m > 0)), k)

    def __len__(self) -> int:
        return sum(m for _, m in self.items)

    def __iter__(self) -> Iterator[Block]:
        """Iterate over blocks with multiplicity, in sorted order."""
        for block, mult in self.items:
            for _ in range(mult):
                yield block

    def counter(self) -> Counter:
        return Counter(dict(self.items))

    def multiplicity(self, block: Iterable[int]) -> int:
        return dict(self.items).get(tuple(sorted(block)), 0)

    def elements(self) -> set[int]:
        return {a for block, _ in self.items for a in block}

    def relabel(self, mapping) -> "Side":
        counts = Counter()
        for block, mult in self.items:
            counts[tuple(sorted(mapping[a] for a in block))] += mult
        return Side.from_counter(counts, self.k)


@dataclass(frozen=True)
class CandidatePair:
    """Two sides proposed as a t-trade; nothing is guaranteed about balance."""

    t: int
    t1: Side
    t2: Side

    def __post_init__(self):
        if self.t1.k != self.t2.k:
            raise ParameterError(f"sides have block sizes {self.t1.k} and {self.t2.k}")
        if not 0 < self.t < self.t1.k:
            raise ParameterError(f"need 0 < t < k, got t={self.t}, k={self.t1.k}")

    @property
    def k(self) -> int:
        return self.t1.k


@dataclass(frozen=True, init=False)
class Trade:
    """A validated t-(v,k) trade.  Build one with :func:`validate`."""

    t: int
    k: int
    t1: Side
    t2: Side
    volume: int
    foundation: tuple[int, ...]

    def __init__(self, *args, **kwargs):
        raise TypeError("Trade values are created by validate()")

    @classmethod
    def _trusted(cls, t, k, t1, t2):
        self = object.__new__(cls)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "t1", t1)
        object.__setattr__(self, "t2", t2)
        object.__setattr__(self, "volume", len(t1))
        object.__setattr__(self, "foundation", tuple(sorted(t1.elements() | t2.elements())))
        return self

    def swapped(self) -> "Trade":
        return Trade._trusted(self.t, self.k, self.t2, self.t1)

    def relabel(self, mapping) -> "Trade":
        """Apply an injective relabeling (dict or sequence indexed by label)."""
        images = [mapping[a] for a in self.foundation]
        if len(set(images)) != len(images):
            raise ParameterError("relabeling is not injective on the foundation")
        return Trade._trusted(self.t, self.k, self.t1.relabel(mapping), self.t2.relabel(mapping))

    def as_pair(self) -> CandidatePair:
        return CandidatePair(self.t, self.t1, self.t2)

    def __repr__(self):
        one = " ".join("".join(map(str, b)) if max(b) < 10 else str(b) for b in self.t1)
        two = " ".join("".join(map(str, b)) if max(b) < 10 else str(b) for b in self.t2)
        return f"<Trade t={self.t} k={self.k} s={self.volume}: {one} | {two}>"


def t_profile(side: Side, t: int) -> dict[Block, int]:
    """Coverage count of every t-subset covered by ``side`` (with multiplicity).

    Keys are sorted label tuples and the dict iterates in lexicographic order.
    """
    if t < 0 or t > side.k:
        raise ParameterError(f"t={t} outside 0..k={side.k}")
    counts: Counter = Counter()
    for block, mult in side.items:
        for sub in combinations(block, t):
            counts[sub] += mult
    return dict(sorted(counts.items()))


def imbalances(t1: Side, t2: Side, t: int) -> list[tuple[Block, tuple[int, int]]]:
    p1, p2 = t_profile(t1, t), t_profile(t2, t)
    return [(sub, (p1.get(sub, 0), p2.get(sub, 0)))
            for sub in sorted(p1.keys() | p2.keys())
            if p1.get(sub, 0) != p2.get(sub, 0)]


def validate(c: CandidatePair) -> Trade:
    """Return ``c`` as a :class:`Trade` or raise :class:`ValidationError`."""
    n1, n2 = len(c.t1), len(c.t2)
    if n1 == 0 and n2 == 0:
        raise ValidationError("degenerate pair: both sides are empty")
    if n1 != n2:
        raise ValidationError(f"side sizes differ: {n1} != {n2}")
    shared = sorted(dict(c.t1.items).keys() & dict(c.t2.items).keys())
    if shared:
        raise ValidationError(f"block {shared[0]} appears in both sides")
    bad = imbalances(c.t1, c.t2, c.t)
    if bad:
        sub, (a, b) = bad[0]
        raise ValidationError(f"{c.t}-subset {sub} covered {a} times in T1 and {b} times in T2", bad)
    return Trade._trusted(c.t, c.k, c.t1, c.t2)


def trade_from_blocks(t: int, t1: Iterable[Iterable[int]], t2: Iterable[Iterable[int]]) -> Trade:
    """Shortcut: build sides from block lists and validate."""
    s1 = Side.from_blocks(list(t1))
    s2 = Side.from_blocks(list(t2), k=s1.k)
    return validate(CandidatePair(t, s1, s2))


def is_steiner(tr: Trade) -> bool:
    return all(n <= 1 for n in t_profile(tr.t1, tr.t).values())


def is_simple(tr: Trade) -> bool:
    return all(m == 1 for _, m in tr.t1.items) and all(m == 1 for _, m in tr.t2.items)


def replication(tr: Trade, x: int) -> int:
    """Number of T1 blocks (with multiplicity) containing ``x``."""
    return sum(m for block, m in tr.t1.items if x in block)


def pair_index(tr: Trade, x: int, y: int) -> int:
    """Number of T1 blocks (with multiplicity) containing both ``x`` and ``y``."""
    if tr.t < 2:
        raise ParameterError("pair index is only defined for t >= 2")
    if x == y:
        raise ParameterError("pair index needs two distinct elements")
    return sum(m for block, m in tr.t1.items if x in block and y in block)


# -- canonical labeling ------------------------------------------------------
#
# A relabeled block is encoded as an integer in base ``base`` so that integer
# order equals tuple order.  During the search labels 0, 1, 2, ... are handed
# out in order; a block with c labeled elements gets the lower bound
# "its labels, then depth, depth+1, ..." for the rest.


class _SelfDual(Exception):
    pass


def _orbit_roots(candidates, autos):
    """Union-find representative of each candidate under the given permutations."""
    parent = {a: a for a in candidates}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in autos:
        for a in candidates:
            b = g[a]
            if b in parent:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    return {a: find(a) for a in candidates}


def _canonical_key(tr: Trade):
    """Branch-and-bound search for the lexicographically least relabeling.

    Returns ``(key, mapping, swap)``; ``key`` encodes the relabeled sorted
    sides.  Two leaves with the same key differ by an automorphism, and
    children of a node that such an automorphism maps onto each other (while
    fixing the labeled prefix) have identical subtrees, so only one of them
    is explored.
    """
    found = tr.foundation
    f, k = len(found), tr.k
    base = f + k + 1
    power = [base ** (k - 1 - j) for j in range(k)]
    # tail[c][d]: code of labels d, d+1, ... in positions c..k-1
    tail = [[sum((d + j - c) * power[j] for j in range(c, k)) for d in range(f + 2)]
            for c in range(k + 1)]
    blocks, owner, members = [], [], {a: [] for a in found}
    for side_no, side in enumerate((tr.t1, tr.t2)):
        for block, mult in side.items:
            for _ in range(mult):
                for a in block:
                    members[a].append(len(blocks))
                blocks.append(block)
                owner.append(side_no)
    n = len(blocks)
    best = [None, None, None]
    autos = ([], [])

    def key_of(codes, orient):
        one = sorted(codes[b] for b in range(n) if owner[b] == orient)
        two = sorted(codes[b] for b in range(n) if owner[b] != orient)
        return one, two

    def visit(orient, assigned, prefix, depth, value, count):
        # value[b], count[b]: code and size of the labeled part of block b
        if depth == f:
            leaf = key_of(value, orient)
            if best[0] is None or leaf < best[0]:
                best[:] = [leaf, dict(assigned), orient]
            elif leaf == best[0]:
                if best[2] != orient:
                    raise _SelfDual
                inverse = {new: old for old, new in best[1].items()}
                autos[orient].append({a: inverse[assigned[a]] for a in found})
            return
        stay = [value[b] + tail[count[b]][depth] for b in range(n)]
        bump = [value[b] + tail[count[b]][depth + 1] for b in range(n)]
        children = []
        for a in found:
            if a in assigned:
                continue
            codes = bump[:]
            for b in members[a]:
                codes[b] = stay[b]
            children.append((key_of(codes, orient), a))
        children.sort()
        done = set()
        fixing = None
        for child, a in children:
            if best[0] is not None and child > best[0]:
                break
            if fixing is None or len(autos[orient]) != fixing[0]:
                gens = [g for g in autos[orient] if all(g[p] == p for p in prefix)]
                fixing = (len(autos[orient]), _orbit_roots([c for _, c in children], gens) if gens else None)
            root = fixing[1][a] if fixing[1] else a
            if root in done:
                continue
            done.add(root)
            assigned[a] = depth
            prefix.append(a)
            for b in members[a]:
                value[b] += depth * power[count[b]]
                count[b] += 1
            visit(orient, assigned, prefix, depth + 1, value, count)
            for b in members[a]:
                count[b] -= 1
                value[b] -= depth * power[count[b]]
            prefix.pop()
            del assigned[a]

    visit(0, {}, [], 0, [0] * n, [0] * n)
    try:
        visit(1, {}, [], 0, [0] * n, [0] * n)
    except _SelfDual:
        pass
    key = (tuple(best[0][0]), tuple(best[0][1]))
    return key, best[1], best[2] == 1


def canonical_form(tr: Trade) -> Trade:
    """The isomorphic copy of ``tr`` with the least serialization.

    Minimizes over all bijections of the foundation onto ``0..f-1`` and over
    exchanging the two sides.
    """
    _, mapping, swap = _canonical_key(tr)
    base = tr.swapped() if swap else tr
    return base.relabel(mapping)


def are_isomorphic(a: Trade, b: Trade) -> bool:
    if (a.t, a.k, a.volume, len(a.foundation)) != (b.t, b.k, b.volume, len(b.foundation)):
        return False
    return canonical_form(a) == canonical_form(b)


def foundation_of(blocks: Sequence[Block]) -> tuple[int, ...]:
    return tuple(sorted({a for b in blocks for a in b}))
