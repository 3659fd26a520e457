"""Constructions on trades: minimal trades, stars, derived trades, sums."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .core import (
    CandidatePair,
    ParameterError,
    Side,
    Trade,
    TradeError,
    ValidationError,
    pair_index,
    replication,
    validate,
)


def minimal_trade(t: int, k: int, labels: Optional[Sequence[int]] = None) -> Trade:
    """Expand ``(x1 - x2)(x3 - x4)...(x_{2t+1} - x_{2t+2}) x_{2t+3} ... x_{k+t+1}``.

    Terms with an even number of minus signs go to T1, the rest to T2.
    Default labels are ``0 .. k+t``.
    """
    if not 0 < t < k:
        raise ParameterError(f"need 0 < t < k, got t={t}, k={k}")
    n = k + t + 1
    if labels is None:
        labels = range(n)
    labels = list(labels)
    if len(labels) != n or len(set(labels)) != n:
        raise ParameterError(f"need {n} distinct labels, got {labels}")
    fixed = labels[2 * t + 2:]
    plus, minus = [], []
    for signs in product((0, 1), repeat=t + 1):
        block = [labels[2 * i + sign] for i, sign in enumerate(signs)] + fixed
        (minus if sum(signs) % 2 else plus).append(block)
    return validate(CandidatePair(t, Side.from_blocks(plus), Side.from_blocks(minus)))


@dataclass(frozen=True)
class StarSplit:
    """Blocks through ``x`` (the star) and the remaining blocks, on both sides."""

    star: CandidatePair
    rest: CandidatePair
    x: int
    star_is_trade: bool


def _split_side(side: Side, x: int):
    inside, outside = Counter(), Counter()
    for block, mult in side.items:
        (inside if x in block else outside)[block] += mult
    return Side.from_counter(inside, side.k), Side.from_counter(outside, side.k)


def _lowered(t: int, one: Side, two: Side) -> CandidatePair:
    # CandidatePair insists on t >= 1; a split of a 1-trade is kept at strength 1.
    return CandidatePair(max(t, 1), one, two)


def star_split(tr: Trade, x: int) -> StarSplit:
    if x not in tr.foundation:
        raise ParameterError(f"element {x} is not in the foundation")
    in1, out1 = _split_side(tr.t1, x)
    in2, out2 = _split_side(tr.t2, x)
    r = len(in1)
    return StarSplit(
        star=_lowered(tr.t - 1, in1, in2),
        rest=_lowered(tr.t - 1, out1, out2),
        x=x,
        star_is_trade=r < tr.volume,
    )


def derived_trade(tr: Trade, x: int) -> Trade:
    """Remove ``x`` from the blocks through it: a (t-1)-(v-1,k-1) trade."""
    if tr.t < 2:
        raise ParameterError("derived trades need t >= 2")
    if x not in tr.foundation:
        raise ParameterError(f"element {x} is not in the foundation")
    sides = []
    for side in (tr.t1, tr.t2):
        counts = Counter()
        for block, mult in side.items:
            if x in block:
                counts[tuple(a for a in block if a != x)] += mult
        sides.append(Side.from_counter(counts, tr.k - 1))
    return validate(CandidatePair(tr.t - 1, *sides))


def _combine(t, k, one: Counter, two: Counter) -> Optional[Trade]:
    for block in set(one) & set(two):
        common = min(one[block], two[block])
        one[block] -= common
        two[block] -= common
    s1, s2 = Side.from_counter(one, k), Side.from_counter(two, k)
    if len(s1) == 0 and len(s2) == 0:
        return None
    try:
        return validate(CandidatePair(t, s1, s2))
    except ValidationError as exc:  # pragma: no cover - closure of trades
        raise AssertionError(f"sum of trades failed validation: {exc}") from exc


def _check_compatible(a: Trade, b: Trade):
    if (a.t, a.k) != (b.t, b.k):
        raise ParameterError(f"cannot combine a {a.t}-(v,{a.k}) with a {b.t}-(v,{b.k}) trade")


def trade_sum(a: Trade, b: Trade) -> Optional[Trade]:
    """``{A1 + B1, A2 + B2}`` with blocks common to both sides cancelled.

    Returns ``None`` when everything cancels.
    """
    _check_compatible(a, b)
    return _combine(a.t, a.k, a.t1.counter() + b.t1.counter(), a.t2.counter() + b.t2.counter())


def trade_difference(a: Trade, b: Trade) -> Optional[Trade]:
    """``{A1 + B2, B1 + A2}`` with cancellation; ``None`` when empty."""
    _check_compatible(a, b)
    return _combine(a.t, a.k, a.t1.counter() + b.t2.counter(), b.t1.counter() + a.t2.counter())


def star_trade(tr: Trade, x: int) -> Trade:
    """T_x as a (t-1)-trade; requires t >= 2 and r_x < s."""
    split = star_split(tr, x)
    if tr.t < 2 or not split.star_is_trade:
        raise TradeError(f"the star of {x} is not a (t-1)-trade here")
    return validate(split.star)


def weaken(tr: Trade, t: int) -> Trade:
    """View a trade at a lower strength (balance cascades downward)."""
    if not 0 < t <= tr.t:
        raise ParameterError(f"cannot weaken a {tr.t}-trade to strength {t}")
    return validate(CandidatePair(t, tr.t1, tr.t2))


def difference_volume(tr: Trade, x: int, y: int) -> int:
    """Volume predicted for ``T - (T_x + T_y)``: s - (r_x + r_y) + 2 lambda_xy."""
    return tr.volume - (replication(tr, x) + replication(tr, y)) + 2 * pair_index(tr, x, y)


def check_pair_count_identity(tr: Trade, x: int) -> bool:
    """Count pairs (y, B) with y != x in B two ways.

    Summing the pair index over the foundation of the derived trade must give
    (k - 1) times the replication number of ``x``.
    """
    if x not in tr.foundation:
        raise ParameterError(f"element {x} is not in the foundation")
    derived = derived_trade(tr, x)
    total = sum(pair_index(tr, x, y) for y in derived.foundation)
    return total == (tr.k - 1) * replication(tr, x)
