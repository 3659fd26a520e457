"""Random trades built from minimal trades by sums, differences and derivation."""
from __future__ import annotations

import random
from typing import Optional

from .algebra import derived_trade, minimal_trade, trade_difference, trade_sum
from .core import Trade


def random_minimal(rng: random.Random, t: int, k: int, pool: int) -> Trade:
    """A minimal t-(v,k) trade on random distinct labels below ``pool``."""
    labels = rng.sample(range(pool), k + t + 1)
    return minimal_trade(t, k, labels)


def random_trade(rng: random.Random, t: int, k: int, pool: int = 12,
                 terms: int = 3, derive_prob: float = 0.25) -> Trade:
    """Combine up to ``terms`` random minimal trades with + and -.

    With probability ``derive_prob`` a (t+1)-(v,k+1) trade is built instead
    and a random element of its foundation is derived away.
    """
    if rng.random() < derive_prob and k + t + 3 <= pool:
        big = random_trade(rng, t + 1, k + 1, pool, terms, 0.0)
        return derived_trade(big, rng.choice(big.foundation))
    tr = random_minimal(rng, t, k, pool)
    for _ in range(rng.randrange(terms)):
        other = random_minimal(rng, t, k, pool)
        combined: Optional[Trade] = (trade_sum if rng.random() < 0.5 else trade_difference)(tr, other)
        if combined is not None:
            tr = combined
    return tr
