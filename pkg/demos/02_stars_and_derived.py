"""
Stars, derived trades and counting
==================================

Split a trade at a point, derive it, and check the counting identities on a
trade assembled from several minimal trades.
"""

import random

from tradelab import (
    derived_trade,
    difference_volume,
    pair_index,
    replication,
    star_split,
    validate,
)
from tradelab.sampling import random_trade

rng = random.Random(7)
tr = random_trade(rng, 2, 3, pool=10, terms=3, derive_prob=0.0)
print(tr)

# Blocks through x form the star; with the rest they give two 1-trades.
x = tr.foundation[0]
split = star_split(tr, x)
print("star volume", validate(split.star).volume, "= r_x =", replication(tr, x))

# Deleting x from the star gives the derived trade.
d = derived_trade(tr, x)
print("derived:", d)

# Each point y != x shares lambda_xy blocks with x; summing over y counts
# every other point of every block through x.
total = sum(pair_index(tr, x, y) for y in tr.foundation if y != x)
print("sum of pair indices", total, "=", (tr.k - 1) * replication(tr, x))

# Removing two stars from the weakened trade leaves this many blocks.
for y in tr.foundation[1:4]:
    if max(replication(tr, x), replication(tr, y)) < tr.volume:
        print(f"x={x} y={y}: remainder volume {difference_volume(tr, x, y)}")
