"""
Minimal trades
==============

Build the smallest trade of each strength, look at its blocks and check the
basic counts.
"""

from tradelab import is_simple, is_steiner, minimal_trade, replication, write_ttf

# The 2-(v,3) minimal trade lives on six points.
tr = minimal_trade(2, 3)
print(tr)
print("T1:", list(tr.t1))
print("T2:", list(tr.t2))

# Every pair of points is covered equally often by the two sides.
print("volume", tr.volume, "foundation", len(tr.foundation))
print("steiner", is_steiner(tr), "simple", is_simple(tr))

# With k > t+1 the extra points sit in every block.  Those points, together
# with t-1 paired points, lie in two blocks, so the trade is simple but not
# Steiner any more.
wide = minimal_trade(2, 4)
fixed = wide.foundation[-1]
print("r of the fixed point:", replication(wide, fixed), "of", wide.volume)
print("steiner", is_steiner(wide), "simple", is_simple(wide))

# Volume doubles with each step in strength.
for t in range(1, 6):
    m = minimal_trade(t, t + 1)
    print(f"t={t}: volume {m.volume}, foundation {len(m.foundation)}")

# The text format used by the command line tool.
print(write_ttf(minimal_trade(1, 2)), end="")
