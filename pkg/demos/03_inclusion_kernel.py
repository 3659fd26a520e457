"""
Trades as kernel vectors
========================

A trade is an integer vector indexed by k-subsets whose image under the
t-subset inclusion matrix vanishes.
"""

import numpy as np

from tradelab import build_matrix, kernel_check, minimal_trade, signed_vector

m = build_matrix(range(4), 1, 2)
print("rows", m.rows)
print("cols", m.cols)
print(m.dump())

tr = minimal_trade(1, 2)
v = signed_vector(tr, range(4))
print("signed vector", v)
print("W v =", m.entries @ v, "->", kernel_check(m, v))

# A single block is not balanced.
e = np.zeros(len(m.cols), dtype=np.int64)
e[0] = 1
print("unit vector in kernel:", kernel_check(m, e))

# The 2-(6,3) case: a 15 x 20 matrix.
m2 = build_matrix(range(6), 2, 3)
v2 = signed_vector(minimal_trade(2, 3), range(6))
print(m2.shape, kernel_check(m2, v2))
