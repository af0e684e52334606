"""
A space against its own l^inf powers
====================================

The k-th l^inf power of X contains 2^k points pairwise at distance diam X,
built from one diametral pair. Once 2^k exceeds the size of X, some two of
them must land on the same point of X under any map, which pins the GH
distance at half the diameter. Only those 2^k points are ever built.
"""

import warnings

import numpy as np

from ghprod import InsufficientCopies, random_space, self_product_distance

X = random_space(4, np.random.default_rng(7))
print("diam X / 2 =", X.diam / 2)

with warnings.catch_warnings():
    warnings.simplefilter("ignore", InsufficientCopies)
    for k in (1, 2, 3, 4, 12):
        rep = self_product_distance(X, k)
        print(f"k={k:2d}  2^k={2**k:5d}  lower={rep.lower:.4f}  upper={rep.upper:.4f}  exact={rep.exact}")
