"""
Simplices and one-point spaces
==============================

Two exact solvers, two sanity laws. Every pair of simplices with different
point counts sits at GH distance one half, and any space sits at half its
diameter from a point.
"""

import numpy as np

from ghprod import exact_gh, point, random_space, simplex, witness_distortion

# the grid of simplices, solved twice
for m in range(1, 5):
    row = []
    for n in range(1, 5):
        a = exact_gh(simplex(m), simplex(n), "subset-enum").value
        b = exact_gh(simplex(m), simplex(n), "mappair-enum").value
        assert a == b
        row.append(f"{a:.2f}")
    print(f"simplex:{m}  " + "  ".join(row))

# the optimal map pair for 2 vs 3 points collapses everything onto one point
res = exact_gh(simplex(2), simplex(3))
print("witness", res.witness, "distortion", witness_distortion(res, simplex(2), simplex(3)))

# a random space against a point
rng = np.random.default_rng(0)
X = random_space(5, rng)
print("diam/2 =", X.diam / 2, " exact =", exact_gh(X, point()).value)
