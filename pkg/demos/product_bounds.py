"""
Bounds for products of small spaces
===================================

Replace a product of two spaces by its factors. The upper bound is the l^p
norm of the factor distances, the lower bound projects onto one factor and
pays for the others with their diameters. Here the first factor carries the
signal and the second is a small perturbation of size alpha.
"""

from ghprod import FactorPairing, product_bounds, scale, simplex

D2, D3 = simplex(2), simplex(3)

for alpha in (0.05, 0.1, 0.2, 0.3):
    pairing = FactorPairing(1, [(D2, D3), (scale(D2, alpha), scale(D2, alpha))])
    rep = product_bounds(pairing, exact=True)
    print(f"alpha={alpha:.2f}  lower={rep.lower:.3f}  exact={rep.exact:.3f}  upper={rep.upper:.3f}"
          f"  ({rep.method_lower})")

# when the perturbation outgrows the signal the projection term goes negative
# and the diameter sandwich takes over as the lower bound
rep = product_bounds(FactorPairing(1, [(D2, D3), (scale(D2, 0.6), scale(D2, 0.6))]))
print("projection terms", rep.witnesses["projection_terms"], "->", rep.lower)
