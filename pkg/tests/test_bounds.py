import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import space_from_seed
from ghprod.bounds import (
    BoundReport,
    FactorPairing,
    clique_certificate,
    clique_lower_bound,
    diam_sandwich,
    max_threshold_clique,
    product_bounds,
    product_lower_bound,
    product_upper_bound,
    self_product_distance,
)
from ghprod.correspondence import exact_gh
from ghprod.errors import InsufficientCopies, SearchCapExceeded, ValidationError
from ghprod.metric_core import ProductSpec, generate, lp_product, point, scale, simplex, validate_space

D2, D3 = simplex(2), simplex(3)
THREE_POINTS = validate_space([[0, 0.5, 0.8], [0.5, 0, 0.4], [0.8, 0.4, 0]])


def simplex_example(alpha=0.2):
    return FactorPairing(1, [(D2, D3), (scale(D2, alpha), scale(D2, alpha))])


def test_report_ordering_enforced():
    BoundReport(0.2, 0.3, 0.3)
    with pytest.raises(ValueError):
        BoundReport(0.4, 0.3)
    with pytest.raises(ValueError):
        BoundReport(0.1, 0.3, 0.5)
    rep = BoundReport(0.1, 0.3, None, "a", "b")
    assert BoundReport.from_json(rep.to_json()) == rep
    assert rep.to_json()["two_dgh_upper"] == 0.6


def test_upper_bound_examples():
    assert product_upper_bound(simplex_example()) == 0.5
    X, Y = space_from_seed(1, 3), space_from_seed(2, 4)
    for p in (1, 2, math.inf):
        assert product_upper_bound(FactorPairing(p, [(X, X), (Y, Y)])) == 0.0


def test_rectangle_upper_bound():
    A, B, C, D = 1.0, 2.0, 1.5, 3.5
    seg = generate("path:2")
    fp = FactorPairing(2, [(scale(seg, A), scale(seg, C)), (scale(seg, B), scale(seg, D))])
    assert product_upper_bound(fp) == pytest.approx(0.5 * math.hypot(A - C, B - D), abs=1e-15)


def test_lower_bound_examples():
    assert product_lower_bound(simplex_example()) == pytest.approx(0.3, abs=1e-15)
    X, Y = space_from_seed(4, 3), space_from_seed(5, 2)
    single = FactorPairing(2, [(X, Y)])
    assert product_lower_bound(single) == exact_gh(X, Y).value
    assert product_lower_bound(FactorPairing(2, [(D2, D2), (D2, D2)])) == 0.0


def test_lower_bound_floors_at_sandwich():
    # projection term negative, product diameters differ
    fp = FactorPairing(1, [(D2, scale(D2, 1.5)), (D2, D2)])
    rep = product_bounds(fp)
    assert min(rep.witnesses["projection_terms"]) < rep.lower
    assert rep.lower == 0.25 and rep.method_lower == "diameter sandwich"


def test_simplex_product_example_exact():
    rep = product_bounds(simplex_example(), exact=True)
    assert rep.lower == pytest.approx(0.3, abs=1e-15)
    assert 0.3 - 1e-12 <= rep.exact <= 0.5 + 1e-12
    assert rep.witnesses["product_correspondence_dgh"] <= rep.upper + 1e-12


def test_supplied_factor_distances():
    fp = FactorPairing(1, [(D2, D3)], per_factor_dgh=[0.5])
    assert fp.provenance == "supplied" and product_upper_bound(fp) == 0.5
    with pytest.raises(ValidationError):
        FactorPairing(1, [(D2, D3)], per_factor_dgh=[-1.0])
    with pytest.raises(ValidationError):
        FactorPairing(1, [(D2, D3)], per_factor_dgh=[0.5, 0.5])
    with pytest.raises(ValidationError):
        FactorPairing(1, [])


def test_sandwich_examples():
    assert diam_sandwich(D2, scale(D2, 2)) == (0.5, 1.0)
    X = space_from_seed(3, 4)
    assert diam_sandwich(X, X) == (0.0, 0.5 * X.diam)
    assert diam_sandwich(X, point()) == (0.5 * X.diam, 0.5 * X.diam)


def test_clique_examples():
    assert clique_lower_bound(D2, simplex(4)) == 0.5
    assert clique_lower_bound(simplex(4), D2) is None
    assert clique_lower_bound(simplex(4), D2, eps=0.5) is None
    pair = THREE_POINTS.subspace([0, 2])
    cube = lp_product(ProductSpec("inf", [pair] * 3))
    cert = clique_certificate(THREE_POINTS, cube)
    assert cert.bound == 0.4 and len(cert.clique) == 8
    with pytest.raises(ValidationError):
        clique_lower_bound(D2, D3, eps=-1)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_clique_on_simplices_is_half_diameter(n):
    for m in range(1, n):
        assert clique_lower_bound(simplex(m), simplex(n)) == 0.5


def test_clique_eps_widens_threshold():
    C = generate("cycle:6")
    # points at distance >= 2/3 form a 3-clique (every other point)
    assert clique_lower_bound(D2, C, eps=1 / 3 + 1e-12) == pytest.approx(1 / 3)
    assert clique_lower_bound(D2, C) is None


def test_clique_cap():
    with pytest.raises(SearchCapExceeded) as info:
        max_threshold_clique(simplex(12), 1.0, node_cap=15)
    assert len(info.value.best) >= 1


def brute_clique(Y, threshold):
    for size in range(Y.n, 0, -1):
        for Q in itertools.combinations(range(Y.n), size):
            if all(Y.dist[i, j] >= threshold for i, j in itertools.combinations(Q, 2)):
                return list(Q)
    return []


@given(st.integers(0, 10**6), st.integers(1, 9), st.floats(0.0, 1.0))
def test_clique_matches_brute_force(seed, n, frac):
    Y = space_from_seed(seed, n, dyadic=True)
    thr = frac * Y.diam
    assert max_threshold_clique(Y, thr) == brute_clique(Y, thr)


def test_self_product_examples():
    rep = self_product_distance(D2, 2)
    assert rep.exact == 0.5 and exact_gh(D2, simplex(4)).value == 0.5
    assert self_product_distance(point(), 5).exact == 0.0
    rep = self_product_distance(THREE_POINTS, 3)
    assert rep.exact == 0.4 and rep.witnesses["clique"]["clique_size"] == 8


def test_self_product_warns_below_cardinality():
    X = space_from_seed(8, 5)
    with pytest.warns(InsufficientCopies):
        rep = self_product_distance(X, 2)
    assert rep.exact is None and rep.lower <= rep.upper
    with pytest.warns(InsufficientCopies):
        # 2^3 = 8 > 5: the certificate still closes the gap
        assert self_product_distance(X, 3).exact == 0.5 * X.diam


def test_self_product_large_k_builds_only_prefix():
    X = space_from_seed(2, 4)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        rep = self_product_distance(X, 20, product_cap=1000)
    assert rep.exact == 0.5 * X.diam and rep.witnesses["Q_size"] == 2**20
    with pytest.raises(ValidationError):
        self_product_distance(X, 0)


def test_self_product_direct_clique_check():
    X = space_from_seed(12, 4)
    rep = self_product_distance(X, 9)
    assert rep.exact == 0.5 * X.diam
    assert rep.witnesses["clique"]["verified"] == "all pairs"
    assert rep.witnesses["clique"]["clique_size"] == 512


def test_self_product_matches_brute_force():
    X = space_from_seed(6, 2)
    P = lp_product(ProductSpec("inf", [X, X]))
    assert exact_gh(X, P).value == self_product_distance(X, 2).exact


@given(st.lists(st.lists(st.floats(0.0, 10.0), min_size=1, max_size=4), min_size=1, max_size=4))
def test_minkowski_sum_max(sets):
    sums = [sum(c) for c in itertools.product(*sets)]
    assert max(sums) == sum(max(s) for s in sets)


seeds = st.integers(0, 10**6)
exps = st.sampled_from([1.0, 2.0, math.inf])


@given(seeds, exps, st.booleans())
def test_bounds_bracket_exact(seed, p, dyadic):
    r = np.random.default_rng(seed)
    sizes = r.integers(1, 4, 4)
    pairs = [(space_from_seed(seed + 1, sizes[0], dyadic), space_from_seed(seed + 2, sizes[1], dyadic)),
             (space_from_seed(seed + 3, sizes[2], dyadic), space_from_seed(seed + 4, sizes[3], dyadic))]
    rep = product_bounds(FactorPairing(p, pairs), exact=True)
    assert rep.lower <= rep.exact + 1e-12 and rep.exact <= rep.upper + 1e-12


@given(seeds, st.integers(1, 3), st.integers(1, 3), exps)
def test_dilation(seed, nx, ny, p):
    X, Y = space_from_seed(seed, nx), space_from_seed(seed + 1, ny)
    XX = lp_product(ProductSpec(p, [X, X]))
    YY = lp_product(ProductSpec(p, [Y, Y]))
    factor = 2 ** (1 / p)
    assert exact_gh(XX, YY).value <= factor * exact_gh(X, Y).value + 1e-12


@given(seeds, st.integers(1, 3), exps)
def test_dilation_equality_against_point(seed, n, p):
    X = space_from_seed(seed, n)
    XX = lp_product(ProductSpec(p, [X, X]))
    P = lp_product(ProductSpec(p, [point(), point()]))
    assert exact_gh(XX, P).value == pytest.approx(2 ** (1 / p) * exact_gh(X, point()).value,
                                                  rel=1e-12, abs=1e-15)
