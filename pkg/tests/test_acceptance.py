"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line; the lines are printed together at the
end of the pytest run (see conftest.py) and when this file is run directly.
"""
import math
import time

import numpy as np
import pytest

from conftest import space_from_seed
from ghprod.bounds import FactorPairing, diam_sandwich, product_bounds, self_product_distance
from ghprod.cli import run
from ghprod.correspondence import MapPair, correspondence_from_maps, distortion, exact_gh, map_distortions
from ghprod.linear_products import diagonal_distortion, subset_sup
from ghprod.metric_core import ProductSpec, lp_product, point, scale, simplex

RESULTS = {}


def record(number, title, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title}"
    if detail:
        line += f" ({detail})"
    RESULTS[number] = line
    print(line)
    assert ok, line


def test_01_flat_tori():
    start = time.perf_counter()
    code, rep = run(["linear", "--a", "1,3", "--b", "2,5", "--p", "2"])
    elapsed = time.perf_counter() - start
    target = math.sqrt(29) - math.sqrt(10)
    err = abs(rep.result["two_dgh_exact"] - target)
    ok = code == 0 and rep.result["attainable"] is True and err <= 1e-9 and elapsed < 0.1
    record(1, "flat tori 2*dGH = sqrt29 - sqrt10", ok, f"error {err:.1e}, {elapsed:.3f}s")


def test_02_simplex_grid():
    start = time.perf_counter()
    bad = []
    for m in range(1, 6):
        for n in range(m + 1, 6):
            for strategy in ("subset-enum", "mappair-enum"):
                v = exact_gh(simplex(m), simplex(n), strategy).value
                if v != 0.5:
                    bad.append((m, n, strategy, v))
    elapsed = time.perf_counter() - start
    record(2, "simplex grid dGH = 1/2 for 1 <= m < n <= 5", not bad and elapsed < 60,
           f"{len(bad)} mismatches, {elapsed:.1f}s")


def test_03_point_law():
    rng = np.random.default_rng(3)
    bad = 0
    for _ in range(50):
        X = space_from_seed(int(rng.integers(2**32)), int(rng.integers(1, 6)))
        bad += exact_gh(X, point()).value != X.diam / 2
    record(3, "dGH(X, point) = diam/2 on 50 spaces", bad == 0, f"{bad} mismatches")


def test_04_map_pair_identity():
    rng = np.random.default_rng(4)
    start = time.perf_counter()
    bad = 0
    for _ in range(1000):
        nx, ny = (int(v) for v in rng.integers(1, 7, 2))
        X = space_from_seed(int(rng.integers(2**32)), nx)
        Y = space_from_seed(int(rng.integers(2**32)), ny)
        fp = MapPair(rng.integers(0, ny, nx), rng.integers(0, nx, ny))
        bad += distortion(correspondence_from_maps(fp), X, Y) != max(map_distortions(fp, X, Y))
    elapsed = time.perf_counter() - start
    record(4, "dis R_fg = max(dis f, dis g, codis) on 1000 map pairs", bad == 0 and elapsed < 5,
           f"{bad} mismatches, {elapsed:.2f}s")


def test_05_oracle_equivalence():
    rng = np.random.default_rng(5)
    start = time.perf_counter()
    bad = 0
    for i in range(100):
        nx, ny = (int(v) for v in rng.integers(1, 5, 2))
        dyadic = i % 2 == 0
        X = space_from_seed(int(rng.integers(2**32)), nx, dyadic)
        Y = space_from_seed(int(rng.integers(2**32)), ny, dyadic)
        bad += exact_gh(X, Y, "subset-enum").value != exact_gh(X, Y, "mappair-enum").value
    elapsed = time.perf_counter() - start
    record(5, "subset-enum = mappair-enum on 100 pairs", bad == 0 and elapsed < 120,
           f"{bad} mismatches, {elapsed:.1f}s")


def test_06_bound_ordering():
    rng = np.random.default_rng(6)
    bad_order = bad_dil = 0
    for i in range(200):
        p = (1.0, 2.0, math.inf)[i % 3]
        sizes = [int(v) for v in rng.integers(1, 4, 4)]
        seeds = [int(v) for v in rng.integers(2**32, size=4)]
        X1, Y1, X2, Y2 = (space_from_seed(s, n) for s, n in zip(seeds, sizes))
        rep = product_bounds(FactorPairing(p, [(X1, Y1), (X2, Y2)]), exact=True)
        if not (rep.lower <= rep.exact + 1e-12 and rep.exact <= rep.upper + 1e-12):
            bad_order += 1
        XX = lp_product(ProductSpec(p, [X1, X1]))
        YY = lp_product(ProductSpec(p, [Y1, Y1]))
        if exact_gh(XX, YY).value > 2 ** (1 / p) * exact_gh(X1, Y1).value + 1e-12:
            bad_dil += 1
    record(6, "lower <= exact <= upper and dilation on 200 products", bad_order == 0 and bad_dil == 0,
           f"{bad_order} ordering, {bad_dil} dilation failures")


def test_07_simplex_product_example():
    a = 0.2
    fp = FactorPairing(1, [(simplex(2), simplex(3)), (scale(simplex(2), a), scale(simplex(2), a))])
    rep = product_bounds(fp, exact=True)
    ok = abs(rep.lower - 0.3) <= 1e-12 and 0.3 - 1e-12 <= rep.exact <= 0.5 + 1e-12
    record(7, "simplex product example lower = 0.3, exact in [0.3, 0.5]", ok,
           f"lower {rep.lower!r}, exact {rep.exact!r}")


def test_08_lemmas():
    start = time.perf_counter()
    code, rep = run(["verify-lemmas", "--draws", "500", "--grid", "10001", "--seed", "1"])
    elapsed = time.perf_counter() - start
    r = rep.result
    ok = (code == 0 and r["endpoint_1d"]["failures"] == 0 and r["corner_box"]["failures"] == 0
          and r["endpoint_1d"]["draws"] == 500 and r["corner_box"]["draws"] == 500 and elapsed < 60)
    record(8, "endpoint and corner checks, 500 draws, zero failures", ok,
           f"worst defects {r['endpoint_1d']['worst_defect']:.1e} / {r['corner_box']['worst_defect']:.1e}, "
           f"{elapsed:.1f}s")


def test_09_diagonal_identity():
    rng = np.random.default_rng(9)
    worst = 0.0
    for i in range(100):
        p = (1.0, 2.0, 3.0, math.inf)[i % 4]
        N = int(rng.integers(1, 9))
        a, b = rng.uniform(0, 5, N), rng.uniform(0, 5, N)
        diff = abs(diagonal_distortion([simplex(2)] * N, a, b, p) - subset_sup(a, b, p).value)
        worst = max(worst, diff)
    record(9, "diagonal distortion = subset sup on 100 weight pairs", worst <= 1e-12, f"max gap {worst:.1e}")


def test_10_self_product():
    rng = np.random.default_rng(10)
    bad = 0
    for _ in range(20):
        X = space_from_seed(int(rng.integers(2**32)), int(rng.integers(2, 5)))
        rep = self_product_distance(X, X.n)
        lo, hi = diam_sandwich(X, X)
        cert = rep.witnesses["clique"]
        ok = (rep.exact == X.diam / 2 and rep.lower == rep.upper == hi
              and cert["bound"] == X.diam / 2 and cert["clique_size"] > X.n)
        bad += not ok
    D2 = simplex(2)
    brute = exact_gh(D2, lp_product(ProductSpec("inf", [D2, D2]))).value
    record(10, "self product dGH = diam/2 on 20 spaces, brute force agrees",
           bad == 0 and brute == 0.5 == self_product_distance(D2, 2).exact, f"{bad} mismatches")


def test_11_closed_forms():
    rng = np.random.default_rng(11)
    bad = 0
    for i in range(500):
        N = int(rng.integers(1, 16))
        if i % 2 == 0:
            # dyadic weights so both p = 1 computations are exact
            a, b = rng.integers(0, 65, N) / 8, rng.integers(0, 65, N) / 8
            bad += subset_sup(a, b, 1).value != subset_sup(a, b, 1, method="exhaustive").value
        else:
            a, b = rng.uniform(0, 5, N), rng.uniform(0, 5, N)
            bad += subset_sup(a, b, "inf").value != subset_sup(a, b, "inf", method="exhaustive").value
    record(11, "p = 1 and p = inf closed forms match exhaustion on 500 instances", bad == 0,
           f"{bad} mismatches")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main(["-q", __file__]))
