import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import space_from_seed
from ghprod.errors import (
    AsymmetryError,
    CapExceeded,
    GeneratorError,
    InvalidExponent,
    LabelError,
    NegativeDistanceError,
    NonFiniteDistanceError,
    NonpositiveScale,
    NonzeroDiagonalError,
    NotSquareError,
    OddCycleSize,
    TriangleViolation,
)
from ghprod.metric_core import (
    GeneratorSpec,
    ProductSpec,
    diameter,
    generate,
    isometric_under,
    lp_combine,
    lp_product,
    parse_exponent,
    point,
    product_digits,
    scale,
    simplex,
    validate_space,
)


def test_two_point_space():
    X = validate_space([[0, 1], [1, 0]])
    assert X.n == 2 and diameter(X) == 1.0
    assert X.labels == ("0", "1")


def test_three_point_simplex():
    X = validate_space(np.ones((3, 3)) - np.eye(3))
    assert np.array_equal(X.dist, simplex(3).dist)


def test_triangle_violation_reports_defect():
    d = [[0, 3, 1], [3, 0, 1], [1, 1, 0]]
    with pytest.raises(TriangleViolation) as info:
        validate_space(d)
    assert info.value.defect == pytest.approx(1.0)
    assert {info.value.i, info.value.j} == {0, 1} and info.value.k == 2


def test_triangle_tolerance():
    d = [[0, 2 + 1e-10, 1], [2 + 1e-10, 0, 1], [1, 1, 0]]
    validate_space(d)
    with pytest.raises(TriangleViolation):
        validate_space(d, tol=0.0)


@pytest.mark.parametrize("matrix,exc", [
    ([[0, 1, 2]], NotSquareError),
    ([[0, 1], [2, 0]], AsymmetryError),
    ([[0, -1], [-1, 0]], NegativeDistanceError),
    ([[1, 1], [1, 0]], NonzeroDiagonalError),
    ([[0, math.nan], [math.nan, 0]], NonFiniteDistanceError),
    ([[0, math.inf], [math.inf, 0]], NonFiniteDistanceError),
])
def test_axiom_failures(matrix, exc):
    with pytest.raises(exc):
        validate_space(matrix)


def test_asymmetry_names_pair():
    with pytest.raises(AsymmetryError) as info:
        validate_space([[0, 1, 1], [1, 0, 1], [1, 2, 0]])
    assert (info.value.i, info.value.j) == (1, 2)


def test_labels():
    X = validate_space([[0, 1], [1, 0]], labels=["a", "b"])
    assert X.labels == ("a", "b")
    with pytest.raises(LabelError):
        validate_space([[0, 1], [1, 0]], labels=["a"])
    with pytest.raises(LabelError):
        validate_space([[0, 1], [1, 0]], labels=["a", "a"])


def test_dist_is_read_only():
    X = simplex(3)
    with pytest.raises(ValueError):
        X.dist[0, 1] = 5


def test_diameter_examples():
    assert diameter(simplex(5)) == 1.0
    assert diameter(generate("path:11")) == 1.0
    assert diameter(scale(simplex(2), 2.5)) == 2.5


def test_scale_examples():
    assert np.array_equal(scale(simplex(2), 1).dist, simplex(2).dist)
    assert scale(simplex(2), 2).dist[0, 1] == 2.0
    assert diameter(scale(generate("cycle:8"), 0.5)) == 0.5
    for bad in (0, -1, math.inf, math.nan):
        with pytest.raises(NonpositiveScale):
            scale(simplex(2), bad)


def test_exponents():
    assert parse_exponent("inf") == math.inf
    assert parse_exponent(2) == 2.0
    for bad in (0.5, "x", -1, math.nan):
        with pytest.raises(InvalidExponent):
            parse_exponent(bad)


def test_lp_combine():
    assert lp_combine([3.0, 4.0], 2) == 5.0
    assert lp_combine([3.0, 4.0], 1) == 7.0
    assert lp_combine([3.0, 4.0], math.inf) == 4.0


def test_linf_square_of_two_points_is_simplex():
    P = lp_product(ProductSpec("inf", [simplex(2), simplex(2)]))
    assert np.array_equal(P.dist, simplex(4).dist)
    assert P.labels == ("(0,0)", "(0,1)", "(1,0)", "(1,1)")


def test_l1_square_of_two_points():
    P = lp_product(ProductSpec(1, [simplex(2), simplex(2)]))
    off = P.dist[~np.eye(4, dtype=bool)]
    assert set(off.tolist()) == {1.0, 2.0}


def test_point_factor_is_neutral():
    X = generate("cycle:6")
    P = lp_product(ProductSpec(2, [point(), X]))
    assert isometric_under(X, P)


def test_zero_weight_gives_pseudometric():
    P = lp_product(ProductSpec(2, [(simplex(2), 1.0), (simplex(3), 0.0)]))
    assert P.n == 6 and P.dist[0, 1] == 0.0 and P.dist[0, 3] == 1.0


def test_lexicographic_order():
    assert product_digits((2, 3), 4) == (1, 1)
    P = lp_product(ProductSpec(1, [generate("path:3"), simplex(2)]))
    assert P.dist[0, 5] == pytest.approx(2.0)


def test_product_cap():
    with pytest.raises(CapExceeded):
        lp_product(ProductSpec(1, [simplex(10)] * 3), cap=999)


def test_generators():
    assert np.array_equal(generate("simplex:3").dist, simplex(3).dist)
    C = generate("cycle:4")
    assert set(C.dist.ravel().tolist()) == {0.0, 0.5, 1.0} and C.diam == 1.0
    assert np.array_equal(generate("path:2").dist, simplex(2).dist)
    assert generate("point").n == 1 and generate("path:1").n == 1
    with pytest.raises(OddCycleSize):
        generate("cycle:5")
    for bad in ("blob:3", "simplex:0", "simplex", "simplex:x"):
        with pytest.raises(GeneratorError):
            GeneratorSpec.parse(bad)


@pytest.mark.parametrize("text", ["simplex:1", "simplex:6", "path:2", "path:9", "point"])
def test_generated_spaces_are_exact_metrics(text):
    X = generate(text)
    validate_space(X.dist, tol=0.0)


@pytest.mark.parametrize("n", [2, 4, 8, 12, 30])
def test_cycles_validate(n):
    X = generate(f"cycle:{n}")
    validate_space(X.dist, tol=1e-12)
    assert X.diam == 1.0


p_values = st.sampled_from([1.0, 2.0, 3.0, math.inf])


@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 4), p_values,
       st.floats(0.0, 3.0), st.floats(0.0, 3.0))
def test_product_diameter_formula(seed, n1, n2, p, w1, w2):
    A, B = space_from_seed(seed, n1), space_from_seed(seed + 1, n2)
    spec = ProductSpec(p, [(A, w1), (B, w2)])
    assert lp_product(spec).diam == pytest.approx(spec.diameter(), rel=1e-12, abs=1e-15)


@given(st.integers(0, 10**6), p_values)
def test_product_associativity(seed, p):
    A, B, C = (space_from_seed(seed + i, n) for i, n in enumerate((2, 3, 2)))
    flat = lp_product(ProductSpec(p, [A, B, C]))
    nested = lp_product(ProductSpec(p, [A, lp_product(ProductSpec(p, [B, C]))]))
    assert np.abs(flat.dist - nested.dist).max() <= 1e-12


@given(st.integers(0, 10**6), st.integers(1, 6), st.integers(-6, 6))
def test_power_of_two_scaling_exact(seed, n, e):
    X = space_from_seed(seed, n)
    assert scale(X, 2.0**e).diam == 2.0**e * X.diam


@given(st.integers(0, 10**6), st.integers(1, 7))
def test_random_spaces_validate(seed, n):
    # shortest-path closure in floats can leave one-ulp triangle defects
    validate_space(space_from_seed(seed, n).dist, tol=1e-12)
    validate_space(space_from_seed(seed, n, dyadic=True).dist, tol=0.0)
