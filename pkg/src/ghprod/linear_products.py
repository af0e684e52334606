"""Linear l^p products: the subset-supremum functional and its consequences.

A linear product scales unit-diameter factors W_n by weights a_n. For two
weight vectors a, b over the same factors, twice the GH distance is at most

    sup_S | ||a_S||_p - ||b_S||_p |

over index subsets S, and equals | ||a||_p - ||b||_p | whenever the full
index set attains that supremum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .correspondence import DEFAULT_MAPPAIR_STATES
from .errors import CapExceeded, DiameterNotOne, InvalidExponent, LengthMismatch, ValidationError
from .metric_core import (
    DEFAULT_PRODUCT_CAP,
    FiniteMetricSpace,
    ProductSpec,
    format_exponent,
    generate,
    lp_combine,
    lp_product,
    parse_exponent,
)

DEFAULT_SUBSET_SUP_N = 24
ATTAIN_TOL = 1e-12
CORNER_TOL = 1e-9
METHODS = ("auto", "exhaustive", "closed-form-p1", "singleton-linf")


@dataclass(frozen=True)
class WeightVector:
    entries: tuple
    p: float

    def __init__(self, entries, p):
        vals = tuple(float(v) for v in entries)
        if any(not (v >= 0 and math.isfinite(v)) for v in vals):
            raise ValidationError(f"weights must be finite and nonnegative, got {vals}")
        object.__setattr__(self, "entries", vals)
        object.__setattr__(self, "p", parse_exponent(p))

    def __len__(self):
        return len(self.entries)

    def norm(self) -> float:
        return float(lp_combine(self.entries, self.p))


@dataclass(frozen=True)
class SubsetSupResult:
    """``witness_subset`` holds 0-based indices; ``proper_value`` is the
    supremum over subsets other than the full index set."""

    value: float
    witness_subset: frozenset
    method: str
    proper_value: float

    def to_json(self):
        return {"value": self.value, "witness_subset": sorted(self.witness_subset),
                "method": self.method, "proper_value": self.proper_value}


def _as_vectors(a, b, p):
    if not isinstance(a, WeightVector):
        a = WeightVector(a, p if p is not None else 2)
    if not isinstance(b, WeightVector):
        b = WeightVector(b, p if p is not None else a.p)
    if p is not None:
        p = parse_exponent(p)
        a, b = WeightVector(a.entries, p), WeightVector(b.entries, p)
    if a.p != b.p:
        raise InvalidExponent(f"weight vectors disagree on p: {a.p} vs {b.p}")
    if len(a) != len(b):
        raise LengthMismatch(f"weight vectors have lengths {len(a)} and {len(b)}")
    return a, b


def subset_functional(a, b, p, subset) -> float:
    """| ||a_S||_p - ||b_S||_p | for one index set S."""
    idx = sorted(subset)
    aa = [a[i] for i in idx]
    bb = [b[i] for i in idx]
    return float(abs(lp_combine(aa, p) - lp_combine(bb, p)))


def _subset_norms(v, p):
    """l^p norm of v restricted to every bitmask subset (index = mask)."""
    v = np.asarray(v, dtype=np.float64)
    acc = np.zeros(1)
    if math.isinf(p):
        for x in v:
            acc = np.concatenate([acc, np.maximum(acc, x)])
        return acc
    w = v if p == 1 else v**p
    for x in w:
        acc = np.concatenate([acc, acc + x])
    return acc if p == 1 else acc ** (1.0 / p)


def _mask_to_set(mask):
    return frozenset(i for i in range(mask.bit_length()) if (mask >> i) & 1)


def subset_sup(a, b, p=None, method: str = "auto",
               max_n: int = DEFAULT_SUBSET_SUP_N) -> SubsetSupResult:
    """Supremum over all index subsets S of | ||a_S||_p - ||b_S||_p |.

    ``exhaustive`` scans all 2^N subsets (empty set included, value 0) and
    returns the smallest maximising mask. For p = 1 the value is the larger
    of the positive and negative parts of a - b; for p = inf it is
    max_n |a_n - b_n|. ``auto`` uses those closed forms and exhaustion
    otherwise.
    """
    a, b = _as_vectors(a, b, p)
    p = a.p
    N = len(a)
    if method not in METHODS:
        raise ValidationError(f"unknown method {method!r}; expected one of {METHODS}")
    if method == "auto":
        if p == 1:
            method = "closed-form-p1"
        elif math.isinf(p):
            method = "singleton-linf"
        else:
            method = "exhaustive"
    if method == "closed-form-p1" and p != 1:
        raise InvalidExponent("closed-form-p1 needs p = 1")
    if method == "singleton-linf" and not math.isinf(p):
        raise InvalidExponent("singleton-linf needs p = inf")

    av = np.array(a.entries)
    bv = np.array(b.entries)
    if method == "exhaustive":
        if N > max_n:
            raise CapExceeded("subset_sup exhaustive length", N, max_n)
        vals = np.abs(_subset_norms(av, p) - _subset_norms(bv, p))
        mask = int(np.argmax(vals))
        full = (1 << N) - 1
        proper = float(vals[:full].max()) if N else 0.0
        return SubsetSupResult(float(vals[mask]), _mask_to_set(mask), method, proper)

    d = av - bv
    if method == "closed-form-p1":
        pos = np.maximum(d, 0.0)
        neg = np.maximum(-d, 0.0)
        P, M = float(pos.sum()), float(neg.sum())
        S_pos = frozenset(np.flatnonzero(d > 0).tolist())
        S_neg = frozenset(np.flatnonzero(d < 0).tolist())
        value, witness = (P, S_pos) if P >= M else (M, S_neg)
        if value == 0:
            witness = frozenset()
        # best subset that is not the whole index set
        proper_pos = P if len(S_pos) < N else P - float(d.min())
        proper_neg = M if len(S_neg) < N else M - float((-d).min())
        return SubsetSupResult(value, witness, method, max(proper_pos, proper_neg, 0.0))

    gaps = np.abs(d)
    if N == 0:
        return SubsetSupResult(0.0, frozenset(), method, 0.0)
    n = int(np.argmax(gaps))
    value = float(gaps[n])
    witness = frozenset({n}) if value > 0 else frozenset()
    proper = value if N > 1 else 0.0
    return SubsetSupResult(value, witness, method, proper)


# -- endpoint / corner lemmas -----------------------------------------------

def xi_1d(x, alpha, beta, p):
    """| (x + 1)^(1/p) - (alpha x + beta)^(1/p) |"""
    x = np.asarray(x, dtype=np.float64)
    return np.abs((x + 1) ** (1.0 / p) - (alpha * x + beta) ** (1.0 / p))


def xi_box(kappa, a, b, A, B, p):
    """| (A + sum (a_n k_n)^p)^(1/p) - (B + sum (b_n k_n)^p)^(1/p) | on the last axis."""
    kappa = np.asarray(kappa, dtype=np.float64)
    sa = A + ((np.asarray(a) * kappa) ** p).sum(axis=-1)
    sb = B + ((np.asarray(b) * kappa) ** p).sum(axis=-1)
    return np.abs(sa ** (1.0 / p) - sb ** (1.0 / p))


@dataclass(frozen=True)
class CornerReport:
    grid_max: float
    corner_max: float
    tol: float = CORNER_TOL

    @property
    def defect(self):
        return self.grid_max - self.corner_max

    @property
    def passed(self):
        return self.defect <= self.tol

    def to_json(self):
        return {"grid_max": self.grid_max, "corner_max": self.corner_max,
                "defect": self.defect, "pass": self.passed}


def xi_endpoint_check(alpha, beta, p, T, grid_points=10_001, tol=CORNER_TOL) -> CornerReport:
    """Grid maximum of the one-variable function on [0, T] against its endpoints."""
    p = parse_exponent(p)
    if math.isinf(p) or alpha <= 0 or beta <= 0 or T <= 0:
        raise InvalidExponent("needs alpha, beta, T > 0 and finite p >= 1")
    if grid_points < 2:
        raise ValidationError("need at least 2 grid points")
    vals = xi_1d(np.linspace(0.0, T, grid_points), alpha, beta, p)
    return CornerReport(float(vals.max()), float(max(vals[0], vals[-1])), tol)


def xi_corner_check(a, b, A, B, p, box, grid_points=201, tol=CORNER_TOL,
                    max_dims=4) -> CornerReport:
    """Uniform-grid maximum over the box prod [0, T_n] against its 2^N corners.

    The grid includes the corners, so the defect is never negative; a
    positive defect above ``tol`` would falsify the corner principle.
    """
    p = parse_exponent(p)
    if math.isinf(p):
        raise InvalidExponent("the corner check needs finite p")
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    box = np.asarray(box, dtype=np.float64)
    N = len(box)
    if not (len(a) == len(b) == N):
        raise LengthMismatch("a, b and box must have the same length")
    if N > max_dims:
        raise CapExceeded("corner check dimensions", N, max_dims)
    if grid_points < 2:
        raise ValidationError("need at least 2 grid points per axis")
    axes = [np.linspace(0.0, t, grid_points) for t in box]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    grid_max = float(xi_box(mesh, a, b, A, B, p).max())
    corners = np.array(np.meshgrid(*[[0.0, t] for t in box], indexing="ij")).reshape(N, -1).T
    corner_max = float(xi_box(corners, a, b, A, B, p).max())
    return CornerReport(grid_max, corner_max, tol)


def verify_lemmas(draws=500, grid=10_001, seed=0, max_dims=3, tol=CORNER_TOL) -> dict:
    """Randomised falsification run for the endpoint and corner principles.

    One-variable draws: alpha, beta in (0, 4], p in [1, 8], T in (0, 5].
    Box draws: N in 1..max_dims, weights in [0, 4], offsets A, B in [0, 2],
    sides in (0, 3], with about ``10 * grid`` grid points in total.
    """
    rng = np.random.default_rng(seed)

    def positive(hi, size=None):
        # uniform on (0, hi]
        return hi - rng.uniform(0.0, hi, size)

    one_d = {"draws": draws, "failures": 0, "worst_defect": 0.0, "failed": []}
    for _ in range(draws):
        alpha, beta, T = positive(4.0), positive(4.0), positive(5.0)
        p = rng.uniform(1.0, 8.0)
        rep = xi_endpoint_check(alpha, beta, p, T, grid, tol)
        one_d["worst_defect"] = max(one_d["worst_defect"], rep.defect)
        if not rep.passed:
            one_d["failures"] += 1
            one_d["failed"].append({"alpha": alpha, "beta": beta, "p": p, "T": T, **rep.to_json()})

    multi = {"draws": draws, "failures": 0, "worst_defect": 0.0, "failed": []}
    budget = 10 * grid
    for _ in range(draws):
        N = int(rng.integers(1, max_dims + 1))
        a = rng.uniform(0.0, 4.0, N)
        b = rng.uniform(0.0, 4.0, N)
        A, B = rng.uniform(0.0, 2.0, 2)
        p = rng.uniform(1.0, 8.0)
        box = positive(3.0, N)
        per_axis = max(2, int(budget ** (1.0 / N)))
        rep = xi_corner_check(a, b, A, B, p, box, per_axis, tol, max_dims)
        multi["worst_defect"] = max(multi["worst_defect"], rep.defect)
        if not rep.passed:
            multi["failures"] += 1
            multi["failed"].append({"a": a.tolist(), "b": b.tolist(), "A": A, "B": B, "p": p,
                                    "box": box.tolist(), **rep.to_json()})
    return {"seed": seed, "grid": grid, "tol": tol, "endpoint_1d": one_d, "corner_box": multi,
            "failures": one_d["failures"] + multi["failures"]}


# -- diagonal map -----------------------------------------------------------

def _check_unit_factors(factors, tol=1e-12):
    for k, W in enumerate(factors):
        if abs(W.diam - 1.0) > tol:
            raise DiameterNotOne(k, W.diam)


def diagonal_distortion(factors: Sequence[FiniteMetricSpace], a, b, p=None,
                        cap: int = DEFAULT_MAPPAIR_STATES) -> float:
    """Distortion of the identity map between prod a_n W_n and prod b_n W_n.

    The identity's distortion only depends on which tuple of coordinate
    distances a pair of points realises, and every tuple from the product
    of the factors' distance sets is realised. So the maximum is taken over
    that (much smaller) set of tuples instead of all point pairs.
    """
    a, b = _as_vectors(a, b, p)
    p = a.p
    if len(factors) != len(a):
        raise LengthMismatch(f"{len(factors)} factors for {len(a)} weights")
    _check_unit_factors(factors)
    levels = [np.unique(W.dist) for W in factors]
    count = math.prod(len(v) for v in levels)
    if count > cap:
        raise CapExceeded("diagonal distortion distance tuples", count, cap)
    grid = np.stack(np.meshgrid(*levels, indexing="ij"), axis=0).reshape(len(levels), -1)
    av = np.array(a.entries)[:, None]
    bv = np.array(b.entries)[:, None]
    dx = lp_combine(av * grid, p, axis=0)
    dy = lp_combine(bv * grid, p, axis=0)
    return float(np.abs(dx - dy).max())


def diagonal_distortion_bruteforce(factors, a, b, p=None, cap=DEFAULT_PRODUCT_CAP) -> float:
    """Same quantity by scanning every point pair of the materialised products."""
    a, b = _as_vectors(a, b, p)
    _check_unit_factors(factors)
    X = lp_product(ProductSpec(a.p, list(zip(factors, a.entries))), cap=cap)
    Y = lp_product(ProductSpec(a.p, list(zip(factors, b.entries))), cap=cap)
    return float(np.abs(X.dist - Y.dist).max())


# -- GH distance between linear products -----------------------------------

@dataclass(frozen=True)
class LinearGhResult:
    """All distances are d_GH (half of the doubled quantities)."""

    upper: float
    lower: float
    exact: float | None
    attainable: bool
    condition_gap: float
    p: float
    subset: SubsetSupResult
    l1_ordered_value: float | None = None
    tail_bound: float | None = None

    def to_json(self):
        return {
            "p": format_exponent(self.p),
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "two_dgh_lower": 2 * self.lower,
            "two_dgh_upper": 2 * self.upper,
            "two_dgh_exact": None if self.exact is None else 2 * self.exact,
            "attainable": self.attainable,
            "condition_gap": self.condition_gap,
            "subset_sup": self.subset.to_json(),
            "l1_ordered_value": self.l1_ordered_value,
            "tail_bound": self.tail_bound,
        }


def linear_gh(a, b, p=None, max_n: int = DEFAULT_SUBSET_SUP_N,
              tail_bound: float | None = None) -> LinearGhResult:
    """Bounds on d_GH between the linear products with weights a and b.

    Lower bound: half the gap between the norms (the diameters of the two
    products). Upper bound: half the subset supremum. When no subset beats
    the full index set (within 1e-12) the two meet. ``condition_gap`` is the
    norm gap minus the best proper-subset value; attainability means it is
    not below -1e-12.

    ``tail_bound`` is for truncated infinite sequences: a caller-supplied bound
    on what the dropped entries could contribute. It is carried in the report
    as extra uncertainty and never added to the certified numbers, which
    describe the finite truncation only.
    """
    if tail_bound is not None and not (tail_bound >= 0 and math.isfinite(tail_bound)):
        raise ValidationError(f"tail bound must be finite and nonnegative, got {tail_bound!r}")
    a, b = _as_vectors(a, b, p)
    p = a.p
    sup = subset_sup(a, b, max_n=max_n)
    norm_gap = abs(a.norm() - b.norm())
    upper = 0.5 * sup.value
    lower = 0.5 * norm_gap
    attainable = sup.value <= norm_gap + ATTAIN_TOL
    condition_gap = norm_gap - sup.proper_value
    exact = lower if attainable else None
    ordered = None
    av, bv = np.array(a.entries), np.array(b.entries)
    if p == 1 and (np.all(av <= bv) or np.all(bv <= av)):
        ordered = 0.5 * float(np.abs(bv - av).sum())
        # coordinatewise ordered weights at p = 1: half the total difference
        if abs(ordered - lower) > ATTAIN_TOL * max(1.0, lower):
            raise AssertionError(f"ordered l^1 value {ordered!r} disagrees with {lower!r}")
    # the two bounds agree to 1e-12 when attainable; report one number
    upper = lower if attainable else max(upper, lower)
    return LinearGhResult(upper, lower, exact, attainable, condition_gap, p, sup, ordered,
                          tail_bound)


@dataclass(frozen=True)
class ToriResult:
    gh: LinearGhResult
    margin: float
    resolution: int
    discrete_distortion: float
    discrete_gap: float

    def to_json(self):
        out = self.gh.to_json()
        out.update({
            "tori_condition_margin": self.margin,
            "resolution": self.resolution,
            "discretized_two_dgh_upper": self.discrete_distortion,
            "discretized_minus_subset_sup": self.discrete_gap,
        })
        return out


def tori_distance(x, y, resolution: int = 64) -> ToriResult:
    """Flat tori (l^2) x1 S^1 * x2 S^1 and y1 S^1 * y2 S^1.

    ``margin`` is |‖x‖ - ‖y‖| - max(|x1 - y1|, |x2 - y2|); a nonnegative
    margin means the distance is half the norm gap. The discretised check
    replaces S^1 by the even cycle on ``resolution`` points and measures
    the identity map's distortion between the two discrete tori.
    """
    x, y = _as_vectors(x, y, 2)
    if len(x) != 2:
        raise LengthMismatch("tori need exactly two weights per side")
    if min(x.entries + y.entries) <= 0:
        raise ValidationError("torus weights must be positive")
    gh = linear_gh(x, y)
    singles = max(abs(x.entries[0] - y.entries[0]), abs(x.entries[1] - y.entries[1]))
    margin = abs(x.norm() - y.norm()) - singles
    cyc = generate(f"cycle:{int(resolution)}")
    disc = diagonal_distortion([cyc, cyc], x, y)
    return ToriResult(gh, margin, int(resolution), disc, disc - gh.subset.value)
