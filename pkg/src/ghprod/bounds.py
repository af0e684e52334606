"""Two-sided GH bounds for l^p products, clique bounds and self-products."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .correspondence import (
    correspondence_from_maps,
    distortion,
    exact_gh,
    product_correspondence,
)
from .errors import InsufficientCopies, SearchCapExceeded, ValidationError
from .metric_core import (
    DEFAULT_PRODUCT_CAP,
    FiniteMetricSpace,
    ProductSpec,
    format_exponent,
    lp_combine,
    lp_product,
    parse_exponent,
)

DEFAULT_CLIQUE_NODES = 10**7
SEARCH_Q_MAX = 64  # larger diametral cubes are checked directly
REPORT_TOL = 1e-12


@dataclass
class BoundReport:
    """Certified interval for d_GH (not doubled)."""

    lower: float
    upper: float
    exact: float | None = None
    method_lower: str = ""
    method_upper: str = ""
    witnesses: dict = field(default_factory=dict)

    def __post_init__(self):
        self.check()

    def check(self):
        if self.lower > self.upper + REPORT_TOL:
            raise ValueError(f"lower bound {self.lower!r} exceeds upper bound {self.upper!r}")
        if self.exact is not None and not (
            self.lower - REPORT_TOL <= self.exact <= self.upper + REPORT_TOL
        ):
            raise ValueError(f"exact value {self.exact!r} outside [{self.lower!r}, {self.upper!r}]")

    def to_json(self):
        self.check()
        out = {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "two_dgh_lower": 2 * self.lower,
            "two_dgh_upper": 2 * self.upper,
            "two_dgh_exact": None if self.exact is None else 2 * self.exact,
            "method_lower": self.method_lower,
            "method_upper": self.method_upper,
        }
        if self.witnesses:
            out["witnesses"] = self.witnesses
        return out

    @classmethod
    def from_json(cls, data):
        return cls(data["lower"], data["upper"], data.get("exact"),
                   data.get("method_lower", ""), data.get("method_upper", ""),
                   data.get("witnesses", {}))


@dataclass
class FactorPairing:
    """Factor pairs (X_k, Y_k) of two l^p products, plus per-factor distances.

    When ``per_factor_dgh`` is omitted it is filled by :func:`exact_gh` on
    each pair the first time a bound needs it.
    """

    p: float
    pairs: Sequence
    per_factor_dgh: list | None = None
    provenance: str = ""
    caps: dict = field(default_factory=dict)

    def __post_init__(self):
        self.p = parse_exponent(self.p)
        self.pairs = [tuple(pair) for pair in self.pairs]
        if not self.pairs:
            raise ValidationError("factor pairing must not be empty")
        if self.per_factor_dgh is not None:
            vals = [float(v) for v in self.per_factor_dgh]
            if len(vals) != len(self.pairs):
                raise ValidationError(f"{len(vals)} per-factor distances for {len(self.pairs)} pairs")
            if any(not (v >= 0 and math.isfinite(v)) for v in vals):
                raise ValidationError("per-factor distances must be finite and nonnegative")
            self.per_factor_dgh = vals
            self.provenance = self.provenance or "supplied"
        self._results = None

    def factor_distances(self):
        if self.per_factor_dgh is None:
            self._results = [exact_gh(x, y, **self.caps) for x, y in self.pairs]
            self.per_factor_dgh = [r.value for r in self._results]
            self.provenance = "exact_gh"
        return self.per_factor_dgh

    @property
    def factor_results(self):
        self.factor_distances()
        return self._results

    def product_spaces(self, cap=DEFAULT_PRODUCT_CAP):
        X = lp_product(ProductSpec(self.p, [x for x, _ in self.pairs]), cap=cap)
        Y = lp_product(ProductSpec(self.p, [y for _, y in self.pairs]), cap=cap)
        return X, Y

    def product_diameters(self):
        dx = float(lp_combine([x.diam for x, _ in self.pairs], self.p))
        dy = float(lp_combine([y.diam for _, y in self.pairs], self.p))
        return dx, dy


def product_upper_bound(fp: FactorPairing) -> float:
    """l^p norm of the per-factor GH distances (max for p = inf)."""
    return float(lp_combine(fp.factor_distances(), fp.p))


def _projection_terms(fp: FactorPairing):
    dgh = fp.factor_distances()
    diam_x = [x.diam for x, _ in fp.pairs]
    diam_y = [y.diam for _, y in fp.pairs]
    terms = []
    for n in range(len(fp.pairs)):
        rest_x = lp_combine(diam_x[:n] + diam_x[n + 1:], fp.p)
        rest_y = lp_combine(diam_y[:n] + diam_y[n + 1:], fp.p)
        terms.append(dgh[n] - 0.5 * float(rest_x) - 0.5 * float(rest_y))
    return terms


def product_lower_bound(fp: FactorPairing) -> float:
    """Best single-factor projection bound, never below the diameter sandwich.

    For each factor n: d_GH(X_n, Y_n) minus half the l^p norms of the other
    factors' diameters on both sides.
    """
    dx, dy = fp.product_diameters()
    return max(max(_projection_terms(fp)), 0.5 * abs(dx - dy), 0.0)


def diam_sandwich(X: FiniteMetricSpace, Y: FiniteMetricSpace):
    return 0.5 * abs(X.diam - Y.diam), 0.5 * max(X.diam, Y.diam)


def product_bounds(fp: FactorPairing, exact: bool = False,
                   product_cap: int = DEFAULT_PRODUCT_CAP) -> BoundReport:
    """Both product bounds as a report, optionally with the exact value.

    With ``exact`` the products are materialised and solved by
    :func:`exact_gh` under the pairing's caps.
    """
    upper = product_upper_bound(fp)
    terms = _projection_terms(fp)
    dx, dy = fp.product_diameters()
    sandwich = 0.5 * abs(dx - dy)
    lower = max(max(terms), sandwich, 0.0)
    if lower == sandwich or lower == 0.0:
        method_lower = "diameter sandwich"
    else:
        method_lower = f"projection onto factor {int(np.argmax(terms))}"
    witnesses = {
        "per_factor_dgh": list(fp.factor_distances()),
        "per_factor_provenance": fp.provenance,
        "projection_terms": terms,
        "p": format_exponent(fp.p),
    }
    value = None
    if exact:
        X, Y = fp.product_spaces(cap=product_cap)
        res = exact_gh(X, Y, **fp.caps)
        value = res.value
        witnesses["product_exact"] = res.to_json()
        if fp.provenance == "exact_gh":
            parts = [correspondence_from_maps(r.witness) if hasattr(r.witness, "f") else r.witness
                     for r in fp.factor_results]
            R = product_correspondence(parts)
            witnesses["product_correspondence_dgh"] = distortion(R, X, Y) / 2
    return BoundReport(lower, upper, value, method_lower,
                       f"l^{format_exponent(fp.p)} norm of factor distances", witnesses)


# -- clique bound -----------------------------------------------------------

def _color_bound(P: int, adj: list) -> int:
    """Number of colours in a greedy colouring of the candidate set P."""
    colors = 0
    while P:
        colors += 1
        Q = P
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            P &= ~low
            Q &= ~adj[v] & ~low
    return colors


def max_threshold_clique(Y: FiniteMetricSpace, threshold: float,
                         node_cap: int = DEFAULT_CLIQUE_NODES) -> list:
    """Largest Q in Y with d(q, q') >= threshold for all distinct q, q'.

    Exact branch and bound over ascending vertex order with a greedy
    colouring bound. Among maximum cliques the lexicographically smallest
    vertex list is returned. Raises :class:`SearchCapExceeded` (carrying the
    best clique so far) once more than ``node_cap`` nodes are expanded.
    """
    n = Y.n
    A = Y.dist >= threshold
    np.fill_diagonal(A, False)
    adj = []
    for i in range(n):
        row = 0
        for j in np.flatnonzero(A[i]):
            row |= 1 << int(j)
        adj.append(row)

    best: list = []
    nodes = 0
    # explicit stack of (clique so far, remaining candidates)
    stack = [([], (1 << n) - 1)]
    while stack:
        C, P = stack.pop()
        if len(C) > len(best):
            best = C
        children = []
        while P:
            low = P & -P
            v = low.bit_length() - 1
            P &= ~low
            Pv = P & adj[v]
            if len(C) + 1 + bin(Pv).count("1") <= len(best):
                continue
            if Pv and len(C) + 1 + _color_bound(Pv, adj) <= len(best):
                continue
            nodes += 1
            if nodes > node_cap:
                raise SearchCapExceeded(nodes, node_cap, best)
            children.append((C + [v], Pv))
        # reversed so the smallest vertex is explored first
        stack.extend(reversed(children))
    return best


@dataclass(frozen=True)
class CliqueCertificate:
    bound: float | None
    clique: tuple
    threshold: float
    space_size: int

    @property
    def certified(self):
        return self.bound is not None

    def to_json(self):
        return {"bound": self.bound, "two_dgh_bound": None if self.bound is None else 2 * self.bound,
                "clique": list(self.clique), "clique_size": len(self.clique),
                "threshold": self.threshold, "needed_more_than": self.space_size}


def clique_certificate(X: FiniteMetricSpace, Y: FiniteMetricSpace, eps: float = 0.0,
                       node_cap: int = DEFAULT_CLIQUE_NODES) -> CliqueCertificate:
    """Search Y for more than #X points pairwise at least diam(Y) - eps apart.

    Any map from such a set into X identifies two of its points, which
    forces distortion at least diam(Y) - eps; so d_GH(X, Y) >= (diam Y - eps)/2.
    """
    if eps < 0:
        raise ValidationError(f"eps must be nonnegative, got {eps!r}")
    threshold = Y.diam - eps
    Q = max_threshold_clique(Y, threshold, node_cap)
    bound = max(0.5 * threshold, 0.0) if len(Q) > X.n else None
    return CliqueCertificate(bound, tuple(Q), threshold, X.n)


def clique_lower_bound(X: FiniteMetricSpace, Y: FiniteMetricSpace, eps: float = 0.0,
                       node_cap: int = DEFAULT_CLIQUE_NODES) -> float | None:
    return clique_certificate(X, Y, eps, node_cap).bound


# -- self products ----------------------------------------------------------

def self_product_distance(X: FiniteMetricSpace, k: int,
                          product_cap: int = DEFAULT_PRODUCT_CAP,
                          node_cap: int = DEFAULT_CLIQUE_NODES) -> BoundReport:
    """Bounds for d_GH(X, l^inf product of k copies of X).

    The upper bound is half the larger diameter (both equal diam X). The
    lower bound comes from Q = {x, x'}^k for a diametral pair: its 2^k
    points are pairwise diam X apart, so once 2^k > #X the clique bound
    meets the upper bound. Only Q is built, never the full power.
    """
    k = int(k)
    if k < 1:
        raise ValidationError(f"need at least one copy, got k={k}")
    if k < X.n:
        warnings.warn(InsufficientCopies(
            f"k={k} < #X={X.n}: fewer copies than points; "
            "exactness is claimed only if the clique certificate holds"), stacklevel=2)
    D = X.diam
    upper = 0.5 * max(D, D)
    witnesses = {"k": k, "points": X.n}
    if D == 0:
        return BoundReport(0.0, upper, 0.0, "diameter sandwich", "diameter sandwich", witnesses)

    i, j = (int(v) for v in np.unravel_index(int(np.argmax(X.dist)), X.dist.shape))
    pair = X.subspace([i, j])
    witnesses["diametral_pair"] = [X.labels[i], X.labels[j]]
    q_size = 2**k
    witnesses["Q_size"] = q_size
    if q_size <= SEARCH_Q_MAX:
        # small Q: run the exact clique search as an independent check
        Q = lp_product(ProductSpec(math.inf, [pair] * k), cap=product_cap)
        cert = clique_certificate(X, Q, 0.0, node_cap)
        witnesses["clique"] = cert.to_json()
        certified = cert.certified
        lower_val = cert.bound if certified else 0.0
        assert Q.diam == D
    elif q_size <= product_cap:
        # Q is a clique by construction; confirm every pairwise distance
        Q = lp_product(ProductSpec(math.inf, [pair] * k), cap=product_cap)
        off = ~np.eye(q_size, dtype=bool)
        certified = bool(Q.dist[off].min() >= D) and q_size > X.n
        lower_val = 0.5 * D if certified else 0.0
        witnesses["clique"] = {"bound": lower_val if certified else None, "clique_size": q_size,
                               "needed_more_than": X.n, "threshold": D, "verified": "all pairs"}
    else:
        # verify #X + 1 tuples of Q explicitly; the rest follow by symmetry
        m = X.n + 1
        digits = np.array(np.unravel_index(np.arange(m), (2,) * k)).T
        sub = (digits[:, None, :] != digits[None, :, :]).any(axis=2)
        dist = np.where(sub, D, 0.0)
        np.fill_diagonal(dist, D)
        certified = bool(dist.min() >= D)
        lower_val = 0.5 * D if certified else 0.0
        witnesses["clique"] = {"verified_prefix": m, "clique_size": q_size,
                               "needed_more_than": X.n, "threshold": D}
    lower = max(lower_val, 0.0)
    exact = None
    if certified:
        if lower != upper:
            raise AssertionError(f"clique bound {lower!r} does not meet upper bound {upper!r}")
        exact = upper
    return BoundReport(lower, upper, exact,
                       "clique in {diametral pair}^k" if certified else "diameter sandwich",
                       "half the larger diameter", witnesses)
