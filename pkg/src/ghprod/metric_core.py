"""Finite metric spaces: validation, scaling, l^p products and generators."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
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
    ValidationError,
)

DEFAULT_TOL = 1e-9
DEFAULT_PRODUCT_CAP = 20_000
GENERATOR_KINDS = ("simplex", "cycle", "path", "point")


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Immutable distance matrix with point labels.

    Build instances through :func:`validate_space` unless the matrix is
    known to be a metric by construction.
    """

    dist: np.ndarray
    labels: tuple = ()
    name: str = ""
    diam: float = field(init=False)

    def __post_init__(self):
        d = np.array(self.dist, dtype=np.float64)
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(d.shape[0])))
        else:
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "diam", float(d.max()) if d.size else 0.0)

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def __len__(self):
        return self.n

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<FiniteMetricSpace{tag} n={self.n} diam={self.diam!r}>"

    def subspace(self, idx, name=""):
        idx = np.asarray(idx, dtype=np.intp)
        return FiniteMetricSpace(
            self.dist[np.ix_(idx, idx)], tuple(self.labels[i] for i in idx), name
        )

    def to_json(self) -> dict:
        return {"name": self.name, "labels": list(self.labels), "dist": self.dist.tolist()}


def validate_space(matrix, labels: Sequence | None = None, name: str = "",
                   tol: float = DEFAULT_TOL) -> FiniteMetricSpace:
    """Check the metric axioms and return a :class:`FiniteMetricSpace`.

    Symmetry and the zero diagonal are checked exactly; the triangle
    inequality is allowed a slack of ``tol``. A violated triangle is reported
    at its largest defect (first such triple in ``(i, j, k)`` order).
    Distinct points at distance 0 are accepted (pseudometrics arise from
    zero-weight product factors).
    """
    d = np.asarray(matrix, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] < 1:
        raise NotSquareError(f"distance matrix must be a nonempty square, got shape {d.shape}")
    n = d.shape[0]
    if labels is not None and len(labels) != n:
        raise LabelError(f"{len(labels)} labels for {n} points")
    if labels is not None and len(set(map(str, labels))) != n:
        raise LabelError("labels must be unique")

    bad = np.argwhere(~np.isfinite(d))
    if bad.size:
        raise NonFiniteDistanceError(*map(int, bad[0]))
    diag = np.flatnonzero(np.diag(d) != 0)
    if diag.size:
        i = int(diag[0])
        raise NonzeroDiagonalError(i, float(d[i, i]))
    bad = np.argwhere(d != d.T)
    if bad.size:
        i, j = map(int, bad[0])
        raise AsymmetryError(i, j, float(d[i, j]), float(d[j, i]))
    bad = np.argwhere(d < 0)
    if bad.size:
        i, j = map(int, bad[0])
        raise NegativeDistanceError(i, j, float(d[i, j]))

    worst = (tol, None)
    for k in range(n):
        defect = d - (d[:, k][:, None] + d[k, :][None, :])
        m = defect.max()
        if m > worst[0]:
            i, j = np.unravel_index(int(np.argmax(defect)), defect.shape)
            worst = (float(m), (int(i), int(j), k))
    if worst[1] is not None:
        raise TriangleViolation(*worst[1], worst[0])
    return FiniteMetricSpace(d, tuple(labels) if labels is not None else (), name)


def diameter(X: FiniteMetricSpace) -> float:
    return X.diam


def scale(X: FiniteMetricSpace, lam: float) -> FiniteMetricSpace:
    if not lam > 0 or not math.isfinite(lam):
        raise NonpositiveScale(f"scale factor must be positive and finite, got {lam!r}")
    name = f"{lam!r}*{X.name}" if X.name else ""
    return FiniteMetricSpace(X.dist * lam, X.labels, name)


def parse_exponent(p) -> float:
    """Accept a number, ``"inf"`` or ``math.inf``; reject p < 1."""
    if isinstance(p, str):
        token = p.strip().lower()
        if token in ("inf", "infinity", "∞"):
            return math.inf
        try:
            p = float(token)
        except ValueError:
            raise InvalidExponent(f"cannot parse exponent {p!r}") from None
    p = float(p)
    if math.isnan(p) or p < 1:
        raise InvalidExponent(f"exponent must lie in [1, inf], got {p!r}")
    return p


def format_exponent(p: float):
    return "inf" if math.isinf(p) else p


def lp_combine(terms, p: float, axis=0):
    """l^p norm of nonnegative ``terms`` along ``axis``.

    This is the single place where coordinate distances are combined, so
    products, subset functionals and diagonal distortions share arithmetic.
    """
    terms = np.asarray(terms, dtype=np.float64)
    if terms.shape[axis] == 0:
        shape = list(terms.shape)
        del shape[axis]
        return np.zeros(shape) if shape else 0.0
    if math.isinf(p):
        return terms.max(axis=axis)
    if p == 1:
        return terms.sum(axis=axis)
    return (terms ** p).sum(axis=axis) ** (1.0 / p)


@dataclass(frozen=True)
class ProductSpec:
    """Exponent plus an ordered list of ``(space, weight)`` factors."""

    p: float
    factors: tuple

    def __init__(self, p, factors):
        p = parse_exponent(p)
        facs = []
        for item in factors:
            if isinstance(item, FiniteMetricSpace):
                item = (item, 1.0)
            space, w = item
            w = float(w)
            if not (w >= 0 and math.isfinite(w)):
                raise ValidationError(f"factor weights must be finite and nonnegative, got {w!r}")
            facs.append((space, w))
        if not facs:
            raise ValidationError("a product needs at least one factor")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "factors", tuple(facs))

    @property
    def shape(self) -> tuple:
        return tuple(space.n for space, _ in self.factors)

    @property
    def cardinality(self) -> int:
        return math.prod(self.shape)

    def diameter(self) -> float:
        return float(lp_combine([w * s.diam for s, w in self.factors], self.p))


def lp_product(spec: ProductSpec, cap: int = DEFAULT_PRODUCT_CAP, name: str = "") -> FiniteMetricSpace:
    """Weighted l^p product, points in lexicographic order of factor indices.

    A zero weight keeps the factor's coordinates but contributes nothing to
    distances, so the result may be a pseudometric.
    """
    shape = spec.shape
    total = spec.cardinality
    if total > cap:
        raise CapExceeded("product points", total, cap)
    digits = np.unravel_index(np.arange(total), shape)
    p = spec.p
    dist = np.zeros((total, total))
    # accumulate factor by factor; same operation order as lp_combine
    for k, (space, w) in enumerate(spec.factors):
        t = w * space.dist[np.ix_(digits[k], digits[k])]
        if math.isinf(p):
            np.maximum(dist, t, out=dist)
        elif p == 1:
            dist += t
        else:
            dist += t ** p
    if not math.isinf(p) and p != 1:
        dist **= 1.0 / p
    np.fill_diagonal(dist, 0.0)
    labels = []
    for flat in range(total):
        parts = [spec.factors[k][0].labels[digits[k][flat]] for k in range(len(shape))]
        labels.append("(" + ",".join(parts) + ")")
    return FiniteMetricSpace(dist, tuple(labels), name)


def product_digits(shape, index):
    """Factor coordinates of the flat product index (lexicographic order)."""
    return tuple(int(i) for i in np.unravel_index(index, shape))


# -- generators -------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    size: int = 1

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise GeneratorError(f"unknown generator kind {self.kind!r}; expected one of {GENERATOR_KINDS}")
        if int(self.size) != self.size or self.size < 1:
            raise GeneratorError(f"generator size must be a positive integer, got {self.size!r}")
        if self.kind == "cycle" and self.size % 2:
            raise OddCycleSize(f"cycle:{self.size} has odd size; diameter 1 needs an even point count")

    @classmethod
    def parse(cls, text: str) -> "GeneratorSpec":
        kind, _, size = text.strip().partition(":")
        if not size:
            if kind == "point":
                return cls("point", 1)
            raise GeneratorError(f"generator string {text!r} needs the form kind:n")
        try:
            n = int(size)
        except ValueError:
            raise GeneratorError(f"bad generator size in {text!r}") from None
        return cls(kind, n)

    def __str__(self):
        return "point" if self.kind == "point" else f"{self.kind}:{self.size}"


def generate(spec: GeneratorSpec | str, cap: int = DEFAULT_PRODUCT_CAP) -> FiniteMetricSpace:
    if isinstance(spec, str):
        spec = GeneratorSpec.parse(spec)
    n = 1 if spec.kind == "point" else spec.size
    if n > cap:
        raise CapExceeded("generated points", n, cap)
    i = np.arange(n)
    gap = np.abs(i[:, None] - i[None, :]).astype(np.float64)
    if spec.kind == "point" or n == 1:
        d = np.zeros((1, 1))
    elif spec.kind == "simplex":
        d = (gap > 0).astype(np.float64)
    elif spec.kind == "cycle":
        d = np.minimum(gap, n - gap) / (n / 2)
    else:  # path
        d = gap / (n - 1)
    return FiniteMetricSpace(d, (), str(spec))


def simplex(n: int) -> FiniteMetricSpace:
    return generate(GeneratorSpec("simplex", n))


def point() -> FiniteMetricSpace:
    return generate(GeneratorSpec("point", 1))


def random_space(n: int, rng: np.random.Generator, dyadic: bool = False) -> FiniteMetricSpace:
    """Random metric on ``n`` points: shortest paths over random edge weights.

    With ``dyadic`` the weights are multiples of 1/8, which keeps every sum
    in the closure exact and produces plenty of distance ties.
    """
    if dyadic:
        w = rng.integers(1, 17, size=(n, n)) / 8.0
    else:
        w = rng.uniform(0.1, 1.0, size=(n, n))
    w = np.minimum(w, w.T)
    np.fill_diagonal(w, 0.0)
    for k in range(n):
        w = np.minimum(w, w[:, [k]] + w[[k], :])
    w = np.minimum(w, w.T)
    return validate_space(w)


def isometric_under(X: FiniteMetricSpace, Y: FiniteMetricSpace, perm=None, atol=1e-12) -> bool:
    """Whether ``perm`` (default: identity) is an isometry X -> Y within ``atol``."""
    if X.n != Y.n:
        return False
    perm = np.arange(X.n) if perm is None else np.asarray(perm)
    return bool(np.all(np.abs(X.dist - Y.dist[np.ix_(perm, perm)]) <= atol))
