"""Correspondences, map pairs, distortions and exact GH solvers."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import CapExceeded, NotACorrespondence, NotAProduct, SizeMismatch, ValidationError
from .metric_core import FiniteMetricSpace, ProductSpec, lp_combine, lp_product

DEFAULT_SUBSET_BITS = 25
DEFAULT_MAPPAIR_STATES = 10**8
BB_MAX_POINTS = 62  # bitset domains live in int64
STRATEGIES = ("auto", "subset-enum", "mappair-enum", "mappair-bb")
_ALIASES = {"subset": "subset-enum", "mappair": "mappair-enum", "bb": "mappair-bb"}


class Correspondence:
    """Relation between an nx-point and an ny-point space with both projections onto.

    ``x_shape``/``y_shape`` record factor sizes when the relation lives on
    product spaces; :func:`project_correspondence` needs them.
    """

    def __init__(self, rel, x_shape=None, y_shape=None):
        rel = np.array(rel, dtype=bool)
        if rel.ndim != 2 or rel.size == 0:
            raise NotACorrespondence(f"relation must be a nonempty 2-D boolean matrix, got shape {rel.shape}")
        empty_rows = np.flatnonzero(~rel.any(axis=1))
        if empty_rows.size:
            raise NotACorrespondence(f"point x{int(empty_rows[0])} is unrelated")
        empty_cols = np.flatnonzero(~rel.any(axis=0))
        if empty_cols.size:
            raise NotACorrespondence(f"point y{int(empty_cols[0])} is unrelated")
        for shape, n in ((x_shape, rel.shape[0]), (y_shape, rel.shape[1])):
            if shape is not None and math.prod(shape) != n:
                raise SizeMismatch(f"factor shape {shape} does not match {n} points")
        rel.setflags(write=False)
        self.rel = rel
        self.x_shape = tuple(x_shape) if x_shape is not None else None
        self.y_shape = tuple(y_shape) if y_shape is not None else None

    nx = property(lambda self: self.rel.shape[0])
    ny = property(lambda self: self.rel.shape[1])

    @classmethod
    def from_pairs(cls, nx, ny, pairs, **kw):
        rel = np.zeros((nx, ny), dtype=bool)
        for i, j in pairs:
            rel[i, j] = True
        return cls(rel, **kw)

    @classmethod
    def from_mask(cls, nx, ny, mask: int):
        bits = [(mask >> c) & 1 for c in range(nx * ny)]
        return cls(np.array(bits, dtype=bool).reshape(nx, ny))

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n, dtype=bool))

    def pairs(self):
        return [(int(i), int(j)) for i, j in np.argwhere(self.rel)]

    def mask(self) -> int:
        """Bit ``i * ny + j`` is set iff x_i ~ y_j."""
        return sum(1 << int(c) for c in np.flatnonzero(self.rel.ravel()))

    def __len__(self):
        return int(self.rel.sum())

    def __le__(self, other):
        return self.rel.shape == other.rel.shape and bool(np.all(~self.rel | other.rel))

    def __eq__(self, other):
        return isinstance(other, Correspondence) and np.array_equal(self.rel, other.rel)

    def __hash__(self):
        return hash((self.rel.shape, self.rel.tobytes()))

    def __repr__(self):
        return f"Correspondence({self.nx}x{self.ny}, pairs={self.pairs()})"

    def to_json(self):
        return {"kind": "correspondence", "nx": self.nx, "ny": self.ny, "pairs": self.pairs()}


@dataclass(frozen=True)
class MapPair:
    f: tuple
    g: tuple

    def __init__(self, f, g):
        object.__setattr__(self, "f", tuple(int(v) for v in f))
        object.__setattr__(self, "g", tuple(int(v) for v in g))
        nx, ny = len(self.f), len(self.g)
        if nx == 0 or ny == 0:
            raise ValidationError("map pair needs nonempty domains")
        if any(not 0 <= v < ny for v in self.f):
            raise ValidationError(f"f has values outside [0, {ny})")
        if any(not 0 <= v < nx for v in self.g):
            raise ValidationError(f"g has values outside [0, {nx})")

    nx = property(lambda self: len(self.f))
    ny = property(lambda self: len(self.g))

    def to_json(self):
        return {"kind": "mappair", "f": list(self.f), "g": list(self.g)}


@dataclass(frozen=True)
class GhResult:
    """``value`` is d_GH (not doubled); ``2 * value`` is the witness distortion."""

    value: float
    witness: object
    method: str
    enumerated: int

    @property
    def two_dgh(self):
        return 2 * self.value

    def to_json(self):
        return {
            "dgh": self.value,
            "two_dgh": self.two_dgh,
            "method": self.method,
            "witness": self.witness.to_json(),
            "enumerated": self.enumerated,
        }


def _check_sizes(nx, ny, X, Y):
    if (nx, ny) != (X.n, Y.n):
        raise SizeMismatch(f"object is {nx}x{ny} but spaces have {X.n} and {Y.n} points")


def distortion(R: Correspondence, X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    _check_sizes(R.nx, R.ny, X, Y)
    ii, jj = np.nonzero(R.rel)
    return float(np.abs(X.dist[np.ix_(ii, ii)] - Y.dist[np.ix_(jj, jj)]).max())


def map_distortions(fp: MapPair, X: FiniteMetricSpace, Y: FiniteMetricSpace):
    """Return ``(dis f, dis g, codis(f, g))``."""
    _check_sizes(fp.nx, fp.ny, X, Y)
    f = np.array(fp.f)
    g = np.array(fp.g)
    dX, dY = X.dist, Y.dist
    dis_f = float(np.abs(dX - dY[np.ix_(f, f)]).max())
    dis_g = float(np.abs(dY - dX[np.ix_(g, g)]).max())
    codis = float(np.abs(dX[:, g] - dY[f, :]).max())
    return dis_f, dis_g, codis


def correspondence_from_maps(fp: MapPair) -> Correspondence:
    """Graph of f together with the reversed graph of g."""
    rel = np.zeros((fp.nx, fp.ny), dtype=bool)
    rel[np.arange(fp.nx), list(fp.f)] = True
    rel[list(fp.g), np.arange(fp.ny)] = True
    return Correspondence(rel)


def product_correspondence(parts: Sequence[Correspondence], p=None, factors=None) -> Correspondence:
    """Coordinatewise product of factor correspondences.

    Tuples are ordered lexicographically, matching :func:`lp_product`, so
    the relation matrix is the Kronecker product of the parts. When the
    factor space pairs are given along with ``p`` the distortion bound
    ``dis R <= ||(dis R_k)_k||_p`` is asserted.
    """
    if not parts:
        raise ValidationError("need at least one factor correspondence")
    x_shape = tuple(R.nx for R in parts)
    y_shape = tuple(R.ny for R in parts)
    size = math.prod(x_shape) * math.prod(y_shape)
    if size > DEFAULT_MAPPAIR_STATES:
        raise CapExceeded("product relation cells", size, DEFAULT_MAPPAIR_STATES)
    rel = parts[0].rel
    for R in parts[1:]:
        rel = np.kron(rel, R.rel)
    out = Correspondence(rel, x_shape, y_shape)
    if factors is not None and p is not None:
        X = lp_product(ProductSpec(p, [x for x, _ in factors]))
        Y = lp_product(ProductSpec(p, [y for _, y in factors]))
        bound = float(lp_combine([distortion(R, x, y) for R, (x, y) in zip(parts, factors)], p))
        assert distortion(out, X, Y) <= bound + 1e-12
    return out


def project_correspondence(R: Correspondence, k: int) -> Correspondence:
    if R.x_shape is None or R.y_shape is None:
        raise NotAProduct("correspondence carries no factor structure")
    if len(R.x_shape) != len(R.y_shape):
        raise NotAProduct("x and y products have different numbers of factors")
    K = len(R.x_shape)
    if not 0 <= k < K:
        raise NotAProduct(f"factor index {k} out of range for {K} factors")
    t = R.rel.reshape(R.x_shape + R.y_shape)
    keep = (k, K + k)
    axes = tuple(a for a in range(2 * K) if a not in keep)
    return Correspondence(t.any(axis=axes))


# -- exact solvers ----------------------------------------------------------

def mappair_states(nx: int, ny: int) -> int:
    return ny**nx * nx**ny


def _cost_matrix(X, Y):
    B = X.n * Y.n
    return np.abs(X.dist[:, None, :, None] - Y.dist[None, :, None, :]).reshape(B, B)


def _decode_map(index, n_dom, n_cod):
    out = [0] * n_dom
    for pos in range(n_dom - 1, -1, -1):
        out[pos] = index % n_cod
        index //= n_cod
    return out


def exact_gh(X: FiniteMetricSpace, Y: FiniteMetricSpace, strategy: str = "auto",
             cap_bits: int = DEFAULT_SUBSET_BITS,
             mappair_cap: int = DEFAULT_MAPPAIR_STATES,
             node_cap: int = DEFAULT_MAPPAIR_STATES) -> GhResult:
    """Exact GH distance by exhaustive search.

    ``subset-enum`` scans every bitmask of the nx*ny relation matrix;
    ``mappair-enum`` scans every R_{f,g}, which suffices because any
    correspondence contains some R_{f,g} of no larger distortion;
    ``mappair-bb`` searches the same map pairs by bisecting over candidate
    distortion values, for instances too large to enumerate. ``auto`` takes the
    first of mappair-enum, subset-enum, mappair-bb whose cap allows it.
    """
    strategy = _ALIASES.get(strategy, strategy)
    if strategy not in STRATEGIES:
        raise ValidationError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    nx, ny = X.n, Y.n
    states = mappair_states(nx, ny)
    bits = nx * ny
    if strategy == "auto":
        if states <= mappair_cap:
            strategy = "mappair-enum"
        elif bits <= cap_bits:
            strategy = "subset-enum"
        else:
            strategy = "mappair-bb"

    dX = np.ascontiguousarray(X.dist)
    dY = np.ascontiguousarray(Y.dist)
    if strategy == "subset-enum":
        if bits > cap_bits:
            raise CapExceeded("subset-enum relation bits", bits, cap_bits)
        best, mask, count = _kernels.subset_enum(_cost_matrix(X, Y), nx, ny)
        return GhResult(best / 2, Correspondence.from_mask(nx, ny, int(mask)), strategy, int(count))
    if strategy == "mappair-enum":
        if states > mappair_cap:
            raise CapExceeded("mappair-enum map pairs", states, mappair_cap)
        best, i, j, _, _ = _kernels.mappair_enum(dX, dY)
        fp = MapPair(_decode_map(int(i), nx, ny), _decode_map(int(j), ny, nx))
        return GhResult(best / 2, fp, strategy, states)
    if max(nx, ny) > BB_MAX_POINTS:
        raise CapExceeded("mappair-bb points per space", max(nx, ny), BB_MAX_POINTS)
    best, assign, nodes, hit = _kernels.mappair_bb(dX, dY, node_cap)
    if hit:
        raise CapExceeded("mappair-bb search nodes", int(nodes), node_cap)
    fp = MapPair(assign[:nx], assign[nx:])
    return GhResult(best / 2, fp, strategy, int(nodes))


def witness_distortion(result: GhResult, X, Y) -> float:
    w = result.witness
    if isinstance(w, MapPair):
        w = correspondence_from_maps(w)
    return distortion(w, X, Y)
