"""Exact Gromov-Hausdorff distances for small finite metric spaces and
certified bounds for their l^p products."""
from .bounds import (
    BoundReport,
    CliqueCertificate,
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
from .correspondence import (
    Correspondence,
    GhResult,
    MapPair,
    correspondence_from_maps,
    distortion,
    exact_gh,
    map_distortions,
    product_correspondence,
    project_correspondence,
    witness_distortion,
)
from .errors import CapExceeded, GhError, InsufficientCopies, ValidationError
from .linear_products import (
    WeightVector,
    diagonal_distortion,
    linear_gh,
    subset_sup,
    tori_distance,
    verify_lemmas,
    xi_corner_check,
    xi_endpoint_check,
)
from .metric_core import (
    FiniteMetricSpace,
    ProductSpec,
    diameter,
    generate,
    lp_product,
    point,
    random_space,
    scale,
    simplex,
    validate_space,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "GhError",
    "InsufficientCopies",
    "ValidationError",
    "BoundReport",
    "CliqueCertificate",
    "FactorPairing",
    "clique_certificate",
    "clique_lower_bound",
    "diam_sandwich",
    "max_threshold_clique",
    "product_bounds",
    "product_lower_bound",
    "product_upper_bound",
    "self_product_distance",
    "Correspondence",
    "GhResult",
    "MapPair",
    "correspondence_from_maps",
    "distortion",
    "exact_gh",
    "map_distortions",
    "product_correspondence",
    "project_correspondence",
    "witness_distortion",
    "WeightVector",
    "diagonal_distortion",
    "linear_gh",
    "subset_sup",
    "tori_distance",
    "verify_lemmas",
    "xi_corner_check",
    "xi_endpoint_check",
    "FiniteMetricSpace",
    "ProductSpec",
    "diameter",
    "generate",
    "lp_product",
    "point",
    "random_space",
    "scale",
    "simplex",
    "validate_space",
]
