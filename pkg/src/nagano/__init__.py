"""Kobayashi, Caratheodory and Hilbert metrics on domains in real Grassmannians."""

from .errors import *  # noqa: F401,F403
from .numerics import DEFAULT_TOL, Tolerance, bracketed_root, make_rng, minimize, rank_with_tol
from .grassmann import (
    INF,
    GrassmannContext,
    Photon,
    Plane,
    ProjParam,
    arithmetic_distance,
    cross_ratio_flag,
    cross_ratio_proj,
    intersect_dim,
    is_transverse,
    param_eval,
    param_through,
    photon_collinearity_residual,
    photon_through,
    plucker,
)
from .domains import (
    HyperplaneComplementDomain,
    PhotonInterval,
    SymmetricDomain,
    domain_from_json,
    photon_convexity_probe,
    photon_intersection,
    r_proper_probe,
    segment_hilbert_length,
)
from .metrics import (
    CHI_H_ALPHA,
    Chain,
    MetricReport,
    RelativePosition,
    SearchConfig,
    caratheodory_lower,
    geodesic_r_chain,
    hyperbolicity_probe,
    kobayashi_closed_form,
    kobayashi_upper,
    normalize_to_base,
    relative_position,
    sample_duals,
    sandwich,
)
from . import tables

__version__ = "0.1.0"
