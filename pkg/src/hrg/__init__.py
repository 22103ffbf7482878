"""Hyperbolic random graphs: seeded generation, exact structural analysis,
and a desk-scale experiment harness."""

from .analysis import (
    BandDiagnostics,
    ComponentReport,
    DegreeStats,
    InnerBandReach,
    RouteResult,
    UnderpassResult,
    band_diagnostics,
    check_core_clique,
    check_underpass,
    component_report,
    connected_components,
    degree_stats,
    exact_diameter,
    greedy_route,
    inner_band,
    inner_band_hops,
    inner_band_radius,
    layer_index,
    max_empty_sector_run,
)
from .geometry import (
    ModelParams,
    MonteCarloEstimate,
    PolarPoint,
    delta_phi,
    edge_indicator,
    hyperbolic_distance,
    mu_ball_origin_exact,
    mu_lens_approx,
    mu_monte_carlo,
    radial_pdf,
    theta_approx,
    theta_exact,
)
from .graphgen import BandIndex, Graph, build_banded, build_naive, theta_upper
from .sampling import (
    MODE_FIXED,
    MODE_POISSON,
    PointSet,
    disjointness_check,
    radial_icdf,
    sample_fixed,
    sample_poisson,
)

__version__ = "0.1.0"

__all__ = [
    "BandDiagnostics",
    "BandIndex",
    "ComponentReport",
    "DegreeStats",
    "Graph",
    "InnerBandReach",
    "MODE_FIXED",
    "MODE_POISSON",
    "ModelParams",
    "MonteCarloEstimate",
    "PointSet",
    "PolarPoint",
    "RouteResult",
    "UnderpassResult",
    "band_diagnostics",
    "build_banded",
    "build_naive",
    "check_core_clique",
    "check_underpass",
    "component_report",
    "connected_components",
    "degree_stats",
    "delta_phi",
    "disjointness_check",
    "edge_indicator",
    "exact_diameter",
    "greedy_route",
    "hyperbolic_distance",
    "inner_band",
    "inner_band_hops",
    "inner_band_radius",
    "layer_index",
    "max_empty_sector_run",
    "mu_ball_origin_exact",
    "mu_lens_approx",
    "mu_monte_carlo",
    "radial_icdf",
    "radial_pdf",
    "sample_fixed",
    "sample_poisson",
    "theta_approx",
    "theta_exact",
    "theta_upper",
]
