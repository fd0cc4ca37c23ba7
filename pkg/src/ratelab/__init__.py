"""ratelab: achievable-rate analysis of cooperative NOMA relaying over
Rician fading, with Monte-Carlo and quadrature cross-validation."""

__version__ = "0.1.0"

from .channel import (
    NetworkGeometry,
    RicianLink,
    SeriesConstants,
    make_link,
    marcum_q1,
    power_gain_cdf,
    power_gain_pdf,
    power_gain_sf,
    sample_power_gain,
    sample_power_gains,
    series_constants,
    split_stream,
)
from .rates import (
    ChannelRealization,
    PowerSplit,
    RateBreakdown,
    SnrSet,
    conventional_noma_rate,
    crs_noma_rate,
    crs_oma_rate,
    instantaneous_snrs,
)
from .analytic import (
    ClampStats,
    ErgodicRateReport,
    SeriesTruncation,
    cdf_gamma2_paper,
    cdf_min_pair_approx,
    cdf_min_pair_series,
    cdf_single_link_series,
    ergodic_rate_quadrature,
    ergodic_rate_quadrature_quantities,
    ergodic_rate_series,
    g_rho,
    h_rho,
)
from .montecarlo import EstimatorResult, estimate_rates, paired_gap
from .sweep import (
    CalibrationResult,
    SweepConfig,
    SweepResult,
    SweepRow,
    calibrate_k,
    discrepancy_report,
    emit_plot_script,
    parse_config,
    preset_config,
    render_csv,
    run_sweep,
)
from . import errors

__all__ = [
    "__version__",
    "NetworkGeometry", "RicianLink", "SeriesConstants",
    "make_link", "marcum_q1", "power_gain_cdf", "power_gain_pdf", "power_gain_sf",
    "sample_power_gain", "sample_power_gains", "series_constants", "split_stream",
    "ChannelRealization", "PowerSplit", "RateBreakdown", "SnrSet",
    "conventional_noma_rate", "crs_noma_rate", "crs_oma_rate", "instantaneous_snrs",
    "ClampStats", "ErgodicRateReport", "SeriesTruncation",
    "cdf_gamma2_paper", "cdf_min_pair_approx", "cdf_min_pair_series",
    "cdf_single_link_series", "ergodic_rate_quadrature",
    "ergodic_rate_quadrature_quantities", "ergodic_rate_series", "g_rho", "h_rho",
    "EstimatorResult", "estimate_rates", "paired_gap",
    "CalibrationResult", "SweepConfig", "SweepResult", "SweepRow",
    "calibrate_k", "discrepancy_report", "emit_plot_script", "parse_config",
    "preset_config", "render_csv", "run_sweep",
    "errors",
]
