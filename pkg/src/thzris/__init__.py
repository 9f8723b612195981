"""Active-RIS-assisted THz downlink: analytical link-level performance
model (path loss, molecular absorption, beam misalignment, Gamma-fitted
cascaded fading, ergodic capacity) with an independent Monte-Carlo
validator and a parameter-sweep CLI."""

from .capacity import (
    ActiveRisParams,
    CapacityResult,
    LinkModel,
    capacity_from_snr_cdf,
    ergodic_capacity,
    snr_cdf,
    snr_cdf_conditional,
    snr_realization,
    snr_scale,
)
from .cascade import (
    CascadeMoments,
    FourthMomentMode,
    GammaFit,
    cascade_moments,
    chi_cdf,
    fit_gamma,
    fourth_moment,
)
from .channel import (
    SPEED_OF_LIGHT,
    AbsorptionSpec,
    LinkGeometry,
    MisalignmentParams,
    absorption_gain,
    load_absorption_table,
    misalignment_cdf,
    misalignment_from_physical,
    misalignment_pdf,
    misalignment_quantile,
    path_gain,
    propagation_gain,
)
from .config import (
    ScenarioConfig,
    apply_sweep_value,
    build_model,
    default_scenario,
    dump_config,
    parse_config,
    parse_config_text,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    FitError,
    NegativeVarianceError,
)
from .montecarlo import (
    McConfig,
    McEstimate,
    batch_rng,
    cascade_samples,
    estimate_ergodic_rate,
    sample_cascade,
    sample_snr,
    snr_samples,
)
from .numerics import (
    QuadratureSpec,
    QuadResult,
    erf,
    integrate_finite,
    integrate_semi_infinite,
    reg_lower_gamma,
)

__version__ = "0.1.0"

__all__ = [
    "ActiveRisParams",
    "AbsorptionSpec",
    "CapacityResult",
    "CascadeMoments",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "FitError",
    "FourthMomentMode",
    "GammaFit",
    "LinkGeometry",
    "LinkModel",
    "McConfig",
    "McEstimate",
    "MisalignmentParams",
    "NegativeVarianceError",
    "QuadResult",
    "QuadratureSpec",
    "SPEED_OF_LIGHT",
    "ScenarioConfig",
    "absorption_gain",
    "apply_sweep_value",
    "batch_rng",
    "build_model",
    "capacity_from_snr_cdf",
    "cascade_moments",
    "cascade_samples",
    "chi_cdf",
    "default_scenario",
    "dump_config",
    "erf",
    "ergodic_capacity",
    "estimate_ergodic_rate",
    "fit_gamma",
    "fourth_moment",
    "integrate_finite",
    "integrate_semi_infinite",
    "load_absorption_table",
    "misalignment_cdf",
    "misalignment_from_physical",
    "misalignment_pdf",
    "misalignment_quantile",
    "parse_config",
    "parse_config_text",
    "path_gain",
    "propagation_gain",
    "reg_lower_gamma",
    "sample_cascade",
    "sample_snr",
    "snr_cdf",
    "snr_cdf_conditional",
    "snr_realization",
    "snr_samples",
    "snr_scale",
    "__version__",
]
