"""Discrete/continuous-time VARMA-MCARMA transformation toolkit.

Core pieces: companion state-space assembly and stationarity checks, the
exact transformation relation between the h-step Euler recursion and its
continuous coefficients (with an exact-arithmetic substitution oracle), NIG
distribution algebra, jump-diffusion simulation with small-jump Gaussian
substitution, and the five-stage estimation pipeline for seasonal
heteroscedastic daily data.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    FitError,
    McarmaError,
    MeasureError,
    NumericError,
    PipelineError,
    RestrictionError,
    ShapeError,
    SolverError,
    ValidationError,
)
from .model import (  # noqa: F401
    CompanionSystem,
    IndexClassification,
    McarmaCoefficients,
    ModelOrders,
    StationarityReport,
    VarmaRepresentation,
    assemble_companion,
    classify_index,
    mcarma_stationarity,
    perturb_blocks,
    recursive_parameter,
    var_stationarity,
)
from .transform import (  # noqa: F401
    b_table,
    closed_form_p4d2,
    forward_transform,
    inverse_transform_mcar,
    lemma1_expansion,
    ordering_discrepancy_report,
    paper_forward_p4d2,
)
from .oracle import symbolic_oracle  # noqa: F401
from .nig import (  # noqa: F401
    NigParams,
    ks_test,
    mix_through_loadings,
    nig_cdf,
    nig_convolve,
    nig_fit,
    nig_mean,
    nig_pdf,
    nig_sample,
    nig_scale,
    nig_variance,
)
from .levy import JumpSpec, LevyMeasure1D, g_squared, nig_levy_measure, power_law_measure  # noqa: F401
from .simulate import (  # noqa: F401
    DiffusionSpec,
    NigDriver,
    PathSet,
    euler_step,
    simulate_extended_mcar,
    simulate_jump_diffusion,
    simulate_mcarma,
    strong_error_experiment,
)
from .estimate import (  # noqa: F401
    BetaSolution,
    FittedMcarModel,
    PipelineConfig,
    SeasonalityCoefficients,
    VolatilitySpec,
    empirical_daily_variance,
    fit_mcar_pipeline,
    fit_seasonality,
    fit_var_ols,
    fit_volatility,
    solve_beta,
)
