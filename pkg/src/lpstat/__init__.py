"""LP score statistics: mid-distribution scores, LP comoments, LPINFOR,
orthogonal-series copula and comparison density estimation."""

from ._errors import (
    ConvergenceError,
    DegenerateError,
    DomainError,
    InfeasibleMomentsError,
    LPError,
    NumericalError,
    SeparationError,
    SupportMismatchError,
)
from .empirical import (
    MidDistribution,
    PairedSample,
    Sample,
    informative_quantile,
    mid_distribution,
    mid_quantile,
    mid_rank_transform,
    quantile,
)
from .scores import LegendreBasis, ScoreBasis, build_score_basis, eval_S, legendre_basis
from .lpmoments import (
    LPMatrix,
    LPMomentVector,
    extended_multiple_correlation,
    gini_correlation,
    lp_comoment_matrix,
    lp_score_moments,
    lp_tail_order,
    pearson_representation,
    variance_decomposition,
)
from .dependence import (
    ConditionalProfile,
    CopulaEstimate,
    SelectedModel,
    aic_select,
    conditional_profile,
    copula_l2,
    copula_maxent,
    dep_table,
    full_model,
    lpinfor_test,
    screen_pairs,
)
from .compdensity import (
    ComparisonFit,
    ParametricStart,
    accept_reject_gof,
    bayes_odds,
    comparison_distribution,
    comparison_probability,
    conditional_comparison_density,
    density_estimate,
    fit_start,
    logistic_comparison_fit,
    neyman_fit,
)
from .regression import RegressionFit, conditional_score_regression, eval_regression, fit_regression

__version__ = "0.1.0"
