"""Detect hidden confounding between a multivariate predictor and a scalar target.

In a linear model, confounding by unobserved common causes (and likewise
overfitting) pushes the regression vector into the low-eigenvalue eigenspaces
of the predictor covariance.  This package quantifies that alignment: it
estimates the confounding strength beta in [0, 1] by maximum likelihood over
a one-parameter family of direction densities on the sphere, and tests the
null hypothesis of no confounding with a Monte-Carlo spectral statistic.
"""

from .cdtest import (
    MIXED_CHI2,
    SPHERE_MONTE_CARLO,
    TestResult,
    null_samples_mixed_chi2,
    null_samples_sphere,
    statistic_T,
    test_nonconfounding,
)
from .errors import (
    BadDimensionsError,
    ConstantColumnError,
    DataError,
    DegenerateModelError,
    MissingColumnError,
    NonNumericError,
    NumericOverflowError,
    ParseError,
    RankDeficientError,
    SingularMatrixError,
    SpecbetaError,
    TooFewSamplesError,
    ZeroSignalError,
)
from .estimator import (
    BetaEstimate,
    ConcentrationDiagnostic,
    ThetaEstimate,
    beta_from_theta,
    concentrated_loglik,
    concentration_bound,
    concentration_diagnostic,
    direction_density,
    estimate_confounding,
    estimate_theta,
    log_direction_density,
)
from .genmodel import (
    GroundTruth,
    SyntheticDataset,
    as_generator,
    causal_dataset,
    generate_samples,
    overfit_dataset,
    sample_aprime_def1,
    sample_aprime_def2,
    sample_ground_truth,
    true_beta,
)
from .harness import (
    ExperimentConfig,
    Report,
    emit_report,
    ingest_csv,
    read_numeric_csv,
    run_overfit_study,
    run_rejection_study,
    run_simulation_study,
    shuffle_target_analysis,
)
from .spectral import (
    CovarianceModel,
    DataMatrix,
    UnitDirection,
    empirical_covariance,
    regression_vector,
    renormalized_trace,
    unit_direction,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
