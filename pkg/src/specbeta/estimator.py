"""Spectral likelihood of regression directions and confounding-strength estimation.

The core quantity is the density, relative to the uniform measure on the
sphere, of the normalized regression vector under the confounding model with
scale ratio theta = sigma_c^2 / sigma_a^2.  With R_theta = I + theta *
sigma_xx^{-1} the direction is distributed as sqrt(R_theta) b / ||.|| for an
isotropic Gaussian b, and the change-of-variables density on the sphere is

    p_theta(v) = 1 / ( sqrt(det R_theta) * <v, R_theta^{-1} v>^{d/2} ),

so log p_theta(v) = -1/2 [ log det R_theta + d log <v, R_theta^{-1} v> ].

Maximizing this one-dimensional likelihood in theta and mapping through
tau(sigma_xx^{-1}) gives the confounding-strength estimate beta_hat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .errors import NumericOverflowError, SingularMatrixError, SpecbetaError
from .spectral import CovarianceModel, DataMatrix, UnitDirection
from .spectral import empirical_covariance, regression_vector, unit_direction

# Ratio of the scale parameter, sigma_c^2 / sigma_a^2.  Dimensionless and
# nonnegative; kept as a plain float throughout.
ThetaScale = float

# Scan-grid geometry for the likelihood maximization.  The grid spans
# [GRID_LO, GRID_HI] times the median eigenvalue, which makes it covariant
# under global rescaling of the predictors.
GRID_LO = 1e-6
GRID_HI = 1e6
GRID_POINTS = 200
GOLDEN_REL_TOL = 1e-6

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ThetaEstimate:
    """Result of the one-dimensional likelihood maximization."""

    theta: ThetaScale
    loglik: float
    profile: tuple[tuple[float, float], ...]
    boundary: bool


@dataclass(frozen=True)
class BetaEstimate:
    """Full output of the confounding-strength estimator.

    ``beta_hat`` equals ``tau_inv * theta_hat / (tau_inv * theta_hat + 1)``
    exactly as stored.  All intermediate artifacts are retained for
    diagnostics.
    """

    theta_hat: ThetaScale
    beta_hat: float
    tau_inv: float
    loglik_profile: tuple[tuple[float, float], ...]
    direction: UnitDirection
    cov: CovarianceModel
    aprime: NDArray[np.float64]
    boundary: bool


@dataclass(frozen=True)
class ConcentrationDiagnostic:
    """Concentration prediction for the single-draw log-likelihood."""

    theta: ThetaScale
    theta_prime: ThetaScale
    concentrated_value: float
    epsilon: float
    probability_lower_bound: float

    @property
    def probability_clamped(self) -> float:
        """Bound clamped to [0, 1] for reporting; raw value may be negative."""
        return min(1.0, max(0.0, self.probability_lower_bound))


def _weights_squared(direction: UnitDirection, cov: CovarianceModel) -> NDArray[np.float64]:
    w = direction.coords_in(cov)
    return w * w


def log_direction_density(
    theta: ThetaScale, direction: UnitDirection, cov: CovarianceModel
) -> float:
    """Log density of the direction under scale ratio ``theta``.

    Evaluated in the eigenbasis: with w the eigenbasis coordinates of the
    direction and r_j = 1 + theta/lambda_j,

        -1/2 [ sum_j log r_j + d * log sum_j w_j^2 / r_j ].

    Exactly 0.0 at theta = 0 (the density is uniform there).

    Raises
    ------
    NumericOverflowError
        If theta / lambda_min is not finite.
    """
    if theta < 0:
        raise ValueError("theta must be nonnegative")
    if theta == 0.0:
        return 0.0
    lam = cov.eigenvalues
    r = 1.0 + theta / lam
    if not np.all(np.isfinite(r)):
        raise NumericOverflowError("theta / lambda_min overflowed")
    w2 = _weights_squared(direction, cov)
    return -0.5 * (float(np.sum(np.log(r))) + cov.d * math.log(float(np.sum(w2 / r))))


def direction_density(
    a_matrix: NDArray[np.float64], direction: UnitDirection
) -> float:
    """Density on the sphere of v -> Av/||Av|| applied to a uniform direction.

    Returns |1 / (det(A) * ||A^{-1} v||^d)|; the absolute value of the
    determinant is used since a density must be nonnegative.

    Raises
    ------
    SingularMatrixError
        If A has condition number >= 1e12.
    """
    a = np.asarray(a_matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[-1] == 0.0 or sv[0] / sv[-1] >= 1e12:
        raise SingularMatrixError("matrix is singular or too ill-conditioned")
    d = a.shape[0]
    inv_v = np.linalg.solve(a, direction.v)
    det = abs(float(np.linalg.det(a)))
    return 1.0 / (det * float(np.linalg.norm(inv_v)) ** d)


def _golden_section_max(f, lo: float, hi: float, rel_tol: float):
    """Golden-section search for the maximum of a unimodal f on [lo, hi].

    Returns (x, f(x)); evaluations are reported through f itself (the caller
    passes a recording wrapper).  Ties prefer the smaller abscissa.
    """
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc = f(c)
    fd = f(d)
    while (hi - lo) > rel_tol * max(abs(hi), 1e-300):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def estimate_theta(
    direction: UnitDirection,
    cov: CovarianceModel,
    *,
    grid_points: int = GRID_POINTS,
    rel_tol: float = GOLDEN_REL_TOL,
) -> ThetaEstimate:
    """Maximize the direction log-likelihood over theta >= 0.

    Coarse scan over {0} union a logarithmic grid spanning
    [1e-6, 1e6] x median(lambda), then golden-section refinement on the
    bracketing interval.  Every evaluated (theta, loglik) pair is recorded
    in the profile.  Ties are broken toward smaller theta, and theta = 0 is
    always a candidate.  ``boundary`` is set when the maximum sits at the
    upper end of the scan range.
    """
    lam_med = float(np.median(cov.eigenvalues))
    grid = np.concatenate(
        [[0.0], np.geomspace(GRID_LO * lam_med, GRID_HI * lam_med, grid_points)]
    )
    profile: list[tuple[float, float]] = []

    def f(theta: float) -> float:
        val = log_direction_density(theta, direction, cov)
        profile.append((theta, val))
        return val

    vals = np.array([f(t) for t in grid])
    best = int(np.argmax(vals))  # first index on ties -> smaller theta
    lo = grid[best - 1] if best > 0 else 0.0
    hi = grid[best + 1] if best < len(grid) - 1 else grid[-1]
    if hi > lo:
        _golden_section_max(f, lo, hi, rel_tol)
    # The answer is the best evaluation overall, ties toward smaller theta.
    theta_hat, loglik = min(profile, key=lambda p: (-p[1], p[0]))
    boundary = bool(theta_hat >= grid[-1] * (1.0 - 1e-9))
    return ThetaEstimate(
        theta=float(theta_hat),
        loglik=float(loglik),
        profile=tuple(profile),
        boundary=boundary,
    )


def beta_from_theta(theta: ThetaScale, cov: CovarianceModel) -> float:
    """Map the scale ratio to confounding strength via the renormalized trace.

    beta = tau(sigma_xx^{-1}) * theta / (tau(sigma_xx^{-1}) * theta + 1);
    0 at theta = 0, monotone increasing, always < 1 for finite theta.
    """
    if theta < 0:
        raise ValueError("theta must be nonnegative")
    tau_inv = float(np.mean(1.0 / cov.eigenvalues))
    return tau_inv * theta / (tau_inv * theta + 1.0)


def estimate_confounding(data: DataMatrix) -> BetaEstimate:
    """Full pipeline: covariance -> regression direction -> theta -> beta.

    Upstream errors propagate with the failing stage recorded on the
    exception's ``stage`` attribute.
    """
    cov = _staged("empirical_covariance", empirical_covariance, data)
    aprime = _staged("regression_vector", regression_vector, cov)
    direction = _staged("unit_direction", unit_direction, aprime, cov)
    theta_est = _staged("estimate_theta", estimate_theta, direction, cov)
    tau_inv = float(np.mean(1.0 / cov.eigenvalues))
    beta = tau_inv * theta_est.theta / (tau_inv * theta_est.theta + 1.0)
    return BetaEstimate(
        theta_hat=theta_est.theta,
        beta_hat=beta,
        tau_inv=tau_inv,
        loglik_profile=theta_est.profile,
        direction=direction,
        cov=cov,
        aprime=aprime,
        boundary=theta_est.boundary,
    )


def _staged(stage: str, fn, *args):
    try:
        return fn(*args)
    except SpecbetaError as err:
        err.stage = stage  # type: ignore[attr-defined]
        raise


def concentrated_loglik(
    theta: ThetaScale,
    theta_prime: ThetaScale,
    cov: CovarianceModel,
    *,
    corrected: bool = False,
) -> float:
    """Value around which the single-draw log-likelihood concentrates.

    With r_j = 1 + theta/lambda_j and r'_j = 1 + theta'/lambda_j, the default
    form is

        1/2 [ log det R_theta - log( tau(R_theta' R_theta^{-1}) / tau(R_theta') ) ].

    ``corrected=True`` evaluates

        -1/2 [ log det R_theta + d * log( tau(R_theta' R_theta^{-1}) / tau(R_theta') ) ],

    which substitutes the concentrating averages into the direction
    log-density itself and is the value the empirical mean of
    ``log_direction_density`` actually approaches for large d.
    """
    if theta < 0 or theta_prime < 0:
        raise ValueError("theta values must be nonnegative")
    lam = cov.eigenvalues
    r = 1.0 + theta / lam
    rp = 1.0 + theta_prime / lam
    log_det = float(np.sum(np.log(r)))
    log_tau_ratio = math.log(float(np.mean(rp / r))) - math.log(float(np.mean(rp)))
    if corrected:
        return -0.5 * (log_det + cov.d * log_tau_ratio)
    return 0.5 * (log_det - log_tau_ratio)


def concentration_bound(
    theta: ThetaScale,
    theta_prime: ThetaScale,
    cov: CovarianceModel,
    epsilon: float,
    *,
    variant: str = "default",
) -> float:
    """Lower bound on the probability that the log-likelihood is near its
    concentrated value.

    ``variant="default"``:
        1 - (1/(d eps^2)) ( tau(R^2 R'^{-2}) / tau(R R')^2 + tau(R'^2) / tau(R')^2 )
    ``variant="conservative"`` (larger constant, transposed ratio):
        1 - (4/(d eps^2)) ( tau(R'^2 R^{-2}) / tau(R' R)^2 + tau(R'^2) / tau(R')^2 )

    The bound may be negative (vacuous); it is returned raw and only clamped
    at reporting time.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    lam = cov.eigenvalues
    r = 1.0 + theta / lam
    rp = 1.0 + theta_prime / lam
    tau = lambda x: float(np.mean(x))
    second = tau(rp**2) / tau(rp) ** 2
    if variant == "default":
        first = tau(r**2 / rp**2) / tau(r * rp) ** 2
        factor = 1.0
    elif variant == "conservative":
        first = tau(rp**2 / r**2) / tau(rp * r) ** 2
        factor = 4.0
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return 1.0 - factor / (cov.d * epsilon**2) * (first + second)


def concentration_diagnostic(
    theta: ThetaScale,
    theta_prime: ThetaScale,
    cov: CovarianceModel,
    epsilon: float,
    *,
    variant: str = "default",
) -> ConcentrationDiagnostic:
    """Bundle the concentrated value and probability bound for reporting."""
    return ConcentrationDiagnostic(
        theta=theta,
        theta_prime=theta_prime,
        concentrated_value=concentrated_loglik(theta, theta_prime, cov),
        epsilon=epsilon,
        probability_lower_bound=concentration_bound(
            theta, theta_prime, cov, epsilon, variant=variant
        ),
    )
