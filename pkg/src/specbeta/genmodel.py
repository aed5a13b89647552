"""Generative models with known ground truth.

Provides the source-mixing confounding model (latent sources Z feed both the
predictors, through a mixing matrix M, and the target, through a coefficient
vector c), its equivalent single-vector sampler, the causal-plus-noise
generator, and the small-sample construction where an independent target
produces confounding-like regression vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import BadDimensionsError, DegenerateModelError
from .spectral import CovarianceModel, DataMatrix

# Singular values below this relative cutoff are treated as zero when
# pseudo-inverting the mixing matrix.
PINV_RCOND = 1e-12


def as_generator(rng: int | np.random.Generator) -> np.random.Generator:
    """Accept either a 64-bit seed or an existing PCG64 generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.Generator(np.random.PCG64(rng))


@dataclass(frozen=True)
class GroundTruth:
    """A synthetic model with known causal and confounding coefficients.

    ``m`` is the d x ell mixing matrix from the ell latent sources to the d
    predictors, ``a`` the causal coefficients, ``c`` the source-to-target
    coefficients, and ``sigma_a``/``sigma_c`` the scales they were drawn with.
    """

    m: NDArray[np.float64]
    a: NDArray[np.float64]
    c: NDArray[np.float64]
    sigma_a: float
    sigma_c: float

    def __post_init__(self) -> None:
        m = np.asarray(self.m, dtype=np.float64)
        a = np.asarray(self.a, dtype=np.float64).reshape(-1)
        c = np.asarray(self.c, dtype=np.float64).reshape(-1)
        d, ell = m.shape
        if ell < d:
            raise BadDimensionsError(f"need ell >= d, got d={d}, ell={ell}")
        if a.shape[0] != d or c.shape[0] != ell:
            raise BadDimensionsError("a/c lengths do not match mixing matrix shape")
        if self.sigma_a < 0 or self.sigma_c < 0:
            raise ValueError("scales must be nonnegative")
        sv = np.linalg.svd(m, compute_uv=False)
        if sv[-1] <= 1e-10 * sv[0]:
            raise BadDimensionsError("mixing matrix is not of full row rank")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c", c)

    @property
    def d(self) -> int:
        return self.m.shape[0]

    @property
    def ell(self) -> int:
        return self.m.shape[1]


@dataclass(frozen=True)
class SyntheticDataset:
    """Samples plus the ground truth that produced them."""

    data: DataMatrix
    truth: GroundTruth
    true_beta: float
    seed: int


def sample_ground_truth(
    d: int, ell: int, rng: int | np.random.Generator
) -> GroundTruth:
    """Draw a random model: M entries N(0,1), scales Uniform[0,1], coefficients Gaussian.

    Draw order is fixed (M, sigma_a, sigma_c, a, c) so that a given seed
    always produces the identical model.
    """
    if not (1 <= d <= ell):
        raise BadDimensionsError(f"need ell >= d >= 1, got d={d}, ell={ell}")
    g = as_generator(rng)
    m = g.standard_normal((d, ell))
    sigma_a = float(g.uniform(0.0, 1.0))
    sigma_c = float(g.uniform(0.0, 1.0))
    a = sigma_a * g.standard_normal(d)
    c = sigma_c * g.standard_normal(ell)
    return GroundTruth(m=m, a=a, c=c, sigma_a=sigma_a, sigma_c=sigma_c)


def generate_samples(
    truth: GroundTruth,
    n: int,
    noise_sd: float = 0.0,
    rng: int | np.random.Generator = 0,
) -> SyntheticDataset:
    """Sample (X, Y) from the structural equations X = MZ, Y = a'X + c'Z + E.

    ``noise_sd`` = 0 reproduces the noise-free structural model; a positive
    value adds independent N(0, noise_sd^2) observation noise on Y.

    Passing an integer seed records it in the dataset so the samples are
    bit-exactly reproducible from (truth, seed, n); passing a live generator
    records seed 0.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got n={n}")
    if noise_sd < 0:
        raise ValueError("noise_sd must be nonnegative")
    seed = rng if isinstance(rng, int) else 0
    g = as_generator(rng)
    z = g.standard_normal((truth.ell, n))
    x = (truth.m @ z).T
    y = x @ truth.a + z.T @ truth.c
    if noise_sd > 0:
        y = y + noise_sd * g.standard_normal(n)
    data = DataMatrix(x=x, y=y)
    try:
        beta = true_beta(truth)
    except DegenerateModelError:
        # a = 0, c = 0 still yields valid (all-zero target) samples
        beta = float("nan")
    return SyntheticDataset(data=data, truth=truth, true_beta=beta, seed=seed)


def true_beta(truth: GroundTruth) -> float:
    """Exact confounding strength ||M^-T c||^2 / (||a||^2 + ||M^-T c||^2).

    Returns 1.0 for the purely confounded case (a = 0) and 0.0 for the
    purely causal case (c = 0).

    Raises
    ------
    DegenerateModelError
        If a = 0 and c = 0.
    """
    a2 = float(truth.a @ truth.a)
    c_any = bool(np.any(truth.c != 0.0))
    if a2 == 0.0 and not c_any:
        raise DegenerateModelError("a = 0 and c = 0: confounding strength undefined")
    if not c_any:
        return 0.0
    if a2 == 0.0:
        return 1.0
    mtc = np.linalg.pinv(truth.m, rcond=PINV_RCOND).T @ truth.c
    conf2 = float(mtc @ mtc)
    return conf2 / (a2 + conf2)


def sample_aprime_def1(
    truth: GroundTruth, rng: int | np.random.Generator
) -> NDArray[np.float64]:
    """Draw a fresh regression vector a' = a + M^-T c from the source-mixing model.

    Fresh coefficient vectors a and c are drawn with the scales stored in
    ``truth``; the mixing matrix is kept fixed.
    """
    g = as_generator(rng)
    a = truth.sigma_a * g.standard_normal(truth.d)
    c = truth.sigma_c * g.standard_normal(truth.ell)
    return a + np.linalg.pinv(truth.m, rcond=PINV_RCOND).T @ c


def sample_aprime_def2(
    cov: CovarianceModel,
    sigma_a: float,
    sigma_c: float,
    rng: int | np.random.Generator,
) -> NDArray[np.float64]:
    """Draw a' = sqrt(sigma_a^2 I + sigma_c^2 sigma_xx^{-1}) b with b standard Gaussian.

    The matrix square root is applied in the eigenbasis, so the cost is
    O(d^2) per draw and no matrix is ever formed.
    """
    g = as_generator(rng)
    b = g.standard_normal(cov.d)
    scale = np.sqrt(sigma_a**2 + sigma_c**2 / cov.eigenvalues)
    return cov.eigenvectors @ (scale * (cov.eigenvectors.T @ b))


def overfit_dataset(
    d: int, n: int, rng: int | np.random.Generator = 0
) -> SyntheticDataset:
    """Independent predictor/target samples, where regression overfits.

    X is produced by a random square mixing matrix applied to standard
    Gaussian sources and Y is drawn independently N(0,1).  There is no
    structural confounding, so ``true_beta`` is recorded as 0 even though
    finite-sample regression on such data behaves like pure confounding.
    """
    if n <= d + 1:
        raise ValueError(f"need n > d + 1, got n={n}, d={d}")
    seed = rng if isinstance(rng, int) else 0
    g = as_generator(rng)
    m = g.standard_normal((d, d))
    z = g.standard_normal((d, n))
    x = (m @ z).T
    y = g.standard_normal(n)
    truth = GroundTruth(
        m=m, a=np.zeros(d), c=np.zeros(d), sigma_a=1.0, sigma_c=1.0
    )
    return SyntheticDataset(
        data=DataMatrix(x=x, y=y), truth=truth, true_beta=0.0, seed=seed
    )


def causal_dataset(
    d: int,
    n: int,
    noise_sd: float = 1.0,
    rng: int | np.random.Generator = 0,
) -> SyntheticDataset:
    """Causal-only data Y = a'X + E with a ~ N(0, I) entries and E ~ N(0, noise_sd^2).

    X is produced by a random square mixing matrix.  No confounding term, so
    the recorded true confounding strength is 0; at small n the regression
    vector nevertheless looks confounded.
    """
    seed = rng if isinstance(rng, int) else 0
    g = as_generator(rng)
    m = g.standard_normal((d, d))
    a = g.standard_normal(d)
    truth = GroundTruth(m=m, a=a, c=np.zeros(d), sigma_a=1.0, sigma_c=0.0)
    ds = generate_samples(truth, n, noise_sd=noise_sd, rng=g)
    return SyntheticDataset(data=ds.data, truth=truth, true_beta=0.0, seed=seed)
