"""Mutual information, dispersion and the normal approximation.

After Alamouti combining every symbol sees ``Y = X + Z`` with
``Z | H ~ CN(0, N0 / H)`` and ``H ~ Gamma(2, 1)`` shared by the two symbols
of a block.  Inputs are uniform over a finite constellation.  Rates are in
bits per complex symbol; natural logs are used internally and converted
once.

The finite-blocklength error probability is the normal approximation
``eps = Q(sqrt(n) (I - R) / sqrt(V))`` without the ``O(log n / n)`` term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from . import _mc, _random
from .channel import noise_variance, sample_channel
from .lattice import distance_spectrum, epstein_zeta

__all__ = [
    "MiEstimate",
    "DispersionEstimate",
    "FblPoint",
    "MonteCarloConfig",
    "cond_density",
    "information_density",
    "mutual_information",
    "block_information",
    "mi_high_snr_deficit",
    "mi_gap_asymptotic",
    "dispersion",
    "q_function",
    "q_inverse",
    "fbl_rate",
    "fbl_epsilon",
    "fbl_argument_stderr",
    "estimate_iv",
    "epsilon_rate_curve",
]

LN2 = math.log(2.0)


def _points(c) -> np.ndarray:
    return np.asarray(getattr(c, "points", c), dtype=complex).ravel()


def _check_normalised(points: np.ndarray) -> None:
    if len(points) > 1 and abs(np.mean(np.abs(points) ** 2) - 1.0) > 1e-9:
        raise ValueError("constellation must be normalised to unit energy")


def cond_density(y, x, H, n0):
    """``p(y | x, H) = H / (pi N0) exp(-H |y - x|^2 / N0)``."""
    if np.any(np.asarray(H) <= 0) or n0 <= 0:
        raise ValueError("H and n0 must be positive")
    d = np.abs(np.asarray(y) - np.asarray(x)) ** 2
    return H / (math.pi * n0) * np.exp(-H * d / n0)


def _log_ratio(points: np.ndarray, y: np.ndarray, own: np.ndarray, H, n0: float) -> np.ndarray:
    # ln p(y|x) - ln((1/M) sum_x' p(y|x')) with max subtraction.
    # `own` is -H |y - x|^2 / N0 for the transmitted point.
    H = np.asarray(H, dtype=float)[..., None]
    dr = y.real[..., None] - points.real
    di = y.imag[..., None] - points.imag
    e = -(dr * dr + di * di) * (H / n0)
    m = np.max(e, axis=-1)
    lse = m + np.log(np.sum(np.exp(e - m[..., None]), axis=-1))
    # own <= lse exactly since the transmitted point is one of the terms;
    # clamp the cancellation residue so i <= log M holds in floating point
    return np.minimum(own - lse, 0.0) + math.log(len(points))


def information_density(x, y, H, c, n0: float):
    """Information density ``log2 p(y|x,H) / p(y|H)`` in bits.

    Vectorised over `x`, `y`, `H`.  The log-domain evaluation keeps the
    result at or below ``log2 M``.
    """
    points = _points(c)
    if np.any(np.asarray(H) <= 0) or n0 <= 0:
        raise ValueError("H and n0 must be positive")
    y = np.asarray(y, dtype=complex)
    x = np.asarray(x, dtype=complex)
    own = -np.asarray(H, dtype=float) * np.abs(y - x) ** 2 / n0
    return _log_ratio(points, y, own, H, n0) / LN2


def _density_samples(rng, points: np.ndarray, n0: float, H: np.ndarray, shape) -> np.ndarray:
    # Draws X uniform and Z ~ CN(0, N0/H) and returns i(X; Y | H) in nats.
    idx = rng.integers(0, len(points), size=shape)
    z = _random.complex_normal(rng, shape) * np.sqrt(n0 / H)
    y = points[idx] + z
    own = -H * (z.real**2 + z.imag**2) / n0
    return _log_ratio(points, y, own, H, n0)


@dataclass(frozen=True)
class MiEstimate:
    mean: float
    stderr: float
    samples: int
    snr_db: float


_MI_BATCH = 8192


def _moments_chunk(points, n0, per_block, use_cv):
    def run(rng, n):
        parts = []
        for b in _random.batches(n, _MI_BATCH):
            H = sample_channel(rng, b).gain
            if per_block:
                v = _density_samples(rng, points, n0, H[:, None], (b, 2)).sum(axis=1)
            else:
                v = _density_samples(rng, points, n0, H, (b,))
            F = _mc.controls(H) if use_cv else np.empty((b, 0))
            parts.append(_mc.stats(v, F))
        return _mc.merge(parts)

    return run


def _run_moments(c, snr_db, samples, seed, chunk_count, threads, per_block, use_cv):
    points = _points(c)
    _check_normalised(points)
    if len(points) == 1:
        return MiEstimate(0.0, 0.0, int(samples), float(snr_db))
    n0 = noise_variance(snr_db)
    sizes = _random.chunk_sizes(samples, chunk_count)
    run = _moments_chunk(points, n0, per_block, use_cv)
    mean, se = _mc.estimate(_mc.merge(_random.run_chunks(run, seed, sizes, threads)))
    return MiEstimate(mean / LN2, se / LN2, int(samples), float(snr_db))


def mutual_information(c, snr_db: float, samples: int = 2_000_000,
                       seed: int = _random.DEFAULT_SEED,
                       chunk_count: int = _random.DEFAULT_CHUNKS,
                       threads: int = 1, control_variates: bool = True) -> MiEstimate:
    """Monte Carlo estimate of the constellation-constrained MI per symbol.

    Samples ``(H, X, Z)`` and averages the information density.  With
    `control_variates` the average is regressed on zero-mean functions of
    ``H``, which removes most of the fading-induced sampling noise.
    """
    return _run_moments(c, snr_db, samples, seed, chunk_count, threads, False, control_variates)


def block_information(c, snr_db: float, blocks: int, seed: int = _random.DEFAULT_SEED,
                      chunk_count: int = _random.DEFAULT_CHUNKS,
                      threads: int = 1, control_variates: bool = True) -> MiEstimate:
    """Mean information density of a block of two symbols sharing one ``H``."""
    return _run_moments(c, snr_db, blocks, seed, chunk_count, threads, True, control_variates)


def mi_high_snr_deficit(c, snr_db: float) -> float:
    """High-SNR approximation of ``log2 M - I`` from the distance spectrum.

    ``(1 / ln 2) sum_r N_r (1 + SNR d_r^2 / E_s)^-2`` with the
    constellation's own average energy.
    """
    points = _points(c)
    if len(points) < 2:
        return 0.0
    spec = distance_spectrum(c)
    es = float(np.mean(np.abs(points) ** 2))
    snr = 10.0 ** (snr_db / 10.0)
    terms = spec.multiplicities * (1.0 + snr * spec.distances**2 / es) ** (-2)
    return float(np.sum(terms)) / LN2


def mi_gap_asymptotic(energy_ratio: float | None = None, zeta_ratio: float | None = None,
                      radius: int = 2000) -> float:
    """Asymptotic SNR gap (dB) at equal MI deficit, square over hexagonal.

    ``10 log10(E_sq / E_hex) + 5 log10(zeta_Z2(2) / zeta_A2(2))`` with the
    continuous-cell energy ratio 6/5 and truncated Epstein sums unless the
    ratios are given.
    """
    if energy_ratio is None:
        energy_ratio = 6.0 / 5.0
    if zeta_ratio is None:
        zeta_ratio = epstein_zeta("square", radius) / epstein_zeta("hex", radius)
    return 10.0 * math.log10(energy_ratio) + 5.0 * math.log10(zeta_ratio)


@dataclass(frozen=True)
class DispersionEstimate:
    """Dispersion per complex symbol, ``E[Var(i|H)] + 2 Var(E[i|H])``.

    ``i_mean`` is the MI implied by the conditional means, a by-product
    useful for cross-checking :func:`mutual_information`.
    """

    v: float
    stderr: float
    e_var_given_h: float
    var_e_given_h: float
    i_mean: float
    i_stderr: float
    h_samples: int
    per_h_samples: int


_DISP_BATCH_ELEMS = 1 << 21


def _dispersion_chunk(points, n0, per_h):
    rows = max(1, _DISP_BATCH_ELEMS // (per_h * len(points)))

    def run(rng, n):
        gains = np.empty(n)
        means = np.empty(n)
        variances = np.empty(n)
        done = 0
        for b in _random.batches(n, rows):
            H = sample_channel(rng, b).gain
            v = _density_samples(rng, points, n0, H[:, None], (b, per_h))
            gains[done:done + b] = H
            means[done:done + b] = v.mean(axis=1)
            variances[done:done + b] = v.var(axis=1, ddof=1)
            done += b
        return gains, means, variances

    return run


def dispersion(c, snr_db: float, h_samples: int = 20_000, per_h_samples: int = 200,
               seed: int = _random.DEFAULT_SEED, chunk_count: int = _random.DEFAULT_CHUNKS,
               threads: int = 1, control_variates: bool = True) -> DispersionEstimate:
    """Nested Monte Carlo estimate of the channel dispersion (bits^2).

    The outer loop draws ``H``; the inner loop estimates the conditional
    mean and (unbiased) variance of the information density.  The variance
    of the conditional mean is corrected for inner sampling noise by
    subtracting ``E[Var(i|H)] / per_h_samples``.  Outer averages use the
    same ``H``-driven control variates as :func:`mutual_information`.
    """
    if per_h_samples < 2:
        raise ValueError("per_h_samples must be >= 2")
    points = _points(c)
    _check_normalised(points)
    if len(points) == 1:
        return DispersionEstimate(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, int(h_samples), int(per_h_samples))
    n0 = noise_variance(snr_db)
    sizes = _random.chunk_sizes(h_samples, chunk_count)
    parts = _random.run_chunks(_dispersion_chunk(points, n0, per_h_samples), seed, sizes, threads)
    H = np.concatenate([p[0] for p in parts])
    means = np.concatenate([p[1] for p in parts]) / LN2
    variances = np.concatenate([p[2] for p in parts]) / LN2**2
    k = per_h_samples
    if control_variates:
        F = _mc.controls(H)
    else:
        F = np.empty((len(H), 0))
    e_var, _ = _mc.estimate(_mc.stats(variances, F))
    m1, i_se = _mc.estimate(_mc.stats(means, F))
    m2, _ = _mc.estimate(_mc.stats(means * means, F))
    var_e = max(0.0, m2 - m1 * m1 - e_var / k)
    v = e_var + 2.0 * var_e
    # Linearised influence of each H draw on v.
    psi = variances * (1.0 - 2.0 / k) + 2.0 * means * means - 4.0 * m1 * means
    _, v_se = _mc.estimate(_mc.stats(psi, F))
    return DispersionEstimate(v, v_se, e_var, var_e, m1, i_se, int(h_samples), int(k))


def q_function(x):
    """Standard normal upper tail ``Q(x) = erfc(x / sqrt 2) / 2``."""
    return 0.5 * special.erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def _log_q(x: float) -> float:
    return float(special.log_ndtr(-x))


def q_inverse(p: float) -> float:
    """Inverse of :func:`q_function` by bracketed root finding on ``log Q``."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    if p == 0.5:
        return 0.0
    target = math.log(p)
    guess = math.sqrt(2.0) * float(special.erfcinv(2.0 * p))
    lo, hi = guess - 1.0, guess + 1.0
    while _log_q(lo) < target:
        lo -= 2.0 * (hi - lo)
    while _log_q(hi) > target:
        hi += 2.0 * (hi - lo)
    return optimize.brentq(lambda x: _log_q(x) - target, lo, hi, xtol=1e-15, rtol=1e-15,
                           maxiter=200)


def _check_blocklength(n: int) -> None:
    if n < 2 or n % 2:
        raise ValueError("n must be an even integer >= 2")


def fbl_rate(i: float, v: float, n: int, p_e: float) -> float:
    """Normal-approximation rate ``I - sqrt(V / n) Q^-1(p_e)``."""
    _check_blocklength(n)
    if v < 0:
        raise ValueError("v must be nonnegative")
    return i - math.sqrt(v / n) * q_inverse(p_e)


def fbl_epsilon(i: float, v: float, n: int, rate: float) -> float:
    """Normal-approximation error probability ``Q(sqrt(n) (I - R) / sqrt(V))``.

    With ``V = 0`` this degenerates to a step at ``R = I``.
    """
    _check_blocklength(n)
    if v < 0:
        raise ValueError("v must be nonnegative")
    if v == 0:
        if rate < i:
            return 0.0
        return 1.0 if rate > i else 0.5
    return float(q_function(math.sqrt(n) * (i - rate) / math.sqrt(v)))


def fbl_argument_stderr(i: float, v: float, n: int, rate: float,
                        i_stderr: float, v_stderr: float) -> tuple[float, float]:
    """``z = sqrt(n) (I - R) / sqrt(V)`` and its delta-method standard error.

    The two estimates are assumed independent.  Since ``eps = Q(z)`` is
    monotone, comparisons of ``eps`` reduce to comparisons of ``z``.
    """
    z = math.sqrt(n) * (i - rate) / math.sqrt(v)
    dz_di = math.sqrt(n / v)
    dz_dv = -0.5 * z / v
    return z, math.hypot(dz_di * i_stderr, dz_dv * v_stderr)


@dataclass(frozen=True)
class FblPoint:
    n: int
    rate: float
    epsilon: float
    i_used: float
    v_used: float


@dataclass(frozen=True)
class MonteCarloConfig:
    mi_samples: int = 2_000_000
    h_samples: int = 20_000
    per_h_samples: int = 200
    seed: int = _random.DEFAULT_SEED
    chunk_count: int = _random.DEFAULT_CHUNKS
    threads: int = 1


def estimate_iv(c, snr_db: float, mc: MonteCarloConfig) -> tuple[MiEstimate, DispersionEstimate]:
    """MI and dispersion from independent streams.

    The returned MI pools, by inverse-variance weighting, the direct
    estimate of :func:`mutual_information` with the conditional-mean
    estimate produced by :func:`dispersion`; both target the same
    expectation.
    """
    mi = mutual_information(c, snr_db, mc.mi_samples, mc.seed, mc.chunk_count, mc.threads)
    disp = dispersion(c, snr_db, mc.h_samples, mc.per_h_samples, _random.derive_seed(mc.seed, 1),
                      mc.chunk_count, mc.threads)
    if mi.stderr > 0 and disp.i_stderr > 0 and math.isfinite(disp.i_stderr):
        w1 = 1.0 / mi.stderr**2
        w2 = 1.0 / disp.i_stderr**2
        mean = (w1 * mi.mean + w2 * disp.i_mean) / (w1 + w2)
        samples = mi.samples + disp.h_samples * disp.per_h_samples
        mi = MiEstimate(mean, math.sqrt(1.0 / (w1 + w2)), samples, mi.snr_db)
    return mi, disp


def epsilon_rate_curve(c, snr_db: float, n_list, rate_grid, mc: MonteCarloConfig | None = None,
                       estimates=None) -> list[FblPoint]:
    """Normal-approximation ``eps(R)`` for each blocklength in `n_list`.

    ``(I, V)`` are estimated once (or taken from `estimates`) and reused for
    every grid point.
    """
    if estimates is None:
        estimates = estimate_iv(c, snr_db, mc or MonteCarloConfig())
    mi, disp = estimates
    out = []
    for n in n_list:
        for r in rate_grid:
            eps = fbl_epsilon(mi.mean, disp.v, int(n), float(r))
            out.append(FblPoint(int(n), float(r), eps, mi.mean, disp.v))
    return out
