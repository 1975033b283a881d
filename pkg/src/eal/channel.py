"""Quasi-static 2x1 Rayleigh channel and Alamouti receiver.

The transmitted block ``X = [[x0, -conj(x1)], [x1, conj(x0)]]`` is sent from
two antennas over two channel uses.  With channel row ``(h1, h2)`` the
receiver sees

    y0 = h1 x0 + h2 x1 + n0
    y1 = -h1 conj(x1) + h2 conj(x0) + n1

and matched-filter combining normalised by ``H = |h1|^2 + |h2|^2`` yields
``x_j + z_j`` with ``z_j | H ~ CN(0, N0 / H)`` independent across ``j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _random
from .lattice import VoronoiConstellation, quantize_coords
from .stbc import CodebookSpec

__all__ = [
    "ChannelRealization",
    "SimConfig",
    "CerResult",
    "SymbolDecoder",
    "sample_channel",
    "transmit",
    "combine",
    "joint_ml_decode",
    "simulate_cer",
    "cer_sweep",
    "snr_at_cer",
    "wilson_interval",
    "noise_variance",
]


def noise_variance(snr_db: float) -> float:
    """``N0`` for ``E_s / N0 = snr_db`` at unit symbol energy."""
    return 10.0 ** (-snr_db / 10.0)


@dataclass(frozen=True)
class ChannelRealization:
    """Channel coefficients ``h1, h2`` (scalars or equal-shape arrays)."""

    h1: complex | np.ndarray
    h2: complex | np.ndarray

    @property
    def gain(self):
        """``H = |h1|^2 + |h2|^2``."""
        return np.abs(self.h1) ** 2 + np.abs(self.h2) ** 2


def sample_channel(rng: np.random.Generator, size=None) -> ChannelRealization:
    """Draw i.i.d. ``CN(0, 1)`` coefficients, so ``H ~ Gamma(2, 1)``."""
    h = _random.complex_normal(rng, (2,) if size is None else (2,) + np.shape(np.empty(size)))
    if size is None:
        return ChannelRealization(complex(h[0]), complex(h[1]))
    return ChannelRealization(h[0], h[1])


def transmit(x0, x1, ch: ChannelRealization, noise=None) -> np.ndarray:
    """Received samples over the two channel uses, stacked on the last axis."""
    x0 = np.asarray(x0)
    x1 = np.asarray(x1)
    y0 = ch.h1 * x0 + ch.h2 * x1
    y1 = -ch.h1 * np.conj(x1) + ch.h2 * np.conj(x0)
    y = np.stack([y0, y1], axis=-1)
    if noise is not None:
        y = y + noise
    return y


def combine(y, ch: ChannelRealization):
    """Alamouti combining to two equivalent scalar observations.

    Parameters
    ----------
    y : array_like of complex, shape (..., 2)
        Receive samples of the two channel uses.

    Returns
    -------
    (ndarray, ndarray)
        ``(conj(h1) y0 + h2 conj(y1)) / H`` and
        ``(conj(h2) y0 - h1 conj(y1)) / H``.
    """
    y = np.asarray(y)
    gain = ch.gain
    if np.any(gain == 0):
        raise ValueError("zero channel gain; resample the channel")
    y0 = y[..., 0]
    y1 = y[..., 1]
    t0 = (np.conj(ch.h1) * y0 + ch.h2 * np.conj(y1)) / gain
    t1 = (np.conj(ch.h2) * y0 - ch.h1 * np.conj(y1)) / gain
    return t0, t1


class SymbolDecoder:
    """Nearest-constellation-point decoder.

    For Voronoi constellations the received point is quantised to the fine
    lattice; if the lattice point belongs to the constellation it is also
    the nearest constellation point.  Only the remaining (outer) samples are
    resolved by a linear scan.  Plain point arrays always use the scan.
    """

    def __init__(self, constellation):
        if isinstance(constellation, VoronoiConstellation):
            self.points = np.asarray(constellation.points)
            self._lattice = constellation.lattice
            self._scale = constellation.scale
            labels = constellation.labels
            self._offset = int(np.abs(labels).max()) + 2
            width = 2 * self._offset + 1
            self._table = np.full((width, width), -1, dtype=np.int64)
            self._table[labels[:, 0] + self._offset, labels[:, 1] + self._offset] = (
                np.arange(len(labels))
            )
        else:
            self.points = np.asarray(constellation, dtype=complex).ravel()
            self._lattice = None

    def scan(self, y) -> np.ndarray:
        y = np.asarray(y)
        d = np.abs(y[..., None] - self.points) ** 2
        return np.argmin(d, axis=-1)

    def __call__(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=complex)
        if self._lattice is None or len(self.points) == 1:
            return self.scan(y) if len(self.points) > 1 else np.zeros(y.shape, np.int64)
        uv = quantize_coords(self._lattice, y / self._scale) + self._offset
        width = self._table.shape[0]
        inside = np.all((uv >= 0) & (uv < width), axis=-1)
        idx = np.full(y.shape, -1, dtype=np.int64)
        idx[inside] = self._table[uv[inside][:, 0], uv[inside][:, 1]]
        miss = idx < 0
        if np.any(miss):
            idx[miss] = self.scan(y[miss])
        return idx


def joint_ml_decode(y, ch: ChannelRealization, constellation) -> np.ndarray:
    """Exhaustive ML over all codeword pairs, ``argmin ||y - h X||^2``.

    Returns indices of shape ``y.shape[:-1] + (2,)``.  Intended as an oracle
    for small constellations only.
    """
    pts = np.asarray(getattr(constellation, "points", constellation), dtype=complex)
    m = len(pts)
    i0, i1 = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    i0 = i0.ravel()
    i1 = i1.ravel()
    y = np.asarray(y)
    h1 = np.asarray(ch.h1)[..., None]
    h2 = np.asarray(ch.h2)[..., None]
    x0 = pts[i0]
    x1 = pts[i1]
    r0 = y[..., 0, None] - (h1 * x0 + h2 * x1)
    r1 = y[..., 1, None] - (-h1 * np.conj(x1) + h2 * np.conj(x0))
    metric = np.abs(r0) ** 2 + np.abs(r1) ** 2
    best = np.argmin(metric, axis=-1)
    return np.stack([i0[best], i1[best]], axis=-1)


@dataclass(frozen=True)
class SimConfig:
    snr_db: float
    trials: int
    seed: int = _random.DEFAULT_SEED
    chunk_count: int = _random.DEFAULT_CHUNKS
    threads: int = field(default=1, compare=False)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.chunk_count < 1:
            raise ValueError("chunk_count must be >= 1")


def wilson_interval(errors: int, trials: int, z: float = 1.959963984540054):
    """Wilson score interval (95% by default) for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = errors / trials
    denom = 1.0 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    # drop rounding residue at the extremes
    lo = 0.0 if errors == 0 else max(0.0, centre - half)
    hi = 1.0 if errors == trials else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class CerResult:
    errors: int
    trials: int
    snr_db: float = math.nan

    @property
    def cer(self) -> float:
        return self.errors / self.trials

    @property
    def wilson_ci95(self) -> tuple[float, float]:
        return wilson_interval(self.errors, self.trials)


_BATCH = 1 << 15


def _cer_chunk(points: np.ndarray, decoder: SymbolDecoder, n0: float):
    m = len(points)

    def run(rng: np.random.Generator, trials: int) -> int:
        errors = 0
        for n in _random.batches(trials, _BATCH):
            idx = rng.integers(0, m, size=(n, 2))
            ch = sample_channel(rng, n)
            noise = _random.complex_normal(rng, (n, 2), n0)
            y = transmit(points[idx[:, 0]], points[idx[:, 1]], ch, noise)
            t0, t1 = combine(y, ch)
            wrong = (decoder(t0) != idx[:, 0]) | (decoder(t1) != idx[:, 1])
            errors += int(np.count_nonzero(wrong))
        return errors

    return run


def simulate_cer(spec: CodebookSpec, cfg: SimConfig) -> CerResult:
    """Monte Carlo codeword error rate of symbol-wise Alamouti decoding.

    Each trial draws both symbols uniformly, one channel realisation and
    two noise samples at ``N0 = 10^(-snr_db/10)``, combines, and decodes
    each symbol to the nearest constellation point.  A codeword error is any
    symbol error.
    """
    c = spec.constellation
    points = np.asarray(c.points)
    if len(points) > 1 and abs(np.mean(np.abs(points) ** 2) - 1.0) > 1e-9:
        raise ValueError("constellation must be normalised to unit energy")
    n0 = noise_variance(cfg.snr_db)
    decoder = SymbolDecoder(c)
    sizes = _random.chunk_sizes(cfg.trials, cfg.chunk_count)
    per_chunk = _random.run_chunks(_cer_chunk(points, decoder, n0), cfg.seed, sizes, cfg.threads)
    return CerResult(int(sum(per_chunk)), int(cfg.trials), float(cfg.snr_db))


def cer_sweep(spec: CodebookSpec, snr_list, trials: int, seed: int = _random.DEFAULT_SEED,
              chunk_count: int = _random.DEFAULT_CHUNKS, threads: int = 1) -> list[CerResult]:
    """:func:`simulate_cer` over `snr_list` with independent per-point seeds."""
    return [
        simulate_cer(spec, SimConfig(float(s), trials, _random.derive_seed(seed, k), chunk_count, threads))
        for k, s in enumerate(snr_list)
    ]


def snr_at_cer(results, target: float) -> tuple[float, float]:
    """SNR where the CER curve crosses `target`, with a standard error.

    Fits ``log10(cer)`` linearly in SNR (dB) by weighted least squares, with
    binomial delta-method variances ``(1 - p) / (n p ln(10)^2)``, and inverts
    the fit.  The standard error propagates the fit covariance.
    """
    s = np.array([r.snr_db for r in results], dtype=float)
    p = np.array([r.cer for r in results], dtype=float)
    n = np.array([r.trials for r in results], dtype=float)
    if np.any(p <= 0) or len(s) < 2:
        raise ValueError("need at least two points with nonzero error counts")
    y = np.log10(p)
    var = (1.0 - p) / (n * p * math.log(10.0) ** 2)
    w = 1.0 / var
    A = np.stack([np.ones_like(s), s], axis=1)
    cov = np.linalg.inv(A.T @ (A * w[:, None]))
    a, b = cov @ (A.T @ (w * y))
    if b >= 0:
        raise ValueError("CER does not decrease with SNR over this range")
    t = math.log10(target)
    x = (t - a) / b
    grad = np.array([-1.0 / b, -(t - a) / b**2])
    return float(x), float(math.sqrt(grad @ cov @ grad))
