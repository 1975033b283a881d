"""Control-variate means driven by the channel gain.

For ``H ~ Gamma(2, 1)`` the Laplace transform ``E[exp(-s H)] = (1 + s)^-2``
is known in closed form, so ``exp(-s H)`` for a handful of ``s`` gives
zero-mean controls.  Quantities that depend on the fading mostly through
``H`` (conditional means and variances of the information density) lose
most of their outer-loop sampling noise once regressed on them.
"""

from __future__ import annotations

import math

import numpy as np

RATES = np.array([0.25, 1.0, 4.0, 16.0, 64.0])


def controls(H) -> np.ndarray:
    """Zero-mean control matrix of shape ``(len(H), len(RATES))``."""
    H = np.asarray(H, dtype=float)[:, None]
    return np.exp(-RATES * H) - (1.0 + RATES) ** -2


def stats(y, F) -> tuple:
    """Additive sufficient statistics for :func:`estimate`."""
    y = np.asarray(y, dtype=float)
    return (len(y), float(np.sum(y)), float(np.sum(y * y)),
            F.sum(axis=0), F.T @ F, F.T @ y)


def merge(parts) -> tuple:
    parts = list(parts)
    n = sum(p[0] for p in parts)
    sy = math.fsum(p[1] for p in parts)
    syy = math.fsum(p[2] for p in parts)
    sf = np.sum([p[3] for p in parts], axis=0)
    sff = np.sum([p[4] for p in parts], axis=0)
    sfy = np.sum([p[5] for p in parts], axis=0)
    return n, sy, syy, sf, sff, sfy


def estimate(st) -> tuple[float, float]:
    """Control-variate mean of ``y`` and its standard error."""
    n, sy, syy, sf, sff, sfy = st
    if n < 2:
        return sy / max(n, 1), math.inf
    ybar = sy / n
    fbar = sf / n
    cff = sff / n - np.outer(fbar, fbar)
    cfy = sfy / n - fbar * ybar
    beta = np.linalg.lstsq(cff, cfy, rcond=None)[0]
    mean = ybar - float(beta @ fbar)
    var_y = syy / n - ybar * ybar
    resid = max(0.0, var_y - float(beta @ cfy))
    k = len(fbar)
    return mean, math.sqrt(resid * n / max(n - k - 1, 1) / n)


def estimate_arrays(y, H) -> tuple[float, float]:
    F = controls(H)
    return estimate(stats(y, F))
