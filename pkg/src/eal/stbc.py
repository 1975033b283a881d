"""Alamouti codewords, minimum determinants and pairwise error bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import Ring, VoronoiConstellation, distance_spectrum, lattice_for

__all__ = [
    "AlamoutiCodeword",
    "CodebookSpec",
    "encode",
    "min_determinant",
    "coding_gain",
    "pep_determinant_bound",
    "pep_determinant_bound_matrix",
    "dominant_term_cer",
    "dominant_term_snr_db",
    "union_bound_cer",
]


@dataclass(frozen=True)
class AlamoutiCodeword:
    """The block ``[[x0, -conj(x1)], [x1, conj(x0)]]``.

    Rows index transmit antennas, columns index channel uses.
    """

    x0: complex
    x1: complex

    @property
    def matrix(self) -> np.ndarray:
        x0, x1 = complex(self.x0), complex(self.x1)
        return np.array([[x0, -x1.conjugate()], [x1, x0.conjugate()]])

    @property
    def energy(self) -> float:
        """``|x0|^2 + |x1|^2``, equal to ``det(matrix)``."""
        return abs(self.x0) ** 2 + abs(self.x1) ** 2

    def __sub__(self, other: "AlamoutiCodeword") -> "AlamoutiCodeword":
        return AlamoutiCodeword(self.x0 - other.x0, self.x1 - other.x1)

    def __add__(self, other: "AlamoutiCodeword") -> "AlamoutiCodeword":
        return AlamoutiCodeword(self.x0 + other.x0, self.x1 + other.x1)


def encode(x0: complex, x1: complex) -> AlamoutiCodeword:
    return AlamoutiCodeword(complex(x0), complex(x1))


@dataclass(frozen=True)
class CodebookSpec:
    """Alamouti codebook with both symbols drawn from `constellation`."""

    constellation: VoronoiConstellation

    @property
    def cardinality(self) -> int:
        return len(self.constellation) ** 2


def _box_norms(ring: Ring, radius: int) -> np.ndarray:
    lattice = lattice_for(ring)
    r = np.arange(-radius, radius + 1)
    u, v = np.meshgrid(r, r, indexing="ij")
    return lattice.norm(u, v).ravel()


def _outside_box_bound(ring: Ring, radius: int) -> int:
    # Lower bound on N(u, v) when max(|u|, |v|) > radius:
    # u^2 + v^2 >= (r+1)^2 and u^2 + uv + v^2 >= 3/4 (r+1)^2.
    r1 = radius + 1
    if ring is Ring.EISENSTEIN:
        return math.ceil(3 * r1 * r1 / 4)
    return r1 * r1


def min_determinant(ring, search_radius: int, both_nonzero: bool = False) -> int:
    """Exhaustive ``min det(X X^H)`` over nonzero codewords at unit spacing.

    Both symbols range over ring elements whose coordinates are bounded by
    `search_radius`.  For Alamouti codewords ``det(X X^H) = (N(x0) + N(x1))^2``,
    so the search runs over exact integer norms.  Coverage is then checked:
    any codeword outside the box has some symbol of norm at least the
    outside-box bound, so a box minimum not exceeding that bound is global.

    Raises
    ------
    RuntimeError
        If coverage cannot be certified at this radius.
    """
    ring = Ring(ring)
    if search_radius < 1:
        raise ValueError("search_radius must be >= 1")
    norms = _box_norms(ring, search_radius)
    nrd = np.add.outer(norms, norms)
    if both_nonzero:
        valid = np.logical_and.outer(norms > 0, norms > 0)
    else:
        valid = nrd > 0
    best = int(nrd[valid].min())
    if best > _outside_box_bound(ring, search_radius):
        raise RuntimeError("box too small to certify the minimum")
    return best * best


def coding_gain(delta_min: float, n_t: int = 2) -> float:
    return delta_min ** (1.0 / n_t)


def pep_determinant_bound_matrix(delta: np.ndarray, n0: float, n_r: int = 1) -> float:
    """``det(I + dX dX^H / (4 N0))^(-n_r)`` for a general difference matrix."""
    if n0 <= 0:
        raise ValueError("n0 must be positive")
    if n_r < 1:
        raise ValueError("n_r must be >= 1")
    delta = np.asarray(delta, dtype=complex)
    m = np.eye(delta.shape[0]) + delta @ delta.conj().T / (4.0 * n0)
    return float(np.real(np.linalg.det(m))) ** (-n_r)


def pep_determinant_bound(delta: AlamoutiCodeword, n0: float, n_r: int = 1) -> float:
    """Determinant PEP bound for an Alamouti difference ``X - X'``.

    Orthogonality makes ``dX dX^H = D I`` with ``D = |dx0|^2 + |dx1|^2``, so
    the bound is ``(1 + D / (4 N0))^(-2 n_r)``.
    """
    if n0 <= 0:
        raise ValueError("n0 must be positive")
    if n_r < 1:
        raise ValueError("n_r must be >= 1")
    return (1.0 + delta.energy / (4.0 * n0)) ** (-2 * n_r)


def dominant_term_cer(delta_min: float, multiplicity: float, snr_db: float,
                      energy: float = 1.0) -> float:
    """``C (1 + D_min SNR / (4 E_s))^-2``."""
    snr = 10.0 ** (snr_db / 10.0)
    return multiplicity * (1.0 + delta_min * snr / (4.0 * energy)) ** (-2)


def dominant_term_snr_db(cer: float, delta_min: float, multiplicity: float,
                         energy: float = 1.0) -> float:
    """SNR in dB at which :func:`dominant_term_cer` equals `cer`."""
    if not 0 < cer < multiplicity:
        raise ValueError("cer must lie in (0, multiplicity)")
    snr = 4.0 * energy / delta_min * (math.sqrt(multiplicity / cer) - 1.0)
    return 10.0 * math.log10(snr)


def union_bound_cer(spec: CodebookSpec, snr_db: float) -> float:
    """Dominant-term CER approximation for an Alamouti codebook.

    ``D_min`` is the squared distance between codewords differing in one
    symbol by the constellation's minimum distance, and ``C`` is the average
    number of such nearest codewords, i.e. twice the average number of
    nearest neighbours in the scalar constellation.  This is an
    approximation, not a bound.
    """
    c = spec.constellation
    if len(c) < 2:
        return 0.0
    s = distance_spectrum(c)
    d_min = float(s.distances[0])
    mult = 2.0 * float(s.multiplicities[0])
    return dominant_term_cer(d_min**2, mult, snr_db, c.avg_energy)
