"""Planar lattices, Voronoi constellations and distance spectra.

Two lattices are supported: the square lattice ``Z^2 ~ Z[i]`` and the
hexagonal lattice ``A_2 ~ Z[w]``, both at unit minimum distance.  Points of
either lattice are addressed by integer coordinates ``(u, v)`` in the ring
basis: ``(1, i)`` for the square case and ``(1, w)`` for the hexagonal one.

Voronoi constellations are ``Lambda / p Lambda`` with every coset mapped to
its smallest-energy representative.  They are zero-centred and scaled to
unit average energy; the raw energy at unit minimum distance is kept so
shaping comparisons can be made before normalisation.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .algebra import EisensteinInteger, GaussianInteger

__all__ = [
    "Ring",
    "Lattice2D",
    "SQUARE",
    "HEX",
    "VoronoiConstellation",
    "DistanceSpectrum",
    "quantize",
    "quantize_coords",
    "lattice_for",
    "build_voronoi_constellation",
    "second_moment_continuous",
    "second_moment_numeric",
    "shaping_gain_db",
    "distance_spectrum",
    "fourth_power_spectrum",
    "epstein_zeta",
    "epstein_zeta_tail",
    "write_constellation_csv",
]


class Ring(str, enum.Enum):
    GAUSSIAN = "gaussian"
    EISENSTEIN = "eisenstein"


@dataclass(frozen=True)
class Lattice2D:
    """A planar lattice given by a column-generator matrix.

    Parameters
    ----------
    kind : {"square", "hex"}
        Also accepted by :func:`second_moment_continuous` as the cell tag.
    basis : ndarray, shape (2, 2)
        Generator vectors as columns.
    """

    kind: str
    basis: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=float)
        if basis.shape != (2, 2) or abs(np.linalg.det(basis)) < 1e-12:
            raise ValueError("basis must be a nonsingular 2x2 matrix")
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def generator(self) -> complex:
        """Second generator as a complex number (first is always 1)."""
        return complex(self.basis[0, 1], self.basis[1, 1])

    @property
    def cell_area(self) -> float:
        return abs(float(np.linalg.det(self.basis)))

    def norm(self, u, v):
        """Exact integer squared length of the point ``(u, v)``."""
        if self.kind == "hex":
            return u * u + u * v + v * v
        return u * u + v * v

    def embed(self, u, v):
        return u + v * self.generator


SQUARE = Lattice2D("square", np.eye(2))
HEX = Lattice2D("hex", np.array([[1.0, 0.5], [0.0, math.sqrt(3.0) / 2.0]]))

_OFFSETS = np.array(list(product((-1, 0, 1), repeat=2)), dtype=np.int64)


def lattice_for(ring) -> Lattice2D:
    return HEX if Ring(ring) is Ring.EISENSTEIN else SQUARE


def quantize_coords(lattice: Lattice2D, points) -> np.ndarray:
    """Vectorised nearest-point map returning integer ring coordinates.

    The point is rounded in the lattice basis and the nine integer
    neighbours of that candidate are compared exhaustively; this contains
    the nearest point for both supported bases.  Among (numerically) tied
    minimisers the lexicographically smallest ``(u, v)`` wins.

    Parameters
    ----------
    points : array_like of complex

    Returns
    -------
    ndarray of int64, shape ``points.shape + (2,)``
    """
    pts = np.asarray(points, dtype=complex)
    g = lattice.generator
    v = pts.imag / g.imag
    u = pts.real - v * g.real
    u0 = np.rint(u).astype(np.int64)
    v0 = np.rint(v).astype(np.int64)

    best_d = None
    # _OFFSETS is in lexicographic order, so a strict improvement test keeps
    # the smallest candidate among ties.
    for du, dv in _OFFSETS:
        cu = u0 + du
        cv = v0 + dv
        diff = pts - (cu + cv * g)
        d = diff.real * diff.real + diff.imag * diff.imag
        if best_d is None:
            best_d, best_u, best_v = d, cu, cv
            continue
        better = d < best_d - 1e-12 * (1.0 + best_d)
        best_d = np.where(better, d, best_d)
        best_u = np.where(better, cu, best_u)
        best_v = np.where(better, cv, best_v)
    return np.stack([best_u, best_v], axis=-1)


def quantize(lattice: Lattice2D, point: complex):
    """Nearest lattice point to `point` as an exact ring element."""
    if not np.isfinite(point):
        raise ValueError("point must be finite")
    u, v = (int(c) for c in quantize_coords(lattice, point))
    if lattice.kind == "hex":
        return EisensteinInteger(u, v)
    return GaussianInteger(u, v)


@dataclass(frozen=True)
class VoronoiConstellation:
    """Finite constellation ``Lambda_f / p Lambda_f`` at unit average energy.

    Attributes
    ----------
    labels : ndarray of int64, shape (M, 2)
        Exact coset representatives ``(u, v)``, sorted lexicographically.
    points : ndarray of complex, shape (M,)
        Normalised positions ``scale * sigma(label)``.
    raw_energy : float
        Mean ``|sigma(label)|^2`` at unit minimum distance.
    scale : float
        ``1 / sqrt(raw_energy)``; ``1`` for the degenerate one-point case.
    """

    ring: Ring
    p: int
    labels: np.ndarray
    points: np.ndarray
    raw_energy: float
    scale: float

    def __len__(self) -> int:
        return len(self.points)

    @property
    def lattice(self) -> Lattice2D:
        return lattice_for(self.ring)

    @property
    def avg_energy(self) -> float:
        return float(np.mean(np.abs(self.points) ** 2))

    @property
    def min_distance(self) -> float:
        """Minimum distance of the normalised constellation."""
        if len(self) < 2:
            return math.nan
        du = self.labels[:, None, 0] - self.labels[None, :, 0]
        dv = self.labels[:, None, 1] - self.labels[None, :, 1]
        n = self.lattice.norm(du, dv)
        return self.scale * math.sqrt(int(n[n > 0].min()))

    def elements(self) -> list:
        cls = EisensteinInteger if self.ring is Ring.EISENSTEIN else GaussianInteger
        return [cls(int(u), int(v)) for u, v in self.labels]

    def sub_constellation(self, indices) -> "VoronoiConstellation":
        """Restrict to `indices`, renormalising to unit energy."""
        labels = self.labels[np.asarray(indices)]
        return _finish(self.ring, self.p, labels)


def _reduce_mod_p(lattice: Lattice2D, u: int, v: int, p: int) -> tuple[int, int]:
    # Exact nearest coarse point p*lam to x, via the float candidate and its
    # nine neighbours compared in integer arithmetic.
    x = lattice.embed(u, v) / p
    cu, cv = (int(c) for c in quantize_coords(lattice, x))
    best = None
    for du, dv in _OFFSETS:
        lu, lv = cu + int(du), cv + int(dv)
        ru, rv = u - p * lu, v - p * lv
        n = lattice.norm(ru, rv)
        if best is None or n < best[0]:
            best = (n, ru, rv)
    return best[1], best[2]


def _finish(ring: Ring, p: int, labels: np.ndarray) -> VoronoiConstellation:
    lattice = lattice_for(ring)
    order = np.lexsort((labels[:, 1], labels[:, 0]))
    labels = labels[order]
    labels.setflags(write=False)
    raw = lattice.embed(labels[:, 0].astype(float), labels[:, 1].astype(float))
    raw_energy = float(np.mean(np.abs(raw) ** 2))
    scale = 1.0 / math.sqrt(raw_energy) if raw_energy > 0 else 1.0
    points = raw * scale
    points.setflags(write=False)
    return VoronoiConstellation(ring, p, labels, points, raw_energy, scale)


def build_voronoi_constellation(ring, p: int) -> VoronoiConstellation:
    """Voronoi constellation ``Lambda / p Lambda`` for ``Z[i]`` or ``Z[w]``.

    Each of the ``p^2`` cosets ``(u0, v0) mod p`` is reduced to the
    representative of smallest exact norm; ties on the boundary of the
    coarse cell go to the lexicographically smallest coarse point.
    """
    ring = Ring(ring)
    if int(p) != p or p <= 0:
        raise ValueError("p must be a positive integer")
    p = int(p)
    lattice = lattice_for(ring)
    labels = np.array(
        [_reduce_mod_p(lattice, u0, v0, p) for u0 in range(p) for v0 in range(p)],
        dtype=np.int64,
    )
    return _finish(ring, p, labels)


def second_moment_continuous(cell: str, rho: float) -> float:
    """Second moment per unit area of a centred square or regular hexagon.

    `rho` is the apothem (half the side for the square).
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    cell = cell.lower()
    if cell == "square":
        return 2.0 / 3.0 * rho * rho
    if cell in ("hex", "hexagon"):
        return 5.0 / 9.0 * rho * rho
    raise ValueError(f"unknown cell {cell!r}")


def second_moment_numeric(cell: str, rho: float, resolution: int = 512) -> float:
    """Midpoint-rule estimate of the mean of ``|x|^2`` over the cell.

    The hexagon is the set ``|y| <= rho``, ``sqrt(3) |x| + |y| <= 2 rho``
    (flat edges top and bottom).  Midpoints of a `resolution` x `resolution`
    grid over the bounding box are masked to the cell, and the cell area is
    estimated from the same mask.
    """
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    cell = cell.lower()
    if cell == "square":
        half_x = half_y = rho
    elif cell in ("hex", "hexagon"):
        half_x, half_y = 2.0 * rho / math.sqrt(3.0), rho
    else:
        raise ValueError(f"unknown cell {cell!r}")
    xs = (np.arange(resolution) + 0.5) / resolution * 2.0 * half_x - half_x
    ys = (np.arange(resolution) + 0.5) / resolution * 2.0 * half_y - half_y
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    r2 = X * X + Y * Y
    if cell == "square":
        return float(r2.mean())
    inside = math.sqrt(3.0) * np.abs(X) + np.abs(Y) <= 2.0 * rho
    return float(r2[inside].mean())


def shaping_gain_db(e_square: float, e_hex: float) -> float:
    if e_square <= 0 or e_hex <= 0:
        raise ValueError("energies must be positive")
    return 10.0 * math.log10(e_square / e_hex)


@dataclass(frozen=True)
class DistanceSpectrum:
    """Distinct distances ``d`` with average multiplicities ``N``."""

    distances: np.ndarray
    multiplicities: np.ndarray

    def __iter__(self):
        return iter(zip(self.distances.tolist(), self.multiplicities.tolist()))

    def __len__(self) -> int:
        return len(self.distances)

    @property
    def total(self) -> float:
        return float(np.sum(self.multiplicities))


def _spectrum_exact(c: VoronoiConstellation, reference) -> DistanceSpectrum:
    lattice = c.lattice
    labels = c.labels
    ref = labels if reference is None else labels[np.asarray(reference)]
    du = ref[:, None, 0] - labels[None, :, 0]
    dv = ref[:, None, 1] - labels[None, :, 1]
    n = lattice.norm(du, dv).ravel()
    n = n[n > 0]
    values, counts = np.unique(n, return_counts=True)
    d = c.scale * np.sqrt(values.astype(float))
    return DistanceSpectrum(d, counts / len(ref))


def _spectrum_float(points: np.ndarray, reference, rtol: float) -> DistanceSpectrum:
    ref = points if reference is None else points[np.asarray(reference)]
    d = np.abs(ref[:, None] - points[None, :]).ravel()
    scale = max(float(np.max(np.abs(points))), 1.0)
    d = np.sort(d[d > 1e-12 * scale])
    if len(d) == 0:
        return DistanceSpectrum(np.array([]), np.array([]))
    # New group when the gap exceeds the relative tolerance.
    breaks = np.flatnonzero(np.diff(d) > rtol * d[1:]) + 1
    starts = np.concatenate([[0], breaks])
    ends = np.concatenate([breaks, [len(d)]])
    dist = np.array([d[s:e].mean() for s, e in zip(starts, ends)])
    return DistanceSpectrum(dist, (ends - starts) / len(ref))


def distance_spectrum(c, reference=None, rtol: float = 1e-9) -> DistanceSpectrum:
    """Average distance spectrum of a constellation or raw point set.

    Parameters
    ----------
    c : VoronoiConstellation or array_like of complex
        Exact labels are used when available, so distances group exactly.
    reference : array_like of int, optional
        Indices of the reference points to average over (default: all).
    rtol : float
        Relative grouping tolerance for raw point sets.
    """
    if isinstance(c, VoronoiConstellation):
        if len(c) < 2:
            raise ValueError("need at least two points")
        return _spectrum_exact(c, reference)
    points = np.asarray(c, dtype=complex).ravel()
    if len(points) < 2:
        raise ValueError("need at least two points")
    rounded = np.round(points, 12)
    if len(np.unique(rounded)) != len(points):
        raise ValueError("duplicate points")
    return _spectrum_float(points, reference, rtol)


def fourth_power_spectrum(s: DistanceSpectrum) -> float:
    """``sum_r N_r / d_r^4``."""
    return float(np.sum(s.multiplicities / s.distances**4))


def epstein_zeta(kind: str, radius: int) -> float:
    """Truncated ``sum 1 / Q(m, n)^2`` over ``0 < max(|m|, |n|) <= radius``.

    ``Q`` is ``m^2 + n^2`` for ``"square"`` and ``m^2 + mn + n^2`` for
    ``"hex"``.  See :func:`epstein_zeta_tail` for the truncation error.
    """
    if radius < 10:
        raise ValueError("radius must be at least 10")
    kind = kind.lower()
    if kind not in ("square", "hex"):
        raise ValueError(f"unknown lattice kind {kind!r}")
    m = np.arange(-radius, radius + 1, dtype=np.float64)
    total = 0.0
    block = 256
    for start in range(-radius, radius + 1, block):
        n = np.arange(start, min(start + block, radius + 1), dtype=np.float64)
        q = m[None, :] ** 2 + n[:, None] ** 2
        if kind == "hex":
            q = q + m[None, :] * n[:, None]
        q[q == 0] = np.inf
        total += float(np.sum(1.0 / (q * q)))
    return total


def epstein_zeta_tail(kind: str, radius: int) -> float:
    """Upper estimate ``pi / (A r^2)`` of the omitted tail.

    ``A`` is the cell area and ``r`` the radius of the disc inscribed in the
    truncation box (``radius`` for the square, ``radius sqrt(3)/2`` for the
    hexagonal lattice).
    """
    kind = kind.lower()
    if kind == "square":
        area, r = 1.0, float(radius)
    elif kind == "hex":
        area, r = math.sqrt(3.0) / 2.0, radius * math.sqrt(3.0) / 2.0
    else:
        raise ValueError(f"unknown lattice kind {kind!r}")
    return math.pi / (area * r * r)


def write_constellation_csv(c: VoronoiConstellation, fh, comments=()) -> None:
    """Write ``label_u,label_v,re,im`` rows (17 significant digits)."""
    for line in comments:
        fh.write(f"# {line}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["label_u", "label_v", "re", "im"])
    for (u, v), z in zip(c.labels, c.points):
        writer.writerow([int(u), int(v), f"{z.real:.17g}", f"{z.imag:.17g}"])
