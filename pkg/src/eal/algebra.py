"""Exact arithmetic for rational quaternion algebras and their integer rings.

Quaternions live in ``(a, b)_Q`` with basis ``(1, i, j, ij)`` and the
relations ``i^2 = a``, ``j^2 = b``, ``ij = -ji``.  All coordinates are
:class:`fractions.Fraction`, so identities such as multiplicativity of the
reduced norm can be checked exactly.  Floating point only appears once an
element is pushed into ``C^{2x2}`` by one of the embeddings.

The maximal order used for the Eisenstein code is ``Gamma = Z[w] + i Z[w]``
inside ``(-1, -3)_Q`` with ``w = (1 + j) / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = [
    "AlgebraParams",
    "Quaternion",
    "EisensteinInteger",
    "GaussianInteger",
    "GammaElement",
    "HAMILTON",
    "EISENSTEIN_ALGEBRA",
    "OMEGA",
    "quaternion_mul",
    "conjugate",
    "reduced_norm",
    "reduced_trace",
    "left_mult_matrix",
    "embed_gamma",
    "embed_eisenstein",
    "embed_gaussian",
    "gamma_to_quaternion",
    "quaternion_to_gamma",
]

#: sigma(w) for the principal embedding of Q(sqrt(-3)).
OMEGA = complex(0.5, np.sqrt(3.0) / 2.0)


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"exact rational expected, got {type(value).__name__}")


@dataclass(frozen=True)
class AlgebraParams:
    """The pair ``(a, b)`` defining the quaternion algebra ``(a, b)_Q``."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _frac(self.a))
        object.__setattr__(self, "b", _frac(self.b))
        if self.a == 0 or self.b == 0:
            raise ValueError("algebra parameters must be nonzero")

    @property
    def definite(self) -> bool:
        return self.a < 0 and self.b < 0


HAMILTON = AlgebraParams(-1, -1)
EISENSTEIN_ALGEBRA = AlgebraParams(-1, -3)


@dataclass(frozen=True)
class Quaternion:
    """``x + y i + z j + t ij`` with exact rational coordinates."""

    x: Fraction = Fraction(0)
    y: Fraction = Fraction(0)
    z: Fraction = Fraction(0)
    t: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("x", "y", "z", "t"):
            object.__setattr__(self, name, _frac(getattr(self, name)))

    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.x, self.y, self.z, self.t)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(*(p + q for p, q in zip(self.coords(), other.coords())))

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(*(p - q for p, q in zip(self.coords(), other.coords())))

    def __neg__(self) -> "Quaternion":
        return Quaternion(*(-p for p in self.coords()))

    def scale(self, c) -> "Quaternion":
        c = _frac(c)
        return Quaternion(*(c * p for p in self.coords()))


def quaternion_mul(q1: Quaternion, q2: Quaternion, params: AlgebraParams) -> Quaternion:
    """Product in ``(a, b)_Q`` expanded from the defining relations.

    With ``k = ij`` one has ``k^2 = -ab``, ``ik = a j``, ``ki = -a j``,
    ``jk = -b i`` and ``kj = b i``.
    """
    a, b = params.a, params.b
    x1, y1, z1, t1 = q1.coords()
    x2, y2, z2, t2 = q2.coords()
    x = x1 * x2 + a * y1 * y2 + b * z1 * z2 - a * b * t1 * t2
    y = x1 * y2 + y1 * x2 - b * z1 * t2 + b * t1 * z2
    z = x1 * z2 + z1 * x2 + a * y1 * t2 - a * t1 * y2
    t = x1 * t2 + t1 * x2 + y1 * z2 - z1 * y2
    return Quaternion(x, y, z, t)


def conjugate(q: Quaternion) -> Quaternion:
    return Quaternion(q.x, -q.y, -q.z, -q.t)


def reduced_norm(q: Quaternion, params: AlgebraParams) -> Fraction:
    """``Nrd(q) = q q* = x^2 - a y^2 - b z^2 + ab t^2``."""
    a, b = params.a, params.b
    return q.x * q.x - a * q.y * q.y - b * q.z * q.z + a * b * q.t * q.t


def reduced_trace(q: Quaternion) -> Fraction:
    return 2 * q.x


def left_mult_matrix(q: Quaternion, params: AlgebraParams) -> np.ndarray:
    """Matrix of left multiplication by `q` in the ``Q(j)``-basis ``(1, i)``.

    ``sqrt(b)`` is realised as the principal root ``i sqrt(|b|)``, so only
    ``b < 0`` is supported.

    Returns
    -------
    numpy.ndarray
        Complex 2x2 array ``[[x + z s, a (y - t s)], [y + t s, x - z s]]``
        with ``s = sqrt(b)``.
    """
    if params.b >= 0:
        raise ValueError("only b < 0 has a complex embedding here")
    s = 1j * np.sqrt(float(-params.b))
    x, y, z, t = (float(c) for c in q.coords())
    a = float(params.a)
    return np.array(
        [[x + z * s, a * (y - t * s)], [y + t * s, x - z * s]], dtype=complex
    )


@dataclass(frozen=True, order=True)
class EisensteinInteger:
    """``u + v w`` with ``w = (1 + sqrt(-3)) / 2``."""

    u: int
    v: int

    def __post_init__(self):
        object.__setattr__(self, "u", int(self.u))
        object.__setattr__(self, "v", int(self.v))

    @property
    def norm(self) -> int:
        return self.u * self.u + self.u * self.v + self.v * self.v

    def conj(self) -> "EisensteinInteger":
        # conj(w) = 1 - w
        return EisensteinInteger(self.u + self.v, -self.v)

    def __add__(self, other: "EisensteinInteger") -> "EisensteinInteger":
        return EisensteinInteger(self.u + other.u, self.v + other.v)

    def __sub__(self, other: "EisensteinInteger") -> "EisensteinInteger":
        return EisensteinInteger(self.u - other.u, self.v - other.v)

    def __neg__(self) -> "EisensteinInteger":
        return EisensteinInteger(-self.u, -self.v)

    def __mul__(self, other: "EisensteinInteger") -> "EisensteinInteger":
        # w^2 = w - 1
        u1, v1, u2, v2 = self.u, self.v, other.u, other.v
        return EisensteinInteger(u1 * u2 - v1 * v2, u1 * v2 + v1 * u2 + v1 * v2)

    def __complex__(self) -> complex:
        return embed_eisenstein(self)


@dataclass(frozen=True, order=True)
class GaussianInteger:
    """``re + im sqrt(-1)``."""

    re: int
    im: int

    def __post_init__(self):
        object.__setattr__(self, "re", int(self.re))
        object.__setattr__(self, "im", int(self.im))

    @property
    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conj(self) -> "GaussianInteger":
        return GaussianInteger(self.re, -self.im)

    def __add__(self, other: "GaussianInteger") -> "GaussianInteger":
        return GaussianInteger(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianInteger") -> "GaussianInteger":
        return GaussianInteger(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianInteger":
        return GaussianInteger(-self.re, -self.im)

    def __mul__(self, other: "GaussianInteger") -> "GaussianInteger":
        return GaussianInteger(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __complex__(self) -> complex:
        return embed_gaussian(self)


def embed_eisenstein(x: EisensteinInteger) -> complex:
    return x.u + x.v * OMEGA


def embed_gaussian(x: GaussianInteger) -> complex:
    return complex(x.re, x.im)


@dataclass(frozen=True)
class GammaElement:
    """``q = x0 + i x1`` in the maximal order ``Z[w] + i Z[w]``."""

    x0: EisensteinInteger
    x1: EisensteinInteger

    @property
    def norm(self) -> int:
        """Reduced norm, ``N(x0) + N(x1)``."""
        return self.x0.norm + self.x1.norm


def gamma_to_quaternion(g: GammaElement) -> Quaternion:
    """Coordinates of `g` in the basis ``(1, i, j, ij)`` of ``(-1, -3)_Q``.

    With ``x0 = x + z w`` and ``x1 = y + t w`` and ``w = (1 + j) / 2``, the
    element is ``(x + z/2) + (y + t/2) i + (z/2) j + (t/2) ij``.
    """
    x, z = g.x0.u, g.x0.v
    y, t = g.x1.u, g.x1.v
    half = Fraction(1, 2)
    return Quaternion(x + half * z, y + half * t, half * z, half * t)


def quaternion_to_gamma(q: Quaternion) -> GammaElement:
    """Inverse of :func:`gamma_to_quaternion`.

    Raises
    ------
    ValueError
        If `q` is not in ``Gamma``.
    """
    z = 2 * q.z
    t = 2 * q.t
    x = q.x - q.z
    y = q.y - q.t
    for c in (x, y, z, t):
        if c.denominator != 1:
            raise ValueError("quaternion is not in the maximal order")
    return GammaElement(
        EisensteinInteger(int(x), int(z)), EisensteinInteger(int(y), int(t))
    )


def embed_gamma(g: GammaElement) -> np.ndarray:
    """Alamouti matrix ``[[s(x0), -conj(s(x1))], [s(x1), conj(s(x0))]]``."""
    s0 = embed_eisenstein(g.x0)
    s1 = embed_eisenstein(g.x1)
    return np.array(
        [[s0, -s1.conjugate()], [s1, s0.conjugate()]], dtype=complex
    )
