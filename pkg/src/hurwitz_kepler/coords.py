"""Coordinate charts used to separate the oscillator and Kepler problems.

Three charts: 8-D hyperspherical (hyperradius + 7 angles), 9-D spherical
(radius, polar angle theta, 7 sphere angles) and 9-D parabolic (u, v, 7
sphere angles with x9 = (u-v)/2 and radius (u+v)/2).  The sphere-angle
index increases outward in the nested-sine chain; the innermost angle is
the azimuth in [0, 2pi), the rest lie in [0, pi].

At chart singularities (theta in {0, pi}, u*v = 0, zero sphere part) the
inverse maps return zero angles by convention; only the radius and x9 are
contracted there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Hyperspherical8",
    "Spherical9",
    "Parabolic9",
    "hyperspherical_to_cartesian8",
    "spherical9_to_cartesian",
    "parabolic_to_cartesian9",
    "cartesian9_to_parabolic",
]

_TWO_PI = 2.0 * math.pi


def _check_angles(phi) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (7,):
        raise ValueError(f"expected 7 sphere angles, got shape {phi.shape}")
    if not np.all(np.isfinite(phi)):
        raise ValueError("angles must be finite")
    if not (0.0 <= phi[0] < _TWO_PI):
        raise ValueError("azimuthal angle must lie in [0, 2*pi)")
    if np.any(phi[1:] < 0.0) or np.any(phi[1:] > math.pi):
        raise ValueError("polar angles must lie in [0, pi]")
    return phi


@dataclass(frozen=True)
class Hyperspherical8:
    """Hyperradius r >= 0 and angles (phi_1 .. phi_7) on the 7-sphere."""

    r: float
    phi: tuple

    def __post_init__(self):
        if not (self.r >= 0.0 and math.isfinite(self.r)):
            raise ValueError("hyperradius must be finite and nonnegative")
        object.__setattr__(self, "phi", tuple(_check_angles(self.phi)))


@dataclass(frozen=True)
class Spherical9:
    """Radius r >= 0, polar angle theta in [0, pi], angles (phi_0 .. phi_6)."""

    r: float
    theta: float
    phi: tuple

    def __post_init__(self):
        if not (self.r >= 0.0 and math.isfinite(self.r)):
            raise ValueError("radius must be finite and nonnegative")
        if not (0.0 <= self.theta <= math.pi):
            raise ValueError("theta must lie in [0, pi]")
        object.__setattr__(self, "phi", tuple(_check_angles(self.phi)))


@dataclass(frozen=True)
class Parabolic9:
    """Parabolic coordinates u, v >= 0 and angles (phi_0 .. phi_6)."""

    u: float
    v: float
    phi: tuple

    def __post_init__(self):
        if not (self.u >= 0.0 and self.v >= 0.0):
            raise ValueError("parabolic coordinates u, v must be nonnegative")
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise ValueError("parabolic coordinates must be finite")
        object.__setattr__(self, "phi", tuple(_check_angles(self.phi)))


def _sphere7_embed(phi) -> np.ndarray:
    """Unit 8-vector from 7 nested-sine angles (innermost is the azimuth)."""
    out = np.empty(8)
    prod = 1.0
    for i in range(7, 0, -1):
        out[i] = prod * math.cos(phi[i - 1])
        prod *= math.sin(phi[i - 1])
    out[0] = prod
    return out


def _sphere7_invert(x8: np.ndarray) -> tuple[float, np.ndarray]:
    """Radius and angles of an 8-vector; zero angles at degeneracies."""
    rho = float(np.linalg.norm(x8))
    phi = np.zeros(7)
    if rho == 0.0:
        return 0.0, phi
    for i in range(6, 0, -1):
        tail = float(np.linalg.norm(x8[: i + 1]))
        phi[i] = math.atan2(tail, float(x8[i + 1]))
    az = math.atan2(float(x8[0]), float(x8[1]))
    if az < 0.0:
        az += _TWO_PI
    # the azimuth is undefined when the first two components vanish
    phi[0] = 0.0 if (x8[0] == 0.0 and x8[1] == 0.0) else az
    return rho, phi


def hyperspherical_to_cartesian8(c: Hyperspherical8) -> np.ndarray:
    """Cartesian 8-vector of the hyperspherical point; |x| = r."""
    return c.r * _sphere7_embed(c.phi)


def spherical9_to_cartesian(c: Spherical9) -> np.ndarray:
    """Cartesian 9-vector with x9 = r cos(theta) and |x| = r."""
    x = np.empty(9)
    x[8] = c.r * math.cos(c.theta)
    x[:8] = (c.r * math.sin(c.theta)) * _sphere7_embed(c.phi)
    return x


def parabolic_to_cartesian9(c: Parabolic9) -> np.ndarray:
    """Cartesian 9-vector with x9 = (u-v)/2, |x| = (u+v)/2."""
    x = np.empty(9)
    x[8] = 0.5 * (c.u - c.v)
    x[:8] = math.sqrt(c.u * c.v) * _sphere7_embed(c.phi)
    return x


def cartesian9_to_parabolic(x) -> Parabolic9:
    """Invert :func:`parabolic_to_cartesian9`; u = |x| + x9, v = |x| - x9."""
    x = np.asarray(x, dtype=float)
    if x.shape != (9,):
        raise ValueError(f"expected a 9-vector, got shape {x.shape}")
    r = float(np.linalg.norm(x))
    if r == 0.0:
        raise ValueError("parabolic chart is undefined at the origin")
    u = max(r + float(x[8]), 0.0)
    v = max(r - float(x[8]), 0.0)
    _, phi = _sphere7_invert(x[:8])
    return Parabolic9(u=u, v=v, phi=tuple(phi))
