"""Spectral regions in the complex plane.

Covers the complex ellipses on which Chebyshev iterations are optimal, the
region ``K_hat = {|lam| <= L, Re lam >= mu}`` that contains the Jacobian
spectrum of a mu-strongly-monotone, L-Lipschitz game, the inner triangle and
outer rectangle that sandwich it, and the rho-convergence region of a
momentum method.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EllipseRegion",
    "SpectrumBound",
    "VertexSet",
    "ellipse_membership",
    "khat_contains",
    "khat_boundary",
    "k1_contains",
    "k2_contains",
    "sandwich_vertices",
    "rho_region_membership",
]


@dataclass(frozen=True)
class EllipseRegion:
    """Ellipse centred at ``d`` on the real axis with semi-axes ``a`` (real) and ``b`` (imaginary).

    ``b = 0`` is admitted and describes the real segment ``[d - a, d + a]``.
    """

    d: float
    a: float
    b: float

    def __post_init__(self):
        d, a, b = float(self.d), float(self.a), float(self.b)
        if not all(map(math.isfinite, (d, a, b))):
            raise ValueError("ellipse parameters must be finite")
        if not a > 0:
            raise ValueError(f"semi-axis a must be positive, got {a}")
        if b < 0:
            raise ValueError(f"semi-axis b must be non-negative, got {b}")
        if not d > a:
            raise ValueError(f"ellipse must exclude the origin (d > a), got d={d}, a={a}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def c_sq(self):
        """Squared focal distance ``a**2 - b**2``; negative for tall ellipses."""
        return self.a * self.a - self.b * self.b

    def boundary(self, n):
        """``n`` equally spaced (in angle) points on the boundary."""
        theta = 2 * np.pi * np.arange(n) / n
        return self.d + self.a * np.cos(theta) + 1j * self.b * np.sin(theta)


@dataclass(frozen=True)
class SpectrumBound:
    """Strong monotonicity ``mu`` and Lipschitz constant ``L`` of a game."""

    mu: float
    L: float

    def __post_init__(self):
        mu, L = float(self.mu), float(self.L)
        if not (math.isfinite(mu) and math.isfinite(L)):
            raise ValueError("mu and L must be finite")
        if not mu > 0:
            raise ValueError(f"mu must be positive, got {mu}")
        if L < mu:
            raise ValueError(f"L must be at least mu, got mu={mu}, L={L}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "L", L)

    @property
    def kappa(self):
        return self.L / self.mu

    @property
    def height(self):
        """Half-height ``sqrt(L**2 - mu**2)`` of the chord ``Re lam = mu``."""
        return math.sqrt((self.L - self.mu) * (self.L + self.mu))


@dataclass(frozen=True)
class VertexSet:
    """Upper-half-plane representatives of a polygon's vertices."""

    vertices: tuple

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self):
        return len(self.vertices)

    def as_array(self):
        return np.asarray(self.vertices, dtype=complex)


def ellipse_membership(e: EllipseRegion, lam):
    """Return ``E(lam) = (Re lam - d)**2 / a**2 + (Im lam)**2 / b**2``.

    Points with ``E <= 1`` lie in the ellipse.  For the degenerate ``b = 0``
    case the imaginary term is dropped on the real axis and any point off the
    axis maps to ``inf``.
    """
    lam = np.asarray(lam, dtype=complex)
    real_term = (lam.real - e.d) ** 2 / e.a**2
    if e.b == 0:
        return np.where(lam.imag == 0, real_term, np.inf)[()]
    return (real_term + lam.imag**2 / e.b**2)[()]


def khat_contains(s: SpectrumBound, lam):
    """Closed membership in ``K_hat``: ``|lam| <= L`` and ``Re lam >= mu``."""
    lam = np.asarray(lam, dtype=complex)
    return ((np.abs(lam) <= s.L) & (lam.real >= s.mu))[()]


def k1_contains(s: SpectrumBound, lam, tol=0.0):
    """Membership in the inner triangle with vertices ``L`` and ``mu +- i sqrt(L**2 - mu**2)``.

    Encoded by its three half-planes: ``Re lam >= mu`` and
    ``Re lam / L +- slope * Im lam <= 1``.
    """
    lam = np.asarray(lam, dtype=complex)
    slope = (s.L - s.mu) / (s.L * s.height)
    x, y = lam.real, lam.imag
    return (
        (x >= s.mu - tol)
        & (x / s.L + slope * y <= 1 + tol)
        & (x / s.L - slope * y <= 1 + tol)
    )[()]


def k2_contains(s: SpectrumBound, lam, tol=0.0):
    """Membership in the outer box ``[mu, L] x [-h, h]`` with ``h = sqrt(L**2 - mu**2)``."""
    lam = np.asarray(lam, dtype=complex)
    h = s.height
    return (
        (lam.real >= s.mu - tol)
        & (lam.real <= s.L + tol)
        & (np.abs(lam.imag) <= h + tol)
    )[()]


def sandwich_vertices(s: SpectrumBound):
    """Vertex sets ``(H1, H2)`` of the inner triangle and outer rectangle.

    Only upper-half-plane representatives are returned since both polygons
    are symmetric about the real axis:
    ``H1 = {L, mu + ih}`` and ``H2 = {L + ih, mu + ih}`` with
    ``h = sqrt(L**2 - mu**2)``.
    """
    if s.L == s.mu:
        raise ValueError("sandwich polygons degenerate when L == mu")
    h = s.height
    shared = complex(s.mu, h)
    return VertexSet((complex(s.L, 0.0), shared)), VertexSet((complex(s.L, h), shared))


def khat_boundary(s: SpectrumBound, n):
    """About ``n`` points on the upper half of the boundary of ``K_hat``.

    Half the points go on the arc ``|lam| = L`` from the real axis up to the
    chord, the rest on the chord ``Re lam = mu``.
    """
    n_arc = max(n // 2, 2)
    n_chord = max(n - n_arc, 2)
    top = math.atan2(s.height, s.mu)
    arc = s.L * np.exp(1j * np.linspace(0.0, top, n_arc))
    chord = s.mu + 1j * np.linspace(0.0, s.height, n_chord)
    return np.concatenate([arc, chord])


def rho_region_membership(m, rho, lam):
    """Left-hand side of the rho-convergence-region inequality of a momentum method.

    For parameters ``m`` (``eta``, ``beta``) and rate ``rho`` this returns::

        (1 - eta Re lam + beta)**2 / (1 + tau)**2 + (eta Im lam)**2 / (1 - tau)**2

    with ``tau = beta / rho**2``.  A value ``<= rho**2`` means the companion
    matrix at ``lam`` has spectral radius at most ``rho``.
    """
    rho = float(rho)
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if not m.eta > 0:
        raise ValueError(f"step size must be positive, got {m.eta}")
    if m.beta > rho:
        raise ValueError(f"momentum {m.beta} exceeds rho {rho}")
    tau = m.beta / rho**2
    if abs(tau) == 1:
        raise ValueError("degenerate rho-region: |beta| == rho**2")
    lam = np.asarray(lam, dtype=complex)
    real_part = (1 - m.eta * lam.real + m.beta) ** 2 / (1 + tau) ** 2
    imag_part = (m.eta * lam.imag) ** 2 / (1 - tau) ** 2
    return (real_part + imag_part)[()]
