"""Optimal momentum parameters and asymptotic rates.

The best constant-parameter momentum method for a spectral region is found
through its equivalent Chebyshev iteration: a pair ``(d, c_sq)`` maps one to
one onto ``(eta, beta)``.  For the strongly-monotone region ``K_hat`` the
min-max problem is bracketed between an inner triangle (``K1``) and an outer
rectangle (``K2``); for each of these the optimal ellipse passes through both
representative vertices, leaving a one-dimensional minimisation.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .chebyshev import ChebParams, conv_factor
from .regions import EllipseRegion, SpectrumBound, sandwich_vertices

__all__ = [
    "MomentumParams",
    "Region",
    "Sign",
    "RateReport",
    "ellipse_rho",
    "params_from_cheb",
    "cheb_from_params",
    "k1_domain",
    "k2_domain",
    "k1_objective",
    "k2_objective",
    "k1_ellipse",
    "k2_ellipse",
    "solve_region_rate",
    "lower_bound_rate",
    "momentum_sign",
]

GOLDEN_RATIO = (1 + math.sqrt(5)) / 2
GRID_POINTS = 10_000
DOMAIN_EPS = 1e-9
SOLVER_TOL = 1e-12


@dataclass(frozen=True)
class MomentumParams:
    """Step size ``eta``, momentum ``beta`` and extrapolation ``alpha`` of the update

    ``z+ = (1 + beta) z - beta z_prev - eta F((1 + alpha) z - alpha z_prev)``.
    """

    eta: float
    beta: float
    alpha: float = 0.0

    def __post_init__(self):
        for name in ("eta", "beta", "alpha"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.eta < 0:
            raise ValueError(f"step size must be non-negative, got {self.eta}")


class Region(str, enum.Enum):
    K1 = "K1"
    K2 = "K2"


class Sign(str, enum.Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class RateReport:
    region_tag: Region
    d_star: float
    c_sq_star: float
    a_star: float
    b_star: float
    rho_hat: float
    params: MomentumParams
    vertex_factors: tuple = field(default=())

    @property
    def ellipse(self):
        return EllipseRegion(self.d_star, self.a_star, self.b_star)


def ellipse_rho(e: EllipseRegion):
    """Asymptotic convergence factor of the optimal polynomial on an ellipse.

    Equal to ``a/d`` on a disc and ``(d - sqrt(d**2 + b**2 - a**2)) / (a - b)``
    otherwise.  Evaluated as ``(a + b) / (d + sqrt(d**2 + b**2 - a**2))``,
    which is the same quantity without the removable singularity at ``a = b``.
    """
    if not e.d > e.a:
        raise ValueError("origin must lie outside the ellipse (d > a)")
    return (e.a + e.b) / (e.d + math.sqrt(e.d * e.d - e.c_sq))


def params_from_cheb(p: ChebParams) -> MomentumParams:
    """Constant momentum parameters that reproduce the Chebyshev rate.

    ``eta = 2 (d - sqrt(d**2 - c_sq)) / c_sq`` (limit ``1/d`` as ``c_sq -> 0``)
    and ``beta = d eta - 1``.  Computed through the cancellation-free forms
    ``eta = 2 / (d + sqrt(d**2 - c_sq))`` and ``beta = c_sq eta**2 / 4``.
    """
    if p.d <= 0:
        raise ValueError(f"d must be positive, got {p.d}")
    eta = 2.0 / (p.d + math.sqrt(p.d * p.d - p.c_sq))
    return MomentumParams(eta=eta, beta=p.c_sq * eta * eta / 4.0, alpha=0.0)


def cheb_from_params(m: MomentumParams) -> ChebParams:
    """Inverse of :func:`params_from_cheb`: ``d = (1 + beta)/eta``, ``c_sq = 4 beta / eta**2``."""
    if not m.eta > 0:
        raise ValueError(f"step size must be positive, got {m.eta}")
    return ChebParams(d=(1 + m.beta) / m.eta, c_sq=4 * m.beta / m.eta**2)


def _eps(s: SpectrumBound):
    return DOMAIN_EPS * (s.mu + s.L)


def k1_domain(s: SpectrumBound):
    """Closed interval of admissible ellipse centres for the triangle problem."""
    return s.L / 2, (s.mu + s.L) / 2 - _eps(s)


def k2_domain(s: SpectrumBound):
    """Closed interval of admissible real semi-axes for the rectangle problem."""
    return (s.L - s.mu) / 2 + _eps(s), (s.L + s.mu) / 2


def _check_domain(x, lo, hi, what):
    x = np.asarray(x, dtype=float)
    # a few ulps of slack so grid endpoints round-trip
    slack = 4 * np.finfo(float).eps * max(abs(lo), abs(hi))
    if np.any(x < lo - slack) or np.any(x > hi + slack) or not np.all(np.isfinite(x)):
        raise ValueError(f"{what} outside [{lo}, {hi}]")
    return x


def k1_objective(d, s: SpectrumBound):
    """Rate of the ellipse centred at ``d`` through ``L`` and ``mu + i sqrt(L**2 - mu**2)``.

    The ellipse has ``a = L - d`` and ``b**2 = (L + mu)(L - d)**2 / (L + mu - 2d)``;
    the returned value is the closed form obtained by substituting these into
    the ellipse rate.  Vectorised over ``d``.
    """
    lo, hi = k1_domain(s)
    d = _check_domain(d, lo, hi, "ellipse centre")
    L, mu = s.L, s.mu
    gap = L + mu - 2 * d
    num = d - np.sqrt(2 * d * (L - d) ** 2 / gap + d * d)
    den = (L - d) * (1 - np.sqrt((L + mu) / gap))
    return (num / den)[()]


def k2_objective(a, s: SpectrumBound):
    """Rate of the ellipse centred at ``(L + mu)/2`` with real semi-axis ``a`` through ``L + ih`` and ``mu + ih``.

    The imaginary semi-axis follows from the vertex constraint:
    ``b**2 = (L**2 - mu**2) a**2 / (a**2 - ((L - mu)/2)**2)``.  Vectorised over ``a``.
    """
    lo, hi = k2_domain(s)
    a = _check_domain(a, lo, hi, "semi-axis")
    L, mu = s.L, s.mu
    d = (L + mu) / 2
    half_width_sq = ((L - mu) / 2) ** 2
    b = a * np.sqrt((L - mu) * (L + mu) / (a * a - half_width_sq))
    num = d - np.sqrt(d * d + b * b - a * a)
    return (num / (a - b))[()]


def k1_ellipse(d, s: SpectrumBound) -> EllipseRegion:
    L, mu = s.L, s.mu
    a = L - d
    b = a * math.sqrt((L + mu) / (L + mu - 2 * d))
    return EllipseRegion(d=d, a=a, b=b)


def k2_ellipse(a, s: SpectrumBound) -> EllipseRegion:
    L, mu = s.L, s.mu
    b = a * math.sqrt((L - mu) * (L + mu) / (a * a - ((L - mu) / 2) ** 2))
    return EllipseRegion(d=(L + mu) / 2, a=a, b=b)


def _grid_then_golden(f, lo, hi, n=GRID_POINTS, tol=SOLVER_TOL):
    xs = np.linspace(lo, hi, n)
    values = f(xs)
    i = int(np.argmin(values))
    if 0 < i < n - 1:
        brack = (xs[i - 1], xs[i], xs[i + 1])
    else:
        brack = (xs[max(i - 1, 0)], xs[min(i + 1, n - 1)])
    x = optimize.golden(lambda t: float(f(t)), brack=brack, tol=tol)
    x = float(np.clip(x, lo, hi))
    # golden never returns worse than its bracket, but keep the grid point if it does
    if f(x) > values[i]:
        x = float(xs[i])
    return x


def solve_region_rate(s: SpectrumBound, region) -> RateReport:
    """Optimal Chebyshev ellipse, momentum parameters and rate for ``K1`` or ``K2``.

    A uniform grid of 10**4 points locates the basin, then golden-section
    search refines the scalar variable to relative tolerance 1e-12.  The
    vertex factors are recomputed from the resulting ``(d, c_sq)`` with
    :func:`conv_factor`, independently of the objective.
    """
    region = Region(region)
    if not s.kappa > 1:
        raise ValueError(f"condition number must exceed 1, got {s.kappa}")
    if region is Region.K1:
        x = _grid_then_golden(lambda t: k1_objective(t, s), *k1_domain(s))
        ell = k1_ellipse(x, s)
        rho = float(k1_objective(x, s))
        vertices = sandwich_vertices(s)[0]
    else:
        x = _grid_then_golden(lambda t: k2_objective(t, s), *k2_domain(s))
        ell = k2_ellipse(x, s)
        rho = float(k2_objective(x, s))
        vertices = sandwich_vertices(s)[1]
    cheb = ChebParams(d=ell.d, c_sq=ell.c_sq)
    factors = tuple(float(conv_factor(v, cheb)) for v in vertices)
    return RateReport(
        region_tag=region,
        d_star=ell.d,
        c_sq_star=ell.c_sq,
        a_star=ell.a,
        b_star=ell.b,
        rho_hat=rho,
        params=params_from_cheb(cheb),
        vertex_factors=factors,
    )


def lower_bound_rate(s: SpectrumBound):
    """Best rate any first-order method can guarantee: ``1 - 2 mu / (mu + L)``."""
    return 1 - 2 * s.mu / (s.mu + s.L)


def momentum_sign(s: SpectrumBound, region) -> Sign:
    """Sign of the optimal momentum for the given sandwich region.

    The triangle optimum always has ``b > a`` (negative momentum) when
    ``L > mu``; the rectangle optimum does once ``L**2 > mu**2 + mu L``.
    """
    region = Region(region)
    if region is Region.K1:
        return Sign.NEGATIVE if s.L > s.mu else Sign.UNDETERMINED
    if s.L * s.L > s.mu * s.mu + s.mu * s.L:
        return Sign.NEGATIVE
    return Sign.UNDETERMINED
