"""Chebyshev polynomials on the complex plane and their convergence factor.

The residual polynomial of a Chebyshev iteration centred at ``d`` with squared
focal distance ``c_sq`` is ``T_t((d - lam) / c) / T_t(d / c)``.  Its t-th root
converges to the convergence factor ``r(lam; d, c_sq)``, which is what every
rate computation in this package is built on.

``c`` itself may be real or purely imaginary, so it is never formed: all
formulas below consume the signed real ``c_sq``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ChebParams",
    "cheb_t",
    "conv_factor",
    "max_modulus_root",
    "rate_equals_companion_check",
]

# below this |c_sq| / d**2 the disc formula |1 - lam/d| is used directly
_DISC_THRESHOLD = 1e-300


@dataclass(frozen=True)
class ChebParams:
    """Centre ``d`` and squared focal distance ``c_sq`` of a Chebyshev iteration.

    The origin must lie outside the focal segment, i.e. ``d**2 - c_sq > 0``,
    otherwise the normalisation ``p_t(0) = 1`` is not well defined.
    """

    d: float
    c_sq: float

    def __post_init__(self):
        d, c_sq = float(self.d), float(self.c_sq)
        if not (np.isfinite(d) and np.isfinite(c_sq)):
            raise ValueError(f"non-finite Chebyshev parameters d={d}, c_sq={c_sq}")
        if d <= 0:
            raise ValueError(f"ellipse centre must be positive, got d={d}")
        if d * d - c_sq <= 0:
            raise ValueError(f"d**2 - c_sq must be positive, got d={d}, c_sq={c_sq}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "c_sq", c_sq)


def _check_finite(z):
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise ValueError("complex argument must have finite real and imaginary parts")
    return z


def cheb_t(n, z):
    """Chebyshev polynomial of the first kind ``T_n(z)`` for complex ``z``.

    Evaluated with the three-term recursion ``T_{k+1} = 2 z T_k - T_{k-1}``,
    so it is exact polynomial arithmetic up to rounding.  ``z`` may be a
    scalar or an array.
    """
    n = int(n)
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    z = _check_finite(z)
    t_prev = np.ones_like(z)
    if n == 0:
        return t_prev[()]
    t_curr = z.copy()
    for _ in range(n - 1):
        t_prev, t_curr = t_curr, 2 * z * t_curr - t_prev
    return t_curr[()]


def max_modulus_root(w, disc):
    """Return ``w + s`` where ``s**2 = disc`` and the sign of ``s`` maximises ``|w + s|``.

    ``exp(acosh(x)) = x + sqrt(x**2 - 1)`` on the principal branch, and the
    principal branch is exactly the max-modulus choice, so this is the
    branch-cut-free way to evaluate ``|exp(acosh(.))|``.
    """
    w = np.asarray(w, dtype=complex)
    s = np.sqrt(np.asarray(disc, dtype=complex))
    # |w + s| >= |w - s|  iff  Re(conj(w) * s) >= 0
    flip = (w.real * s.real + w.imag * s.imag) < 0
    s = np.where(flip, -s, s)
    return w + s


def conv_factor(lam, p: ChebParams):
    """Asymptotic convergence factor ``r(lam; d, c_sq)`` of a Chebyshev iteration.

    Parameters
    ----------
    lam : complex or array_like of complex
        Eigenvalue(s) at which to evaluate the factor.
    p : ChebParams
        Centre and squared focal distance of the iteration.

    Returns
    -------
    float or ndarray
        ``|(d - lam) + s| / |d + s0|`` with ``s**2 = (d - lam)**2 - c_sq`` and
        ``s0**2 = d**2 - c_sq``, both on the max-modulus branch.  Equal to 1 at
        the origin and constant on every ellipse confocal with ``d +- c``.
    """
    if not isinstance(p, ChebParams):
        raise TypeError("p must be a ChebParams instance")
    lam = _check_finite(lam)
    d, c_sq = p.d, p.c_sq
    w = d - lam
    if abs(c_sq) < _DISC_THRESHOLD * d * d:
        return np.abs(w / d)[()]
    # factored so the discriminant keeps full accuracy near the foci
    c = np.sqrt(complex(c_sq))
    num = np.abs(max_modulus_root(w, (w - c) * (w + c)))
    den = d + np.sqrt(d * d - c_sq)
    return (num / den)[()]


def rate_equals_companion_check(lam, p: ChebParams):
    """Evaluate the convergence factor and the matching momentum companion radius.

    The momentum method with parameters ``params_from_cheb(p)`` has the
    per-eigenvalue characteristic roots ``(eta/2) * ((d - lam) +- s)``, so the
    two returned numbers agree in exact arithmetic.
    """
    from .dynamics import companion_spectral_radius
    from .rates import params_from_cheb

    return (
        float(conv_factor(lam, p)),
        float(companion_spectral_radius(lam, params_from_cheb(p))),
    )
