"""Cross-module property checks run by ``negmomentum verify``.

Each check returns a :class:`CheckResult`; a failing check carries the first
counterexample it found in ``detail``.  ``fault=True`` flips the sign of the
momentum produced by the parameter map, which must make the suite fail.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chebyshev import ChebParams, conv_factor
from .dynamics import companion_spectral_radius
from .rates import (
    MomentumParams,
    cheb_from_params,
    params_from_cheb,
    solve_region_rate,
)
from .regions import EllipseRegion, SpectrumBound, k1_contains, k2_contains, khat_contains

SEED = 20240607


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _params(p, fault):
    m = params_from_cheb(p)
    if fault:
        return MomentumParams(m.eta, -m.beta, m.alpha)
    return m


def _random_cheb(rng):
    d = rng.uniform(0.1, 10.0)
    c_sq = rng.uniform(-4.0, 0.95) * d * d
    return ChebParams(d, c_sq)


def check_boundary_constancy(fault=False, n_ellipses=10, n_points=720):
    rng = np.random.default_rng(SEED)
    for _ in range(n_ellipses):
        d = rng.uniform(1.0, 10.0)
        a = rng.uniform(0.05, 0.95) * d
        b = rng.uniform(0.0, 2.0) * d
        e = EllipseRegion(d, a, b)
        r = conv_factor(e.boundary(n_points), ChebParams(d, e.c_sq))
        spread = r.max() - r.min()
        if spread > 1e-9 * r.max():
            return CheckResult("boundary-constancy", False, f"d={d} a={a} b={b} spread={spread:.3e}")
    return CheckResult("boundary-constancy", True, f"{n_ellipses} ellipses x {n_points} points")


def check_companion_equivalence(fault=False, n=1000):
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(n):
        p = _random_cheb(rng)
        lam = complex(rng.uniform(1e-3, 2 * p.d), rng.uniform(-2 * p.d, 2 * p.d))
        r = float(conv_factor(lam, p))
        rc = float(companion_spectral_radius(lam, _params(p, fault)))
        rel = abs(r - rc) / max(abs(r), 1e-300)
        worst = max(worst, rel)
        if rel > 1e-8:
            return CheckResult(
                "companion-equivalence", False,
                f"lam={lam} d={p.d} c_sq={p.c_sq}: conv={r!r} companion={rc!r}",
            )
    return CheckResult("companion-equivalence", True, f"{n} samples, max rel err {worst:.2e}")


def check_round_trip(fault=False, n=1000):
    rng = np.random.default_rng(SEED + 2)
    for _ in range(n):
        p = _random_cheb(rng)
        q = cheb_from_params(_params(p, fault))
        if not (math.isclose(q.d, p.d, rel_tol=1e-12) and math.isclose(q.c_sq, p.c_sq, rel_tol=1e-12, abs_tol=1e-300)):
            return CheckResult("round-trip", False, f"d={p.d} c_sq={p.c_sq} -> d={q.d} c_sq={q.c_sq}")
    return CheckResult("round-trip", True, f"{n} samples")


def _reports(kappas):
    for kappa in kappas:
        s = SpectrumBound(1.0, float(kappa))
        yield s, solve_region_rate(s, "K1"), solve_region_rate(s, "K2")


def check_vertex_equality(fault=False, kappas=(2, 10, 100, 1000)):
    for s, r1, r2 in _reports(kappas):
        for r in (r1, r2):
            spread = max(r.vertex_factors) - min(r.vertex_factors)
            if spread > 1e-6:
                return CheckResult("vertex-equality", False, f"kappa={s.kappa} {r.region_tag.value}: {r.vertex_factors}")
    return CheckResult("vertex-equality", True, f"kappa in {list(kappas)}")


def check_negative_momentum(fault=False, kappas=(2, 10, 100)):
    for s, r1, r2 in _reports(kappas):
        for r in (r1, r2):
            m = _params(ChebParams(r.d_star, r.c_sq_star), fault)
            if not m.beta < 0:
                return CheckResult("negative-momentum", False, f"kappa={s.kappa} {r.region_tag.value}: beta={m.beta}")
    return CheckResult("negative-momentum", True, f"kappa in {list(kappas)}")


def check_sandwich(fault=False, kappas=(2, 5, 10, 50, 100, 1000), n_points=10_000):
    previous = (0.0, 0.0)
    for s, r1, r2 in _reports(kappas):
        if r1.rho_hat > r2.rho_hat + 1e-10:
            return CheckResult("sandwich", False, f"kappa={s.kappa}: K1 {r1.rho_hat} > K2 {r2.rho_hat}")
        if r1.rho_hat < previous[0] or r2.rho_hat < previous[1]:
            return CheckResult("sandwich", False, f"rate decreased at kappa={s.kappa}")
        previous = (r1.rho_hat, r2.rho_hat)
    rng = np.random.default_rng(SEED + 3)
    s = SpectrumBound(1.0, 10.0)
    pts = rng.uniform(0, 1.1 * s.L, n_points) + 1j * rng.uniform(-1.1 * s.L, 1.1 * s.L, n_points)
    inner = k1_contains(s, pts)
    inside = khat_contains(s, pts)
    if np.any(inner & ~inside) or np.any(inside & ~k2_contains(s, pts)):
        return CheckResult("sandwich", False, "polygon inclusion violated")
    return CheckResult("sandwich", True, f"kappa in {list(kappas)}; {n_points} inclusion samples")


def check_rate_bracket(fault=False, kappas=(10, 100, 1000)):
    for s, r1, r2 in _reports(kappas):
        k = s.kappa
        lo1, hi1 = 1 - 2 * k**-1.5 - 24 * k**-2, 1 - math.sqrt(2) / 2 * k**-1.5 + 2.25 * k**-2
        lo2, hi2 = 1 - 2 * k**-1.5, 1 - (math.sqrt(2 * k - 1) - 1) / (2 * k * k)
        if not lo1 <= r1.rho_hat <= hi1:
            return CheckResult("rate-bracket", False, f"kappa={k} K1 {r1.rho_hat} not in [{lo1}, {hi1}]")
        if not lo2 <= r2.rho_hat <= hi2:
            return CheckResult("rate-bracket", False, f"kappa={k} K2 {r2.rho_hat} not in [{lo2}, {hi2}]")
    return CheckResult("rate-bracket", True, f"kappa in {list(kappas)}")


ALL_CHECKS = (
    check_boundary_constancy,
    check_companion_equivalence,
    check_round_trip,
    check_vertex_equality,
    check_negative_momentum,
    check_sandwich,
    check_rate_bracket,
)


def run_all(fault=False):
    return [check(fault=fault) for check in ALL_CHECKS]
