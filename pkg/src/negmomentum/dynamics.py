"""Quadratic minimax games and first-order dynamics on them.

The games are ``f(x, y) = x'Ax/2 + x'By - y'Cy/2`` with diagonal ``A, B, C``,
so the vector field ``F(z) = [Ax + By; -B'x + Cy]`` splits into independent
2x2 blocks ``[[a_i, b_i], [-b_i, c_i]]`` and its spectrum is available in
closed form.  The equilibrium is ``z* = 0``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .chebyshev import ChebParams, max_modulus_root
from .rates import MomentumParams, params_from_cheb
from .regions import SpectrumBound, khat_boundary, sandwich_vertices

__all__ = [
    "QuadraticGame",
    "MethodKind",
    "MethodSpec",
    "Trace",
    "build_game",
    "game_spectrum_bounds",
    "step",
    "cheb_schedule",
    "companion_spectral_radius",
    "worst_case_radius",
    "simulate",
    "simulate_batch",
    "measure_rate",
    "iterations_to_tolerance",
    "local_rate_certificate",
    "tune_step_size",
    "gda_step_grid",
    "ogda_step_grid",
]

FLOOR = 1e-14
DIVERGENCE = 1e12


@dataclass(frozen=True, eq=False)
class QuadraticGame:
    a_diag: np.ndarray
    b_diag: np.ndarray
    c_diag: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self):
        arrays = []
        for name in ("a_diag", "b_diag", "c_diag"):
            arr = np.array(getattr(self, name), dtype=float).ravel()
            arr.flags.writeable = False
            arrays.append(arr)
            object.__setattr__(self, name, arr)
        a, b, c = arrays
        if not (len(a) == len(b) == len(c)) or len(a) == 0:
            raise ValueError("diagonals must be non-empty and of equal length")
        if not all(np.all(np.isfinite(x)) for x in arrays):
            raise ValueError("game diagonals must be finite")
        if np.any(np.minimum(a, c) <= 0):
            raise ValueError("A and C diagonals must be positive")
        if np.any(b < 0):
            raise ValueError("B diagonal must be non-negative")

    @property
    def dim(self):
        return len(self.a_diag)

    def field(self, z):
        """Vector field ``F(z)``; ``z`` may carry leading batch axes."""
        z = np.asarray(z)
        n = self.dim
        x, y = z[..., :n], z[..., n:]
        a, b, c = self.a_diag, self.b_diag, self.c_diag
        return np.concatenate([a * x + b * y, c * y - b * x], axis=-1)

    def jacobian(self):
        return np.block(
            [
                [np.diag(self.a_diag), np.diag(self.b_diag)],
                [-np.diag(self.b_diag), np.diag(self.c_diag)],
            ]
        )

    def block_eigenvalues(self):
        """Both eigenvalues of every 2x2 block, shape ``(dim, 2)``."""
        a, b, c = self.a_diag, self.b_diag, self.c_diag
        root = np.sqrt(((a - c) ** 2 - 4 * b * b).astype(complex))
        mean = (a + c) / 2
        return np.stack([mean + root / 2, mean - root / 2], axis=1)

    def spectrum(self):
        return self.block_eigenvalues().ravel()

    def block(self, i):
        """The ``i``-th block as a single-block game."""
        return QuadraticGame(self.a_diag[i : i + 1], self.b_diag[i : i + 1], self.c_diag[i : i + 1])


def build_game(half_dim, seed) -> QuadraticGame:
    """Diagonal test game with ``A = C = diag(1, 1/2, ..., 1/half_dim)``.

    ``B`` has entries drawn uniformly from ``[0, 1)`` by numpy's PCG64
    generator (``np.random.default_rng(seed)``), so a seed pins the game.
    """
    half_dim = int(half_dim)
    if half_dim < 1:
        raise ValueError(f"half_dim must be at least 1, got {half_dim}")
    diag = 1.0 / np.arange(1, half_dim + 1)
    b = np.random.default_rng(seed).random(half_dim)
    return QuadraticGame(diag, b, diag.copy(), seed=int(seed))


def game_spectrum_bounds(g: QuadraticGame) -> SpectrumBound:
    """Certified ``(mu, L)`` for the Jacobian spectrum of ``g``.

    ``mu`` is the smallest real part over all block eigenvalues and ``L`` the
    largest block singular value (never below the largest eigenvalue modulus,
    so every eigenvalue passes :func:`khat_contains`).
    """
    a, b, c = g.a_diag, g.b_diag, g.c_diag
    if np.any(np.minimum(a, c) <= 0):
        raise ValueError("blocks must have positive diagonal")
    eig = g.block_eigenvalues()
    mu = float(eig.real.min())
    fro_sq = a * a + c * c + 2 * b * b
    det = a * c + b * b
    sigma_max = np.sqrt((fro_sq + np.sqrt(np.maximum(fro_sq**2 - 4 * det * det, 0.0))) / 2)
    L = float(max(sigma_max.max(), np.abs(eig).max()))
    return SpectrumBound(mu=mu, L=max(L, mu))


def step(g: QuadraticGame, m: MomentumParams, z_curr, z_prev):
    """One application of ``z+ = (1 + beta) z - beta z_prev - eta F((1 + alpha) z - alpha z_prev)``."""
    z_curr = np.asarray(z_curr, dtype=float)
    z_prev = np.asarray(z_prev, dtype=float)
    if z_curr.shape[-1] != 2 * g.dim or z_prev.shape != z_curr.shape:
        raise ValueError(f"state vectors must have length {2 * g.dim}")
    probe = (1 + m.alpha) * z_curr - m.alpha * z_prev
    return (1 + m.beta) * z_curr - m.beta * z_prev - m.eta * g.field(probe)


def cheb_schedule(p: ChebParams, t_max):
    """Time-varying parameters of the Chebyshev iteration for ``t_max`` steps.

    Step 0 is the plain gradient step ``eta = 1/d``.  After that
    ``eta_t = 1 / (d - (c_sq/4) eta_{t-1})`` seeded with ``eta_0 = 2/d`` and
    ``beta_t = d eta_t - 1``; the sequence tends to :func:`params_from_cheb`.
    """
    t_max = int(t_max)
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    d, quarter = p.d, p.c_sq / 4
    out = [MomentumParams(eta=1 / d, beta=0.0)]
    eta = 2 / d
    for _ in range(t_max - 1):
        eta = 1 / (d - quarter * eta)
        out.append(MomentumParams(eta=eta, beta=d * eta - 1))
    return out


def companion_spectral_radius(lam, m: MomentumParams):
    """Spectral radius of the per-eigenvalue iteration matrix of the update.

    For ``alpha = 0`` this is the companion matrix ``[[1 + beta - eta lam, -beta], [1, 0]]``;
    in general the characteristic polynomial is
    ``x**2 - (1 + beta - eta lam (1 + alpha)) x + (beta - eta lam alpha)``.
    Vectorised over ``lam``.
    """
    lam = np.asarray(lam, dtype=complex)
    if not np.all(np.isfinite(lam)):
        raise ValueError("eigenvalue must be finite")
    trace = 1 + m.beta - m.eta * lam * (1 + m.alpha)
    det = m.beta - m.eta * lam * m.alpha
    return (np.abs(max_modulus_root(trace, trace * trace - 4 * det)) / 2)[()]


def worst_case_radius(s: SpectrumBound, m: MomentumParams, n_samples=256):
    """Largest iteration-matrix radius over the sandwich vertices and the boundary of ``K_hat``."""
    if n_samples < 64:
        raise ValueError("n_samples must be at least 64")
    pts = [khat_boundary(s, n_samples)]
    if s.L > s.mu:
        h1, h2 = sandwich_vertices(s)
        pts += [h1.as_array(), h2.as_array()]
    return float(np.max(companion_spectral_radius(np.concatenate(pts), m)))


class MethodKind(str, enum.Enum):
    GDA = "GDA"
    OGDA = "OGDA"
    NEG_MOMENTUM = "NM"
    CHEB_SCHEDULE = "CHEB"


@dataclass(frozen=True)
class MethodSpec:
    kind: MethodKind
    params: Optional[MomentumParams] = None
    cheb: Optional[ChebParams] = None
    label: Optional[str] = None

    def __post_init__(self):
        kind = MethodKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is MethodKind.CHEB_SCHEDULE:
            if self.cheb is None:
                raise ValueError("Chebyshev schedule needs ChebParams")
            return
        m = self.params
        if m is None:
            raise ValueError(f"{kind.value} needs MomentumParams")
        if kind is MethodKind.GDA and (m.alpha != 0 or m.beta != 0):
            raise ValueError("GDA requires alpha = beta = 0")
        if kind is MethodKind.OGDA and (m.alpha != 1 or m.beta != 0):
            raise ValueError("OGDA requires alpha = 1, beta = 0")
        if kind is MethodKind.NEG_MOMENTUM and (m.alpha != 0 or not m.beta < 0):
            raise ValueError("negative momentum requires alpha = 0, beta < 0")

    @classmethod
    def gda(cls, eta):
        return cls(MethodKind.GDA, MomentumParams(eta, 0.0, 0.0))

    @classmethod
    def ogda(cls, eta):
        return cls(MethodKind.OGDA, MomentumParams(eta, 0.0, 1.0))

    @classmethod
    def negative_momentum(cls, params, label=None):
        return cls(MethodKind.NEG_MOMENTUM, params, label=label)

    @classmethod
    def chebyshev(cls, cheb, label=None):
        return cls(MethodKind.CHEB_SCHEDULE, cheb=cheb, label=label)

    @property
    def name(self):
        return self.label or self.kind.value

    @property
    def effective_params(self) -> MomentumParams:
        """Fixed parameters, or the limit of the schedule for ``CHEB``."""
        if self.kind is MethodKind.CHEB_SCHEDULE:
            return params_from_cheb(self.cheb)
        return self.params


@dataclass(frozen=True, eq=False)
class Trace:
    distances: np.ndarray
    seed: Optional[int]
    method: MethodSpec
    diverged: bool = False

    @property
    def iterations(self):
        return len(self.distances) - 1


def _truncate(row):
    """Cut a raw distance row at the first floor hit or divergence."""
    bad = ~np.isfinite(row) | (row > DIVERGENCE)
    below = row < FLOOR
    stop = len(row)
    diverged = False
    hits = np.flatnonzero(bad | below)
    if hits.size:
        stop = hits[0] + 1
        diverged = bool(bad[hits[0]])
    return row[:stop], diverged


def simulate_batch(g: QuadraticGame, etas, betas, alphas, z0=None, t_max=1000, schedule=None):
    """Run many fixed-parameter methods on one game in lock step.

    ``etas``, ``betas`` and ``alphas`` broadcast to a common batch shape
    ``(B,)``.  When ``schedule`` (a list of :class:`MomentumParams`) is given
    it overrides the fixed parameters step by step.  Returns raw distance
    rows of shape ``(B, t_max + 1)``; rows are not truncated.
    """
    etas, betas, alphas = np.broadcast_arrays(
        np.atleast_1d(np.asarray(etas, float)),
        np.atleast_1d(np.asarray(betas, float)),
        np.atleast_1d(np.asarray(alphas, float)),
    )
    batch = etas.shape[0]
    z0 = np.ones(2 * g.dim) if z0 is None else np.asarray(z0, dtype=float)
    if z0.shape != (2 * g.dim,):
        raise ValueError(f"z0 must have length {2 * g.dim}")
    z = np.tile(z0, (batch, 1))
    z_prev = z.copy()
    eta, beta, alpha = etas[:, None], betas[:, None], alphas[:, None]
    out = np.empty((batch, t_max + 1))
    out[:, 0] = np.linalg.norm(z, axis=1)
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(t_max):
            if schedule is not None:
                m = schedule[t]
                eta, beta, alpha = m.eta, m.beta, m.alpha
            probe = z + alpha * (z - z_prev)
            z, z_prev = z + beta * (z - z_prev) - eta * g.field(probe), z
            out[:, t + 1] = np.linalg.norm(z, axis=1)
            if t % 64 == 63:
                done = (out[:, t + 1] < FLOOR) | ~(out[:, t + 1] <= DIVERGENCE)
                if np.all(done):
                    out[:, t + 2 :] = out[:, t + 1 : t + 2]
                    break
    return out


def simulate(g: QuadraticGame, spec: MethodSpec, z0=None, t_max=1000) -> Trace:
    """Run ``spec`` on ``g`` from ``z0`` (default all ones) for up to ``t_max`` steps.

    Stops early once the distance to the equilibrium drops below 1e-14, or
    when it exceeds 1e12, in which case the trace is flagged as diverged.
    """
    t_max = int(t_max)
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    if spec.kind is MethodKind.CHEB_SCHEDULE:
        raw = simulate_batch(g, 0.0, 0.0, 0.0, z0, t_max, schedule=cheb_schedule(spec.cheb, t_max))
    else:
        m = spec.params
        raw = simulate_batch(g, m.eta, m.beta, m.alpha, z0, t_max)
    distances, diverged = _truncate(raw[0])
    return Trace(distances=distances, seed=g.seed, method=spec, diverged=diverged)


def measure_rate(trace, tail_fraction=0.5):
    """Empirical linear rate ``exp(slope)`` of ``log(distance)`` over the tail of a trace.

    Only finite entries above the 1e-14 floor are used; the fit covers the
    last ``tail_fraction`` of them and needs at least 10 points.
    """
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must lie in (0, 1]")
    dist = np.asarray(getattr(trace, "distances", trace), dtype=float)
    t = np.arange(len(dist))
    keep = np.isfinite(dist) & (dist >= FLOOR)
    t, dist = t[keep], dist[keep]
    n_tail = int(math.ceil(tail_fraction * len(dist)))
    if n_tail < 10:
        raise ValueError("rate undefined: fewer than 10 usable points in the tail window")
    slope = np.polyfit(t[-n_tail:], np.log(dist[-n_tail:]), 1)[0]
    return float(np.exp(slope))


def iterations_to_tolerance(trace, tol=1e-6, tail_fraction=0.5):
    """Number of iterations needed to bring the distance below ``tol``.

    Returns ``(iterations, observed)``.  If the trace reaches ``tol`` the first
    such index is returned with ``observed=True``.  Otherwise the tail rate is
    fitted and the crossing extrapolated from the last entry (``inf`` when
    the trace diverged or the fitted rate is not below 1).
    """
    dist = np.asarray(trace.distances, dtype=float)
    hit = np.flatnonzero(dist <= tol)
    if hit.size:
        return float(hit[0]), True
    if trace.diverged:
        return math.inf, False
    rate = measure_rate(trace, tail_fraction)
    if rate >= 1:
        return math.inf, False
    extra = math.log(tol / dist[-1]) / math.log(rate)
    return float(len(dist) - 1 + extra), False


def local_rate_certificate(radius, t):
    """Envelope ``(1 - delta/2)**t`` for an iteration with spectral radius ``1 - delta``."""
    radius = float(radius)
    if not radius < 1:
        raise ValueError(f"radius must be below 1, got {radius}")
    return (1 - (1 - radius) / 2) ** t


def gda_step_grid(s: SpectrumBound, n=64):
    return np.geomspace(s.mu / (10 * s.L**2), 2 / s.L, n)


def ogda_step_grid(s: SpectrumBound, n=64):
    return np.geomspace(1 / (10 * s.L), 1 / s.L, n)


def tune_step_size(g: QuadraticGame, etas, beta=0.0, alpha=0.0, z0=None, t_max=1000):
    """Grid-search the step size of a fixed-parameter method on ``g``.

    Every candidate is simulated; the winner is the one that hits the floor
    earliest, or failing that has the smallest final distance.  Returns the
    chosen step size.
    """
    etas = np.asarray(etas, dtype=float)
    raw = simulate_batch(g, etas, beta, alpha, z0, t_max)
    best_key, best_eta = None, None
    for eta, row in zip(etas, raw):
        dist, diverged = _truncate(row)
        if diverged:
            continue
        key = (len(dist), dist[-1])
        if best_key is None or key < best_key:
            best_key, best_eta = key, float(eta)
    if best_eta is None:
        raise ValueError("every candidate step size diverged")
    return best_eta
