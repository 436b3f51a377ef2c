import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negmomentum.chebyshev import ChebParams, cheb_t, conv_factor
from negmomentum.dynamics import (
    FLOOR,
    MethodKind,
    MethodSpec,
    QuadraticGame,
    Trace,
    build_game,
    cheb_schedule,
    companion_spectral_radius,
    game_spectrum_bounds,
    gda_step_grid,
    iterations_to_tolerance,
    local_rate_certificate,
    measure_rate,
    simulate,
    step,
    tune_step_size,
    worst_case_radius,
)
from negmomentum.rates import MomentumParams, params_from_cheb, solve_region_rate
from negmomentum.regions import SpectrumBound, khat_contains

ETA_LIMIT, BETA_LIMIT = 0.5358983848622454, 0.07179676972449083
GDA_WORST_KAPPA10 = 0.99498743710662  # sqrt(1 - 1/100)


def one_block(a=1.0, b=0.0, c=1.0):
    return QuadraticGame([a], [b], [c])


class TestGame:
    def test_build(self):
        g = build_game(100, 5)
        assert g.dim == 100
        assert g.a_diag[0] == 1 and g.a_diag[99] == 0.01
        assert g.a_diag.max() / g.a_diag.min() == pytest.approx(100)
        np.testing.assert_array_equal(g.a_diag, g.c_diag)
        assert np.all((g.b_diag >= 0) & (g.b_diag < 1))
        assert g.seed == 5

    def test_single_block(self):
        assert build_game(1, 3).dim == 1

    def test_reproducible(self):
        np.testing.assert_array_equal(build_game(20, 9).b_diag, build_game(20, 9).b_diag)
        assert not np.array_equal(build_game(20, 9).b_diag, build_game(20, 10).b_diag)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            build_game(0, 1)

    @pytest.mark.parametrize("a, b, c", [([1, 2], [0], [1]), ([0.0], [0.1], [1.0]), ([1.0], [-0.1], [1.0])])
    def test_rejects_bad_diagonals(self, a, b, c):
        with pytest.raises(ValueError):
            QuadraticGame(a, b, c)

    def test_field_matches_jacobian(self):
        g = build_game(6, 2)
        z = np.random.default_rng(0).normal(size=12)
        np.testing.assert_allclose(g.field(z), g.jacobian() @ z, rtol=1e-14)

    def test_field_is_gradient_descent_ascent(self):
        # F = [grad_x f; -grad_y f] for f = x'Ax/2 + x'By - y'Cy/2
        g = build_game(3, 1)
        x, y = np.array([1.0, -2.0, 0.5]), np.array([0.3, 0.7, -1.0])
        a, b, c = g.a_diag, g.b_diag, g.c_diag
        expected = np.concatenate([a * x + b * y, -(b * x - c * y)])
        np.testing.assert_allclose(g.field(np.concatenate([x, y])), expected)

    def test_block_eigenvalues_closed_form(self):
        g = build_game(8, 4)
        ours = np.sort_complex(g.spectrum())
        ref = np.sort_complex(np.linalg.eigvals(g.jacobian()))
        np.testing.assert_allclose(ours, ref, atol=1e-12)


class TestSpectrumBounds:
    def test_uncoupled(self):
        s = game_spectrum_bounds(QuadraticGame([0.5, 2.0], [0.0, 0.0], [1.0, 3.0]))
        assert (s.mu, s.L) == (0.5, 3.0)

    def test_rotation_block(self):
        g = one_block(1.0, 1.0, 1.0)
        np.testing.assert_allclose(np.sort_complex(g.spectrum()), [1 - 1j, 1 + 1j])
        s = game_spectrum_bounds(g)
        assert s.mu == pytest.approx(1.0)
        assert s.L == pytest.approx(math.sqrt(2), rel=1e-14)

    def test_lipschitz_is_operator_norm(self):
        g = build_game(10, 3)
        assert game_spectrum_bounds(g).L == pytest.approx(np.linalg.norm(g.jacobian(), 2), rel=1e-12)

    @pytest.mark.parametrize("seed", range(10))
    def test_spectrum_certified(self, seed):
        g = build_game(100, seed)
        s = game_spectrum_bounds(g)
        assert np.all(khat_contains(s, g.spectrum()))
        assert s.kappa >= 50


class TestStep:
    def test_fixed_point(self):
        g = build_game(4, 0)
        z = np.zeros(8)
        for m in (MomentumParams(0.3, 0.0), MomentumParams(0.3, 0.0, 1.0), MomentumParams(0.3, -0.4)):
            np.testing.assert_array_equal(step(g, m, z, z), 0.0)

    def test_gda_by_hand(self):
        g = one_block(2.0, 0.5, 1.0)
        z = np.array([1.0, 2.0])
        # F(z) = [2*1 + 0.5*2, -0.5*1 + 1*2] = [3, 1.5]
        np.testing.assert_allclose(step(g, MomentumParams(0.1, 0.0), z, z), [0.7, 1.85])

    def test_no_step(self):
        g = build_game(3, 0)
        rng = np.random.default_rng(1)
        z, zp = rng.normal(size=6), rng.normal(size=6)
        np.testing.assert_allclose(step(g, MomentumParams(0.0, -0.3), z, zp), 0.7 * z + 0.3 * zp)

    def test_ogda(self):
        g = build_game(3, 0)
        rng = np.random.default_rng(2)
        z, zp = rng.normal(size=6), rng.normal(size=6)
        expected = z - 0.2 * (2 * g.field(z) - g.field(zp))
        np.testing.assert_allclose(step(g, MomentumParams(0.2, 0.0, 1.0), z, zp), expected)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            step(build_game(3, 0), MomentumParams(0.1, 0.0), np.ones(5), np.ones(5))


class TestSchedule:
    p = ChebParams(2.0, 1.0)

    def test_first_entries(self):
        sched = cheb_schedule(self.p, 3)
        assert (sched[0].eta, sched[0].beta) == (0.5, 0.0)
        assert sched[1].eta == pytest.approx(4 / 7, rel=1e-15)
        assert sched[1].beta == pytest.approx(1 / 7, rel=1e-14)

    def test_limit(self):
        last = cheb_schedule(self.p, 60)[-1]
        assert abs(last.eta - ETA_LIMIT) <= 1e-10
        assert abs(last.beta - BETA_LIMIT) <= 1e-10
        m = params_from_cheb(self.p)
        assert abs(last.eta - m.eta) <= 1e-10

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            cheb_schedule(self.p, 0)

    @pytest.mark.parametrize("c_sq", [1.0, -3.0, 0.0])
    def test_realises_chebyshev_residual(self, c_sq):
        # on a symmetric game each coordinate evolves by T_t((d - a)/c) / T_t(d/c)
        p = ChebParams(2.0, c_sq)
        a = np.array([0.3, 1.0, 2.5, 3.7])
        g = QuadraticGame(a, np.zeros(4), a)
        z0 = np.ones(8)
        t_max = 20
        trace = simulate(g, MethodSpec.chebyshev(p), z0=z0, t_max=t_max)
        for t in range(t_max + 1):
            if c_sq == 0:
                q = (1 - a / p.d) ** t
            else:
                c = np.sqrt(complex(c_sq))
                q = (cheb_t(t, (p.d - a) / c) / cheb_t(t, p.d / c)).real
            assert trace.distances[t] == pytest.approx(math.sqrt(2) * np.linalg.norm(q), rel=1e-9, abs=1e-300)


class TestCompanion:
    def test_no_momentum(self):
        lam = np.array([0.3 + 0.2j, 1.5, 2 - 1j])
        np.testing.assert_allclose(companion_spectral_radius(lam, MomentumParams(0.7, 0.0)), np.abs(1 - 0.7 * lam), rtol=1e-14)

    def test_centre(self):
        m = params_from_cheb(ChebParams(2, 1))
        assert companion_spectral_radius(2.0, m) == pytest.approx(2 - math.sqrt(3), rel=1e-12)

    @pytest.mark.parametrize("beta", [-0.9, -0.2, 0.0, 0.5])
    def test_origin(self, beta):
        assert companion_spectral_radius(0.0, MomentumParams(0.5, beta)) == pytest.approx(1.0, abs=1e-15)

    @settings(max_examples=200)
    @given(st.floats(0.01, 2), st.floats(-0.99, 0.99), st.sampled_from([0.0, 1.0, 0.5]),
           st.floats(0, 3), st.floats(-3, 3))
    def test_matches_eigvals(self, eta, beta, alpha, x, y):
        lam = complex(x, y)
        m = MomentumParams(eta, beta, alpha)
        # per-mode update on (z_t, z_{t-1})
        mat = np.array([[1 + beta - eta * lam * (1 + alpha), -beta + eta * lam * alpha], [1, 0]])
        ref = np.abs(np.linalg.eigvals(mat)).max()
        assert companion_spectral_radius(lam, m) == pytest.approx(ref, rel=1e-7, abs=1e-12)

    def test_ogda_matrix(self):
        lam, eta = 0.7 + 0.4j, 0.3
        mat = np.array([[1 - 2 * eta * lam, eta * lam], [1, 0]])
        ref = np.abs(np.linalg.eigvals(mat)).max()
        assert companion_spectral_radius(lam, MomentumParams(eta, 0.0, 1.0)) == pytest.approx(ref, rel=1e-12)

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            companion_spectral_radius(complex(math.nan, 0), MomentumParams(0.1, 0.0))

    @pytest.mark.parametrize("seed", range(3))
    def test_matches_convergence_factor_on_game_spectra(self, seed):
        g = build_game(50, seed)
        s = game_spectrum_bounds(g)
        r = solve_region_rate(s, "K1")
        p = ChebParams(r.d_star, r.c_sq_star)
        lam = g.spectrum()
        np.testing.assert_allclose(companion_spectral_radius(lam, r.params), conv_factor(lam, p), rtol=1e-8)


class TestWorstCase:
    s = SpectrumBound(1, 10)

    def test_gda(self):
        # |1 - eta lam| peaks at mu + i sqrt(L**2 - mu**2) for eta = mu / L**2
        m = MomentumParams(1 / 100, 0.0)
        assert worst_case_radius(self.s, m) == pytest.approx(GDA_WORST_KAPPA10, rel=1e-12)
        assert 1 - worst_case_radius(self.s, m) == pytest.approx(0.5 / self.s.kappa**2, rel=0.01)

    def test_conservative_tuning_is_certified(self):
        r = solve_region_rate(self.s, "K2")
        assert worst_case_radius(self.s, r.params, n_samples=4096) <= r.rho_hat + 1e-8

    def test_no_progress(self):
        assert worst_case_radius(self.s, MomentumParams(0.0, 0.0)) == 1.0

    def test_rejects_coarse_sampling(self):
        with pytest.raises(ValueError):
            worst_case_radius(self.s, MomentumParams(0.1, 0.0), n_samples=10)


class TestSimulate:
    def test_zero_start(self):
        tr = simulate(build_game(5, 0), MethodSpec.gda(0.1), z0=np.zeros(10), t_max=5)
        np.testing.assert_array_equal(tr.distances, [0.0])
        assert tr.iterations == 0 and not tr.diverged

    def test_exact_step(self):
        tr = simulate(one_block(), MethodSpec.gda(1.0), t_max=10)
        assert tr.distances[0] == pytest.approx(math.sqrt(2))
        assert tr.distances[1] == 0.0
        assert tr.iterations == 1

    def test_default_start_and_length(self):
        tr = simulate(build_game(5, 0), MethodSpec.gda(0.01), t_max=7)
        assert tr.distances[0] == pytest.approx(math.sqrt(10))
        assert len(tr.distances) == tr.iterations + 1 == 8
        assert tr.seed == 0

    def test_divergence_flag(self):
        tr = simulate(build_game(5, 0), MethodSpec.gda(10.0), t_max=500)
        assert tr.diverged
        assert tr.distances[-1] > 1e12
        assert tr.iterations < 500

    def test_stops_at_floor(self):
        tr = simulate(one_block(0.5, 0, 0.5), MethodSpec.gda(1.0), t_max=1000)
        assert tr.distances[-1] < FLOOR
        assert np.all(tr.distances[:-1] >= FLOOR)

    def test_per_block_decoupling(self):
        g = build_game(12, 6)
        r = solve_region_rate(game_spectrum_bounds(g), "K1")
        specs = [MethodSpec.negative_momentum(r.params), MethodSpec.ogda(0.3), MethodSpec.chebyshev(ChebParams(r.d_star, r.c_sq_star))]
        rng = np.random.default_rng(0)
        z0 = rng.normal(size=2 * g.dim)
        for spec in specs:
            # short horizon so that no block reaches the floor and gets truncated
            full = simulate(g, spec, z0=z0, t_max=40)
            parts = np.array([
                simulate(g.block(i), spec, z0=z0[[i, g.dim + i]], t_max=40).distances for i in range(g.dim)
            ])
            assert full.iterations == 40
            np.testing.assert_allclose(full.distances, np.sqrt((parts**2).sum(axis=0)), rtol=1e-12)

    def test_matches_step(self):
        g = build_game(4, 1)
        m = MomentumParams(0.4, -0.1)
        z_prev = z = np.ones(8)
        dists = [np.linalg.norm(z)]
        for _ in range(30):
            z, z_prev = step(g, m, z, z_prev), z
            dists.append(np.linalg.norm(z))
        tr = simulate(g, MethodSpec.negative_momentum(m), t_max=30)
        np.testing.assert_allclose(tr.distances, dists, rtol=1e-12)

    def test_rejects_zero_horizon(self):
        with pytest.raises(ValueError):
            simulate(one_block(), MethodSpec.gda(0.1), t_max=0)


class TestMethodSpec:
    def test_constructors(self):
        assert MethodSpec.gda(0.1).params == MomentumParams(0.1, 0.0, 0.0)
        assert MethodSpec.ogda(0.1).params.alpha == 1.0
        assert MethodSpec.negative_momentum(MomentumParams(0.1, -0.2)).kind is MethodKind.NEG_MOMENTUM
        spec = MethodSpec.chebyshev(ChebParams(2, 1), label="CHEB")
        assert spec.name == "CHEB"
        assert spec.effective_params == params_from_cheb(ChebParams(2, 1))

    @pytest.mark.parametrize(
        "kind, params",
        [
            (MethodKind.GDA, MomentumParams(0.1, 0.2)),
            (MethodKind.OGDA, MomentumParams(0.1, 0.0, 0.0)),
            (MethodKind.NEG_MOMENTUM, MomentumParams(0.1, 0.2)),
            (MethodKind.NEG_MOMENTUM, None),
        ],
    )
    def test_invariants(self, kind, params):
        with pytest.raises(ValueError):
            MethodSpec(kind, params)

    def test_schedule_needs_params(self):
        with pytest.raises(ValueError):
            MethodSpec(MethodKind.CHEB_SCHEDULE)


def _trace(dist, diverged=False):
    return Trace(np.asarray(dist, dtype=float), None, MethodSpec.gda(0.1), diverged)


class TestMeasureRate:
    def test_geometric(self):
        assert measure_rate(_trace(0.9 ** np.arange(200))) == pytest.approx(0.9, abs=1e-6)

    def test_accepts_arrays(self):
        assert measure_rate(3 * 0.5 ** np.arange(40)) == pytest.approx(0.5, rel=1e-12)

    def test_all_zero(self):
        with pytest.raises(ValueError):
            measure_rate(_trace(np.zeros(100)))

    def test_floor_excluded(self):
        d = 0.5 ** np.arange(60)
        d[50:] = 0.0
        assert measure_rate(_trace(d)) == pytest.approx(0.5, rel=1e-12)

    def test_bad_fraction(self):
        with pytest.raises(ValueError):
            measure_rate(_trace(np.ones(50)), tail_fraction=0)

    def test_tuned_gda(self, games):
        g = games[0]
        s = game_spectrum_bounds(g)
        eta = tune_step_size(g, gda_step_grid(s), t_max=5000)
        rate = measure_rate(simulate(g, MethodSpec.gda(eta), t_max=5000))
        # worst-case optimal GDA on K_hat contracts like sqrt(1 - kappa**-2)
        reference = 1 - math.sqrt(1 - s.kappa**-2)
        assert 0.5 * reference <= 1 - rate <= 2 * (1 - (1 - s.kappa**-1.5))


class TestIterationsToTolerance:
    def test_observed(self):
        hit, observed = iterations_to_tolerance(_trace(0.1 ** np.arange(10)), tol=1.01e-6)
        assert (hit, observed) == (6.0, True)

    def test_extrapolated(self):
        hit, observed = iterations_to_tolerance(_trace(0.5 ** np.arange(21)), tol=0.5**30)
        assert not observed
        assert hit == pytest.approx(30.0, rel=1e-9)

    def test_diverged(self):
        hit, observed = iterations_to_tolerance(_trace(2.0 ** np.arange(20), diverged=True))
        assert hit == math.inf and not observed


class TestCertificate:
    def test_start(self):
        assert local_rate_certificate(0.9, 0) == 1.0

    def test_ten_steps(self):
        assert local_rate_certificate(0.9, 10) == pytest.approx(0.5987369392383786, rel=1e-14)

    def test_rejects_nonconvergent(self):
        with pytest.raises(ValueError):
            local_rate_certificate(1.0, 3)


@pytest.mark.parametrize("seed", range(10))
def test_rate_certification(seed):
    g = build_game(100, seed)
    s = game_spectrum_bounds(g)
    for region in ("K1", "K2"):
        m = solve_region_rate(s, region).params
        rate = measure_rate(simulate(g, MethodSpec.negative_momentum(m), t_max=3000))
        assert rate <= worst_case_radius(s, m) + 0.01
