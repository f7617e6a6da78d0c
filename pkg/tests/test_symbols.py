import numpy as np
import pytest
from scipy.integrate import solve_ivp

from platespec.grid import GridSpec, SpectralField, field_from_function, inverse_transform, l2_norm
from platespec.materials import anisotropic_linear_model, isotropic_linear_model
from platespec.symbols import (
    SymbolTable,
    eigenvalues,
    envelope_bound,
    fit_envelope_constant,
    g0_symbol,
    high_frequency_gap,
    real_part_upper,
)


def small_table(N=32, L=np.pi, dim=1, gamma=1.0):
    return SymbolTable.from_gamma(GridSpec(dim, L, N), gamma)


class TestEigenvalues:
    def test_zero_mode(self):
        lp, lm = eigenvalues(np.zeros(2), 1.0)
        assert lp == 0.0
        assert lm == -1.0

    def test_unit_mode_oscillatory(self):
        lp, lm = eigenvalues(np.array([1.0, 0.0]), 1.0)
        # residual of the quadratic is the oracle
        for lam in (lp, lm):
            res = abs(2 * lam**2 + lam + 1.0)
            assert res < 1e-12
        assert lp == pytest.approx((-1 + 1j * np.sqrt(7)) / 4, abs=1e-12)
        assert lm == pytest.approx((-1 - 1j * np.sqrt(7)) / 4, abs=1e-12)

    def test_gamma_guard(self):
        with pytest.raises(ValueError):
            eigenvalues(np.array([1.0]), 0.0)

    def test_characteristic_residual_on_lattice(self):
        table = SymbolTable.from_model(
            GridSpec(2, 8 * np.pi, 64), anisotropic_linear_model(2, strength=0.5)
        )
        assert float(np.max(table.characteristic_residual())) < 1e-12

    def test_strict_dissipativity(self):
        table = small_table(N=64, L=4 * np.pi)
        re = table.lambda_plus.real
        mask = table.xi_squared > 0
        assert np.all(re[mask] < 0)

    def test_regularity_loss_trend(self):
        # sup over |xi| >= R of Re lambda_plus increases toward 0 with R
        radii = np.array([1.0, 2.0, 4.0, 8.0, 16.0])
        gaps = high_frequency_gap(radii)
        assert np.all(np.diff(gaps) < 0)
        assert gaps[-1] < 0.05

    def test_envelope_constant_positive(self):
        r = np.geomspace(0.1, 40.0, 400)
        c = fit_envelope_constant(r)
        assert c > 0
        assert np.all(real_part_upper(r) <= envelope_bound(r, c) + 1e-15)


class TestPropagatorSymbols:
    def test_time_zero(self):
        table = small_table(N=64, L=2 * np.pi)
        g, h = table.propagator_symbols(0.0)
        assert np.max(np.abs(g)) < 1e-12
        assert np.max(np.abs(h - 1.0)) < 1e-12

    def test_g_rate_at_zero_is_one(self):
        table = small_table(N=64, L=2 * np.pi)
        _, _, gd, _ = table.propagator_symbols_full(0.0)
        assert np.max(np.abs(gd - 1.0)) < 1e-12

    def test_zero_mode_closed_forms(self):
        table = small_table()
        zero = tuple(np.argwhere(np.all(table.grid.mode_numbers == 0, axis=0))[0])
        for t in (0.3, 1.0, 4.0):
            g, h = table.propagator_symbols(t)
            assert g[zero] == pytest.approx(1 - np.exp(-t), abs=1e-12)
            assert h[zero] == pytest.approx(np.exp(-t), abs=1e-12)

    def test_root_swap_invariance(self):
        table = small_table(N=64, L=8 * np.pi)
        g, h, gd, hd = table.propagator_symbols_full(1.7)
        swapped = SymbolTable.__new__(SymbolTable)
        swapped.grid = table.grid
        swapped.quartic = table.quartic
        swapped.xi_squared = table.xi_squared
        swapped.lambda_plus = table.lambda_minus
        swapped.lambda_minus = table.lambda_plus
        g2, h2, gd2, hd2 = swapped.propagator_symbols_full(1.7)
        for a, b in ((g, g2), (h, h2), (gd, gd2), (hd, hd2)):
            assert np.max(np.abs(a - b)) < 1e-12

    def test_degenerate_discriminant_continuity(self):
        # where the two roots collide the confluent limit must match the
        # formula evaluated just off the degeneracy
        xi_sq = 1.0
        # 4 q (1+xi^2) = 1  ->  q = 1/8
        q_star = 1.0 / (4.0 * (1.0 + xi_sq))
        from platespec.symbols import _propagator_values, eigenvalues_from_form

        t = 2.3
        lam_p, lam_m = eigenvalues_from_form(np.array([xi_sq]), np.array([q_star]))
        exact = _propagator_values(lam_p, lam_m, t)
        for off in (1e-5, 1e-6):
            lam_p2, lam_m2 = eigenvalues_from_form(
                np.array([xi_sq]), np.array([q_star * (1 + off)])
            )
            near = _propagator_values(lam_p2, lam_m2, t)
            for a, b in zip(exact, near):
                assert abs(a[0] - b[0]) < 1e-4 * max(1.0, abs(a[0]))

    def test_semigroup_of_pair_flow(self):
        table = small_table(N=32, L=2 * np.pi)
        rng = np.random.default_rng(0)
        u0 = field_from_function(table.grid, lambda x: np.exp(-np.sin(x[0])))
        u1 = field_from_function(table.grid, lambda x: 0.3 * np.cos(2 * x[0]))
        t, s = 0.7, 1.9
        mid_u, mid_ut = table.apply_linear_pair(u0, u1, t)
        two_u, two_ut = table.apply_linear_pair(mid_u, mid_ut, s)
        one_u, one_ut = table.apply_linear_pair(u0, u1, t + s)
        scale = max(l2_norm(one_u), l2_norm(one_ut))
        assert l2_norm(two_u - one_u) < 1e-10 * scale
        assert l2_norm(two_ut - one_ut) < 1e-10 * scale

    def test_time_reversal(self):
        table = small_table(N=16, L=np.pi)
        u0 = field_from_function(table.grid, lambda x: 0.5 * np.cos(x[0]))
        u1 = field_from_function(table.grid, lambda x: 0.2 * np.sin(x[0]))
        fwd_u, fwd_ut = table.apply_linear_pair(u0, u1, 5.0)
        # reverse: same symbols at negative time
        g, h, gd, hd = table.propagator_symbols_full(-5.0)
        back_u = SpectralField(table.grid, g * (fwd_u.coeffs + fwd_ut.coeffs) + h * fwd_u.coeffs)
        back_ut = SpectralField(table.grid, gd * (fwd_u.coeffs + fwd_ut.coeffs) + hd * fwd_u.coeffs)
        assert l2_norm(back_u - u0) < 1e-10
        assert l2_norm(back_ut - u1) < 1e-10


class TestApplyLinear:
    def test_identity_at_time_zero(self):
        table = small_table(N=32)
        u0 = field_from_function(table.grid, lambda x: np.cos(x[0]) + 0.2 * np.cos(3 * x[0]))
        u1 = field_from_function(table.grid, lambda x: np.sin(2 * x[0]))
        out = table.apply_linear_solution(u0, u1, 0.0)
        assert np.max(np.abs(out.coeffs - u0.coeffs)) < 1e-14

    def test_rate_returns_u1_at_time_zero(self):
        table = small_table(N=32)
        u0 = field_from_function(table.grid, lambda x: np.cos(x[0]))
        u1 = field_from_function(table.grid, lambda x: 0.7 * np.sin(2 * x[0]))
        _, ut = table.apply_linear_pair(u0, u1, 0.0)
        assert np.max(np.abs(ut.coeffs - u1.coeffs)) < 1e-10

    def test_single_mode_against_ode_oracle(self):
        # adaptive integration of (1+|xi|^2) v'' + v' + gamma |xi|^4 v = 0
        rng = np.random.default_rng(42)
        for gamma in (0.5, 1.0, 2.0):
            xi_sq = float(rng.uniform(0.05, 9.0))
            a = 1.0 + xi_sq
            q = gamma * xi_sq**2
            v0, w0 = rng.standard_normal(2)

            def rhs(t, y):
                return [y[1], -(y[1] + q * y[0]) / a]

            sol = solve_ivp(rhs, (0, 20.0), [v0, w0], rtol=1e-12, atol=1e-14, dense_output=True)
            from platespec.symbols import _propagator_values, eigenvalues_from_form

            lam_p, lam_m = eigenvalues_from_form(np.array([xi_sq]), np.array([q]))
            for t in (0.5, 3.0, 11.0, 20.0):
                g, h, gd, hd = _propagator_values(lam_p, lam_m, t)
                mine = g[0] * (v0 + w0) + h[0] * v0
                ref = sol.sol(t)[0]
                assert abs(mine - ref) < 1e-8 * max(1.0, abs(ref))


class TestSmoothing:
    def test_zero_at_time_zero(self):
        table = small_table(N=32)
        phi = field_from_function(table.grid, lambda x: np.cos(x[0]))
        out = table.apply_smoothing_propagator(phi, 0.0)
        assert np.max(np.abs(out.coeffs)) < 1e-14

    def test_constant_input_zero_mode(self):
        table = small_table(N=32)
        phi = field_from_function(table.grid, lambda x: np.ones_like(x[0]))
        t = 2.5
        out = table.apply_smoothing_propagator(phi, t)
        zero = tuple(np.argwhere(np.all(table.grid.mode_numbers == 0, axis=0))[0])
        assert out.coeffs[zero] == pytest.approx((1 - np.exp(-t)) * phi.coeffs[zero], rel=1e-12)

    def test_high_mode_envelope(self):
        table = small_table(N=64, L=2 * np.pi)
        t = 3.0
        g, _ = table.propagator_symbols(t)
        envelope = float(np.max(np.abs(g / (1.0 + table.xi_squared))))
        phi = field_from_function(table.grid, lambda x: np.cos(14 * x[0]))
        out = table.apply_smoothing_propagator(phi, t)
        assert l2_norm(out) <= envelope * l2_norm(phi) * (1 + 1e-12)


class TestG0:
    def test_values(self):
        assert g0_symbol(np.zeros(2), 1.0, 5.0) == 1.0
        assert g0_symbol(np.array([1.0, 0.0]), 1.0, 1.0) == pytest.approx(np.exp(-1), rel=1e-12)

    def test_semigroup_exact(self):
        table = small_table(N=64, L=4 * np.pi)
        a = table.g0_hat(3.0) * table.g0_hat(5.0)
        b = table.g0_hat(8.0)
        assert np.allclose(a, b, rtol=1e-11, atol=1e-300)

    def test_self_similarity_on_grid(self):
        # G0(., t) == t^{-n/4} phi0(./t^{1/4}): build the right side on the
        # rescaled lattice, where the identity is exact.
        for dim in (1, 2):
            N, L = 64, 8.0
            t = 4.0
            big = GridSpec(dim, L, N)
            table_big = SymbolTable.from_gamma(big, 1.0)
            lhs = inverse_transform(SpectralField(big, table_big.g0_hat(t)))
            small = GridSpec(dim, L / t**0.25, N)
            table_small = SymbolTable.from_gamma(small, 1.0)
            phi0 = inverse_transform(SpectralField(small, table_small.g0_hat(1.0)))
            rhs = phi0 / t ** (dim / 4.0)
            assert np.max(np.abs(lhs - rhs)) < 1e-10
