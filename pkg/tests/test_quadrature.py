import numpy as np
import pytest

from platespec.quadrature import continuum_norm_quadrature


def fitted_exponent(op, data, k=0, dim=2, t_lo=1e2, t_hi=1e4, count=9, gamma=1.0):
    ts = np.geomspace(t_lo, t_hi, count)
    vals = [
        continuum_norm_quadrature(data, op, k, t, dim=dim, gamma=gamma) for t in ts
    ]
    return float(np.polyfit(np.log(1 + ts), np.log(vals), 1)[0])


class TestPlancherelBaseline:
    def test_identity_recovers_gaussian_l2(self):
        for dim in (1, 2, 3):
            v = continuum_norm_quadrature("gaussian", "identity", 0, 0.0, dim=dim)
            assert v == pytest.approx(np.pi ** (dim / 4), rel=1e-9)

    def test_first_derivative_of_gaussian_l2(self):
        # ||d_x1 gaussian||^2 = pi^{n/2} / 2 exactly
        for dim in (1, 2):
            v = continuum_norm_quadrature("gaussian", "identity", 1, 0.0, dim=dim)
            # isotropic |xi| weighting: integral of |xi|^2 |phi_hat|^2
            expected = np.sqrt(dim / 2.0) * np.pi ** (dim / 4)
            assert v == pytest.approx(expected, rel=1e-8)

    def test_unknown_names_rejected(self):
        with pytest.raises(ValueError):
            continuum_norm_quadrature("gaussian", "nope", 0, 1.0)
        with pytest.raises(ValueError):
            continuum_norm_quadrature("nope", "G", 0, 1.0)


class TestSemigroupScaling:
    def test_g0_quarter_scaling_ratio(self):
        a = continuum_norm_quadrature("gaussian", "G0", 0, 400.0, dim=2)
        b = continuum_norm_quadrature("gaussian", "G0", 0, 100.0, dim=2)
        assert abs(a / b - 2**-0.5) / 2**-0.5 < 0.01

    def test_moment_zero_gain(self):
        slow = fitted_exponent("G0", "gaussian")
        fast = fitted_exponent("G0", "derivative_of_gaussian")
        assert slow == pytest.approx(-0.25, abs=0.02)
        assert fast == pytest.approx(-0.5, abs=0.02)

    def test_g_kernel_gaussian_rate(self):
        assert fitted_exponent("G", "gaussian") == pytest.approx(-0.25, abs=0.02)


class TestLinearSolutionRates:
    def test_derivative_ladder(self):
        for k, target in ((0, -0.25), (1, -0.5), (2, -0.75)):
            got = fitted_exponent("G+H", "gaussian", k=k)
            assert got == pytest.approx(target, abs=0.05)

    def test_rate_of_change_rate(self):
        assert fitted_exponent("dG+dH", "gaussian") == pytest.approx(-1.25, abs=0.07)

    def test_anisotropic_gamma_callable(self):
        gamma = lambda w: 1.0 + w[0] ** 4
        got = fitted_exponent("G0", "gaussian", gamma=gamma)
        assert got == pytest.approx(-0.25, abs=0.02)
