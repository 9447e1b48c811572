import numpy as np
import pytest
from scipy import integrate as spi
from scipy import special as sps

from fraclap.errors import DomainError, ShapeError
from fraclap.grids import grid_function
from fraclap.specfun import (
    gamma_fn,
    gauss_2f1,
    jacobi_basis,
    jacobi_coeff,
    jacobi_eval,
    weighted_inner,
    weighted_measure,
)


def _series_2f1(a, b, c, z, terms=4000):
    # independent brute-force oracle: plain partial sums
    total, term = 1.0, 1.0
    for k in range(terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total


class TestGamma:
    def test_one(self):
        assert gamma_fn(1.0) == 1.0

    def test_high_precision_values(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 40
        for z in (0.5, 2.5, 0.1, 7.3, 19.99):
            assert gamma_fn(z) == pytest.approx(float(mp.gamma(z)), rel=1e-13)

    def test_half_integer(self):
        assert gamma_fn(0.5) == pytest.approx(np.sqrt(np.pi), rel=1e-14)
        assert gamma_fn(2.5) == pytest.approx(1.5 * 0.5 * np.sqrt(np.pi), rel=1e-14)

    def test_recurrence(self, rng):
        z = rng.uniform(0.1, 20.0, size=200)
        np.testing.assert_allclose(gamma_fn(z + 1.0), z * gamma_fn(z), rtol=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma_fn(0.0)
        with pytest.raises(DomainError):
            gamma_fn(-1.5)


class TestGauss2F1:
    def test_at_zero(self):
        assert gauss_2f1(1.3, 0.7, 2.1, 0.0) == 1.0

    def test_log_identity(self):
        # 2F1(1, 1; 2; z) = -log(1 - z)/z
        assert gauss_2f1(1, 1, 2, 0.5) == pytest.approx(-np.log(0.5) / 0.5, rel=1e-12)

    def test_series_value(self):
        val = gauss_2f1(1.0, 1.25, 1.75, 0.3)
        assert val == pytest.approx(_series_2f1(1.0, 1.25, 1.75, 0.3), rel=1e-10)
        assert val == pytest.approx(float(sps.hyp2f1(1.0, 1.25, 1.75, 0.3)), rel=1e-10)

    def test_series_vs_integral_agreement(self, rng):
        # both evaluation routes agree on random in-domain tuples
        for _ in range(20):
            b = rng.uniform(0.2, 2.0)
            c = b + rng.uniform(0.2, 2.0)
            a = rng.uniform(-1.5, 1.5)
            z = rng.uniform(-0.9, 0.9)
            series = _series_2f1(a, b, c, z)

            def integrand(t, a=a, b=b, c=c, z=z):
                return t ** (b - 1.0) * (1.0 - t) ** (c - b - 1.0) * (1.0 - z * t) ** (-a)

            quad, _ = spi.quad(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=200)
            integral = quad * sps.gamma(c) / (sps.gamma(b) * sps.gamma(c - b))
            assert gauss_2f1(a, b, c, z) == pytest.approx(series, rel=1e-8)
            assert gauss_2f1(a, b, c, z) == pytest.approx(integral, rel=1e-8)

    def test_near_one(self):
        # z in the quadrature branch, checked against scipy
        for z in (0.6, 0.85, 0.9):
            assert gauss_2f1(0.5, 1.0 - 0.6, 1.0 + 0.6, z) == pytest.approx(
                float(sps.hyp2f1(0.5, 0.4, 1.6, z)), rel=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            gauss_2f1(1.0, -0.5, 1.0, 0.3)
        with pytest.raises(DomainError):
            gauss_2f1(1.0, 2.0, 1.5, 0.3)
        with pytest.raises(DomainError):
            gauss_2f1(1.0, 0.5, 1.5, 1.0)


class TestJacobi:
    def test_coeff_degree_zero(self):
        for alpha in (0.3, 0.5, 0.8):
            assert jacobi_coeff(0, 0, alpha) == pytest.approx(1.0, rel=1e-14)

    def test_coeff_direct_gamma(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 40

        def direct(n, k, alpha):
            s = alpha / 2
            num = mp.gamma(n + s + 1) * mp.gamma(n + k + alpha + 1)
            den = (mp.gamma(k + 1) * mp.gamma(n - k + 1) * mp.gamma(n + alpha + 1)
                   * mp.gamma(k + s + 1))
            return float((-1) ** (n + k) * num / den)

        assert jacobi_coeff(1, 0, 0.5) == pytest.approx(direct(1, 0, 0.5), rel=1e-13)
        assert jacobi_coeff(5, 3, 0.8) == pytest.approx(direct(5, 3, 0.8), rel=1e-12)
        # log-space path survives degrees where naive Gamma overflows
        assert np.isfinite(jacobi_coeff(90, 60, 0.5))

    def test_coeff_domain(self):
        with pytest.raises(DomainError):
            jacobi_coeff(2, 3, 0.5)
        with pytest.raises(DomainError):
            jacobi_coeff(-1, 0, 0.5)
        with pytest.raises(DomainError):
            jacobi_coeff(1, 0, 1.2)

    def test_basis_table_invariants(self):
        basis = jacobi_basis(0.6, 8)
        assert basis.coeffs[0, 0] == pytest.approx(1.0)
        for n in range(9):
            assert basis.coeffs[n, n] != 0.0
            np.testing.assert_array_equal(basis.coeffs[n, n + 1:], 0.0)

    def test_eval_degree_zero_and_termwise(self, rng):
        basis = jacobi_basis(0.5, 6)
        x = rng.uniform(0.0, 1.0, 40)
        np.testing.assert_allclose(jacobi_eval(basis, 0, x), 1.0)
        n = 5
        direct = sum(basis.coeffs[n, k] * x ** k for k in range(n + 1))
        scale = np.abs(basis.coeffs[n]).max()
        np.testing.assert_allclose(jacobi_eval(basis, n, x), direct,
                                   rtol=1e-9, atol=1e-12 * scale)
        with pytest.raises(DomainError):
            jacobi_eval(basis, 7, 0.5)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    def test_orthogonality(self, alpha):
        basis = jacobi_basis(alpha, 8)
        w = weighted_measure(alpha, n_nodes=2048)
        polys = [grid_function(w.nodes, jacobi_eval(basis, n, w.nodes))
                 for n in range(9)]
        norms = [np.sqrt(weighted_inner(p, p, w)) for p in polys]
        for m in range(9):
            for n in range(m + 1, 9):
                ip = weighted_inner(polys[m], polys[n], w)
                assert abs(ip) <= 1e-6 * norms[m] * norms[n]


class TestWeightedInner:
    def test_constant_gives_beta(self):
        for alpha in (0.3, 0.5, 0.8):
            w = weighted_measure(alpha, n_nodes=2048)
            one = grid_function(w.nodes, np.ones_like(w.nodes))
            expected = float(sps.beta(alpha / 2 + 1, alpha / 2 + 1))
            assert weighted_inner(one, one, w) == pytest.approx(expected, rel=1e-10)

    def test_zero_factor(self):
        w = weighted_measure(0.5, n_nodes=512)
        f = grid_function(w.nodes, np.sin(w.nodes))
        z = grid_function(w.nodes, np.zeros_like(w.nodes))
        assert weighted_inner(f, z, w) == 0.0

    def test_positivity(self):
        w = weighted_measure(0.7, n_nodes=512)
        basis = jacobi_basis(0.7, 2)
        g1 = grid_function(w.nodes, jacobi_eval(basis, 1, w.nodes))
        assert weighted_inner(g1, g1, w) > 0.0

    def test_shape_error(self):
        w = weighted_measure(0.5, n_nodes=512)
        f = grid_function(w.nodes, np.ones_like(w.nodes))
        g = grid_function(np.linspace(0, 1, 7), np.ones(7))
        with pytest.raises(ShapeError):
            weighted_inner(f, g, w)

    def test_interpolated_path(self):
        # functions on their own shared mesh are interpolated onto the rule
        w = weighted_measure(0.5, n_nodes=2048)
        mesh = np.linspace(0.0, 1.0, 801)
        f = grid_function(mesh, mesh)
        g = grid_function(mesh, 1.0 - mesh)
        exact = float(sps.beta(0.25 + 2, 0.25 + 2))  # int x^(5/4) (1-x)^(5/4)
        assert weighted_inner(f, g, w) == pytest.approx(exact, rel=1e-5)
