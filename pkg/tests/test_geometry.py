"""Tests for the cusp domain, its strips and the star-shape certificates."""

import numpy as np
import pytest
from scipy import integrate

from hardydiv.core.errors import DomainError
from hardydiv.geometry.cusp import (
    CuspDomain,
    contains,
    overlap_measure,
    star_shape_cert,
    subdomain_measure,
    verify_star_shaped,
)

GAMMAS = [1.0, 1.5, 2.0, 3.0]


def strip_quadrature(gamma, lo, hi):
    value, _ = integrate.quad(lambda x: x**gamma, lo, hi, epsabs=0.0, epsrel=1e-13)
    return value


class TestContains:
    """Tests for membership."""

    @pytest.mark.parametrize(
        "gamma, point, expected",
        [
            (2.0, (0.5, 0.2), True),
            (2.0, (0.5, 0.25), False),
            (1.0, (0.3, 0.299), True),
            (2.0, (1.0, 0.5), False),
            (2.0, (0.5, 0.0), False),
            (2.0, (float("nan"), 0.1), False),
            (2.0, (0.5, float("inf")), False),
        ],
    )
    def test_points(self, gamma, point, expected):
        """Test the open-set membership rule."""
        assert contains(CuspDomain(gamma), point) is expected

    def test_vectorized(self):
        """Test array inputs return a boolean mask."""
        mask = CuspDomain(2.0).contains(np.array([0.5, 0.5]), np.array([0.1, 0.3]))
        np.testing.assert_array_equal(mask, [True, False])

    def test_gamma_below_one_rejected(self):
        """Test that gamma < 1 is a domain error."""
        with pytest.raises(DomainError):
            CuspDomain(0.5)


class TestMeasures:
    """Tests for strip, overlap and tail measures."""

    def test_known_values(self):
        """Test the closed forms on two hand-computed cases."""
        assert subdomain_measure(1.0, 0) == pytest.approx(15.0 / 32.0, rel=1e-14)
        assert subdomain_measure(2.0, 1) == pytest.approx(63.0 / 1536.0, rel=1e-14)

    @pytest.mark.parametrize("gamma", GAMMAS)
    @pytest.mark.parametrize("i", [0, 3, 10])
    def test_subdomain_matches_quadrature(self, gamma, i):
        """Test |Omega_i| against adaptive quadrature."""
        lo, hi = CuspDomain(gamma).strip_bounds(i)
        assert subdomain_measure(gamma, i) == pytest.approx(
            strip_quadrature(gamma, lo, hi), rel=1e-10
        )

    @pytest.mark.parametrize("gamma", GAMMAS)
    @pytest.mark.parametrize("i", [1, 3, 10])
    def test_overlap_matches_quadrature(self, gamma, i):
        """Test |B_i| against adaptive quadrature."""
        lo, hi = CuspDomain(gamma).overlap_bounds(i)
        assert overlap_measure(gamma, i) == pytest.approx(
            strip_quadrature(gamma, lo, hi), rel=1e-10
        )

    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_overlap_ratio(self, gamma):
        """Test |Omega_i| / |B_i| = 1 + 2^{-(gamma+1)} < 2."""
        domain = CuspDomain(gamma)
        for i in range(1, 8):
            ratio = domain.subdomain_measure(i) / domain.overlap_measure(i)
            assert ratio == pytest.approx(1.0 + 2.0 ** (-(gamma + 1.0)), rel=1e-12)
            assert ratio < 2.0

    def test_convex_overlap_ratio(self):
        """Test gamma = 1, i = 1 gives 1.25."""
        assert subdomain_measure(1.0, 1) / overlap_measure(1.0, 1) == pytest.approx(1.25)

    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_geometric_decay(self, gamma):
        """Test 2^{gamma+1} |Omega_{i+1}| = |Omega_i|."""
        domain = CuspDomain(gamma)
        for i in range(10):
            assert 2.0 ** (gamma + 1.0) * domain.subdomain_measure(i + 1) == pytest.approx(
                domain.subdomain_measure(i), rel=1e-14
            )

    def test_b0_undefined(self):
        """Test that B_0 raises a domain error."""
        with pytest.raises(DomainError):
            overlap_measure(2.0, 0)

    def test_negative_index_rejected(self):
        """Test that i < 0 is a domain error."""
        with pytest.raises(DomainError):
            subdomain_measure(2.0, -1)

    def test_tail_measure(self):
        """Test |W_i| is the area left of 2^{-i}."""
        domain = CuspDomain(2.0)
        assert domain.tail_measure(2) == pytest.approx(strip_quadrature(2.0, 0.0, 0.25), rel=1e-12)

    def test_strip_multiplicity(self):
        """Test that every x1 in (0, 1) lies in one or two strips."""
        rng = np.random.default_rng(11)
        x1 = rng.uniform(2.0 ** -40, 1.0, 2000)
        counts = CuspDomain(2.0).multiplicity(x1)
        assert set(np.unique(counts)).issubset({1, 2})


class TestStarShapeCert:
    """Tests for the certificate radii and center."""

    def test_convex_strip(self):
        """Test gamma = 1, i = 0: R = 2, r = 1/8, center (7/8, 1/8)."""
        cert = star_shape_cert(1.0, 0)
        assert cert.R == 2.0
        assert cert.r == pytest.approx(1.0 / 8.0)
        assert cert.center == pytest.approx((7.0 / 8.0, 1.0 / 8.0))

    def test_quadratic_strip(self):
        """Test gamma = 2, i = 0: r = 1/64, rho = 1/16."""
        cert = star_shape_cert(2.0, 0)
        assert cert.r == pytest.approx(1.0 / 64.0)
        assert cert.rho == pytest.approx(1.0 / 16.0)

    @pytest.mark.parametrize("gamma", GAMMAS)
    @pytest.mark.parametrize("i", [0, 1, 5, 9])
    def test_invariants(self, gamma, i):
        """Test r = rho/(2 gamma), 0 < r < R and the closed form of R/r."""
        cert = star_shape_cert(gamma, i)
        assert cert.r == pytest.approx(cert.rho / (2.0 * gamma), rel=1e-14)
        assert 0.0 < cert.r < cert.R
        assert cert.radius_ratio == pytest.approx(
            gamma * 2.0 ** (gamma * (i + 2) - i + 2), rel=1e-12
        )
        assert cert.cd_bound == pytest.approx(2.0 * cert.radius_ratio)

    @pytest.mark.parametrize("gamma", GAMMAS)
    @pytest.mark.parametrize("i", [0, 2, 6])
    def test_ball_inside_strip(self, gamma, i):
        """Test ball(center, r) lies in Omega_i on 1000 boundary samples."""
        domain = CuspDomain(gamma)
        cert = domain.star_shape_cert(i)
        lo, hi = domain.strip_bounds(i)
        angles = np.linspace(0.0, 2.0 * np.pi, 1000, endpoint=False)
        x1 = cert.center[0] + cert.r * np.cos(angles)
        x2 = cert.center[1] + cert.r * np.sin(angles)
        assert np.all(domain.in_closure(x1, x2, lo, hi, 1e-12))


class TestVerifyStarShaped:
    """Tests for the sampling verification."""

    @pytest.mark.parametrize("i", [0, 3, 7])
    def test_convex_case(self, i):
        """Test gamma = 1 has no violations."""
        report = verify_star_shaped(1.0, i, 500, seed=0)
        assert report.violations == 0
        assert report.distance_violations == 0
        assert report.passed

    @pytest.mark.parametrize("i", [0, 2, 4])
    def test_quadratic_cusp(self, i):
        """Test gamma = 2 segments stay in the closure and slopes reach gamma."""
        report = verify_star_shaped(2.0, i, 1000, seed=1)
        assert report.violations == 0
        assert report.critical_samples == 1000
        assert report.min_slope >= 2.0

    @pytest.mark.slow
    @pytest.mark.parametrize("i", range(9))
    def test_quadratic_cusp_full(self, i):
        """Test gamma = 2, i <= 8 with 10^4 samples."""
        assert verify_star_shaped(2.0, i, 10_000, seed=i).passed

    def test_zero_samples(self):
        """Test that zero samples give an empty passing report."""
        report = verify_star_shaped(2.0, 1, 0, seed=0)
        assert report.n_samples == 0
        assert report.min_slope is None
        assert report.passed

    def test_deterministic_per_seed(self):
        """Test that one seed reproduces the same slope margin."""
        first = verify_star_shaped(3.0, 2, 300, seed=5)
        second = verify_star_shaped(3.0, 2, 300, seed=5)
        assert first.min_slope == second.min_slope
