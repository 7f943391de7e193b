"""Unit tests for the closed-form torsion model over the circle."""

import cmath
import math

import numpy as np
import pytest
import scipy.special

from detline import (
    CircleModel,
    ValidationError,
    duality_check,
    eta_circle,
    hurwitz_zeta,
    hurwitz_zeta_deriv0,
    metric_scale_check,
    rho_an_circle,
    rho_an_closed,
    rs_norm_check,
    rs_torsion_circle,
    split_check,
    xi_circle,
    zeta_zero_check,
)


class TestHurwitzZeta:
    def test_matches_scipy_in_convergent_range(self):
        for s in (2.0, 3.5, 6.0):
            for q in (0.3, 1.0, 2.7):
                np.testing.assert_allclose(
                    hurwitz_zeta(s, q), scipy.special.zeta(s, q), rtol=1e-13)

    def test_special_values(self):
        # zeta(0, q) = 1/2 - q and zeta(-1, q) = -(q^2 - q + 1/6)/2
        for q in (0.25, 0.5, 1.3, 0.8 + 0.2j):
            np.testing.assert_allclose(hurwitz_zeta(0.0, q), 0.5 - q,
                                       atol=1e-12)
            np.testing.assert_allclose(hurwitz_zeta(-1.0, q),
                                       -(q * q - q + 1.0 / 6.0) / 2.0,
                                       atol=1e-12)

    def test_riemann_value(self):
        np.testing.assert_allclose(hurwitz_zeta(2.0, 1.0), math.pi ** 2 / 6,
                                   rtol=1e-13)

    def test_pole_is_rejected(self):
        with pytest.raises(ValidationError):
            hurwitz_zeta(1.0, 0.5)

    def test_derivative_at_zero(self):
        # d/ds zeta(s, q)|_0 = log Gamma(q) - log sqrt(2 pi); cross-check
        # against a central difference of the series itself
        for q in (0.3, 0.75, 1.2, 0.6 + 0.1j):
            h = 1e-5
            numeric = (hurwitz_zeta(h, q) - hurwitz_zeta(-h, q)) / (2 * h)
            np.testing.assert_allclose(hurwitz_zeta_deriv0(q), numeric,
                                       atol=1e-8)
            if np.imag(q) == 0:
                target = scipy.special.loggamma(q) - 0.5 * math.log(2 * math.pi)
                np.testing.assert_allclose(hurwitz_zeta_deriv0(q), target,
                                           rtol=1e-12)


class TestCircleModel:
    def test_domain_checks(self):
        with pytest.raises(ValidationError):
            CircleModel(0.0)
        with pytest.raises(ValidationError):
            CircleModel(1.0)
        with pytest.raises(ValidationError):
            CircleModel(0.5, scale=0.0)
        with pytest.raises(ValidationError):
            CircleModel(0.5, trunc=10)

    def test_eta_real_holonomy(self):
        # eta = (1 - 2a)/2 on the real axis
        for a in (0.25, 0.5, 0.9):
            np.testing.assert_allclose(eta_circle(CircleModel(a)),
                                       (1 - 2 * a) / 2, atol=1e-12)

    def test_xi_at_half(self):
        np.testing.assert_allclose(xi_circle(CircleModel(0.5)), math.log(2.0),
                                   atol=1e-12)

    def test_rho_at_quarter(self):
        np.testing.assert_allclose(rho_an_circle(CircleModel(0.25)), 1.0 - 1.0j,
                                   atol=1e-12)

    def test_closed_form(self):
        for a in (0.1, 0.5, 0.77, 0.4 + 0.2j):
            m = CircleModel(a)
            np.testing.assert_allclose(rho_an_closed(m),
                                       1.0 - cmath.exp(2j * math.pi * a),
                                       atol=1e-14)
            np.testing.assert_allclose(rho_an_circle(m), rho_an_closed(m),
                                       rtol=1e-10)

    def test_rs_torsion(self):
        for a in (0.2, 0.5, 0.85):
            np.testing.assert_allclose(rs_torsion_circle(CircleModel(a)),
                                       1.0 / abs(2 * math.sin(math.pi * a)),
                                       rtol=1e-12)

    def test_rs_norm_real_holonomy(self):
        for a in (0.15, 0.5, 0.9):
            value, target = rs_norm_check(CircleModel(a))
            np.testing.assert_allclose(value, 1.0, atol=1e-10)
            np.testing.assert_allclose(target, 1.0, atol=1e-14)

    def test_rs_norm_complex_holonomy(self):
        m = CircleModel(0.3 + 0.2j)
        value, target = rs_norm_check(m)
        np.testing.assert_allclose(
            target, math.exp(math.pi * eta_circle(m).imag), rtol=1e-14)
        np.testing.assert_allclose(value, target, rtol=1e-10)

    def test_duality(self):
        for a in (0.2, 0.6, 0.35 + 0.25j):
            assert duality_check(CircleModel(a)) <= 1e-10

    def test_metric_scale_invariance(self):
        m = CircleModel(0.3 + 0.1j)
        for c in (0.5, 2.0, 5.0):
            assert metric_scale_check(m, c) <= 1e-10

    def test_zeta_zero(self):
        assert zeta_zero_check(CircleModel(0.37)) <= 1e-12

    def test_split_levels(self):
        m = CircleModel(0.3)
        for k in (0, 1, 3):
            assert split_check(m, k) <= 1e-10
