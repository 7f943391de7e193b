"""Unit tests for the odd signature operator, spectral splits and
branch-cut determinants."""

import math

import numpy as np
import pytest

from detline import (
    SpectralBoundaryError,
    ValidationError,
    build_signature,
    cohomology_frame,
    det_eta_check,
    eta_finite,
    gen_elementary,
    gen_random,
    graded_det_finite,
    graded_det_via_xi_eta,
    log_det_cut,
    pick_agmon_angle,
    plus_minus_split,
    random_profile,
    refined_torsion,
    spectral_split,
    torsion_via_split,
)


def _instance(seed, d, acyclic=True):
    prof = random_profile(np.random.default_rng(seed), d, acyclic=acyclic)
    return gen_random(seed, d, prof)


class TestGradedDet:
    def test_running_example(self):
        c, g = gen_elementary(1, 0, 2.0)
        assert abs(graded_det_finite(c, g) - 2.0) <= 1e-12

    def test_negative_scalar(self):
        c, g = gen_elementary(1, 0, -2.0)
        np.testing.assert_allclose(graded_det_finite(c, g), -2.0, atol=1e-12)

    def test_equals_refined_torsion_when_acyclic(self):
        for seed in range(10):
            d = 3 if seed % 2 else 1
            c, g = _instance(seed, d, acyclic=True)
            rho = refined_torsion(c, g).coeff
            det = graded_det_finite(c, g)
            np.testing.assert_allclose(rho, det, rtol=1e-10)


class TestSignatureOp:
    def test_plus_minus_split_fills_each_degree(self):
        c, g = _instance(3, 3, acyclic=True)
        plus, minus = plus_minus_split(c, g)
        for j in range(c.d + 1):
            assert plus[j].shape[1] + minus[j].shape[1] == c.dims.dims[j]

    def test_even_and_odd_parts_share_spectrum(self):
        for seed in range(5):
            c, g = _instance(seed + 10, 3, acyclic=(seed % 2 == 0))
            s = build_signature(c, g)
            ev = np.sort_complex(np.linalg.eigvals(s.b_even))
            od = np.sort_complex(np.linalg.eigvals(s.b_odd))
            np.testing.assert_allclose(ev, od, atol=1e-10)


class TestSpectralSplit:
    def test_empty_small_part(self):
        c, g = gen_elementary(1, 0, 2.0)
        sp = spectral_split(c, g, 1.0)  # spectrum of B^2 is {4}
        assert all(b.shape[1] == 0 for b in sp.small.bases)
        v = torsion_via_split(c, g, 1.0)
        np.testing.assert_allclose(v.coeff, 2.0, atol=1e-12)

    def test_everything_small(self):
        c, g = gen_elementary(1, 0, 2.0)
        v = torsion_via_split(c, g, 9.0)
        np.testing.assert_allclose(v.coeff, 2.0, atol=1e-12)

    def test_level_on_eigenvalue_is_rejected(self):
        c, g = gen_elementary(1, 0, 2.0)
        with pytest.raises(SpectralBoundaryError):
            spectral_split(c, g, 4.0)

    def test_negative_level_is_rejected(self):
        c, g = gen_elementary(1, 0, 2.0)
        with pytest.raises(ValidationError):
            spectral_split(c, g, -1.0)

    def test_split_agrees_with_torsion(self):
        for seed in range(6):
            d = 3 if seed % 2 else 1
            c, g = _instance(seed + 20, d, acyclic=(seed % 2 == 0))
            fr = cohomology_frame(c)
            rho = refined_torsion(c, g, fr).coeff
            mods = sorted({round(abs(z), 6)
                           for j in range(d + 1)
                           for z in np.linalg.eigvals(
                               build_signature(c, g).bsq_block(j))
                           if abs(z) > 1e-4})
            for lam in (0.0, 2.0 * mods[-1]):
                v = torsion_via_split(c, g, lam, fr).coeff
                np.testing.assert_allclose(v, rho, rtol=1e-8)

    def test_large_part_is_acyclic(self):
        c, g = _instance(31, 3, acyclic=False)
        sp = spectral_split(c, g, 0.0)
        assert cohomology_frame(sp.large.complex).acyclic


class TestLogDetCut:
    def test_hand_examples(self):
        np.testing.assert_allclose(
            log_det_cut(np.diag([1.0, -1.0]), -math.pi / 2), 1j * math.pi,
            atol=1e-14)
        for theta in (-math.pi / 4, -1.0):
            np.testing.assert_allclose(
                log_det_cut(np.diag([4.0]), theta), math.log(4.0), atol=1e-14)
        np.testing.assert_allclose(
            log_det_cut(np.diag([-1.0j]), -math.pi / 4), 1.5j * math.pi,
            atol=1e-14)

    def test_zero_eigenvalues_are_skipped(self):
        val = log_det_cut(np.diag([0.0, 4.0]), -math.pi / 4)
        np.testing.assert_allclose(val, math.log(4.0), atol=1e-12)

    def test_eigenvalue_on_cut_is_rejected(self):
        with pytest.raises(SpectralBoundaryError):
            log_det_cut(np.diag([-1.0j]), -math.pi / 2)


class TestEta:
    def test_hand_examples(self):
        e = eta_finite(np.diag([1.0, -2.0, 3.0j]))
        assert (e.m_plus, e.m_minus, e.m_zero) == (1, 0, 0)
        np.testing.assert_allclose(e.eta, 0.5)
        np.testing.assert_allclose(eta_finite(np.diag([1.0, -1.0])).eta, 0.0)
        np.testing.assert_allclose(eta_finite(np.zeros((1, 1))).eta, 0.5)

    def test_det_eta_hand_examples(self):
        assert det_eta_check(np.diag([2.0]), -math.pi / 4) <= 1e-14
        assert det_eta_check(np.diag([2.0, -3.0]), -math.pi / 4) <= 1e-14
        assert det_eta_check(np.diag([2.0, -3.0]), -math.pi / 8) <= 1e-14

    def test_det_eta_random(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            n = int(rng.integers(1, 6))
            m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            theta = pick_agmon_angle(m)
            assert det_eta_check(m, theta) <= 1e-9


class TestGradedDetViaXiEta:
    def test_hand_examples(self):
        c, g = gen_elementary(1, 0, 2.0)
        np.testing.assert_allclose(
            graded_det_via_xi_eta(c, g, 0.0, -math.pi / 4), 2.0, atol=1e-12)
        c, g = gen_elementary(1, 0, -2.0)
        np.testing.assert_allclose(
            graded_det_via_xi_eta(c, g, 0.0, -math.pi / 4), -2.0, atol=1e-12)

    def test_matches_direct_graded_det(self):
        for seed in range(6):
            d = 3 if seed % 2 else 1
            c, g = _instance(seed + 40, d, acyclic=True)
            direct = graded_det_finite(c, g)
            via = graded_det_via_xi_eta(c, g, 0.0)
            np.testing.assert_allclose(via, direct, rtol=1e-9)

    def test_angle_independence(self):
        c, g = _instance(50, 3, acyclic=True)
        theta0 = pick_agmon_angle(build_signature(c, g).b_even)
        theta1 = (theta0 - math.pi / 2) / 2.0
        v0 = graded_det_via_xi_eta(c, g, 0.0, theta0)
        v1 = graded_det_via_xi_eta(c, g, 0.0, theta1)
        np.testing.assert_allclose(v1, v0, rtol=1e-9)
