import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symfisher.distributions import InputModel, analytic_fim
from symfisher.entropy import (
    decompose_perturbation,
    ellipsoid_radii,
    kl_quadratic,
    parameter_contributions,
    symplectic_contributions,
)
from symfisher.errors import DimensionMismatch, NonPositiveEigenvalue
from symfisher.fim import PairingSpec
from symfisher.linalg import sym_eig, williamson

from conftest import random_spd

seeds = st.integers(0, 2**32 - 1)


def gaussian_kl(mu0, s0, mu1, s1):
    """KL(N(mu0, s0) || N(mu1, s1))."""
    # grouped so that equal variances contribute exact zeros
    return math.log(s1 / s0) + (s0 - s1) * (s0 + s1) / (2 * s1**2) + (mu0 - mu1) ** 2 / (2 * s1**2)


class TestKlQuadratic:
    def test_zero(self):
        assert kl_quadratic(np.eye(4), np.zeros(4)) == 0.0

    def test_mean_shift_exact(self):
        mu, sigma, dmu = 1.5, 0.7, 0.3
        F = analytic_fim(InputModel.normal(["a"], mu, sigma))
        expected = gaussian_kl(mu, sigma, mu + dmu, sigma)
        assert kl_quadratic(F, [dmu, 0.0]) == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(dmu**2 / (2 * sigma**2), rel=1e-12)

    def test_hand_value(self):
        assert kl_quadratic(np.diag([1.0, 2.0, 1.0, 2.0]), np.ones(4)) == pytest.approx(3.0)

    def test_dimension(self):
        with pytest.raises(DimensionMismatch):
            kl_quadratic(np.eye(2), np.ones(3))

    def test_third_order_remainder(self):
        sigma = 1.3
        F = analytic_fim(InputModel.normal(["a"], 0.0, sigma))
        direction = np.array([0.8, -0.6])
        scales = np.array([1e-1, 1e-2, 1e-3]) * sigma
        rem = []
        for s in scales:
            db = s * direction
            rem.append(abs(kl_quadratic(F, db) - gaussian_kl(0.0, sigma, db[0], sigma + db[1])))
        slope = np.polyfit(np.log(scales), np.log(rem), 1)[0]
        assert slope >= 2.7


class TestDecomposePerturbation:
    def test_first_eigenvector(self, rng):
        F = random_spd(rng, 4)
        eig = sym_eig(F)
        res = decompose_perturbation(F, eig.eigenvectors[:, 0], eig)
        assert np.allclose(res.xi, np.eye(4)[0], atol=1e-12)
        assert 2 * res.delta_h == pytest.approx(eig.eigenvalues[0], rel=1e-12)

    def test_zero(self):
        res = decompose_perturbation(np.eye(4), np.zeros(4))
        assert res.delta_h == 0.0
        assert not np.any(res.xi) and not np.any(res.alpha) and not np.any(res.beta)

    def test_hand_value(self):
        F = np.diag([1.0, 1.0, 2.0, 2.0])
        res = decompose_perturbation(F, [1.0, 0.0, 1.0, 0.0])
        sym = williamson(F)
        assert 2 * res.delta_h == pytest.approx(3.0)
        assert np.sum(sym.d * (res.alpha**2 + res.beta**2)) == pytest.approx(3.0, rel=1e-12)

    @given(seeds, st.integers(1, 5))
    def test_coordinate_identity(self, seed, n):
        rng = np.random.default_rng(seed)
        F = random_spd(rng, 2 * n)
        db = rng.standard_normal(2 * n)
        eig, sym = sym_eig(F), williamson(F)
        res = decompose_perturbation(F, db, eig, sym)
        quad = db @ F @ db
        assert np.sum(eig.eigenvalues * res.xi**2) == pytest.approx(quad, rel=1e-9)
        assert np.sum(sym.d * (res.alpha**2 + res.beta**2)) == pytest.approx(quad, rel=1e-9)
        assert res.delta_h >= -1e-12

    def test_mismatched_spectra(self):
        with pytest.raises(DimensionMismatch):
            decompose_perturbation(np.eye(4), np.ones(4), sym=williamson(np.eye(2)))


class TestEllipsoidRadii:
    def test_values(self):
        assert np.allclose(ellipsoid_radii([4.0, 1.0]), [0.5, 1.0])
        assert ellipsoid_radii([math.sqrt(2)])[0] == pytest.approx(0.8408964152537145)
        assert np.array_equal(ellipsoid_radii(sym_eig(np.eye(4))), np.ones(4))

    def test_symplectic_spectrum(self):
        r = ellipsoid_radii(williamson(np.diag([1.0, 2.0])))
        assert r[0] == pytest.approx(2 ** -0.25)

    def test_nonpositive(self):
        with pytest.raises(NonPositiveEigenvalue):
            ellipsoid_radii([1.0, 0.0])


class TestContributions:
    def test_gaussian_diagonal(self):
        rep = parameter_contributions(np.diag([1.0, 2.0, 1.0, 2.0]))
        assert np.allclose(rep.per_parameter, [1.0, 2.0, 1.0, 2.0])
        assert np.allclose(rep.per_variable, [3.0, 3.0])

    @given(seeds, st.integers(1, 5))
    def test_equals_diagonal(self, seed, n):
        F = random_spd(np.random.default_rng(seed), 2 * n)
        rep = parameter_contributions(F)
        assert np.allclose(rep.per_parameter, np.diag(F), rtol=1e-9, atol=0)

    def test_degenerate_invariant(self):
        rep = parameter_contributions(np.eye(4) * 2.5)
        assert np.allclose(rep.per_parameter, 2.5)

    def test_truncated_first_eigenvector(self, rng):
        F = random_spd(rng, 6)
        eig = sym_eig(F)
        rep = parameter_contributions(F, eig, order=1)
        assert np.allclose(rep.per_parameter, eig.eigenvalues[0] * eig.eigenvectors[:, 0] ** 2)
        assert np.all(rep.per_parameter >= 0)

    def test_custom_aggregation(self):
        rep = parameter_contributions(np.diag([1.0, 2.0, 3.0, 4.0]), aggregation=PairingSpec(((0, 3), (1, 2))))
        assert np.allclose(rep.per_variable, [5.0, 5.0])

    @given(seeds, st.integers(1, 5))
    def test_symplectic_full_equals_diagonal(self, seed, n):
        F = random_spd(np.random.default_rng(seed), 2 * n)
        rep = symplectic_contributions(F)
        assert np.allclose(rep.per_parameter, np.diag(F), rtol=1e-9, atol=0)
        assert np.allclose(rep.per_variable, np.diag(F)[:n] + np.diag(F)[n:], rtol=1e-9)

    def test_symplectic_truncated(self, rng):
        F = random_spd(rng, 4)
        sym = williamson(F)
        Sinv = sym.inverse()
        rep = symplectic_contributions(F, sym, order=1)
        expected = sym.d[0] * (Sinv[0] ** 2 + Sinv[2] ** 2)
        assert np.allclose(rep.per_parameter, expected)
