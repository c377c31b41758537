import numpy as np
import pytest
from sklearn.base import clone

from symfisher.distributions import InputModel, analytic_fim, sample
from symfisher.errors import DimensionMismatch, NumericalError
from symfisher.fim import FisherMatrix, PairingSpec, ParamLabel, normalize
from symfisher.linalg import williamson
from symfisher.sensitivity import FisherSensitivity, decompose, determinant_gap

from conftest import random_spd


def labelled(M):
    n = M.shape[0] // 2
    labels = InputModel.normal([f"x{i}" for i in range(n)], 1.0, 1.0).labels()
    return FisherMatrix(M, labels)


class TestDecompose:
    def test_gaussian(self):
        F = normalize(analytic_fim(InputModel.normal(["a", "b"], 0.0, [2.0, 5.0])), "stddev")
        dec = decompose(F)
        assert np.allclose(dec.eigen.eigenvalues, [2, 2, 1, 1])
        assert np.allclose(dec.symplectic.d, np.sqrt(2))
        assert determinant_gap(dec.eigen, dec.symplectic) <= 1e-12

    def test_vectors_in_user_order(self, rng):
        F = labelled(random_spd(rng, 6))
        spec = PairingSpec(((0, 3), (4, 1), (2, 5)))
        dec = decompose(F, spec)
        U, V = dec.symplectic_vectors()
        FU = F.matrix @ U
        # the pair equations hold in user order with J permuted accordingly
        perm = spec.permutation()
        assert np.allclose(U[perm], dec.symplectic.U)
        assert np.allclose(FU[perm], dec.canonical.matrix @ dec.symplectic.U)
        assert np.allclose(dec.to_canonical(np.arange(6.0)), perm)
        assert V.shape == (6, 3)

    def test_contributions_user_order(self, rng):
        F = labelled(random_spd(rng, 4))
        dec = decompose(F, PairingSpec(((0, 2), (1, 3))))
        full = dec.symplectic_contributions()
        assert np.allclose(full.per_parameter, np.diag(F.matrix), rtol=1e-9)
        assert np.allclose(full.per_variable, dec.contributions().per_variable, rtol=1e-9)

    def test_audit_failure(self, monkeypatch):
        import symfisher.sensitivity as sens

        monkeypatch.setattr(sens, "determinant_gap", lambda eig, sym: 1e-3)
        with pytest.raises(NumericalError):
            sens.decompose(labelled(np.eye(4)))

    def test_gap_nonpositive(self):
        from symfisher.linalg import sym_eig

        assert determinant_gap(sym_eig(np.diag([1.0, -1.0])), williamson(np.eye(2))) == np.inf


class TestFisherSensitivity:
    def test_sklearn_api(self):
        est = FisherSensitivity(mu=[0.0], sigma=[1.0], pairing="0:1")
        params = est.get_params()
        assert params["pairing"] == "0:1" and params["normalization"] == "stddev"
        assert clone(est).get_params() == params
        est.set_params(n_jobs=2)
        assert est.n_jobs == 2

    def test_identity_fit(self):
        m = InputModel.normal(["E", "L"], [69e9, 0.45], [11.5e9, 0.045])
        X = sample(m, 100_000, 1)
        est = FisherSensitivity(mu=m.mu, sigma=m.sigma, names=m.names).fit(X)
        assert np.max(np.abs(est.fisher_.matrix - np.diag([1.0, 2.0, 1.0, 2.0]))) <= 0.05
        assert est.symplectic_eigenvalues_.shape == (2,)
        assert est.fisher_raw_.normalization == "raw"
        assert est.condition_number_ < 3

    def test_transform_and_entropy(self):
        m = InputModel.normal(["a", "b"], 0.0, 1.0)
        X = sample(m, 20_000, 2)
        est = FisherSensitivity(mu=m.mu, sigma=m.sigma).fit(X)
        db = np.random.default_rng(0).standard_normal((5, 4))
        coords = est.transform(db)
        d = est.symplectic_eigenvalues_
        n = len(d)
        two_dh = (coords[:, :n] ** 2 + coords[:, n:] ** 2) @ d
        assert np.allclose(two_dh, 2 * est.entropy_change(db), rtol=1e-9)

    def test_output_map(self):
        m = InputModel.normal(["a", "b"], 0.0, 1.0)
        X = sample(m, 5000, 3)
        est = FisherSensitivity(mu=m.mu, sigma=m.sigma, normalization="raw").fit(X, X[:, 0])
        assert est.fisher_.matrix[0, 0] > 10 * est.fisher_.matrix[2, 2]

    def test_errors(self):
        est = FisherSensitivity(mu=[0.0, 0.0], sigma=[1.0, 1.0])
        with pytest.raises(DimensionMismatch):
            est.fit(np.zeros((10, 3)))
        from sklearn.exceptions import NotFittedError

        with pytest.raises(NotFittedError):
            est.transform(np.zeros((1, 4)))
