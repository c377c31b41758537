"""Scikit-learn style front end: fit on input/output samples, inspect both spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .distributions import InputModel, score
from .entropy import ContributionReport, parameter_contributions, symplectic_contributions
from .errors import DimensionMismatch, NumericalError
from .estimator import EstimatorConfig, output_scores
from .fim import FisherMatrix, PairingSpec, apply_pairing, condition_number, normalize
from .linalg import EigenSpectrum, SymplecticSpectrum, sym_eig, williamson

DET_RTOL = 1e-8


@dataclass(frozen=True)
class Decomposition:
    """Both spectra of one (normalized) FIM under one pairing.

    ``eigen`` refers to the user parameter order of ``fim``; ``symplectic``
    to the split-half order of ``canonical``.
    """

    fim: FisherMatrix
    pairing: PairingSpec
    canonical: FisherMatrix
    eigen: EigenSpectrum
    symplectic: SymplecticSpectrum

    def symplectic_vectors(self) -> tuple[np.ndarray, np.ndarray]:
        """``U`` and ``V`` with rows in the user parameter order of ``fim``."""
        perm = self.pairing.permutation()
        U = np.empty_like(self.symplectic.U)
        V = np.empty_like(self.symplectic.V)
        U[perm] = self.symplectic.U
        V[perm] = self.symplectic.V
        return U, V

    def to_canonical(self, db) -> np.ndarray:
        return np.asarray(db, dtype=float)[..., self.pairing.permutation()]

    def contributions(self, order: int | None = None) -> ContributionReport:
        return parameter_contributions(
            self.fim, self.eigen, PairingSpec.from_labels(self.fim.labels), order
        )

    def symplectic_contributions(self, order: int | None = None) -> ContributionReport:
        """Per-parameter symplectic contributions mapped back to user order."""
        rep = symplectic_contributions(self.canonical, self.symplectic, order=order)
        per_param = np.empty_like(rep.per_parameter)
        per_param[self.pairing.permutation()] = rep.per_parameter
        agg = PairingSpec.from_labels(self.fim.labels)
        return ContributionReport(
            per_param, np.array([per_param[a] + per_param[b] for a, b in agg.pairs])
        )


def determinant_gap(eig: EigenSpectrum, sym: SymplecticSpectrum) -> float:
    """Relative mismatch between ``prod lambda_j`` and ``prod d_j^2``, in log space."""
    if np.any(eig.eigenvalues <= 0):
        return math.inf
    log_gap = np.sum(np.log(eig.eigenvalues)) - 2.0 * np.sum(np.log(sym.d))
    return float(abs(math.expm1(log_gap)))


def decompose(F: FisherMatrix, pairing: PairingSpec | None = None, audit: bool = True) -> Decomposition:
    """Standard eigendecomposition and Williamson decomposition of ``F``.

    With ``audit=True`` the determinant identity ``prod lambda = prod d^2`` is
    enforced to ``DET_RTOL``.
    """
    pairing = pairing or PairingSpec.from_labels(F.labels)
    canonical = apply_pairing(F, pairing)
    eig = sym_eig(F.matrix)
    sym = williamson(canonical.matrix)
    if audit:
        gap = determinant_gap(eig, sym)
        if not gap <= DET_RTOL:
            raise NumericalError(f"determinant audit failed: relative gap {gap:.3e}")
    return Decomposition(F, pairing, canonical, eig, sym)


class FisherSensitivity(TransformerMixin, BaseEstimator):
    """Fisher sensitivity of model outputs w.r.t. normal input distribution parameters.

    Parameters
    ----------
    mu, sigma : array-like of shape (n,)
        Parameters of the independent normal inputs.
    names : list of str, optional
        Variable names; defaults to ``x1 .. xn``.
    normalization : {"stddev", "proportional", "raw"}
    pairing : str or PairingSpec, optional
        Parameter pairs for the symplectic decomposition, e.g.
        ``"mu_L:mu_t,sigma_L:sigma_t"``. Default pairs each mean with its
        standard deviation.
    bandwidth : "silverman" or array of shape (q,)
    n_jobs : int

    Attributes
    ----------
    fisher_raw_ : FisherMatrix
    fisher_ : FisherMatrix
        Normalized FIM in the interleaved parameter order.
    decomposition_ : Decomposition
    eigenvalues_ : ndarray of shape (2n,)
    symplectic_eigenvalues_ : ndarray of shape (n,)
    """

    def __init__(self, mu, sigma, names=None, normalization="stddev", pairing=None,
                 bandwidth="silverman", n_jobs=1):
        self.mu = mu
        self.sigma = sigma
        self.names = names
        self.normalization = normalization
        self.pairing = pairing
        self.bandwidth = bandwidth
        self.n_jobs = n_jobs

    def _input_model(self) -> InputModel:
        mu = np.atleast_1d(np.asarray(self.mu, dtype=float))
        names = self.names if self.names is not None else [f"x{i + 1}" for i in range(len(mu))]
        return InputModel.normal(names, mu, self.sigma)

    def fit(self, X, y=None):
        """Estimate the FIM from inputs ``X`` and outputs ``y``.

        ``y=None`` means the outputs are the inputs themselves, for which the
        input scores are used without regression.
        """
        model = self._input_model()
        X = check_array(X)
        if X.shape[1] != model.n:
            raise DimensionMismatch(f"X has {X.shape[1]} columns, expected {model.n}")
        S = score(model, X)
        if y is None:
            s_hat = S
        else:
            cfg = EstimatorConfig(bandwidth=self.bandwidth, sample_count=X.shape[0], n_jobs=self.n_jobs)
            s_hat = output_scores(y, S, cfg)
        F = s_hat.T @ s_hat / s_hat.shape[0]
        self.fisher_raw_ = FisherMatrix(0.5 * (F + F.T), model.labels(), "raw")
        self.fisher_ = normalize(self.fisher_raw_, self.normalization)
        pairing = self.pairing
        if isinstance(pairing, str):
            pairing = PairingSpec.parse(pairing, self.fisher_.labels)
        self.decomposition_ = decompose(self.fisher_, pairing)
        self.eigenvalues_ = self.decomposition_.eigen.eigenvalues
        self.symplectic_eigenvalues_ = self.decomposition_.symplectic.d
        self.condition_number_ = condition_number(self.fisher_)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, db):
        """Symplectic coordinates ``[alpha | beta] = S^-1 db`` of parameter perturbations.

        Rows of ``db`` are perturbations of the normalized parameters in the
        interleaved order.
        """
        check_is_fitted(self, "decomposition_")
        db = check_array(db)
        dec = self.decomposition_
        if db.shape[1] != dec.fim.dim:
            raise DimensionMismatch(f"perturbations need {dec.fim.dim} columns")
        return dec.to_canonical(db) @ dec.symplectic.inverse().T

    def entropy_change(self, db) -> np.ndarray:
        """Quadratic relative-entropy change ``1/2 db^T F db`` for each row of ``db``."""
        check_is_fitted(self, "decomposition_")
        db = check_array(db)
        return 0.5 * np.einsum("ij,jk,ik->i", db, self.fisher_.matrix, db)
