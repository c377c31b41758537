"""Entropy perturbation in orthogonal and symplectic coordinates.

The relative entropy between the nominal and perturbed output densities is
approximated by ``dH = 1/2 db^T F db``. Expanding ``db`` on the eigenvectors
gives ``2 dH = sum lambda_j xi_j^2``; on a symplectic basis it gives
``2 dH = sum d_j (alpha_j^2 + beta_j^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_symmetric, check_vector
from .errors import DimensionMismatch, NonPositiveEigenvalue
from .fim import FisherMatrix, PairingSpec
from .linalg import EigenSpectrum, SymplecticSpectrum, sym_eig, williamson


def _matrix(F) -> np.ndarray:
    return F.matrix if isinstance(F, FisherMatrix) else check_symmetric(F)


@dataclass(frozen=True)
class PerturbationResult:
    delta_h: float
    xi: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray


@dataclass(frozen=True)
class ContributionReport:
    per_parameter: np.ndarray
    per_variable: np.ndarray


def kl_quadratic(F, db) -> float:
    """Quadratic approximation ``1/2 db^T F db`` of the KL divergence."""
    M = _matrix(F)
    db = check_vector(db, M.shape[0], name="db")
    return float(0.5 * db @ M @ db)


def decompose_perturbation(F, db, eig: EigenSpectrum | None = None,
                           sym: SymplecticSpectrum | None = None) -> PerturbationResult:
    """Orthogonal coordinates ``xi = Q^T db`` and symplectic ``(alpha, beta) = S^-1 db``.

    ``F`` must already be in the split-half layout of the symplectic spectrum.
    """
    M = _matrix(F)
    db = check_vector(db, M.shape[0], name="db")
    eig = eig if eig is not None else sym_eig(M)
    sym = sym if sym is not None else williamson(M)
    if eig.dim != M.shape[0] or 2 * sym.n != M.shape[0]:
        raise DimensionMismatch("spectra do not match the matrix dimension")
    xi = eig.eigenvectors.T @ db
    coords = sym.inverse() @ db
    return PerturbationResult(
        delta_h=float(0.5 * db @ M @ db), xi=xi, alpha=coords[: sym.n], beta=coords[sym.n :]
    )


def ellipsoid_radii(spectrum) -> np.ndarray:
    """Principal radii ``1/sqrt(value)`` of the unit relative-entropy surface."""
    if isinstance(spectrum, EigenSpectrum):
        values = spectrum.eigenvalues
    elif isinstance(spectrum, SymplecticSpectrum):
        values = spectrum.d
    else:
        values = np.asarray(spectrum, dtype=float)
    if np.any(~(values > 0)):
        raise NonPositiveEigenvalue("ellipsoid radii need strictly positive spectra")
    return 1.0 / np.sqrt(values)


def _aggregate(per_parameter, aggregation: PairingSpec | None):
    if aggregation is None:
        aggregation = PairingSpec.natural(len(per_parameter) // 2)
    if 2 * aggregation.n != len(per_parameter):
        raise DimensionMismatch("aggregation pairing does not cover every parameter")
    return np.array([per_parameter[a] + per_parameter[b] for a, b in aggregation.pairs])


def parameter_contributions(F, eig: EigenSpectrum | None = None,
                            aggregation: PairingSpec | None = None,
                            order: int | None = None) -> ContributionReport:
    """Entropy change per unit squared perturbation of each parameter alone.

    ``per_parameter[k] = sum_j lambda_j q_kj^2`` over the leading ``order``
    eigenpairs (all by default, which reproduces ``diag(F)``). Each pair of
    ``aggregation`` is summed into one per-variable value.
    """
    M = _matrix(F)
    eig = eig if eig is not None else sym_eig(M)
    if eig.dim != M.shape[0]:
        raise DimensionMismatch("eigen spectrum does not match the matrix dimension")
    k = eig.dim if order is None else order
    lam = eig.eigenvalues[:k]
    Q = eig.eigenvectors[:, :k]
    per_parameter = (Q**2) @ lam
    return ContributionReport(per_parameter, _aggregate(per_parameter, aggregation))


def symplectic_contributions(F, sym: SymplecticSpectrum | None = None,
                             aggregation: PairingSpec | None = None,
                             order: int | None = None) -> ContributionReport:
    """Symplectic analogue of :func:`parameter_contributions`.

    Perturbing ``b_k`` alone gives ``alpha_j = (S^-1)_{j,k} db_k`` and
    ``beta_j = (S^-1)_{n+j,k} db_k``, so the contribution is
    ``sum_j d_j ((S^-1)_{j,k}^2 + (S^-1)_{n+j,k}^2)`` over the leading
    ``order`` pairs. Indices refer to the split-half layout of ``F``.
    """
    M = _matrix(F)
    sym = sym if sym is not None else williamson(M)
    if 2 * sym.n != M.shape[0]:
        raise DimensionMismatch("symplectic spectrum does not match the matrix dimension")
    k = sym.n if order is None else order
    Sinv = sym.inverse()
    A = Sinv[:k]
    B = Sinv[sym.n : sym.n + k]
    per_parameter = sym.d[:k] @ (A**2 + B**2)
    if aggregation is None:
        aggregation = PairingSpec(tuple((j, sym.n + j) for j in range(sym.n)))
    return ContributionReport(per_parameter, _aggregate(per_parameter, aggregation))
