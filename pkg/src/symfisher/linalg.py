"""Dense kernels for the standard and symplectic spectral analysis of SPD matrices.

All matrices use the split-half layout: coordinate ``k`` and ``n + k`` form the
k-th conjugate pair, so the symplectic form is ``J = [[0, I], [-I, 0]]``.
Conversions from user-facing (interleaved) parameter orders belong to
:mod:`symfisher.fim`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_even, check_square, check_symmetric
from .errors import NotPositiveDefinite, NotSkewSymmetric, NumericalError

PD_FLOOR = 1e-12
SKEW_RTOL = 1e-10
# relative gap below which two spectral values count as tied
TIE_RTOL = 1e-10


def symplectic_form(n: int) -> np.ndarray:
    """The 2n x 2n matrix ``[[0, I], [-I, 0]]``."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True)
class EigenSpectrum:
    """Eigenvalues in descending order with orthonormal eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Williamson normal form ``S^T F S = diag(D, D)`` with ``S = [U | V]``.

    ``d`` holds the symplectic eigenvalues in descending order; column ``j`` of
    ``U`` and of ``V`` form the eigenvector pair belonging to ``d[j]``.
    """

    d: np.ndarray
    U: np.ndarray
    V: np.ndarray

    @property
    def n(self) -> int:
        return self.d.shape[0]

    @property
    def S(self) -> np.ndarray:
        return np.hstack([self.U, self.V])

    def inverse(self) -> np.ndarray:
        """``S^-1`` from the symplectic identity ``S^-1 = J^-1 S^T J``."""
        J = symplectic_form(self.n)
        return -J @ self.S.T @ J


def _largest_index(v: np.ndarray) -> int:
    # first index attaining the max magnitude, up to rounding
    mag = np.abs(v)
    return int(np.flatnonzero(mag >= mag.max() * (1 - 1e-12))[0])


def _tie_sorted(values: np.ndarray, tiebreak: list) -> np.ndarray:
    """Indices sorting ``values`` descending, near-ties ordered by ``tiebreak``."""
    order = list(np.argsort(-values, kind="stable"))
    scale = max(float(np.max(np.abs(values))), np.finfo(float).tiny) if len(values) else 1.0
    out = []
    i = 0
    while i < len(order):
        j = i + 1
        while j < len(order) and values[order[i]] - values[order[j]] <= TIE_RTOL * scale:
            j += 1
        out.extend(sorted(order[i:j], key=lambda k: (tiebreak[k], k)))
        i = j
    return np.array(out, dtype=int)


def regularize(F, eps: float) -> np.ndarray:
    """Return ``F + eps * I``; the explicit repair for semidefinite FIMs."""
    F = check_symmetric(F)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return F + eps * np.eye(F.shape[0])


def _spd_eigh(F: np.ndarray):
    w, Q = np.linalg.eigh(F)
    top = max(float(np.max(np.abs(w))), np.finfo(float).tiny)
    if w[0] <= PD_FLOOR * top:
        raise NotPositiveDefinite(
            f"minimum eigenvalue {w[0]:.3e} is below the definiteness floor "
            f"{PD_FLOOR * top:.3e}; consider regularize(F, eps)"
        )
    return w, Q


def spd_sqrt(F, return_inverse: bool = False):
    """Principal square root of a symmetric positive definite matrix.

    With ``return_inverse=True`` also returns the inverse square root, computed
    from the same eigendecomposition.
    """
    F = check_symmetric(F)
    w, Q = _spd_eigh(F)
    root = np.sqrt(w)
    R = (Q * root) @ Q.T
    R = 0.5 * (R + R.T)
    if not return_inverse:
        return R
    Rinv = (Q / root) @ Q.T
    return R, 0.5 * (Rinv + Rinv.T)


def skew_schur(M):
    """Real Schur form of a nonsingular skew-symmetric matrix.

    Returns ``(Q, d)`` with ``Q`` orthogonal and ``Q.T @ M @ Q`` block diagonal,
    block ``j`` (rows/columns ``2j, 2j+1``) equal to ``[[0, d_j], [-d_j, 0]]``
    with ``d_j > 0`` in descending order.

    The blocks come from the Hermitian matrix ``iM``: an eigenvector
    ``z = x + iy`` with eigenvalue ``d > 0`` gives ``M x = d y`` and
    ``M y = -d x``, so ``sqrt(2) * (y, x)`` spans one canonical block. Within
    each block the rotation is fixed so that the complex vector ``first + i
    second`` has a real positive entry of largest modulus.
    """
    M = check_square(M, name="M")
    dim = M.shape[0]
    n = check_even(dim, name="M")
    scale = max(float(np.max(np.abs(M))), np.finfo(float).tiny)
    if np.max(np.abs(M + M.T)) > SKEW_RTOL * scale:
        raise NotSkewSymmetric("M + M^T is not zero within tolerance")
    M = 0.5 * (M - M.T)

    w, Z = np.linalg.eigh(1j * M)
    d = w[n:]
    Z = Z[:, n:]
    if d[0] <= PD_FLOOR * scale:
        raise NumericalError("skew-symmetric matrix is singular; blocks must be positive")

    first = np.sqrt(2.0) * Z.imag
    second = np.sqrt(2.0) * Z.real
    first, second = _canonical_rotation(first, second)
    order = _tie_sorted(d, [_largest_index(first[:, j]) for j in range(n)])
    d = d[order]
    Q = np.empty((dim, dim))
    Q[:, 0::2] = first[:, order]
    Q[:, 1::2] = second[:, order]
    return Q, d


def _canonical_rotation(A: np.ndarray, B: np.ndarray):
    """Rotate each column pair ``(A[:, j], B[:, j])`` within its plane.

    The angle makes the largest-modulus entry of ``A + iB`` real and positive,
    which also makes it the largest-magnitude entry of the rotated ``A``.
    """
    Zc = A + 1j * B
    out_a = np.empty_like(A)
    out_b = np.empty_like(B)
    for j in range(Zc.shape[1]):
        z = Zc[:, j]
        k = _largest_index(z)
        phase = np.conj(z[k]) / abs(z[k])
        zr = z * phase
        out_a[:, j] = zr.real
        out_b[:, j] = zr.imag
    return out_a, out_b


def williamson(F, n: int | None = None) -> SymplecticSpectrum:
    """Williamson decomposition of a 2n x 2n symmetric positive definite matrix.

    With ``R = F^{1/2}`` the skew matrix ``R J R`` is brought to canonical
    block form ``Q^T (R J R) Q = [[0, D], [-D, 0]]``; then
    ``S = R^{-1} Q diag(D^{1/2}, D^{1/2})`` satisfies ``S^T J S = J`` and
    ``S^T F S = diag(D, D)``.
    """
    F = check_symmetric(F)
    half = check_even(F.shape[0])
    if n is not None and n != half:
        raise ValueError(f"matrix of size {F.shape[0]} does not have half-dimension {n}")
    n = half
    R, Rinv = spd_sqrt(F, return_inverse=True)
    J = symplectic_form(n)
    Q, d = skew_schur(R @ J @ R)

    root = np.sqrt(d)
    U = Rinv @ Q[:, 0::2] * root
    V = Rinv @ Q[:, 1::2] * root
    U, V = _canonical_rotation(U, V)
    order = _tie_sorted(d, [_largest_index(U[:, j]) for j in range(n)])
    return SymplecticSpectrum(d=d[order], U=U[:, order], V=V[:, order])


def sym_eig(F) -> EigenSpectrum:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    Each eigenvector is signed so its largest-magnitude component is positive.
    """
    F = check_symmetric(F)
    w, Q = np.linalg.eigh(F)
    w = w[::-1]
    Q = Q[:, ::-1].copy()
    for j in range(Q.shape[1]):
        if Q[_largest_index(Q[:, j]), j] < 0:
            Q[:, j] = -Q[:, j]
    return EigenSpectrum(eigenvalues=w, eigenvectors=Q)


def symplectic_check(S) -> float:
    """Max-norm violation ``max |S^T J S - J|``; zero iff ``S`` is symplectic."""
    S = check_square(S, name="S")
    n = check_even(S.shape[0], name="S")
    J = symplectic_form(n)
    return float(np.max(np.abs(S.T @ J @ S - J)))
