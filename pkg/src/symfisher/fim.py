"""Labelled Fisher information matrices and the transforms applied before decomposition.

Parameters are ordered interleaved by default, ``(mu_1, sigma_1, mu_2, ...)``.
:func:`apply_pairing` moves a matrix into the split-half layout used by
:mod:`symfisher.linalg`, where pair ``k`` occupies positions ``k`` and ``n + k``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from ._validation import as_float_array, check_symmetric
from .errors import (
    DimensionMismatch,
    InvalidPairing,
    MissingNominal,
    NotPositiveDefinite,
    ParseError,
    ValidationError,
    ZeroNominal,
)

PSD_RTOL = 1e-9
NORMALIZATIONS = ("raw", "proportional", "stddev")
_KIND_PREFIX = {"mean": "mu", "stddev": "sigma"}


@dataclass(frozen=True)
class ParamLabel:
    """One distribution parameter: which variable, which kind, nominal value."""

    variable: str
    kind: str
    nominal: float

    def __post_init__(self):
        if not self.variable:
            raise ValidationError("variable name must be nonempty")
        if "," in self.variable or "," in self.kind:
            raise ValidationError("label fields may not contain commas")
        if not math.isfinite(self.nominal):
            raise ValidationError(f"nominal value of {self.variable} must be finite")

    @property
    def name(self) -> str:
        return f"{_KIND_PREFIX.get(self.kind, self.kind)}_{self.variable}"


@dataclass(frozen=True)
class FisherMatrix:
    matrix: np.ndarray
    labels: tuple[ParamLabel, ...]
    normalization: str = "raw"

    def __post_init__(self):
        F = check_symmetric(self.matrix, name="Fisher matrix")
        if len(self.labels) != F.shape[0]:
            raise DimensionMismatch(
                f"{len(self.labels)} labels for a matrix of dimension {F.shape[0]}"
            )
        if self.normalization not in NORMALIZATIONS:
            raise ValidationError(f"unknown normalization {self.normalization!r}")
        if F.size:
            w = np.linalg.eigvalsh(F)
            if w[0] < -PSD_RTOL * max(abs(w[-1]), abs(w[0])):
                raise NotPositiveDefinite(
                    f"Fisher matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})"
                )
        F.setflags(write=False)
        object.__setattr__(self, "matrix", F)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def names(self) -> list[str]:
        return [lab.name for lab in self.labels]


@dataclass(frozen=True)
class PairingSpec:
    """Ordered parameter pairs; pair ``k`` becomes canonical coordinates ``k, n+k``."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        flat = [i for p in pairs for i in p]
        if sorted(flat) != list(range(len(flat))):
            raise InvalidPairing(
                f"pairs {pairs} do not form a permutation of 0..{len(flat) - 1}"
            )
        object.__setattr__(self, "pairs", pairs)

    @property
    def n(self) -> int:
        return len(self.pairs)

    @classmethod
    def natural(cls, n: int) -> PairingSpec:
        """Adjacent pairs ``(0, 1), (2, 3), ...`` of an interleaved layout."""
        return cls(tuple((2 * k, 2 * k + 1) for k in range(n)))

    @classmethod
    def from_labels(cls, labels: Sequence[ParamLabel]) -> PairingSpec:
        """Pair each variable's mean with its standard deviation."""
        return cls(tuple(_complete_pairs([], labels)))

    @classmethod
    def parse(cls, text: str, labels: Sequence[ParamLabel] | None = None) -> PairingSpec:
        """Parse ``"a:b,c:d,..."`` where each token is an index or a label name.

        When labels are known, parameters not mentioned are paired
        mean-with-stddev per variable, after the listed pairs.
        """
        names = [lab.name for lab in labels] if labels is not None else None
        pairs = []
        for chunk in text.replace(" ", "").split(","):
            if not chunk:
                continue
            parts = chunk.split(":")
            if len(parts) != 2:
                raise InvalidPairing(f"malformed pair {chunk!r}; expected 'a:b'")
            pairs.append(tuple(_resolve(tok, names) for tok in parts))
        if labels is not None:
            pairs = _complete_pairs(pairs, labels)
        return cls(tuple(pairs))

    def permutation(self) -> np.ndarray:
        """``perm[p]`` is the original index placed at canonical position ``p``."""
        return np.array([a for a, _ in self.pairs] + [b for _, b in self.pairs], dtype=int)

    def to_text(self, labels: Sequence[ParamLabel] | None = None) -> str:
        if labels is None:
            return ",".join(f"{a}:{b}" for a, b in self.pairs)
        return ",".join(f"{labels[a].name}:{labels[b].name}" for a, b in self.pairs)


def _resolve(token: str, names):
    if token.lstrip("-").isdigit():
        return int(token)
    if names is None or token not in names:
        raise InvalidPairing(f"unknown parameter {token!r}")
    return names.index(token)


def _complete_pairs(pairs, labels):
    used = {i for p in pairs for i in p}
    if len(used) != 2 * len(pairs):
        raise InvalidPairing(f"repeated index in pairs {pairs}")
    pairs = list(pairs)
    pending: dict[str, list[int]] = {}
    for i, lab in enumerate(labels):
        if i not in used:
            pending.setdefault(lab.variable, []).append(i)
    for var, idx in pending.items():
        kinds = {labels[i].kind: i for i in idx}
        if len(idx) != 2 or set(kinds) != {"mean", "stddev"}:
            raise InvalidPairing(f"cannot complete a natural pair for variable {var!r}")
        pairs.append((kinds["mean"], kinds["stddev"]))
    return pairs


def reparameterize(F: FisherMatrix, jac, labels: Iterable[ParamLabel] | None = None,
                   normalization: str | None = None) -> FisherMatrix:
    """Fisher matrix in new parameters, ``jac^T F jac`` with ``jac[j, i] = db_j/dtheta_i``."""
    jac = as_float_array(jac, name="jacobian")
    if jac.ndim == 1:
        jac = jac[:, None]
    if jac.ndim != 2 or jac.shape[0] != F.dim:
        raise DimensionMismatch(f"jacobian of shape {jac.shape} does not match dimension {F.dim}")
    if jac.shape[1] > jac.shape[0]:
        raise DimensionMismatch("jacobian has more columns than rows")
    out = jac.T @ F.matrix @ jac
    if labels is None:
        if jac.shape[1] == F.dim:
            labels = F.labels
        else:
            labels = [ParamLabel(f"theta{i}", "other", 0.0) for i in range(jac.shape[1])]
    return FisherMatrix(0.5 * (out + out.T), tuple(labels), normalization or F.normalization)


def normalization_scales(labels: Sequence[ParamLabel], mode: str) -> np.ndarray:
    """Per-parameter scale factors used as the diagonal Jacobian.

    ``stddev`` scales every parameter of a variable by that variable's
    standard deviation; ``proportional`` scales each parameter by its own
    nominal value.
    """
    if mode == "stddev":
        sigma = {lab.variable: lab.nominal for lab in labels if lab.kind == "stddev"}
        missing = sorted({lab.variable for lab in labels} - set(sigma))
        if missing:
            raise MissingNominal(f"no stddev nominal for variable(s) {missing}")
        scales = np.array([sigma[lab.variable] for lab in labels])
    elif mode == "proportional":
        scales = np.array([lab.nominal for lab in labels])
    else:
        raise ValidationError(f"unknown normalization mode {mode!r}")
    if np.any(scales == 0):
        bad = [labels[i].name for i in np.flatnonzero(scales == 0)]
        raise ZeroNominal(f"zero nominal value for {bad}")
    return scales


def normalize(F: FisherMatrix, mode: str) -> FisherMatrix:
    """Normalized FIM: entry ``(j, k)`` multiplied by ``scale_j * scale_k``.

    Nominal values are divided by the same scales so the labels describe the
    new dimensionless parameters.
    """
    if mode == "raw":
        return F
    scales = normalization_scales(F.labels, mode)
    labels = tuple(replace(lab, nominal=lab.nominal / s) for lab, s in zip(F.labels, scales))
    return reparameterize(F, np.diag(scales), labels=labels, normalization=mode)


def apply_pairing(F: FisherMatrix, pairing: PairingSpec) -> FisherMatrix:
    """Reorder rows/columns into the split-half layout defined by ``pairing``."""
    if 2 * pairing.n != F.dim:
        raise InvalidPairing(f"pairing covers {2 * pairing.n} indices, matrix has {F.dim}")
    perm = pairing.permutation()
    return FisherMatrix(
        F.matrix[np.ix_(perm, perm)], tuple(F.labels[i] for i in perm), F.normalization
    )


def condition_number(F) -> float:
    """``lambda_max / lambda_min``, infinite when the smallest eigenvalue is not positive.

    ``lambda_min`` is taken as ``1 / lambda_max(F^-1)`` with the inverse formed
    from the diagonally equilibrated matrix. A direct eigensolve loses the
    small eigenvalues of raw FIMs whose parameters differ by many orders of
    magnitude.
    """
    M = F.matrix if isinstance(F, FisherMatrix) else check_symmetric(F)
    diag = np.diag(M)
    if np.any(diag <= 0):
        return math.inf
    scale = 1.0 / np.sqrt(diag)
    G = M * np.outer(scale, scale)
    try:
        L = np.linalg.cholesky(G)
    except np.linalg.LinAlgError:
        return math.inf
    if np.linalg.eigvalsh(G)[0] <= 0:
        return math.inf
    Linv = np.linalg.solve(L, np.eye(len(G)))
    Minv = (Linv.T @ Linv) * np.outer(scale, scale)
    lam_max = np.linalg.eigvalsh(M)[-1]
    inv_max = np.linalg.eigvalsh(0.5 * (Minv + Minv.T))[-1]
    return float(lam_max * inv_max)


def write_fim(F: FisherMatrix, path: str | os.PathLike) -> None:
    """Write the plain-text matrix file (17 significant digits, exact round trip)."""
    lines = [f"dim {F.dim}"]
    for row in F.matrix:
        lines.append(" ".join(f"{x:.17g}" for x in row))
    for lab in F.labels:
        lines.append(f"{lab.variable},{lab.kind},{lab.nominal:.17g}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_fim(path: str | os.PathLike, normalization: str = "raw") -> FisherMatrix:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ParseError(f"{path}: empty file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "dim" or not head[1].isdigit():
        raise ParseError(f"{path}: first line must be 'dim <size>'")
    dim = int(head[1])
    if len(lines) != 1 + 2 * dim:
        raise ParseError(f"{path}: expected {dim} matrix rows and {dim} label lines")
    try:
        rows = [[float(tok) for tok in ln.split()] for ln in lines[1 : 1 + dim]]
    except ValueError as exc:
        raise ParseError(f"{path}: bad number ({exc})") from None
    if any(len(r) != dim for r in rows):
        raise ParseError(f"{path}: every matrix row needs {dim} entries")
    labels = []
    for ln in lines[1 + dim :]:
        parts = ln.split(",")
        if len(parts) != 3:
            raise ParseError(f"{path}: label line {ln!r} is not 'variable,kind,nominal'")
        try:
            labels.append(ParamLabel(parts[0], parts[1], float(parts[2])))
        except ValueError as exc:
            raise ParseError(f"{path}: bad label {ln!r} ({exc})") from None
    return FisherMatrix(np.array(rows), tuple(labels), normalization)
