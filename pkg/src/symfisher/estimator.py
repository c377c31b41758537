"""Monte Carlo estimation of the output FIM by the likelihood-ratio (score) method.

The score of the output density is the conditional expectation of the input
score given the output, ``E[d ln p(x|b)/db | y]``. It is estimated by
Nadaraya-Watson regression with a product Gaussian kernel, and the FIM is the
sample mean of its outer products.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .distributions import InputModel, sample, score
from .errors import DegenerateKernel, OutputDimTooHigh, ValidationError
from .fim import FisherMatrix

MAX_OUTPUT_DIM = 3
QUERY_CHUNK = 256


@dataclass(frozen=True)
class EstimatorConfig:
    bandwidth: object = "silverman"
    sample_count: int = 20000
    seed: int = 0
    n_jobs: int = 1

    def __post_init__(self):
        if self.sample_count < 2:
            raise ValidationError("sample_count must be at least 2")
        if not isinstance(self.bandwidth, str):
            h = np.asarray(self.bandwidth, dtype=float)
            if h.ndim != 1 or np.any(~(h > 0)):
                raise ValidationError("fixed bandwidths must be a vector of positive reals")
        elif self.bandwidth != "silverman":
            raise ValidationError(f"unknown bandwidth rule {self.bandwidth!r}")


def silverman_bandwidth(y: np.ndarray) -> np.ndarray:
    """``1.06 * std * N^(-1/(q+4))`` per output dimension."""
    N, q = y.shape
    return 1.06 * np.std(y, axis=0, ddof=1) * N ** (-1.0 / (q + 4))


def _nw_predict(y_train, s_train, y_query, h, n_jobs=1):
    """Kernel-weighted average of ``s_train`` at each query point.

    Dimensions with zero bandwidth carry no information and are left out of
    the kernel. Log-kernels are shifted by their row maximum before
    exponentiation. Query chunks are independent, so threading does not
    change the result.
    """
    active = h > 0
    u_train = y_train[:, active] / h[active]
    u_query = y_query[:, active] / h[active]
    out = np.empty((y_query.shape[0], s_train.shape[1]))

    def chunk(lo):
        uq = u_query[lo : lo + QUERY_CHUNK]
        logk = np.zeros((uq.shape[0], u_train.shape[0]))
        for d in range(u_train.shape[1]):
            diff = uq[:, d, None] - u_train[None, :, d]
            logk -= 0.5 * diff * diff
        logk -= logk.max(axis=1, keepdims=True)
        w = np.exp(logk)
        total = w.sum(axis=1)
        if np.any(~(total > 0)) or np.any(~np.isfinite(total)):
            raise DegenerateKernel("kernel weights vanish for some query point")
        out[lo : lo + QUERY_CHUNK] = (w @ s_train) / total[:, None]

    starts = range(0, y_query.shape[0], QUERY_CHUNK)
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            list(pool.map(chunk, starts))
    else:
        for lo in starts:
            chunk(lo)
    return out


class ScoreRegressor(RegressorMixin, BaseEstimator):
    """Nadaraya-Watson regression of input scores on model outputs.

    Parameters
    ----------
    bandwidth : "silverman" or array of shape (q,)
        Gaussian kernel width per output dimension.
    n_jobs : int
        Threads used over query chunks.
    """

    def __init__(self, bandwidth="silverman", n_jobs=1):
        self.bandwidth = bandwidth
        self.n_jobs = n_jobs

    def fit(self, Y, S):
        Y = check_array(Y, ensure_2d=False)
        if Y.ndim == 1:
            Y = Y[:, None]
        S = check_array(S)
        if Y.shape[0] != S.shape[0]:
            raise ValidationError("Y and S must have the same number of rows")
        if Y.shape[0] < 2:
            raise ValidationError("need at least two samples")
        if Y.shape[1] > MAX_OUTPUT_DIM:
            raise OutputDimTooHigh(
                f"kernel regression supports at most {MAX_OUTPUT_DIM} output dimensions, got {Y.shape[1]}"
            )
        if isinstance(self.bandwidth, str):
            EstimatorConfig(bandwidth=self.bandwidth)
            h = silverman_bandwidth(Y)
        else:
            h = np.asarray(self.bandwidth, dtype=float).ravel()
            if h.shape[0] != Y.shape[1] or np.any(~(h > 0)):
                raise ValidationError("need one positive bandwidth per output dimension")
        self.bandwidth_ = h
        self.Y_ = Y
        self.S_ = S
        self.n_features_in_ = Y.shape[1]
        return self

    def predict(self, Y):
        check_is_fitted(self, "S_")
        Y = check_array(Y, ensure_2d=False)
        if Y.ndim == 1:
            Y = Y[:, None]
        return _nw_predict(self.Y_, self.S_, Y, self.bandwidth_, self.n_jobs)


def output_scores(y, x_scores, cfg: EstimatorConfig | None = None, exact: bool = False) -> np.ndarray:
    """Per-sample estimate of the output score, shape ``(N, 2n)``.

    ``exact=True`` is for outputs that are a bijection of the inputs, where the
    conditional expectation is the input score itself.
    """
    x_scores = np.asarray(x_scores, dtype=float)
    if exact:
        return x_scores.copy()
    cfg = cfg or EstimatorConfig()
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        y = y[:, None]
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(x_scores))):
        raise ValidationError("output samples and scores must be finite")
    reg = ScoreRegressor(bandwidth=cfg.bandwidth, n_jobs=cfg.n_jobs).fit(y, x_scores)
    return reg.predict(y)


def estimate_fim(model: InputModel, h: Callable, cfg: EstimatorConfig) -> FisherMatrix:
    """Estimate the raw FIM of ``y = h(x)`` w.r.t. the input distribution parameters.

    ``h`` maps an ``(N, n)`` input batch to outputs of shape ``(N,)`` or
    ``(N, q)``; a map with a true ``is_identity`` attribute skips regression.
    """
    X = sample(model, cfg.sample_count, cfg.seed, n_jobs=cfg.n_jobs)
    S = score(model, X)
    if getattr(h, "is_identity", False):
        s_hat = output_scores(None, S, exact=True)
    else:
        y = np.asarray(h(X), dtype=float)
        if y.shape[0] != X.shape[0]:
            raise ValidationError("output map returned the wrong number of rows")
        s_hat = output_scores(y, S, cfg)
    F = s_hat.T @ s_hat / s_hat.shape[0]
    return FisherMatrix(0.5 * (F + F.T), model.labels(), "raw")
