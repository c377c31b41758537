"""Independent parametric input distributions: sampling and score functions."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._validation import as_float_array
from .errors import DimensionMismatch, ValidationError
from .fim import FisherMatrix, ParamLabel

FAMILIES = ("normal",)
# samples are drawn in fixed-size blocks, each from its own counter-based stream,
# so the output never depends on how blocks are scheduled
BLOCK_SIZE = 4096


@dataclass(frozen=True)
class Variable:
    name: str
    mu: float
    sigma: float
    family: str = "normal"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unsupported family {self.family!r}")
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma)):
            raise ValidationError(f"{self.name}: parameters must be finite")
        if not self.sigma > 0:
            raise ValidationError(f"{self.name}: sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class InputModel:
    variables: tuple[Variable, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        names = [v.name for v in self.variables]
        if not names:
            raise ValidationError("input model needs at least one variable")
        if len(set(names)) != len(names):
            raise ValidationError(f"variable names must be unique: {names}")

    @classmethod
    def normal(cls, names: Sequence[str], mu, sigma) -> InputModel:
        mu = np.broadcast_to(np.asarray(mu, dtype=float), (len(names),))
        sigma = np.broadcast_to(np.asarray(sigma, dtype=float), (len(names),))
        return cls(tuple(Variable(n, float(m), float(s)) for n, m, s in zip(names, mu, sigma)))

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    @property
    def mu(self) -> np.ndarray:
        return np.array([v.mu for v in self.variables])

    @property
    def sigma(self) -> np.ndarray:
        return np.array([v.sigma for v in self.variables])

    def labels(self) -> tuple[ParamLabel, ...]:
        """Interleaved parameter labels ``(mu_1, sigma_1, mu_2, sigma_2, ...)``."""
        out = []
        for v in self.variables:
            out.append(ParamLabel(v.name, "mean", v.mu))
            out.append(ParamLabel(v.name, "stddev", v.sigma))
        return tuple(out)


def _block_stream(seed: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(block,))
    return np.random.Generator(np.random.Philox(ss))


def sample(model: InputModel, count: int, seed: int, n_jobs: int = 1) -> np.ndarray:
    """Draw ``count`` i.i.d. input vectors, shape ``(count, n)``.

    Identical output for a given seed regardless of ``n_jobs``.
    """
    if count < 1:
        raise ValidationError("count must be at least 1")
    mu, sigma = model.mu, model.sigma
    starts = list(range(0, count, BLOCK_SIZE))

    def draw(b):
        m = min(BLOCK_SIZE, count - starts[b])
        return _block_stream(seed, b).standard_normal((m, model.n))

    if n_jobs > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            blocks = list(pool.map(draw, range(len(starts))))
    else:
        blocks = [draw(b) for b in range(len(starts))]
    return mu + sigma * np.vstack(blocks)


def score(model: InputModel, x) -> np.ndarray:
    """Gradient of ``ln p(x | b)`` w.r.t. the interleaved parameters.

    ``x`` may be one input vector or a ``(N, n)`` batch. For a normal
    variable: ``d/dmu = (x - mu)/sigma^2`` and
    ``d/dsigma = ((x - mu)^2 - sigma^2)/sigma^3``.
    """
    x = as_float_array(x, name="x")
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[1] != model.n:
        raise DimensionMismatch(f"x has {x.shape[1]} columns, model has {model.n} variables")
    mu, sigma = model.mu, model.sigma
    r = x - mu
    out = np.empty((x.shape[0], 2 * model.n))
    out[:, 0::2] = r / sigma**2
    out[:, 1::2] = (r**2 - sigma**2) / sigma**3
    return out[0] if single else out


def analytic_fim(model: InputModel) -> FisherMatrix:
    """Exact FIM of the inputs themselves: ``diag(1/sigma^2, 2/sigma^2, ...)``."""
    diag = np.empty(2 * model.n)
    diag[0::2] = 1.0 / model.sigma**2
    diag[1::2] = 2.0 / model.sigma**2
    return FisherMatrix(np.diag(diag), model.labels(), "raw")
