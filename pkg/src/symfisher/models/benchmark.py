"""Fifteen-input benchmark ``f(x) = a1.x + a2.sin(x) + a3.cos(x) + x^T M x``."""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources

import numpy as np

from ..errors import CoefficientsNotLoaded, DimensionError, ParseError

DIM = 15
DEFAULT_FILE = "benchmark_coefficients.txt"


@dataclass(frozen=True)
class BenchmarkFunction:
    a1: np.ndarray
    a2: np.ndarray
    a3: np.ndarray
    M: np.ndarray

    def __post_init__(self):
        for name in ("a1", "a2", "a3"):
            if np.shape(getattr(self, name)) != (DIM,):
                raise DimensionError(f"{name} must have {DIM} entries")
        if np.shape(self.M) != (DIM, DIM):
            raise DimensionError(f"M must be {DIM}x{DIM}")

    def __call__(self, X):
        return benchmark_eval(self, X)


def benchmark_eval(f: BenchmarkFunction | None, x) -> np.ndarray | float:
    """Evaluate at one point (shape ``(15,)``) or a batch (shape ``(N, 15)``)."""
    if f is None:
        raise CoefficientsNotLoaded("benchmark coefficients have not been loaded")
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    if X.shape[1] != DIM:
        raise DimensionError(f"benchmark input must have {DIM} columns")
    y = X @ f.a1 + np.sin(X) @ f.a2 + np.cos(X) @ f.a3 + np.einsum("ij,jk,ik->i", X, f.M, X)
    return float(y[0]) if single else y


def benchmark_gradient(f: BenchmarkFunction, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return f.a1 + f.a2 * np.cos(x) - f.a3 * np.sin(x) + (f.M + f.M.T) @ x


def _parse(text: str, source: str) -> BenchmarkFunction:
    sections: dict[str, list[float]] = {}
    current = None
    body = " ".join(line.split("#", 1)[0] for line in text.splitlines())
    for tok in body.split():
        if tok.endswith(":"):
            current = tok[:-1]
            if current not in ("a1", "a2", "a3", "M"):
                raise ParseError(f"{source}: unknown section {tok!r}")
            if current in sections:
                raise ParseError(f"{source}: duplicate section {tok!r}")
            sections[current] = []
            continue
        if current is None:
            raise ParseError(f"{source}: number before the first section header")
        try:
            sections[current].append(float(tok))
        except ValueError:
            raise ParseError(f"{source}: bad number {tok!r}") from None
    missing = {"a1", "a2", "a3", "M"} - set(sections)
    if missing:
        raise ParseError(f"{source}: missing section(s) {sorted(missing)}")
    for key in ("a1", "a2", "a3"):
        if len(sections[key]) != DIM:
            raise DimensionError(f"{source}: {key} has {len(sections[key])} numbers, expected {DIM}")
    if len(sections["M"]) != DIM * DIM:
        raise DimensionError(f"{source}: M has {len(sections['M'])} numbers, expected {DIM * DIM}")
    return BenchmarkFunction(
        np.array(sections["a1"]),
        np.array(sections["a2"]),
        np.array(sections["a3"]),
        np.array(sections["M"]).reshape(DIM, DIM),
    )


def load_benchmark_coefficients(path: str | os.PathLike) -> BenchmarkFunction:
    """Read a coefficient file: ``a1:``, ``a2:``, ``a3:`` then 15 numbers each, ``M:`` then 225.

    Text after ``#`` on a line is ignored.
    """
    with open(path, encoding="utf-8") as fh:
        return _parse(fh.read(), str(path))


def default_benchmark() -> BenchmarkFunction:
    """The coefficient set shipped with the package (see ``data/``)."""
    text = resources.files("symfisher.models").joinpath("data", DEFAULT_FILE).read_text()
    return _parse(text, DEFAULT_FILE)
