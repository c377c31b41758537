"""Output maps ``y = h(x)`` evaluated on ``(N, n)`` input batches."""

from .benchmark import (
    BenchmarkFunction,
    benchmark_eval,
    benchmark_gradient,
    default_benchmark,
    load_benchmark_coefficients,
)
from .beam import (
    CASES,
    NOMINAL_INPUTS,
    BeamMap,
    BeamModel,
    BeamResponse,
    beam_frf,
    beam_input_model,
    beam_response,
    natural_frequencies,
)


class IdentityMap:
    """``y = x``; the estimator uses the input scores directly."""

    is_identity = True

    def __call__(self, X):
        return X


__all__ = [
    "BeamMap",
    "BeamModel",
    "BeamResponse",
    "BenchmarkFunction",
    "CASES",
    "IdentityMap",
    "NOMINAL_INPUTS",
    "beam_frf",
    "beam_input_model",
    "beam_response",
    "benchmark_eval",
    "benchmark_gradient",
    "default_benchmark",
    "load_benchmark_coefficients",
    "natural_frequencies",
]
