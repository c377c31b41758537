"""Run configuration: TOML file layout, defaults, and a lossless dict echo.

Example::

    [model]
    kind = "beam"          # identity | benchmark | beam
    case = "case1"         # beam only: case1 | case2, or give [inputs]
    # coefficients = "my_coefficients.txt"   # benchmark only
    # n_modes = 3, damping = 0.1, excitation_fraction = 0.5, n_stations = 21

    [inputs]               # optional for benchmark and named beam cases
    names = ["E", "L"]
    mu = [69e9, 0.45]
    sigma = [11.5e9, 0.045]   # or cov = [...], coefficients of variation

    [run]
    samples = 20000
    seed = 1
    normalization = "stddev"  # raw | proportional | stddev
    pairing = "mu_L:mu_t,sigma_L:sigma_t"   # optional
    out = "results"

    [estimator]
    bandwidth = "silverman"   # or one positive width per output
    n_jobs = 1
"""

from __future__ import annotations

import json
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np

from .distributions import InputModel
from .errors import ConfigError, ValidationError
from .fim import NORMALIZATIONS

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

MODEL_KINDS = ("identity", "benchmark", "beam")
BEAM_OPTIONS = ("n_modes", "damping", "excitation_fraction", "n_stations")


@dataclass(frozen=True)
class InputSpec:
    names: tuple[str, ...]
    mu: tuple[float, ...]
    sigma: tuple[float, ...]

    def model(self) -> InputModel:
        return InputModel.normal(self.names, self.mu, self.sigma)


@dataclass(frozen=True)
class RunConfig:
    model: str = "identity"
    case: str | None = None
    coefficients: str | None = None
    beam: dict = field(default_factory=dict)
    inputs: InputSpec | None = None
    samples: int = 20000
    seed: int = 0
    normalization: str = "stddev"
    pairing: str | None = None
    bandwidth: Any = "silverman"
    n_jobs: int = 1
    out: str | None = None

    def __post_init__(self):
        if self.model not in MODEL_KINDS:
            raise ConfigError(f"model.kind must be one of {MODEL_KINDS}, got {self.model!r}")
        if self.normalization not in NORMALIZATIONS:
            raise ConfigError(f"run.normalization must be one of {NORMALIZATIONS}")
        if not isinstance(self.samples, int) or self.samples < 2:
            raise ConfigError("run.samples must be an integer >= 2")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("run.seed must be a nonnegative integer")
        unknown = set(self.beam) - set(BEAM_OPTIONS)
        if unknown:
            raise ConfigError(f"unknown beam option(s) {sorted(unknown)}")
        if self.model == "identity" and self.inputs is None:
            raise ConfigError("the identity model needs an [inputs] section")
        if self.model == "beam" and self.inputs is None and self.case is None:
            raise ConfigError("the beam model needs model.case or an [inputs] section")

    def input_model(self) -> InputModel:
        from .models import beam_input_model

        if self.inputs is not None:
            return self.inputs.model()
        if self.model == "beam":
            return beam_input_model(self.case)
        return InputModel.normal([f"x{i + 1}" for i in range(15)], 0.0, 1.0)

    def with_overrides(self, **kw) -> RunConfig:
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def to_dict(self) -> dict:
        d = asdict(self)
        if isinstance(self.bandwidth, (list, tuple, np.ndarray)):
            d["bandwidth"] = [float(h) for h in self.bandwidth]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        d = dict(d)
        if d.get("inputs") is not None:
            inp = d["inputs"]
            d["inputs"] = InputSpec(tuple(inp["names"]), tuple(inp["mu"]), tuple(inp["sigma"]))
        if isinstance(d.get("bandwidth"), list):
            d["bandwidth"] = tuple(d["bandwidth"])
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None


def _inputs_section(sec: dict) -> InputSpec:
    try:
        names = [str(n) for n in sec["names"]]
        mu = [float(m) for m in sec["mu"]]
    except KeyError as exc:
        raise ConfigError(f"[inputs] needs {exc.args[0]!r}") from None
    if "sigma" in sec:
        sigma = [float(s) for s in sec["sigma"]]
    elif "cov" in sec:
        sigma = [abs(m) * float(c) for m, c in zip(mu, sec["cov"])]
    else:
        raise ConfigError("[inputs] needs 'sigma' or 'cov'")
    if not len(names) == len(mu) == len(sigma):
        raise ConfigError("[inputs] names, mu and sigma must have equal lengths")
    spec = InputSpec(tuple(names), tuple(mu), tuple(sigma))
    try:
        spec.model()
    except ValidationError as exc:
        raise ConfigError(f"[inputs] {exc}") from None
    return spec


def config_from_mapping(doc: dict) -> RunConfig:
    """Build a config from the parsed TOML document layout."""
    known = {"model", "inputs", "run", "estimator"}
    extra = set(doc) - known
    if extra:
        raise ConfigError(f"unknown section(s) {sorted(extra)}")
    model = dict(doc.get("model", {}))
    run = dict(doc.get("run", {}))
    est = dict(doc.get("estimator", {}))
    kw: dict[str, Any] = {
        "model": model.pop("kind", "identity"),
        "case": model.pop("case", None),
        "coefficients": model.pop("coefficients", None),
        "beam": {k: model.pop(k) for k in BEAM_OPTIONS if k in model},
    }
    if model:
        raise ConfigError(f"unknown [model] key(s) {sorted(model)}")
    if "inputs" in doc:
        kw["inputs"] = _inputs_section(doc["inputs"])
    for key in ("samples", "seed", "normalization", "pairing", "out"):
        if key in run:
            kw[key] = run.pop(key)
    if run:
        raise ConfigError(f"unknown [run] key(s) {sorted(run)}")
    if "bandwidth" in est:
        bw = est.pop("bandwidth")
        kw["bandwidth"] = bw if isinstance(bw, str) else tuple(float(h) for h in bw)
    if "n_jobs" in est:
        kw["n_jobs"] = int(est.pop("n_jobs"))
    if est:
        raise ConfigError(f"unknown [estimator] key(s) {sorted(est)}")
    return RunConfig(**kw)


def load_config(path: str | Path) -> RunConfig:
    """Load a TOML config, or a JSON config echo (``report.json`` also works)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        if "metadata" in doc:
            doc = doc["metadata"]["config"]
        return RunConfig.from_dict(doc)
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return config_from_mapping(doc)
