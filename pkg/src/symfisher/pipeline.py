"""estimate -> normalize -> pair -> decompose -> contributions."""

from __future__ import annotations

import contextlib
import datetime
from dataclasses import dataclass, field

from . import __version__
from .config import RunConfig
from .distributions import analytic_fim
from .entropy import ContributionReport
from .errors import ConfigError, SymFisherError
from .estimator import EstimatorConfig, estimate_fim
from .fim import FisherMatrix, PairingSpec, condition_number, normalize
from .linalg import SymplecticSpectrum
from .sensitivity import Decomposition, decompose, determinant_gap


@dataclass
class SensitivityReport:
    fim_raw: FisherMatrix
    decomposition: Decomposition
    condition_raw: float
    condition_normalized: float
    contributions: ContributionReport
    first_eigen_contributions: ContributionReport
    first_pair_contributions: ContributionReport
    determinant_gap: float
    metadata: dict = field(default_factory=dict)

    @property
    def fim(self) -> FisherMatrix:
        return self.decomposition.fim


@contextlib.contextmanager
def stage(name: str):
    """Prefix errors raised inside the block with the pipeline stage."""
    try:
        yield
    except SymFisherError as exc:
        if getattr(exc, "stage", None):
            raise
        new = type(exc)(f"[{name}] {exc}")
        new.stage = name
        raise new from exc


def output_map(config: RunConfig, n_inputs: int):
    from .models import BeamMap, IdentityMap, default_benchmark, load_benchmark_coefficients

    if config.model == "identity":
        return IdentityMap()
    if config.model == "benchmark":
        if n_inputs != 15:
            raise ConfigError(f"the benchmark model needs 15 inputs, got {n_inputs}")
        if config.coefficients:
            return load_benchmark_coefficients(config.coefficients)
        return default_benchmark()
    if n_inputs != 5:
        raise ConfigError(f"the beam model needs 5 inputs (E, rho, L, w, t), got {n_inputs}")
    return BeamMap(**config.beam)


def estimate(config: RunConfig) -> FisherMatrix:
    """Raw FIM for the configured model (exact for the identity map)."""
    with stage("inputs"):
        model = config.input_model()
        h = output_map(config, model.n)
    with stage("estimate"):
        if config.model == "identity":
            return analytic_fim(model)
        cfg = EstimatorConfig(config.bandwidth, config.samples, config.seed, config.n_jobs)
        return estimate_fim(model, h, cfg)


def _pairing(F: FisherMatrix, text: str | None) -> PairingSpec:
    with stage("pairing"):
        if text:
            return PairingSpec.parse(text, F.labels)
        return PairingSpec.from_labels(F.labels)


def analyse(F_raw: FisherMatrix, normalization: str, pairing_text: str | None = None,
            metadata: dict | None = None) -> SensitivityReport:
    """Normalize, decompose and summarize an already estimated raw FIM."""
    with stage("normalize"):
        F = normalize(F_raw, normalization)
    pairing = _pairing(F, pairing_text)
    with stage("decompose"):
        dec = decompose(F, pairing)
    with stage("contributions"):
        return SensitivityReport(
            fim_raw=F_raw,
            decomposition=dec,
            condition_raw=condition_number(F_raw),
            condition_normalized=condition_number(F),
            contributions=dec.contributions(),
            first_eigen_contributions=dec.contributions(order=1),
            first_pair_contributions=dec.symplectic_contributions(order=1),
            determinant_gap=determinant_gap(dec.eigen, dec.symplectic),
            metadata=dict(metadata or {}),
        )


def run(config: RunConfig, write: bool = True) -> SensitivityReport:
    """Execute the full pipeline; write report files when ``config.out`` is set."""
    F_raw = estimate(config)
    metadata = {
        "seed": config.seed,
        "samples": config.samples,
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "version": __version__,
        "config": config.to_dict(),
    }
    report = analyse(F_raw, config.normalization, config.pairing, metadata)
    if write and config.out:
        from .report import emit_report

        with stage("report"):
            emit_report(report, config.out)
    return report


@dataclass
class PairingComparison:
    fim: FisherMatrix
    decompositions: list[Decomposition]

    @property
    def eigenvalues(self):
        return self.decompositions[0].eigen.eigenvalues

    @property
    def pairings(self) -> list[PairingSpec]:
        return [d.pairing for d in self.decompositions]

    @property
    def spectra(self) -> list[SymplecticSpectrum]:
        return [d.symplectic for d in self.decompositions]


def compare_pairings(config: RunConfig, pairings: list) -> PairingComparison:
    """Symplectic spectra of one estimated FIM under several pairings.

    The FIM is estimated and normalized once; the standard spectrum is shared.
    Each pairing is a :class:`PairingSpec` or its text form (``None`` or
    ``""`` for the natural mean/stddev pairs).
    """
    if not pairings:
        raise ConfigError("compare-pairings needs at least one pairing")
    F = estimate(config)
    with stage("normalize"):
        F = normalize(F, config.normalization)
    decs = []
    for p in pairings:
        spec = p if isinstance(p, PairingSpec) else _pairing(F, p)
        with stage("decompose"):
            decs.append(decompose(F, spec))
    return PairingComparison(F, decs)
