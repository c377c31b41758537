"""Report files: ``report.json``, spectra CSVs and figure data under ``plotdata/``.

Numbers in CSV files use the shortest round-trip repr, so files produced from the
same inputs are byte-identical. Only ``report.json`` carries a timestamp.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

import numpy as np

from .errors import NumericalError
from .fim import write_fim
from .sensitivity import DET_RTOL, Decomposition

SCHEMA = 1


def _num(x: float) -> str:
    return repr(float(x))


def _json_float(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(c if isinstance(c, str) else _num(c) for c in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _spectra_files(dec: Decomposition, out: Path, suffix: str = "") -> None:
    names = dec.fim.names
    n = dec.symplectic.n
    Q = dec.eigen.eigenvectors
    U, V = dec.symplectic_vectors()
    dim = len(names)

    _write_csv(
        out / f"eigen{suffix}.csv",
        ["row"] + [f"q{j + 1}" for j in range(dim)],
        [["eigenvalue", *dec.eigen.eigenvalues]] + [[names[i], *Q[i]] for i in range(dim)],
    )
    d = dec.symplectic.d
    _write_csv(
        out / f"symplectic{suffix}.csv",
        ["row"] + [f"u{j + 1}" for j in range(n)] + [f"v{j + 1}" for j in range(n)],
        [["symplectic_eigenvalue", *d, *d]]
        + [[names[i], *U[i], *V[i]] for i in range(dim)],
    )


def _plot_files(report, out: Path) -> None:
    dec = report.decomposition
    plot = out / "plotdata"
    plot.mkdir(exist_ok=True)
    names = dec.fim.names
    lam = dec.eigen.eigenvalues
    d = dec.symplectic.d
    n = dec.symplectic.n

    _write_csv(
        plot / "spectrum.csv",
        ["index", "eigenvalue", "symplectic_eigenvalue"],
        [[str(k + 1), lam[k], d[k] if k < n else ""] for k in range(len(lam))],
    )
    k = min(4, len(lam))
    Q = dec.eigen.eigenvectors
    _write_csv(
        plot / "eigenvectors.csv",
        ["parameter"] + [f"q{j + 1}" for j in range(k)],
        [[names[i], *Q[i, :k]] for i in range(len(names))],
    )
    _symplectic_vector_plot(dec, plot / "symplectic_vectors.csv")

    variables = list(dict.fromkeys(lab.variable for lab in dec.fim.labels))

    def rel(v):
        top = np.max(np.abs(v))
        return v / top if top > 0 else v

    e1 = report.first_eigen_contributions.per_variable
    s1 = report.first_pair_contributions.per_variable
    full = report.contributions.per_variable
    _write_csv(
        plot / "contributions.csv",
        ["variable", "eig_first", "s_eig_first", "full", "eig_first_rel", "s_eig_first_rel"],
        [[variables[i], e1[i], s1[i], full[i], rel(e1)[i], rel(s1)[i]] for i in range(len(variables))],
    )


def _symplectic_vector_plot(dec: Decomposition, path: Path, pairs: int = 2) -> None:
    U, V = dec.symplectic_vectors()
    k = min(pairs, dec.symplectic.n)
    header = ["parameter"]
    for j in range(k):
        header += [f"u{j + 1}", f"v{j + 1}"]
    rows = []
    for i, name in enumerate(dec.fim.names):
        row = [name]
        for j in range(k):
            row += [U[i, j], V[i, j]]
        rows.append(row)
    _write_csv(path, header, rows)


def decomposition_dict(dec: Decomposition) -> dict:
    U, V = dec.symplectic_vectors()
    return {
        "pairing": [list(p) for p in dec.pairing.pairs],
        "pairing_text": dec.pairing.to_text(dec.fim.labels),
        "eigenvalues": dec.eigen.eigenvalues.tolist(),
        "eigenvectors": dec.eigen.eigenvectors.tolist(),
        "symplectic_eigenvalues": dec.symplectic.d.tolist(),
        "U": U.tolist(),
        "V": V.tolist(),
    }


def report_dict(report) -> dict:
    dec = report.decomposition
    return {
        "schema": SCHEMA,
        "metadata": report.metadata,
        "labels": [
            {"variable": lab.variable, "kind": lab.kind, "nominal": lab.nominal, "name": lab.name}
            for lab in report.fim_raw.labels
        ],
        "fim_raw": report.fim_raw.matrix.tolist(),
        "fim": dec.fim.matrix.tolist(),
        "normalization": dec.fim.normalization,
        "condition_numbers": {
            "raw": _json_float(report.condition_raw),
            "normalized": _json_float(report.condition_normalized),
        },
        **decomposition_dict(dec),
        "contributions": {
            "per_parameter": report.contributions.per_parameter.tolist(),
            "per_variable": report.contributions.per_variable.tolist(),
            "first_eigenvector_per_variable": report.first_eigen_contributions.per_variable.tolist(),
            "first_symplectic_pair_per_variable": report.first_pair_contributions.per_variable.tolist(),
        },
        "determinant_gap": _json_float(report.determinant_gap),
    }


def emit_report(report, directory: str | os.PathLike) -> list[Path]:
    """Write every report file into ``directory`` and return their paths.

    Refuses to write a report whose spectra violate the determinant identity.
    """
    if not report.determinant_gap <= DET_RTOL:
        raise NumericalError(f"determinant audit failed: relative gap {report.determinant_gap:.3e}")
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    dec = report.decomposition
    (out / "report.json").write_text(json.dumps(report_dict(report), indent=2) + "\n", encoding="utf-8")
    names = dec.fim.names
    _write_csv(out / "fim.csv", ["parameter", *names], [[nm, *row] for nm, row in zip(names, dec.fim.matrix)])
    _write_csv(
        out / "fim_raw.csv",
        ["parameter", *names],
        [[nm, *row] for nm, row in zip(names, report.fim_raw.matrix)],
    )
    write_fim(report.fim_raw, out / "fim_raw.txt")
    write_fim(dec.fim, out / "fim.txt")
    _spectra_files(dec, out)
    _plot_files(report, out)
    return sorted(p for p in out.rglob("*") if p.is_file())


def emit_comparison(comparison, directory: str | os.PathLike) -> list[Path]:
    """Files for a pairing comparison: ``compare.json`` plus per-pairing CSVs."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    (out / "plotdata").mkdir(exist_ok=True)
    doc = {
        "schema": SCHEMA,
        "labels": comparison.fim.names,
        "fim": comparison.fim.matrix.tolist(),
        "eigenvalues": comparison.eigenvalues.tolist(),
        "pairings": [],
    }
    for k, dec in enumerate(comparison.decompositions, start=1):
        entry = decomposition_dict(dec)
        entry.pop("eigenvalues")
        entry.pop("eigenvectors")
        doc["pairings"].append(entry)
        _spectra_files(dec, out, suffix=f"_pairing{k}")
        _symplectic_vector_plot(dec, out / "plotdata" / f"symplectic_vectors_pairing{k}.csv")
    (out / "compare.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return sorted(p for p in out.rglob("*") if p.is_file())
