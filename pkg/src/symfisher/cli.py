"""Command line entry point.

    symfisher run --config run.toml [--seed N] [--samples N] [--out DIR]
    symfisher decompose --fim fim.txt [--pairs SPEC] [--normalize MODE] [--out DIR]
    symfisher compare-pairings --config run.toml --pairs SPEC1 --pairs SPEC2 [--out DIR]

Exit codes: 0 success, 2 configuration/input error, 3 numerical error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .config import load_config
from .errors import NumericalError, SymFisherError, ValidationError
from .fim import NORMALIZATIONS, read_fim
from .pipeline import analyse, compare_pairings, run
from .report import decomposition_dict, emit_comparison, emit_report

log = logging.getLogger("symfisher")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4


def _summary(report) -> dict:
    dec = report.decomposition
    return {
        "labels": dec.fim.names,
        "eigenvalues": dec.eigen.eigenvalues.tolist(),
        "symplectic_eigenvalues": dec.symplectic.d.tolist(),
        "pairing": dec.pairing.to_text(dec.fim.labels),
        "condition_numbers": [report.condition_raw, report.condition_normalized],
        "determinant_gap": report.determinant_gap,
    }


def _load(args):
    cfg = load_config(args.config)
    return cfg.with_overrides(seed=args.seed, samples=args.samples, out=args.out)


def cmd_run(args) -> int:
    cfg = _load(args)
    report = run(cfg)
    if cfg.out:
        log.info("report written to %s", cfg.out)
    print(json.dumps(_summary(report), indent=2))
    return EXIT_OK


def cmd_decompose(args) -> int:
    F = read_fim(args.fim)
    report = analyse(F, args.normalize, args.pairs, {"source": str(args.fim)})
    if args.out:
        emit_report(report, args.out)
    print(json.dumps(_summary(report), indent=2))
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _load(args)
    comparison = compare_pairings(cfg, args.pairs)
    if cfg.out:
        emit_comparison(comparison, cfg.out)
    doc = {
        "labels": comparison.fim.names,
        "eigenvalues": comparison.eigenvalues.tolist(),
        "pairings": [
            {k: v for k, v in decomposition_dict(d).items() if k in ("pairing_text", "symplectic_eigenvalues")}
            for d in comparison.decompositions
        ],
    }
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symfisher",
        description="Standard and symplectic spectral analysis of Fisher information matrices.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def overrides(p):
        p.add_argument("--config", required=True, help="TOML run configuration (or a report.json)")
        p.add_argument("--seed", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--out", help="output directory")

    p = sub.add_parser("run", help="estimate, normalize, pair and decompose")
    overrides(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("decompose", help="decompose a FIM read from a matrix file")
    p.add_argument("--fim", required=True)
    p.add_argument("--pairs", help="pairing, e.g. 'mu_L:mu_t,sigma_L:sigma_t' or '0:2,1:3'")
    p.add_argument("--normalize", choices=NORMALIZATIONS, default="raw")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("compare-pairings", help="one FIM, several pairings")
    overrides(p)
    p.add_argument("--pairs", action="append", required=True,
                   help="pairing spec; repeat for each pairing ('' for the natural pairs)")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except NumericalError as exc:
        log.error("numerical error: %s", exc)
        return EXIT_NUMERICAL
    except (ValidationError, SymFisherError) as exc:
        log.error("invalid input: %s", exc)
        return EXIT_CONFIG
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
