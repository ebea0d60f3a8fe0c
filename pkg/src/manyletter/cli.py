"""Command-line front end.

Subcommands ``alphabet``, ``stats``, ``equiv`` and ``measure`` read spec
files and write a JSON report to stdout or ``--output``.

Exit codes: 0 success (or equivalent), 1 not equivalent, 2 parse error,
3 validation error, 4 dense dimension cap exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__, rng
from . import tolerances as tol
from .ensembles import (
    block_diagonalize,
    ensembles_equivalent,
    message_matrix,
    source_rank,
)
from .errors import CapacityError, SpecFormatError, ValidationError
from .letterspace import gram_matrix, letter_matrix, letter_spectral
from .measurement import length_outcome_distribution, sample_statistics
from .operators import ensemble_average, expected_length
from .specio import complex_array, dumps, load_alphabet, load_ensemble, load_observable, read_json

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_CAPACITY = 4


def _digest(path: str) -> dict[str, str]:
    data = Path(path).read_bytes()
    return {"path": str(path), "sha256": hashlib.sha256(data).hexdigest()}


def _report(command: str, paths: list[str], **extra) -> dict[str, Any]:
    out: dict[str, Any] = {
        "tool": "manyletter",
        "version": __version__,
        "command": command,
        "tolerances": tol.as_dict(),
        "inputs": [_digest(p) for p in paths],
    }
    out.update(extra)
    return out


def _load_ensemble_file(path: str, max_length: int | None):
    return load_ensemble(read_json(path), Path(path).parent, max_length=max_length)


def cmd_alphabet(args) -> tuple[dict, int]:
    alphabet, priors = load_alphabet(read_json(args.input))
    report = _report(
        "alphabet",
        [args.input],
        labels=list(alphabet.labels),
        dim=alphabet.dim,
        K=alphabet.rank,
        gram=complex_array(gram_matrix(alphabet)),
        basis=complex_array(alphabet.basis),
        coordinates=complex_array(alphabet.coords),
    )
    if priors is not None:
        rho = letter_matrix(alphabet, priors)
        spec = letter_spectral(rho)
        report["letter_matrix"] = complex_array(rho.matrix)
        report["letter_spectrum"] = [q for q, _ in spec]
        report["letter_eigenvectors"] = [complex_array(v) for _, v in spec]
    return report, EXIT_OK


def cmd_stats(args) -> tuple[dict, int]:
    spec = _load_ensemble_file(args.input, args.max_length)
    ens = spec.ensemble
    sigma = message_matrix(ens)
    blocks = block_diagonalize(sigma)
    paths = [args.input]
    extra: dict[str, Any] = {}
    if args.observable:
        paths.append(args.observable)
        A = load_observable(read_json(args.observable), ens.shape)
        extra["ensemble_average"] = ensemble_average(A, sigma)
    spectrum = np.linalg.eigvalsh(sigma.matrix)[::-1]
    report = _report(
        "stats",
        paths,
        K=ens.shape.K,
        N=ens.shape.N,
        D=ens.shape.D,
        entries=len(ens),
        mean_length=expected_length(sigma),
        length_distribution=[float(x) for x in blocks.lambdas],
        spectrum=[float(q) for q in spectrum if q > tol.EIG],
        source_rank=source_rank(ens),
        block_residual=blocks.residual,
        block_diagonal=sigma.block_diagonal,
        **extra,
    )
    return report, EXIT_OK


def cmd_equiv(args) -> tuple[dict, int]:
    first = _load_ensemble_file(args.input, args.max_length).ensemble
    second = _load_ensemble_file(args.input2, args.max_length).ensemble
    if first.shape != second.shape:
        raise ValidationError(
            f"ensembles live on different spaces: {first.shape} vs {second.shape}"
        )
    verdict = ensembles_equivalent(first, second, args.tol)
    report = _report(
        "equiv",
        [args.input, args.input2],
        equivalent=verdict.equivalent,
        distance=verdict.distance,
        tol=args.tol,
    )
    return report, EXIT_OK if verdict.equivalent else EXIT_NOT_EQUIVALENT


def cmd_measure(args) -> tuple[dict, int]:
    ens = _load_ensemble_file(args.input, args.max_length).ensemble
    # a single pure entry is measured as a sparse state, without the dense cap
    target = ens.states[0] if len(ens) == 1 else message_matrix(ens)
    hist = sample_statistics(target, args.trials, args.seed, kind=args.kind)
    report = _report("measure", [args.input])
    report.update(hist.to_dict())
    report["expected_length"] = expected_length(target)
    report["length_distribution"] = [[n, p] for n, p in length_outcome_distribution(target)]
    return report, EXIT_OK


def _nonnegative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v <= rng.MAX_SEED:
        raise argparse.ArgumentTypeError("must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="manyletter", description="Variable-length quantum message simulator."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("--input", required=True, help="spec file")
        if output:
            p.add_argument("--output", help="write the JSON report here instead of stdout")

    p = sub.add_parser("alphabet", help="analyze a quantum alphabet")
    common(p)
    p.set_defaults(func=cmd_alphabet)

    p = sub.add_parser("stats", help="length and spectral statistics of an ensemble")
    common(p)
    p.add_argument("--max-length", type=_nonnegative, default=None)
    p.add_argument("--observable", help="observable spec file for an ensemble average")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("equiv", help="compare the message matrices of two ensembles")
    common(p)
    p.add_argument("--input2", required=True, help="second ensemble spec file")
    p.add_argument("--tol", type=_positive_float, default=tol.RECON)
    p.add_argument("--max-length", type=_nonnegative, default=None)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("measure", help="Monte Carlo length or basis measurements")
    common(p)
    p.add_argument("--kind", choices=["length", "basis"], default="length")
    p.add_argument("--trials", type=_positive_int, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--max-length", type=_nonnegative, default=None)
    p.set_defaults(func=cmd_measure)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, code = args.func(args)
    except SpecFormatError as exc:
        print(f"manyletter: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapacityError as exc:
        print(f"manyletter: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValidationError as exc:
        print(f"manyletter: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    text = dumps(report)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
