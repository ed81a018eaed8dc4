"""Command-line front end.

Subcommands: ``laplacian`` (assemble and dump the matrix), ``gft``
(signal to spectrum), ``igft`` (spectrum back to signal), ``filter``
(apply a tap polynomial), ``analyze`` (spectral structure report).

Exit codes: 0 success, 2 malformed input or usage, 3 dimension mismatch
between inputs, 4 numeric failure (no convergence, singular basis, or a
decomposition that fails to reproduce the Laplacian).

``DGFT_TOL_CLUSTER`` in the environment overrides the default eigenvalue
clustering tolerance; an explicit ``--tol-cluster`` beats both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import io as fileio
from .errors import (
    DgftError,
    DimensionMismatchError,
    EmptyTapsError,
    IllConditionedBasisWarning,
    NoConvergenceError,
    NonSquareError,
    ParseError,
    ReconstructionError,
    SingularMatrixError,
)
from .filters import apply_spectral_domain, apply_vertex_domain, check_lsi_preconditions
from .graph import Graph, GraphSignal, in_degree_matrix, ring_graph
from .spectral import (
    as_laplacian,
    decompose,
    igft,
    order_frequencies,
    spectrum,
    total_variation,
)

ENV_CLUSTER_TOL = "DGFT_TOL_CLUSTER"

# Relative residual above which a decomposition is refused as unusable.
RECON_LIMIT = 1e-6

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DIMENSION = 3
EXIT_NUMERIC = 4


@dataclass(frozen=True)
class RunConfig:
    """Options shared by every spectral subcommand."""

    tol: float
    cluster_tol: float | None
    recon_tol: float
    raw_basis: bool
    sum_duplicates: bool


def _resolve_cluster_tol(value: float | None) -> float | None:
    if value is not None:
        return value
    raw = os.environ.get(ENV_CLUSTER_TOL)
    if raw is None or not raw.strip():
        return None
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"{ENV_CLUSTER_TOL} is not a number: {raw!r}") from None


def _config(args: argparse.Namespace) -> RunConfig:
    for name in ("tol", "tol_recon"):
        if getattr(args, name) <= 0:
            raise ParseError(f"--{name.replace('_', '-')} must be positive")
    cluster = _resolve_cluster_tol(args.cluster_tol)
    if cluster is not None and cluster <= 0:
        raise ParseError("--tol-cluster must be positive")
    return RunConfig(
        tol=args.tol,
        cluster_tol=cluster,
        recon_tol=args.tol_recon,
        raw_basis=args.raw_basis,
        sum_duplicates=getattr(args, "sum_duplicates", False),
    )


def _load_graph_argument(args: argparse.Namespace, cfg: RunConfig) -> Graph:
    if args.ring is not None and args.graph is not None:
        raise ParseError("give a graph file or --ring, not both")
    if args.ring is not None:
        return ring_graph(args.ring)
    if args.graph is None:
        raise ParseError("a graph file or --ring N is required")
    return fileio.load_graph(args.graph, sum_duplicates=cfg.sum_duplicates)


def _write(args: argparse.Namespace, writer) -> None:
    if args.output == "-":
        writer(sys.stdout)
    else:
        writer(args.output)


def _checked_decompose(g: Graph, cfg: RunConfig):
    """Decompose and insist the factorization reproduces the Laplacian."""
    lap = as_laplacian(g)
    with warnings.catch_warnings():
        # The flag on the result carries this information; a warning on
        # stderr would break byte-deterministic piping.
        warnings.simplefilter("ignore", IllConditionedBasisWarning)
        dec = decompose(
            lap,
            cfg.tol,
            cluster_tol=cfg.cluster_tol,
            normalize=not cfg.raw_basis,
            snap_constant=not cfg.raw_basis,
        )
    scale = max(1.0, float(np.linalg.norm(lap.matrix)))
    residual = float(np.linalg.norm(dec.reconstruct() - lap.matrix))
    if residual > cfg.recon_tol * scale:
        raise ReconstructionError(
            f"decomposition residual {residual:.3e} exceeds "
            f"{cfg.recon_tol * scale:.3e}; results would be unreliable"
        )
    return lap, dec, residual


def _parse_taps(text: str) -> list[complex]:
    tokens = [t for t in (piece.strip() for piece in text.split(",")) if t]
    if not tokens:
        raise EmptyTapsError("no taps given")
    try:
        return [fileio.parse_complex(t) for t in tokens]
    except ValueError as exc:
        raise ParseError(f"bad tap: {exc}") from None


# ---------------------------------------------------------------------------
# Subcommand bodies


def _cmd_laplacian(args: argparse.Namespace) -> int:
    cfg = _config(args)
    g = _load_graph_argument(args, cfg)
    if args.matrix == "w":
        m = g.weights
    elif args.matrix == "din":
        m = in_degree_matrix(g)
    else:
        m = as_laplacian(g).matrix
    if args.format == "csv":
        _write(args, lambda dst: fileio.dump_matrix_csv(m, dst))
    else:
        _write(args, lambda dst: fileio.dump_matrix_json(m, dst))
    return EXIT_OK


def _cmd_gft(args: argparse.Namespace) -> int:
    cfg = _config(args)
    g = _load_graph_argument(args, cfg)
    signal = fileio.load_signal(args.signal)
    if signal.n != g.n:
        raise DimensionMismatchError(
            f"signal has {signal.n} values but the graph has {g.n} nodes"
        )
    _, dec, _ = _checked_decompose(g, cfg)
    spec = spectrum(dec, signal)
    natural = args.order == "natural"
    if args.format == "csv":
        _write(
            args,
            lambda dst: fileio.dump_spectrum_csv(spec, dst, natural_order=natural),
        )
    else:
        _write(
            args,
            lambda dst: fileio.dump_spectrum_json(spec, dst, natural_order=natural),
        )
    return EXIT_OK


def _cmd_igft(args: argparse.Namespace) -> int:
    cfg = _config(args)
    g = _load_graph_argument(args, cfg)
    spec = fileio.load_spectrum(args.spectrum)
    if spec.n != g.n:
        raise DimensionMismatchError(
            f"spectrum has {spec.n} entries but the graph has {g.n} nodes"
        )
    _, dec, _ = _checked_decompose(g, cfg)
    values = igft(dec, spec.coefficients)
    _write(args, lambda dst: fileio.dump_signal(GraphSignal(values), dst))
    return EXIT_OK


def _cmd_filter(args: argparse.Namespace) -> int:
    cfg = _config(args)
    g = _load_graph_argument(args, cfg)
    signal = fileio.load_signal(args.signal)
    if signal.n != g.n:
        raise DimensionMismatchError(
            f"signal has {signal.n} values but the graph has {g.n} nodes"
        )
    taps = _parse_taps(args.taps)
    if args.domain == "vertex":
        values = apply_vertex_domain(g, taps, signal)
    else:
        _, dec, _ = _checked_decompose(g, cfg)
        values = apply_spectral_domain(dec, taps, signal)
    _write(args, lambda dst: fileio.dump_signal(GraphSignal(values), dst))
    return EXIT_OK


def _cmd_analyze(args: argparse.Namespace) -> int:
    cfg = _config(args)
    g = _load_graph_argument(args, cfg)
    lap, dec, residual = _checked_decompose(g, cfg)
    report = check_lsi_preconditions(dec)
    ordering = order_frequencies(dec.eigenvalues)

    variation = []
    for b in dec.blocks:
        col = dec.v[:, b.start]
        variation.append(
            {
                "spectral_index": b.start,
                "tv": total_variation(lap, col),
                "lambda_times_l1": abs(complex(b.eigenvalue))
                * float(np.sum(np.abs(col))),
            }
        )

    doc = {
        "n": g.n,
        "undirected": bool(g.is_undirected and g.is_real_nonnegative),
        "tol": cfg.tol,
        "cluster_tol": dec.cluster_tol,
        "diagonalizable": dec.is_diagonalizable,
        "unitary_basis": dec.is_unitary_basis,
        "basis_condition": dec.basis_condition,
        "ill_conditioned": dec.ill_conditioned,
        "reconstruction_residual": residual,
        "eigenvalues": [[v.real, v.imag] for v in map(complex, dec.eigenvalues)],
        "blocks": [
            {
                "eigenvalue": [b.eigenvalue.real, b.eigenvalue.imag],
                "size": b.size,
                "start": b.start,
            }
            for b in dec.blocks
        ],
        "frequency_order": list(ordering.order),
        "frequency_ranks": list(ordering.ranks),
        "tie_groups": [list(group) for group in ordering.tie_groups],
        "lsi_preconditions": {
            "polynomials_span_commutant": report.polynomials_span_commutant,
            "eigenvalues": [
                {
                    "eigenvalue": [e.eigenvalue.real, e.eigenvalue.imag],
                    "algebraic": e.algebraic,
                    "geometric": e.geometric,
                }
                for e in report.entries
            ],
        },
        "proper_vector_variation": variation,
    }

    def writer(dst):
        fh, close = fileio._writing(dst)
        try:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        finally:
            if close:
                fh.close()

    _write(args, writer)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser assembly


def _add_common(p: argparse.ArgumentParser, *, graph_input: bool = True) -> None:
    if graph_input:
        p.add_argument("graph", nargs="?", help="edge-list file (or use --ring)")
        p.add_argument("--ring", type=int, metavar="N", help="directed cycle on N nodes")
        p.add_argument(
            "--sum-duplicates",
            action="store_true",
            help="accumulate repeated edges instead of rejecting them",
        )
    p.add_argument("-o", "--output", default="-", help="output path (default stdout)")
    p.add_argument(
        "--tol",
        type=float,
        default=1e-8,
        help="rank / zero-detection tolerance (default 1e-8)",
    )
    p.add_argument(
        "--tol-cluster",
        dest="cluster_tol",
        type=float,
        default=None,
        help=f"eigenvalue clustering tolerance (default scales with the matrix; "
        f"env {ENV_CLUSTER_TOL})",
    )
    p.add_argument(
        "--tol-recon",
        type=float,
        default=RECON_LIMIT,
        help="relative reconstruction residual above which results are "
        f"refused (default {RECON_LIMIT:g})",
    )
    p.add_argument(
        "--raw-basis",
        action="store_true",
        help="skip the deterministic eigenvector convention "
        "(unit scale, positive pivot, snapped constant vector)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dgft",
        description="Graph Fourier transform on directed graphs "
        "(in-degree Laplacian).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("laplacian", help="assemble graph matrices and write one out")
    _add_common(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument(
        "--matrix",
        choices=("w", "din", "l"),
        default="l",
        help="which matrix to emit: weights, in-degree diagonal, or the "
        "Laplacian (default l)",
    )
    p.set_defaults(func=_cmd_laplacian)

    p = sub.add_parser("gft", help="transform a signal into the spectral domain")
    _add_common(p)
    p.add_argument("--signal", required=True, help="signal JSON file")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument(
        "--order",
        choices=("spectral-index", "natural"),
        default="spectral-index",
        help="row order: by basis column, or by frequency rank (natural)",
    )
    p.set_defaults(func=_cmd_gft)

    p = sub.add_parser("igft", help="synthesize a signal from a spectrum file")
    _add_common(p)
    p.add_argument("--spectrum", required=True, help="spectrum CSV or JSON file")
    p.set_defaults(func=_cmd_igft)

    p = sub.add_parser("filter", help="apply a polynomial filter to a signal")
    _add_common(p)
    p.add_argument("--signal", required=True, help="signal JSON file")
    p.add_argument(
        "--taps",
        required=True,
        help="comma-separated taps, lowest order first (complex as a+bi)",
    )
    p.add_argument(
        "--domain",
        choices=("vertex", "spectral"),
        default="vertex",
        help="where to run the filter (default vertex)",
    )
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("analyze", help="report spectral structure as JSON")
    _add_common(p)
    p.set_defaults(func=_cmd_analyze)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"dgft: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DimensionMismatchError, NonSquareError) as exc:
        print(f"dgft: error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except (NoConvergenceError, SingularMatrixError, ReconstructionError) as exc:
        print(f"dgft: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DgftError as exc:
        print(f"dgft: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"dgft: error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
