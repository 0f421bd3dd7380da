"""Command-line entry point for loopbank.

Usage:
    loopbank transform docs/haar_bank.json
    loopbank complete m0.json --n 3
    loopbank factorize loop.json
    loopbank degree loop.json
    loopbank analyze docs/diag_loop.json [--against other.json]
    loopbank cascade bank.json --iterations 8 --csv samples.csv
    loopbank random --n 3 --genus 2 --seed 7

Documents are read from a path or from stdin ("-") and written to stdout
or --out. Errors are printed as a JSON object on stdout and the process
exits with 2 (input), 3 (precondition) or 4 (internal).
"""

import argparse
import csv
import io
import logging
import sys
from typing import Optional

import numpy as np
from rich.console import Console
from rich.table import Table

from loopbank.algebra.loop import LoopConfig, PolyLoop, factorize, mcmillan_degree
from loopbank.algebra.sampling import random_loop
from loopbank.cascade.diagnostics import orthonormality_diagnostic, support_report
from loopbank.cascade.iteration import CascadeConfig, SampledFunction, cascade_scaling, cascade_wavelets
from loopbank.config import LoopbankSettings
from loopbank.cuntz.analysis import analyze, intertwiner_space
from loopbank.cuntz.corner import CuntzConfig
from loopbank.documents.codec import (
    bank_to_document,
    detect_kind,
    document_to_bank,
    document_to_candidate,
    document_to_loop,
    dump_document,
    error_to_document,
    factorization_to_document,
    load_json,
    loop_to_document,
    parse_document,
    report_to_document,
)
from loopbank.documents.models import (
    BankDocument,
    CascadeReportDocument,
    LoopDocument,
    LowPassDocument,
    SupportEntry,
)
from loopbank.errors import LoopbankError, NonUnitary, SchemaError
from loopbank.filters.bank import FilterConfig, check_lowpass, check_qmf, filters_to_loop, loop_to_filters
from loopbank.filters.completion import complete_lowpass
from loopbank.observability.logging import LoggingObserver, configure_logging

logger = logging.getLogger(__name__)


class Context:
    """Settings and module configs resolved for one invocation."""

    def __init__(self, args: argparse.Namespace, settings: LoopbankSettings):
        self.args = args
        self.settings = settings
        tol = args.tol if args.tol is not None else settings.tol
        self.tol = tol
        self.loop = LoopConfig() if tol is None else LoopConfig(certify_tol=tol)
        self.filters = (
            FilterConfig()
            if tol is None
            else FilterConfig(qmf_tol=tol, lowpass_tol=tol, row_tol=tol, candidate_tol=tol)
        )
        analysis = settings.analysis
        self.cuntz = CuntzConfig(
            cluster_tol=analysis.cluster_tol,
            fixed_tol=analysis.fixed_tol,
            algebra_tol=analysis.algebra_tol,
            reduce_tol=analysis.reduce_tol,
            seed=settings.seed,
        )
        self.cascade = CascadeConfig(
            iterations=settings.cascade.iterations,
            support_rel_tol=settings.cascade.support_rel_tol,
        )
        self.observer = LoggingObserver()


# ---------------------------------------------------------------------------
# I/O helpers
# ---------------------------------------------------------------------------


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise SchemaError(f"Cannot read {path}: {e.strerror}", context={"path": path}) from e


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        logger.info("Wrote %s", out)
    else:
        sys.stdout.write(text)


def _load_loop(path: str, ctx: Context) -> PolyLoop:
    doc = parse_document(load_json(_read_text(path)), LoopDocument)
    return document_to_loop(doc, config=ctx.loop)


def _print_summary(title: str, rows: list[tuple[str, str]]) -> None:
    table = Table(title=title)
    table.add_column("Field", style="bold")
    table.add_column("Value")
    for key, value in rows:
        table.add_row(key, value)
    Console(stderr=True).print(table)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_transform(ctx: Context) -> int:
    """Loop document -> bank document, or bank document -> loop document."""
    data = load_json(_read_text(ctx.args.input))
    kind = detect_kind(data)
    if kind == "loop":
        loop = document_to_loop(parse_document(data, LoopDocument), config=ctx.loop)
        bank = loop_to_filters(loop)
        _emit(dump_document(bank_to_document(bank)), ctx.args.out)
        summary = [("direction", "loop -> bank"), ("N", str(bank.n)), ("genus", str(loop.genus))]
    elif kind == "bank":
        bank = document_to_bank(parse_document(data, BankDocument))
        if not ctx.args.no_verify:
            qmf = check_qmf(bank, config=ctx.filters)
            if not qmf.passed:
                raise NonUnitary(
                    f"Bank fails the quadrature mirror check ({qmf.max_defect:.3e})",
                    defect=qmf.max_defect,
                )
        loop = filters_to_loop(bank, config=ctx.loop)
        _emit(dump_document(loop_to_document(loop)), ctx.args.out)
        summary = [("direction", "bank -> loop"), ("N", str(loop.n)), ("genus", str(loop.genus))]
    else:
        raise SchemaError("transform takes a loop or bank document, not a low-pass filter")
    if ctx.args.summary:
        _print_summary("transform", summary)
    return 0


def cmd_complete(ctx: Context) -> int:
    """Complete m_0 to a full quadrature mirror bank."""
    doc = parse_document(load_json(_read_text(ctx.args.input)), LowPassDocument)
    candidate = document_to_candidate(doc, ctx.args.n)
    bank = complete_lowpass(candidate, config=ctx.filters, loop_config=ctx.loop)
    rows = [("N", str(bank.n)), ("genus", str(bank.genus)), ("degrees", str(bank.degrees()))]
    if not ctx.args.no_verify:
        qmf = check_qmf(bank, config=ctx.filters)
        lowpass = check_lowpass(bank, config=ctx.filters)
        rows += [("qmf defect", f"{qmf.max_defect:.3e}"), ("low-pass", str(lowpass.passed))]
        if not qmf.passed:
            logger.warning("Completed bank fails the quadrature mirror check (%.3e)", qmf.max_defect)
    _emit(dump_document(bank_to_document(bank)), ctx.args.out)
    if ctx.args.summary:
        _print_summary("complete", rows)
    return 0


def cmd_factorize(ctx: Context) -> int:
    loop = _load_loop(ctx.args.input, ctx)
    result = factorize(loop, config=ctx.loop)
    _emit(dump_document(factorization_to_document(result)), ctx.args.out)
    if ctx.args.summary:
        _print_summary(
            "factorize",
            [("N", str(loop.n)), ("genus", str(loop.genus)), ("McMillan degree", str(result.mcmillan_degree))],
        )
    return 0


def cmd_degree(ctx: Context) -> int:
    loop = _load_loop(ctx.args.input, ctx)
    _emit(f"{mcmillan_degree(loop, config=ctx.loop)}\n", ctx.args.out)
    return 0


def cmd_analyze(ctx: Context) -> int:
    """Representation report, plus intertwiners with --against."""
    loop = _load_loop(ctx.args.input, ctx)
    report = analyze(loop, config=ctx.cuntz, observer=ctx.observer)
    intertwiner = None
    if ctx.args.against:
        other = _load_loop(ctx.args.against, ctx)
        intertwiner = intertwiner_space(loop, other, config=ctx.cuntz)
    _emit(dump_document(report_to_document(report, intertwiner)), ctx.args.out)
    if ctx.args.summary:
        rows = [
            ("N / genus / r", f"{report.n} / {report.genus} / {report.r}"),
            ("spectral radius", f"{report.spectral_radius:.10f}"),
            ("mult(1) alg / geo", f"{report.mult_one} / {report.fixed_dim}"),
            ("irreducible", str(report.irreducible)),
            ("abelian algebra", str(report.fixed_set_algebra and report.fixed_set_abelian)),
            ("Cuntz states", ", ".join(str(s.k) for s in report.cuntz_states) or "none"),
            ("lambda0", f"{report.lambda0:.12f}"),
            ("reduction", "present" if report.reduction is not None else "absent"),
        ]
        if intertwiner is not None:
            rows.append(("intertwiner dim", str(intertwiner.dimension)))
        rows += [(f"stage {r.component}", f"{r.latency_ms:.1f} ms") for r in ctx.observer.records]
        _print_summary("analyze", rows)
    return 0


def _csv_columns(functions: list[tuple[str, SampledFunction]]) -> tuple[list[str], list[np.ndarray]]:
    is_complex = any(np.iscomplexobj(f.values) and np.any(f.values.imag != 0) for _, f in functions)
    header, columns = [], []
    for name, f in functions:
        if is_complex:
            header += [f"{name}_re", f"{name}_im"]
            columns += [np.real(f.values), np.imag(f.values)]
        else:
            header.append(name)
            columns.append(np.real(f.values))
    return header, columns


def format_csv(functions: list[tuple[str, SampledFunction]]) -> str:
    """x column plus one (or two, for complex data) column per function, repr floats."""
    header, columns = _csv_columns(functions)
    first = functions[0][1]
    cell = first.n**first.level
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["x"] + header)
    for s in range(len(first.values)):
        writer.writerow([repr(s / cell)] + [repr(float(col[s])) for col in columns])
    return buffer.getvalue()


def cmd_cascade(ctx: Context) -> int:
    """Sample phi and the wavelets on one grid; CSV plus a support report."""
    bank = document_to_bank(parse_document(load_json(_read_text(ctx.args.input)), BankDocument))
    J = ctx.args.iterations if ctx.args.iterations is not None else ctx.cascade.iterations
    wavelets = cascade_wavelets(
        bank, J, config=ctx.cascade, observer=ctx.observer, verify=not ctx.args.no_verify
    )
    phi = cascade_scaling(bank.filters[0], bank.n, J + 1, genus=bank.genus, config=ctx.cascade, observer=ctx.observer)
    functions = [("phi", phi)] + [(f"psi_{i}", w) for i, w in enumerate(wavelets, start=1)]

    entries = []
    for name, f in functions:
        support = support_report(f, config=ctx.cascade)
        offdiag = None if ctx.args.no_verify else orthonormality_diagnostic(f).max_offdiag
        entries.append(
            SupportEntry(
                name=name,
                level=f.level,
                lo=support.lo,
                hi=support.hi,
                empty=support.empty,
                window_bound=support.window_bound,
                sharp_bound=support.sharp_bound,
                within_window=support.within_window,
                within_sharp_bound=support.within_sharp_bound,
                tail_mass=support.tail_mass,
                max_offdiag=offdiag,
            )
        )
    report = CascadeReportDocument(n=bank.n, genus=phi.genus, iterations=J, functions=entries)

    samples = format_csv(functions)
    if ctx.args.csv:
        with open(ctx.args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(samples)
        logger.info("Wrote %d samples to %s", len(phi.values), ctx.args.csv)
        _emit(dump_document(report), ctx.args.out)
    else:
        _emit(samples, ctx.args.out)
        for e in entries:
            logger.info("Support of %s: [%g, %g] (bound %g)", e.name, e.lo, e.hi, e.window_bound)
    if ctx.args.summary:
        _print_summary("cascade", [(e.name, f"[{e.lo:g}, {e.hi:g}] within bound: {e.within_window}") for e in entries])
    return 0


def cmd_random(ctx: Context) -> int:
    """Random certified loop from the seed (deterministic per seed)."""
    seed = ctx.args.seed if ctx.args.seed is not None else ctx.settings.seed
    loop = random_loop(np.random.default_rng(seed), ctx.args.n, ctx.args.genus, config=ctx.loop)
    _emit(dump_document(loop_to_document(loop)), ctx.args.out)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="Certification tolerance (overrides LOOPBANK_TOL)")
    common.add_argument("--out", default=None, help="Write the document here instead of stdout")
    common.add_argument("--no-verify", action="store_true", help="Skip diagnostic checks")
    common.add_argument("--summary", action="store_true", help="Print a summary table to stderr")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(prog="loopbank", description="Paraunitary filter banks and loops")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", parents=[common], help="Convert between loop and bank documents")
    p.add_argument("input", help="Document path or '-' for stdin")
    p.set_defaults(handler=cmd_transform)

    p = sub.add_parser("complete", parents=[common], help="Complete a low-pass filter to a bank")
    p.add_argument("input")
    p.add_argument("--n", type=int, default=None, help="Scale N (overrides the document)")
    p.set_defaults(handler=cmd_complete)

    p = sub.add_parser("factorize", parents=[common], help="Rank-one factorization of a loop")
    p.add_argument("input")
    p.set_defaults(handler=cmd_factorize)

    p = sub.add_parser("degree", parents=[common], help="McMillan degree of a loop")
    p.add_argument("input")
    p.set_defaults(handler=cmd_degree)

    p = sub.add_parser("analyze", parents=[common], help="Representation report for a loop")
    p.add_argument("input")
    p.add_argument("--against", default=None, help="Second loop for the intertwiner space")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("cascade", parents=[common], help="Sample scaling function and wavelets")
    p.add_argument("input")
    p.add_argument("--iterations", type=int, default=None)
    p.add_argument("--csv", default=None, help="Write samples here; the support report goes to stdout")
    p.set_defaults(handler=cmd_cascade)

    p = sub.add_parser("random", parents=[common], help="Random certified loop")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=cmd_random)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        ctx = Context(args, LoopbankSettings())
        return args.handler(ctx)
    except LoopbankError as e:
        logger.error("%s: %s", type(e).__name__, e)
        sys.stdout.write(dump_document(error_to_document(e)))
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
