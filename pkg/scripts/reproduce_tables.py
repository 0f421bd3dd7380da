#!/usr/bin/env python3
"""Reproduce the corner-size, spectrum, reducibility and reduction tables.

Usage:
    python scripts/reproduce_tables.py [--seed S] [--samples K]
"""

import argparse
import logging

import numpy as np

from loopbank.algebra.cpoly import MatPoly
from loopbank.algebra.loop import PolyLoop, certify_loop
from loopbank.algebra.sampling import (
    block_loop,
    random_genus_two,
    random_loop,
    random_unit_vector,
    random_unitary,
    reducible_genus_two,
)
from loopbank.cuntz.analysis import analyze, genus_two_spectrum, intertwiner_space
from loopbank.cuntz.corner import corner_isometries, corner_size, corner_size_oracle
from loopbank.cuntz.reduction import lambda0, reduce_scale
from loopbank.cuntz.sigma import multiset_distance, sigma_matrix, spectrum
from loopbank.filters.bank import check_qmf
from loopbank.filters.selection import cayley_like_u4, real_orthogonal_completion
from loopbank.observability.logging import configure_logging

logger = logging.getLogger("loopbank.scripts")


def _print_section(title: str) -> None:
    print(f"\n{'=' * 60}")
    print(f"  {title}")
    print(f"{'=' * 60}")


def _worked_loop(rows) -> PolyLoop:
    """Certified N = 2 loop from coefficient lists [[A0], [A1]]."""
    return certify_loop(MatPoly(np.array(rows, dtype=np.complex128)))


def corner_table() -> None:
    _print_section("Corner size r(N, g)")
    print("  N\\g " + "".join(f"{g:>4}" for g in range(1, 9)))
    mismatches = 0
    for n in range(2, 9):
        row = []
        for g in range(1, 9):
            r = corner_size(n, g)
            mismatches += r != corner_size_oracle(n, g)
            row.append(f"{r:>4}")
        print(f"  {n:>3} " + "".join(row))
    print(f"  Oracle mismatches: {mismatches}")


def genus_two_table(rng: np.random.Generator, samples: int) -> None:
    _print_section("Genus-two spectrum vs closed form")
    worst = 0.0
    for _ in range(samples):
        n = int(rng.integers(3, 7))
        _, _, loop = random_genus_two(rng, n)
        model = corner_isometries(loop)
        spec = spectrum(sigma_matrix(model, model))
        worst = max(worst, multiset_distance(spec.values, genus_two_spectrum(loop)))
    print(f"  Samples:            {samples}")
    print(f"  Max multiset gap:   {worst:.3e}")


def taxonomy_table(rng: np.random.Generator, samples: int) -> None:
    _print_section("Reducibility taxonomy (genus two)")
    for case in ("lambda0", "tail", "both"):
        for n in (3, 4):
            report = analyze(reducible_genus_two(rng, n, case))
            print(f"  {case:<8} N={n}: fixed dim {report.fixed_dim}, mult(1) {report.mult_one}")
    irreducible = sum(analyze(random_genus_two(rng, int(rng.integers(3, 7)))[2]).irreducible for _ in range(samples))
    print(f"  Generic: {irreducible}/{samples} irreducible")


def reduction_table(rng: np.random.Generator, samples: int) -> None:
    _print_section("lambda0 reduction round trip")
    worst_block = 0.0
    qmf_ok = 0
    for _ in range(samples):
        n = int(rng.integers(3, 6))
        inner = random_loop(rng, n - 1, int(rng.integers(1, 4)))
        reduction = reduce_scale(block_loop(random_unitary(rng, n), inner))
        worst_block = max(worst_block, reduction.block_residual)
        qmf_ok += check_qmf(reduction.reduced_bank).passed
    generic = [lambda0(random_loop(rng, int(rng.integers(3, 6)), 2)) for _ in range(samples)]
    print(f"  Block residual (max): {worst_block:.3e}")
    print(f"  Reduced banks QMF:    {qmf_ok}/{samples}")
    print(f"  Generic lambda0 max:  {max(generic):.6f}")


def worked_examples() -> None:
    _print_section("Worked N = 2 examples")
    diag = _worked_loop([[[1, 0], [0, 0]], [[0, 0], [0, 1]]])
    mirror = _worked_loop([[[0, 0], [0, 1]], [[1, 0], [0, 0]]])
    antidiag = _worked_loop([[[0, 1], [0, 0]], [[0, 0], [1, 0]]])
    for name, loop in (("diag(1,z)", diag), ("diag(z,1)", mirror), ("antidiag(1|z)", antidiag)):
        report = analyze(loop)
        states = ", ".join(f"k={s.k}" for s in report.cuntz_states) or "none"
        print(f"  {name:<14} lambda0={report.lambda0:.3f} fixed dim={report.fixed_dim} states: {states}")
    cross = intertwiner_space(diag, mirror)
    print(f"  diag(1,z) vs diag(z,1): E00 scalar {cross.e00_scalar.real:.3f}, E00 fixed {cross.e00_fixed}")


def counterexample_table(rng: np.random.Generator, samples: int) -> None:
    _print_section("Pointwise completions of unit 4-vectors")
    broken = 0
    worst_real = 0.0
    for _ in range(samples):
        u = cayley_like_u4(random_unit_vector(rng, 4))
        broken += np.linalg.norm(u @ u.conj().T - np.eye(4), 2) > 1e-3
        o = real_orthogonal_completion(random_unit_vector(rng, 4, real=True), 4)
        worst_real = max(worst_real, float(np.linalg.norm(o @ o.T - np.eye(4), 2)))
    print(f"  Complex samples not unitary: {broken}/{samples}")
    print(f"  Real completion defect (max): {worst_real:.3e}")


def main() -> None:
    parser = argparse.ArgumentParser(description="Reproduce loopbank tables")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--samples", type=int, default=100)
    parser.add_argument("--verbose", "-v", action="store_true")
    args = parser.parse_args()
    configure_logging(args.verbose)
    logging.getLogger("loopbank").setLevel(logging.DEBUG if args.verbose else logging.WARNING)

    rng = np.random.default_rng(args.seed)
    corner_table()
    genus_two_table(rng, args.samples)
    taxonomy_table(rng, args.samples)
    reduction_table(rng, max(1, args.samples // 2))
    worked_examples()
    counterexample_table(rng, 10 * args.samples)
    print(f"\n{'=' * 60}")


if __name__ == "__main__":
    main()
