"""Tests for row completion and low-pass completion."""

import numpy as np
import pytest

from loopbank.algebra.loop import matrix_unitarity_defect
from loopbank.algebra.sampling import random_lowpass_loop, random_unit_vector
from loopbank.errors import NotUnitVector, QMFConditionViolated, RowConditionViolated
from loopbank.filters.bank import FilterConfig, LowPassCandidate, check_lowpass, check_qmf, loop_to_filters
from loopbank.filters.completion import (
    RowData,
    complete_lowpass,
    complete_row,
    householder_completion,
    row_reduction_step,
)


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

SQRT3 = np.sqrt(3)
D4 = np.array([1 + SQRT3, 3 + SQRT3, 3 - SQRT3, 1 - SQRT3]) / (4 * np.sqrt(2))


def _random_lowpass(rng: np.random.Generator, n: int, g: int) -> LowPassCandidate:
    return LowPassCandidate(n=n, m0=loop_to_filters(random_lowpass_loop(rng, n, g)).filters[0])


# ===================================================================
# Row data
# ===================================================================

class TestRowData:
    """Relations sum_i <alpha_i, alpha_(i+j)> = delta_(j,0)."""

    def test_two_level_row_is_valid(self):
        s = 1 / np.sqrt(2)
        rows = RowData([[s, 0.0], [0.0, s]])
        assert np.allclose(rows.relation_residuals(), 0.0)
        rows.check(1e-12)

    def test_repeated_row_violates(self):
        rows = RowData([[1.0, 0.0], [1.0, 0.0]])
        with pytest.raises(RowConditionViolated) as exc_info:
            rows.check(1e-10)
        assert exc_info.value.j == 0
        assert exc_info.value.residual == pytest.approx(1.0)
        assert exc_info.value.reason == "row_condition"

    def test_single_vector_promoted(self):
        rows = RowData([0.6, 0.8])
        assert rows.genus == 1
        assert rows.n == 2

    def test_trimmed_drops_zero_rows(self):
        rows = RowData([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]).trimmed()
        assert rows.genus == 1

    def test_trimmed_keeps_one_row(self):
        assert RowData([[0.0, 0.0]]).trimmed().genus == 1

    def test_reduction_step_lowers_genus(self):
        rng = np.random.default_rng(0)
        loop = random_lowpass_loop(rng, 3, 3)
        rows = RowData(loop.body.coeffs[:, 0, :])
        reduced, p = row_reduction_step(rows)
        assert reduced.genus == rows.genus - 1
        assert np.allclose(p @ p, p)
        assert np.max(reduced.relation_residuals()) < 1e-10


# ===================================================================
# Householder completion
# ===================================================================

class TestHouseholderCompletion:
    """Constant rows."""

    def test_random_rows(self):
        rng = np.random.default_rng(1)
        for n in range(1, 7):
            row = random_unit_vector(rng, n)
            w = householder_completion(row)
            assert matrix_unitarity_defect(w) < 1e-12
            assert np.allclose(w[0], row)

    def test_standard_basis_row(self):
        w = householder_completion(np.array([1.0, 0.0, 0.0]))
        assert np.allclose(w, np.eye(3))

    def test_non_unit_rejected(self):
        with pytest.raises(NotUnitVector) as exc_info:
            householder_completion(np.array([1.0, 1.0]))
        assert exc_info.value.norm == pytest.approx(np.sqrt(2))


# ===================================================================
# Row completion
# ===================================================================

class TestCompleteRow:
    """Extension of a unitary first row to a loop."""

    def test_two_level_row(self):
        s = 1 / np.sqrt(2)
        loop = complete_row(RowData([[s, 0.0], [0.0, s]]))
        assert loop.genus == 2
        assert np.allclose(loop.coefficient(0)[0], [s, 0.0])
        assert np.allclose(loop.coefficient(1)[0], [0.0, s])

    def test_random_first_rows(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            n = int(rng.integers(2, 6))
            g = int(rng.integers(1, 5))
            source = random_lowpass_loop(rng, n, g)
            rows = RowData(source.body.coeffs[:, 0, :])
            loop = complete_row(rows)
            assert loop.genus <= g
            assert np.allclose(loop.body.padded(g)[:, 0, :], rows.rows, atol=1e-10)

    def test_invalid_rows(self):
        with pytest.raises(RowConditionViolated):
            complete_row(RowData([[1.0, 0.0], [1.0, 0.0]]))

    def test_row_tolerance_from_config(self):
        rows = RowData([[1.0 + 1e-7, 0.0]])
        with pytest.raises(RowConditionViolated):
            complete_row(rows, config=FilterConfig(row_tol=1e-9))


# ===================================================================
# Low-pass completion
# ===================================================================

class TestCompleteLowpass:
    """m0 -> quadrature mirror bank."""

    def test_haar(self):
        s = 1 / np.sqrt(2)
        bank = complete_lowpass(LowPassCandidate(n=2, m0=[s, s]))
        assert check_qmf(bank).passed
        assert np.allclose(np.abs(bank.filters[1]), [s, s])
        assert abs(bank.filters[1].sum()) < 1e-12

    def test_daubechies_four(self):
        candidate = LowPassCandidate(n=2, m0=D4)
        assert candidate.defect() < 1e-12
        bank = complete_lowpass(candidate)
        assert check_qmf(bank).passed
        assert check_lowpass(bank).passed
        assert max(bank.degrees()) <= 3

    def test_trivial_lowpass_completes_to_shift(self):
        bank = complete_lowpass(LowPassCandidate(n=2, m0=[1.0]))
        assert np.allclose(bank.filters[1], [0.0, 1.0])

    def test_non_qmf_candidate(self):
        with pytest.raises(QMFConditionViolated) as exc_info:
            complete_lowpass(LowPassCandidate(n=2, m0=[1.0, 1.0]))
        assert exc_info.value.defect == pytest.approx(2.0)

    def test_random_candidates(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            n = int(rng.integers(2, 6))
            g = int(rng.integers(1, 5))
            candidate = _random_lowpass(rng, n, g)
            bank = complete_lowpass(candidate)
            assert check_qmf(bank).max_defect < 1e-9
            assert np.array_equal(bank.filters[0], candidate.m0)
            assert max(bank.degrees()) <= n * g - 1
            assert check_lowpass(bank).passed
