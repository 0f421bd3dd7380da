"""Tests for filter banks and the filter <-> loop transform."""

import numpy as np
import pytest

from loopbank.algebra.sampling import random_loop
from loopbank.errors import NonUnitary, ShapeMismatch
from loopbank.filters.bank import (
    FilterBank,
    LowPassCandidate,
    basic_bank,
    check_lowpass,
    check_qmf,
    filters_to_loop,
    genus_for,
    loop_to_filters,
    modulation_matrix,
)


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _haar_bank() -> FilterBank:
    s = 1 / np.sqrt(2)
    return FilterBank(n=2, filters=([s, s], [s, -s]))


# ===================================================================
# Construction
# ===================================================================

class TestFilterBank:
    """Shape validation and derived degrees."""

    def test_filter_count_must_match_scale(self):
        with pytest.raises(ShapeMismatch) as exc_info:
            FilterBank(n=3, filters=([1.0], [0.0, 1.0]))
        assert exc_info.value.context["filters"] == 2

    def test_empty_filter_rejected(self):
        with pytest.raises(ShapeMismatch):
            FilterBank(n=1, filters=([],))

    def test_degrees_ignore_trailing_zeros(self):
        bank = FilterBank(n=2, filters=([1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]))
        assert bank.degrees() == [0, 3]
        assert bank.genus == 2

    def test_genus_for(self):
        assert genus_for(2, 0) == 1
        assert genus_for(2, 1) == 1
        assert genus_for(2, 2) == 2
        assert genus_for(3, 5) == 2

    def test_candidate_rejects_bad_scale(self):
        with pytest.raises(ShapeMismatch):
            LowPassCandidate(n=0, m0=[1.0])


# ===================================================================
# Transform
# ===================================================================

class TestTransform:
    """Index shuffling between filters and loop coefficients."""

    def test_haar_is_constant_loop(self):
        loop = filters_to_loop(_haar_bank())
        assert loop.degree == 0
        assert np.allclose(loop.coefficient(0), np.array([[1, 1], [1, -1]]) / np.sqrt(2))

    def test_shuffle_positions(self):
        # m_1 = z^3 at N = 2 lands in A_(1,1)^(1)
        loop = filters_to_loop(FilterBank(n=2, filters=([1.0], [0.0, 0.0, 0.0, 1.0])))
        assert loop.genus == 2
        assert loop.coefficient(0)[0, 0] == 1.0
        assert loop.coefficient(1)[1, 1] == 1.0

    def test_basic_bank_is_identity(self):
        for n in (1, 2, 5):
            loop = filters_to_loop(basic_bank(n))
            assert np.array_equal(loop.coefficient(0), np.eye(n))

    def test_non_qmf_bank_rejected(self):
        with pytest.raises(NonUnitary):
            filters_to_loop(FilterBank(n=2, filters=([1.0, 1.0], [1.0, -1.0])))

    def test_round_trip_is_exact(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            n = int(rng.integers(2, 7))
            g = int(rng.integers(1, 6))
            loop = random_loop(rng, n, g)
            bank = loop_to_filters(loop)
            assert all(len(f) == n * loop.genus for f in bank.filters)
            again = filters_to_loop(bank)
            assert np.array_equal(again.body.coeffs, loop.body.coeffs)


# ===================================================================
# Diagnostics
# ===================================================================

class TestModulationMatrix:
    """M(z) = (1/sqrt(N)) [m_i(rho^k z)]."""

    def test_haar_at_one(self):
        m = modulation_matrix(_haar_bank(), [1.0])
        assert np.allclose(m[0], np.eye(2))

    def test_unitary_for_random_bank(self):
        rng = np.random.default_rng(1)
        bank = loop_to_filters(random_loop(rng, 3, 3))
        points = np.exp(1j * rng.uniform(0, 2 * np.pi, 8))
        m = modulation_matrix(bank, points)
        gram = m @ np.conj(np.transpose(m, (0, 2, 1)))
        assert np.allclose(gram, np.eye(3), atol=1e-12)


class TestCheckQmf:
    """Unitarity of the modulation matrix."""

    def test_haar_passes(self):
        report = check_qmf(_haar_bank())
        assert report.passed
        assert report.max_defect < 1e-14

    def test_unnormalized_fails(self):
        report = check_qmf(FilterBank(n=2, filters=([1.0, 1.0], [1.0, -1.0])))
        assert not report.passed
        assert report.max_defect == pytest.approx(1.0)

    def test_tolerance_override(self):
        report = check_qmf(_haar_bank(), tol=0.0)
        assert report.tol == 0.0


class TestCheckLowpass:
    """m0(1) = sqrt(N) against the row condition."""

    def test_haar_passes(self):
        report = check_lowpass(_haar_bank())
        assert report.passed
        assert report.agree

    def test_basic_bank_fails_both(self):
        report = check_lowpass(basic_bank(2))
        assert not report.passed
        assert report.agree
        assert report.m0_defect == pytest.approx(np.sqrt(2) - 1)

    def test_disagreement_flags_non_qmf_candidate(self):
        report = check_lowpass(LowPassCandidate(n=2, m0=[np.sqrt(2), 0.0]))
        assert report.m0_defect < 1e-15
        assert report.row_defect > 0.5
        assert not report.agree
        assert not report.passed

    def test_candidate_defect(self):
        s = 1 / np.sqrt(2)
        assert LowPassCandidate(n=2, m0=[s, s]).defect() < 1e-14
        assert LowPassCandidate(n=2, m0=[1.0, 1.0]).defect() == pytest.approx(2.0)
