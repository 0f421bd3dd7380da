"""Tests for the corner subspace and the compressed isometries."""

import numpy as np
import pytest

from loopbank.algebra.cpoly import MatPoly
from loopbank.algebra.loop import certify_loop
from loopbank.algebra.sampling import random_loop
from loopbank.cuntz.corner import (
    corner_isometries,
    corner_size,
    corner_size_oracle,
    word_completeness_defect,
    word_isometries,
)
from loopbank.errors import ShapeMismatch


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _loop(rows):
    return certify_loop(MatPoly(np.array(rows, dtype=np.complex128)))


DIAG = [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]
ANTIDIAG = [[[0, 1], [0, 0]], [[0, 0], [1, 0]]]


# ===================================================================
# Corner size
# ===================================================================

class TestCornerSize:
    """r = g + floor((g - 1) / (N - 1))."""

    @pytest.mark.parametrize(
        "n, g, expected",
        [(2, 1, 1), (2, 2, 3), (3, 2, 2), (5, 2, 2), (8, 2, 2), (3, 4, 5), (4, 1, 1)],
    )
    def test_values(self, n, g, expected):
        assert corner_size(n, g) == expected

    def test_agrees_with_oracle(self):
        for n in range(2, 9):
            for g in range(1, 9):
                assert corner_size(n, g) == corner_size_oracle(n, g), (n, g)

    def test_rejects_scale_one(self):
        with pytest.raises(ShapeMismatch):
            corner_size(1, 2)
        with pytest.raises(ShapeMismatch):
            corner_size_oracle(2, 0)


# ===================================================================
# Compressed isometries
# ===================================================================

class TestCornerIsometries:
    """V_i* on e_0, e_-1, ..., e_-r."""

    def test_identity_loop(self):
        model = corner_isometries(certify_loop(MatPoly.identity(2)))
        assert model.dim == 2
        assert model.adjoints[0][0, 0] == 1
        assert model.adjoints[1][1, 1] == 1
        assert np.count_nonzero(model.adjoints) == 2

    def test_diag_entries(self):
        model = corner_isometries(_loop(DIAG))
        assert model.r == 3
        expected = np.zeros((2, 4, 4))
        expected[0][0, 0] = 1
        expected[0][1, 2] = 1
        expected[1][2, 1] = 1
        expected[1][3, 3] = 1
        assert np.array_equal(model.adjoints, expected)

    def test_antidiag_entries(self):
        model = corner_isometries(_loop(ANTIDIAG))
        expected = np.zeros((2, 4, 4))
        expected[1][1, 0] = 1
        expected[0][1, 1] = 1
        expected[1][2, 2] = 1
        expected[0][2, 3] = 1
        assert np.array_equal(model.adjoints, expected)

    def test_v_mats_are_adjoints(self):
        model = corner_isometries(random_loop(np.random.default_rng(0), 3, 2))
        for i in range(3):
            assert np.allclose(model.v_mats[i], model.adjoints[i].conj().T)

    def test_random_loops_are_isometric(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            n = int(rng.integers(2, 6))
            g = int(rng.integers(1, 5))
            model = corner_isometries(random_loop(rng, n, g))
            assert model.r == corner_size(n, g)
            assert model.isometry_defect() < 1e-10

    def test_padded_genus(self):
        loop = certify_loop(MatPoly.identity(2))
        model = corner_isometries(loop, genus=2)
        assert model.dim == 4
        assert model.isometry_defect() < 1e-12

    def test_genus_below_loop_rejected(self):
        loop = random_loop(np.random.default_rng(2), 2, 3)
        with pytest.raises(ShapeMismatch):
            corner_isometries(loop, genus=2)


# ===================================================================
# Words
# ===================================================================

class TestWords:
    """Products V_I over words of fixed length."""

    def test_word_count(self):
        model = corner_isometries(random_loop(np.random.default_rng(3), 3, 2))
        assert len(word_isometries(model, 2)) == 9
        assert np.allclose(word_isometries(model, 0)[()], np.eye(model.dim))

    def test_ranges_tile_corner(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            model = corner_isometries(random_loop(rng, int(rng.integers(2, 5)), int(rng.integers(1, 4))))
            for length in (1, 2, 3):
                assert word_completeness_defect(model, length) < 1e-10
