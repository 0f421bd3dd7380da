"""Tests for the representation analysis."""

import numpy as np
import pytest

from loopbank.algebra.cpoly import MatPoly
from loopbank.algebra.loop import certify_loop
from loopbank.algebra.sampling import (
    random_genus_two,
    random_loop,
    random_projection,
    random_unit_vector,
    reducible_genus_two,
)
from loopbank.cuntz.analysis import (
    analyze,
    cuntz_states,
    fixed_set_flags,
    genus_two_eigenvectors,
    genus_two_reducible,
    genus_two_spectrum,
    intertwiner_space,
    minimal_projections,
    projection_entry,
)
from loopbank.cuntz.corner import corner_isometries
from loopbank.cuntz.sigma import multiset_distance, sigma_matrix, span_residual, spectrum
from loopbank.errors import ScaleMismatch
from loopbank.observability.logging import LoggingObserver


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _loop(rows):
    return certify_loop(MatPoly(np.array(rows, dtype=np.complex128)))


def _diag():
    return _loop([[[1, 0], [0, 0]], [[0, 0], [0, 1]]])


def _mirror():
    return _loop([[[0, 0], [0, 1]], [[1, 0], [0, 0]]])


def _antidiag():
    return _loop([[[0, 1], [0, 0]], [[0, 0], [1, 0]]])


def _diag_matrix(*entries) -> np.ndarray:
    return np.diag(np.array(entries, dtype=np.complex128))


def _in_span(basis, x, tol=1e-8) -> bool:
    return span_residual(basis, x) <= tol


def _sine(x, y) -> float:
    """Sine of the angle between two vectors, up to phase."""
    x = np.asarray(x).reshape(-1) / np.linalg.norm(x)
    y = np.asarray(y).reshape(-1) / np.linalg.norm(y)
    return float(np.linalg.norm(y - np.vdot(x, y) * x))


def _rank_one_projections_diagonal(report) -> bool:
    rank_one = [p for p in report.minimal_projections if p.rank == 1]
    return bool(rank_one) and all(p.diagonal for p in rank_one)


# ===================================================================
# Worked N = 2 examples
# ===================================================================

class TestDiagLoop:
    """A = diag(1, z)."""

    def test_report(self):
        report = analyze(_diag())
        assert report.r == 3
        assert report.lambda0 == pytest.approx(1.0)
        assert not report.irreducible
        assert report.fixed_dim == 3
        assert report.fixed_set_algebra
        assert report.fixed_set_abelian

    def test_fixed_span(self):
        basis = analyze(_diag()).fixed_basis
        assert _in_span(basis, _diag_matrix(1, 0, 0, 0))
        assert _in_span(basis, _diag_matrix(0, 1, 1, 0))
        assert _in_span(basis, _diag_matrix(0, 0, 0, 1))

    def test_minimal_projections(self):
        report = analyze(_diag())
        assert report.decomposition_resolved
        assert [p.rank for p in report.minimal_projections] == [1, 2, 1]
        assert [p.cyclic_indices for p in report.minimal_projections] == [[0], [1, 2], [3]]
        assert all(p.diagonal for p in report.minimal_projections)
        assert np.array_equal(report.summand_fixed_dims, np.eye(3, dtype=int))

    def test_cuntz_states(self):
        states = cuntz_states(_diag())
        assert [s.k for s in states] == [0, 3]
        assert np.allclose(states[0].v, [1, 0])
        assert np.allclose(states[1].v, [0, 1])
        assert all(s.filter_residual < 1e-12 for s in states)

    def test_reduction(self):
        reduction = analyze(_diag()).reduction
        assert reduction is not None
        assert all(reduction.conditions.values())


class TestAntidiagLoop:
    """A = [[0, 1], [z, 0]]."""

    def test_report(self):
        report = analyze(_antidiag())
        assert report.lambda0 == 0.0
        assert report.reduction is None
        assert report.fixed_dim == 2
        assert _in_span(report.fixed_basis, _diag_matrix(1, 1, 0, 0))
        assert _in_span(report.fixed_basis, _diag_matrix(0, 0, 1, 1))

    def test_summands_are_disjoint(self):
        report = analyze(_antidiag())
        assert [p.cyclic_indices for p in report.minimal_projections] == [[0, 1], [2, 3]]
        assert np.array_equal(report.summand_fixed_dims, np.eye(2, dtype=int))

    def test_cuntz_states(self):
        states = cuntz_states(_antidiag())
        assert [s.k for s in states] == [1, 2]
        assert np.allclose(states[0].v, [1, 0])
        assert np.allclose(states[1].v, [0, 1])

    def test_self_intertwiners(self):
        report = intertwiner_space(_antidiag(), _antidiag())
        assert report.dimension == 2
        assert not report.disjoint


class TestIdentityLoop:
    """A = 1, genus one."""

    def test_fixed_diagonals(self):
        report = analyze(certify_loop(MatPoly.identity(2)))
        assert report.r == 1
        assert report.fixed_dim == 2
        assert [s.k for s in report.cuntz_states] == [0, 1]


# ===================================================================
# Intertwiners
# ===================================================================

class TestIntertwinerSpace:
    """Fixed points of sigma between two loops."""

    def test_diag_against_mirror(self):
        report = intertwiner_space(_mirror(), _diag())
        assert report.e00_scalar == 0
        assert not report.e00_fixed
        assert report.consistent
        assert report.genus == 2

    def test_e00_fixed_for_shared_first_column(self):
        report = intertwiner_space(_diag(), certify_loop(MatPoly.identity(2)))
        assert report.e00_scalar == 1
        assert report.e00_fixed
        assert report.consistent
        assert report.dimension >= 1

    def test_generic_pair_is_disjoint(self):
        rng = np.random.default_rng(0)
        report = intertwiner_space(random_loop(rng, 3, 2), random_loop(rng, 3, 2))
        assert report.disjoint
        assert report.dimension == 0

    def test_padding_grows_corner(self):
        assert intertwiner_space(_diag(), _diag(), padding=1).genus == 3

    @pytest.mark.parametrize("make, dimension", [(_diag, 3), (_antidiag, 2)])
    def test_dimension_independent_of_padding(self, make, dimension):
        dims = [intertwiner_space(make(), make(), padding=p).dimension for p in range(3)]
        assert dims == [dimension] * 3

    def test_scale_mismatch(self):
        rng = np.random.default_rng(1)
        with pytest.raises(ScaleMismatch):
            intertwiner_space(random_loop(rng, 2, 2), random_loop(rng, 3, 2))


# ===================================================================
# Genus two closed forms
# ===================================================================

class TestGenusTwoSpectrum:
    """Spectrum and eigenvectors for V (1 - Q + zQ), N >= 3."""

    def test_spectrum_matches_closed_form(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            n = int(rng.integers(3, 7))
            _, _, loop = random_genus_two(rng, n)
            model = corner_isometries(loop)
            eigs = spectrum(sigma_matrix(model, model))
            assert len(eigs.values) == 9
            assert multiset_distance(eigs.values, genus_two_spectrum(loop)) < 1e-8

    def test_eigenvector_directions(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            n = int(rng.integers(3, 7))
            _, _, loop = random_genus_two(rng, n)
            model = corner_isometries(loop)
            eigs = spectrum(sigma_matrix(model, model))
            for label, (value, x) in genus_two_eigenvectors(loop).items():
                computed = eigs.eigenvector_near(value).reshape(3, 3)
                if label == "lambda_diff":
                    assert _sine(np.diag(x), np.diag(computed)) < 1e-6
                else:
                    assert _sine(x, computed) < 1e-6

    def test_lambda0_eigenvector(self):
        rng = np.random.default_rng(3)
        _, _, loop = random_genus_two(rng, 4)
        model = corner_isometries(loop)
        S = sigma_matrix(model, model)
        value, x = genus_two_eigenvectors(loop)["lambda0"]
        assert np.allclose(S.apply(x), value * x, atol=1e-10)

    @pytest.mark.parametrize("label", ["lambda_n1_0", "lambda_0_n1"])
    def test_off_diagonal_eigenvectors(self, label):
        rng = np.random.default_rng(4)
        for n in (3, 4, 5):
            _, _, loop = random_genus_two(rng, n)
            model = corner_isometries(loop)
            S = sigma_matrix(model, model)
            value, x = genus_two_eigenvectors(loop)[label]
            assert np.allclose(S.apply(x), value * x, atol=1e-10)

    def test_difference_eigenvector_diagonal(self):
        rng = np.random.default_rng(5)
        _, _, loop = random_genus_two(rng, 4)
        model = corner_isometries(loop)
        S = sigma_matrix(model, model)
        value, x = genus_two_eigenvectors(loop)["lambda_diff"]
        assert np.allclose(np.diag(S.apply(x)), value * np.diag(x), atol=1e-10)

    def test_identity_eigenvector(self):
        _, _, loop = random_genus_two(np.random.default_rng(6), 3)
        model = corner_isometries(loop)
        value, x = genus_two_eigenvectors(loop)["one"]
        assert np.allclose(sigma_matrix(model, model).apply(x), x, atol=1e-10)


class TestReducibilityTaxonomy:
    """Fixed-point spans on the reducible genus-two strata."""

    @pytest.mark.parametrize("n", [3, 4])
    def test_lambda0_stratum(self, n):
        report = analyze(reducible_genus_two(np.random.default_rng(n), n, "lambda0"))
        assert report.fixed_dim == 2
        assert _in_span(report.fixed_basis, _diag_matrix(1, 0, 0))
        assert _in_span(report.fixed_basis, _diag_matrix(0, 1, 1))
        assert report.genus_two_reducible
        assert _rank_one_projections_diagonal(report)

    @pytest.mark.parametrize("n", [3, 4])
    def test_tail_stratum(self, n):
        report = analyze(reducible_genus_two(np.random.default_rng(10 + n), n, "tail"))
        assert report.fixed_dim == 2
        assert _in_span(report.fixed_basis, _diag_matrix(1, 1, 0))
        assert _in_span(report.fixed_basis, _diag_matrix(0, 0, 1))
        assert report.genus_two_reducible
        assert _rank_one_projections_diagonal(report)

    def test_both(self):
        report = analyze(reducible_genus_two(np.random.default_rng(20), 3, "both"))
        assert report.fixed_dim == 3
        for k in range(3):
            e = np.zeros(3)
            e[k] = 1
            assert _in_span(report.fixed_basis, np.diag(e))
        assert _rank_one_projections_diagonal(report)

    def test_generic_is_irreducible(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            _, _, loop = random_genus_two(rng, int(rng.integers(3, 7)))
            report = analyze(loop)
            assert report.irreducible
            assert report.mult_one == 1
            assert report.genus_two_reducible is False

    def test_predicate_on_projections(self):
        rng = np.random.default_rng(22)
        _, _, loop = random_genus_two(rng, 4)
        assert not genus_two_reducible(loop)


# ===================================================================
# Fixed-set structure and projection bound
# ===================================================================

class TestFixedSetStructure:
    """Algebra flags and minimal projections."""

    def test_non_algebra(self):
        e01 = np.zeros((2, 2))
        e01[0, 1] = 1
        algebra, abelian = fixed_set_flags([e01], 1e-8)
        assert not algebra

    def test_diagonal_algebra(self):
        basis = [_diag_matrix(1, 0), _diag_matrix(0, 1)]
        assert fixed_set_flags(basis, 1e-8) == (True, True)
        projections = minimal_projections(basis)
        assert [p.cyclic_indices for p in projections] == [[0], [1]]

    def test_scalars_give_one_projection(self):
        projections = minimal_projections([np.eye(3) / np.sqrt(3)])
        assert len(projections) == 1
        assert projections[0].rank == 3


class TestProjectionBound:
    """|<u, P v>| <= 1/2 for orthonormal u, v."""

    def test_random_samples(self):
        rng = np.random.default_rng(23)
        worst = 0.0
        for _ in range(10_000):
            n = int(rng.integers(2, 6))
            p = random_projection(rng, n, int(rng.integers(1, n)))
            u = random_unit_vector(rng, n)
            v = random_unit_vector(rng, n)
            v = v - np.vdot(u, v) * u
            v = v / np.linalg.norm(v)
            worst = max(worst, projection_entry(p, u, v))
        assert worst <= 0.5 + 1e-12

    def test_extremal_example(self):
        p = np.full((2, 2), 0.5)
        assert projection_entry(p, np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.5


# ===================================================================
# Observer
# ===================================================================

class TestAnalyzeObserver:
    """Stage reporting."""

    def test_stages_recorded(self):
        observer = LoggingObserver()
        analyze(_diag(), observer=observer)
        assert [r.component for r in observer.records] == [
            "corner",
            "spectrum",
            "fixed_points",
            "decomposition",
            "cuntz_states",
            "reduction",
        ]
        assert all(r.error is None for r in observer.records)
        assert observer.total_ms() >= 0.0
