"""Tests for the staggered layout, the local and global divergence solvers and the weighted norms."""

import numpy as np
import pytest
from scipy import linalg, sparse
from scipy.sparse.linalg import aslinearoperator

from hardydiv.core.errors import (
    ConfigurationError,
    ConvergenceError,
    InvariantViolationError,
    PreconditionError,
    ShapeError,
)
from hardydiv.decomposition.grid import CompositeGrid, GridFunction
from hardydiv.decomposition.library import bump, dipole
from hardydiv.solver import (
    StaggeredField,
    assemble,
    get_layout,
    global_solve,
    hardy_constant_upper,
    local_solve,
    main_bound,
    schur_pcg,
    verify_assembly,
    weighted_gradient_energy,
    weighted_l2_squared,
    weighted_norms,
)
from hardydiv.solver.local import patch_operator
from hardydiv.weights.catalog import log_power_weight, power_weight


def random_rhs_on_strip(grid, i, seed):
    """Random g supported on the active cells of Omega_i with zero integral."""
    rng = np.random.default_rng(seed)
    inside = grid.subdomain_mask(i) & (grid.areas > 0.0)
    values = np.where(inside, rng.normal(size=grid.n_cells), 0.0)
    values[inside] -= np.sum(values * grid.areas) / np.sum(grid.areas[inside])
    return GridFunction(grid, values)


def local_circulation(op, seed_cell, n_faces):
    """
    Divergence-free face field built around one cell of the patch.

    Takes the free faces whose cells all lie within two face-steps of the
    seed cell; any null vector of B on those columns is divergence free on
    the whole grid and vanishes on every other face.
    """
    B = op.B.tocsc()
    cells = {seed_cell}
    for _ in range(2):
        faces = np.unique(op.B[sorted(cells)].indices)
        cells |= set(np.unique(B[:, faces].indices).tolist())
    columns = [
        j for j in range(B.shape[1])
        if B.indptr[j + 1] > B.indptr[j] and set(B.indices[B.indptr[j]:B.indptr[j + 1]]) <= cells
    ]
    rows = sorted(cells)
    kernel = linalg.null_space(B[rows][:, columns].toarray())
    assert kernel.shape[1] > 0
    w = np.zeros(n_faces)
    w[np.flatnonzero(op.free)[columns]] = kernel[:, 0]
    return w


class TestStaggeredLayout:
    """Tests for the face layout and its divergence operator."""

    def test_interior_fields_have_zero_total_divergence(self, small_grid):
        """Test that fluxes through interior faces cancel over the whole grid."""
        layout = get_layout(small_grid)
        free = layout.free_faces()
        rng = np.random.default_rng(0)
        values = np.where(free, rng.normal(size=layout.n_faces), 0.0)
        total = StaggeredField(layout, values).divergence_mass().sum()
        assert abs(total) <= 1e-13 * np.abs(values).sum()

    def test_layout_is_shared(self, small_grid):
        """Test that one grid geometry maps to one layout."""
        twin = CompositeGrid.for_subdomains(2.0, 3, 8)
        assert get_layout(small_grid) is get_layout(twin)

    def test_wrong_face_count(self, small_grid):
        """Test that a field with the wrong length is a shape error."""
        layout = get_layout(small_grid)
        with pytest.raises(ShapeError):
            StaggeredField(layout, np.zeros(layout.n_faces + 2))

    def test_energy_is_quadratic(self, small_grid):
        """Test energy(2 v) = 4 energy(v)."""
        layout = get_layout(small_grid)
        rng = np.random.default_rng(1)
        field = StaggeredField(layout, rng.normal(size=layout.n_faces))
        assert (field * 2.0).energy() == pytest.approx(4.0 * field.energy(), rel=1e-13)

    def test_to_frame_columns(self, small_grid):
        """Test the export table layout."""
        frame = StaggeredField.zeros(get_layout(small_grid)).to_frame()
        assert list(frame.columns) == ["component", "x", "y", "value"]
        assert set(frame["component"]).issubset({"u1", "u2"})


class TestLocalSolve:
    """Tests for the minimal-energy solve on one strip."""

    def test_zero_rhs(self, small_grid):
        """Test that g = 0 returns the zero field without iterating."""
        field, report = local_solve(GridFunction.zeros(small_grid), 1)
        assert not np.any(field.values)
        assert report.iterations == 0
        assert report.div_residual_rel == 0.0

    def test_bump_in_first_strip(self, bump0_f):
        """Test residual, zero trace and the star-shape constant on Omega_0."""
        field, report = local_solve(bump0_f, 0, tol=1e-10)
        op = patch_operator(get_layout(bump0_f.grid), 0)
        assert report.div_residual_rel <= 1e-8
        assert field.trace_max(op.free) == 0.0
        assert report.iterations > 0
        assert 0.0 < report.local_ratio <= report.cd_bound
        assert report.accepted

    def test_divergence_matches_rhs(self, bump0_f):
        """Test B v = g area on the patch cells."""
        field, _ = local_solve(bump0_f, 0, tol=1e-10)
        grid = bump0_f.grid
        target = bump0_f.values * grid.areas
        np.testing.assert_allclose(
            field.divergence_mass(), target, rtol=0.0, atol=1e-8 * np.abs(target).max()
        )

    def test_inner_solvers_agree(self, bump0_f):
        """Test the direct and the CG inner solves give the same field."""
        direct, _ = local_solve(bump0_f, 0, tol=1e-9, inner="direct")
        iterative, _ = local_solve(bump0_f, 0, tol=1e-9, inner="cg", inner_tol=1e-12)
        scale = np.abs(direct.values).max()
        np.testing.assert_allclose(iterative.values, direct.values, rtol=0.0, atol=1e-4 * scale)

    def test_energy_not_above_other_solutions(self, small_grid):
        """Test v + w has no less energy than v for divergence-free w with zero trace."""
        f = bump(small_grid, 0)
        field, _ = local_solve(f, 0, tol=1e-10)
        layout = get_layout(small_grid)
        op = patch_operator(layout, 0)
        kernel = linalg.null_space(op.B.toarray())
        assert kernel.shape[1] > 0
        rng = np.random.default_rng(4)
        scale = np.abs(field.values).max()
        base = field.energy()
        for _ in range(5):
            w = np.zeros(layout.n_faces)
            w[op.free] = kernel @ rng.normal(size=kernel.shape[1])
            w *= 0.1 * scale / np.abs(w).max()
            other = field + StaggeredField(layout, w)
            np.testing.assert_allclose(
                other.divergence_mass(), field.divergence_mass(), rtol=0.0, atol=1e-10 * scale
            )
            assert other.energy() >= base * (1.0 - 1e-8)

    @pytest.mark.slow
    def test_random_rhs_on_second_strip(self):
        """Test 20 random right-hand sides on Omega_2 at 64 x 64 cells against hand-built feasible fields."""
        grid = CompositeGrid.for_subdomains(2.0, 3, 64)
        layout = get_layout(grid)
        op = patch_operator(layout, 2)
        cx, cy = grid.centroids
        centre = np.array([cx[op.cells].mean(), cy[op.cells].mean()])
        order = np.argsort(np.hypot(cx[op.cells] - centre[0], cy[op.cells] - centre[1]))
        circulations = [local_circulation(op, int(order[k]), layout.n_faces) for k in (0, 25, 50)]
        for seed in range(20):
            g = random_rhs_on_strip(grid, 2, seed)
            field, report = local_solve(g, 2, tol=1e-10)
            assert report.div_residual_rel <= 1e-8
            assert field.trace_max(op.free) == 0.0
            assert report.local_ratio <= report.cd_bound
            scale = np.abs(field.values).max()
            base = field.energy()
            for w in circulations:
                other = field + StaggeredField(layout, w * (0.1 * scale / np.abs(w).max()))
                np.testing.assert_allclose(
                    other.divergence_mass(), field.divergence_mass(), rtol=0.0, atol=1e-10 * scale
                )
                assert other.trace_max(op.free) == 0.0
                assert other.energy() > base

    def test_unknown_inner_solver(self, bump0_f):
        """Test that an unknown inner solver is a configuration error."""
        with pytest.raises(ConfigurationError):
            local_solve(bump0_f, 0, inner="multigrid")

    def test_rhs_outside_strip(self, dipole_f):
        """Test that g supported outside Omega_0 is rejected."""
        with pytest.raises(PreconditionError):
            local_solve(dipole_f, 0)

    def test_nonzero_mean(self, small_grid):
        """Test that g with nonzero mean on the strip is rejected."""
        values = np.where(small_grid.subdomain_mask(1), 1.0, 0.0)
        with pytest.raises(PreconditionError) as exc:
            local_solve(GridFunction(small_grid, values), 1)
        assert exc.value.integral > 0.0


class TestSchurPCG:
    """Tests for the mean-free preconditioned CG."""

    @staticmethod
    def laplacian(n):
        main = np.full(n, 2.0)
        main[[0, -1]] = 1.0
        return sparse.diags([-np.ones(n - 1), main, -np.ones(n - 1)], [-1, 0, 1]).tocsr()

    def test_singular_path_laplacian(self):
        """Test S x = b on the graph Laplacian whose kernel is the constants."""
        S = aslinearoperator(self.laplacian(30))
        b = np.sin(np.linspace(0.0, 3.0, 30))
        b -= b.mean()
        x, history = schur_pcg(S, b, np.full(30, 0.5), tol=1e-12, max_iter=200, stagnation_window=50)
        np.testing.assert_allclose(S.matvec(x), b, atol=1e-10)
        assert history[0] == 1.0
        assert history[-1] <= 1e-12

    def test_zero_rhs(self):
        """Test b = 0 returns x = 0."""
        S = aslinearoperator(self.laplacian(5))
        x, history = schur_pcg(S, np.zeros(5), np.ones(5), tol=1e-10, max_iter=10, stagnation_window=5)
        assert not np.any(x)
        assert history == [0.0]

    def test_iteration_limit(self):
        """Test that running out of iterations raises with the residual history."""
        S = aslinearoperator(self.laplacian(200))
        b = np.zeros(200)
        b[0], b[-1] = 1.0, -1.0
        with pytest.raises(ConvergenceError) as exc:
            schur_pcg(S, b, np.ones(200), tol=1e-14, max_iter=3, stagnation_window=50)
        assert len(exc.value.residuals) == 4


class TestGlobalSolve:
    """Tests for decomposition, local solves and assembly."""

    def test_dipole(self, dipole_f):
        """Test div u = f for mass moved through every strip."""
        solution, report = global_solve(dipole_f, tol=1e-10)
        assert report is None
        assert solution.div_residual_rel <= 1e-8
        assert len(solution.local_reports) == dipole_f.grid.n_columns - 1
        summed = solution.local_fields[0]
        for piece in solution.local_fields[1:]:
            summed = summed + piece
        np.testing.assert_allclose(solution.u.values, summed.values, rtol=1e-14, atol=0.0)

    def test_weighted_report(self, dipole_f, unit_weight):
        """Test that the weighted ratio respects the main bound."""
        _, report = global_solve(dipole_f, unit_weight, n=2000)
        assert report is not None
        assert report.global_ratio <= report.main_bound
        assert report.accepted

    def test_single_strip_equals_local_solve(self, bump0_f):
        """Test f inside Omega_0 gives u = v_0."""
        solution, _ = global_solve(bump0_f, tol=1e-10)
        local, _ = local_solve(bump0_f, 0, tol=1e-10)
        scale = np.abs(local.values).max()
        np.testing.assert_allclose(solution.u.values, local.values, rtol=0.0, atol=1e-9 * scale)

    @pytest.mark.parametrize("alpha", [-2.0, 0.5, 3.0])
    def test_linear_in_the_data(self, dipole_f, alpha):
        """Test global_solve(alpha f) = alpha global_solve(f)."""
        base, _ = global_solve(dipole_f, tol=1e-10)
        scaled, _ = global_solve(dipole_f * alpha, tol=1e-10)
        scale = np.abs(base.u.values).max()
        np.testing.assert_allclose(
            scaled.u.values, alpha * base.u.values, rtol=0.0, atol=1e-8 * abs(alpha) * scale
        )
        assert scaled.div_residual_rel <= 1e-8

    def test_gamma_mismatch(self, dipole_f):
        """Test that a gamma different from the grid's is a shape error."""
        with pytest.raises(ShapeError):
            global_solve(dipole_f, gamma=3.0)

    def test_convex_cusp(self, convex_grid):
        """Test gamma = 1."""
        solution, _ = global_solve(dipole(convex_grid), tol=1e-10)
        assert solution.div_residual_rel <= 1e-8

    @pytest.mark.slow
    @pytest.mark.parametrize("gamma", [1.0, 2.0, 3.0])
    def test_acceptance_size(self, gamma):
        """Test six strips at 64 x 64 cells per strip."""
        grid = CompositeGrid.for_subdomains(gamma, 6, 64)
        solution, report = global_solve(dipole(grid), power_weight(0.0), tol=1e-10, n=10_000)
        assert solution.div_residual_rel <= 1e-8
        assert report.global_ratio <= report.main_bound


@pytest.mark.slow
class TestPowerWeightSweep:
    """One global solve evaluated across the power weights of the reproduction sweep."""

    @pytest.mark.parametrize(
        "gamma, betas", [(1.0, [0.0, -0.5, -0.9]), (2.0, [0.0, -1.0, -1.4])]
    )
    def test_global_ratio_below_main_bound(self, gamma, betas):
        """Test global_ratio <= gamma^2 2^{12+4 gamma} C_omega^8 C_H^2 at N = 1e5."""
        grid = CompositeGrid.for_subdomains(gamma, 6, 64)
        solution, _ = global_solve(dipole(grid), tol=1e-10)
        assert solution.div_residual_rel <= 1e-8
        for beta in betas:
            report = solution.evaluate(power_weight(beta), 100_000)
            assert 0.0 < report.global_ratio <= report.main_bound
            assert report.accepted


class TestAssembly:
    """Tests for assemble and verify_assembly."""

    def test_overwriting_detected(self, bump0_f):
        """Test that assembling by overwriting shared faces raises."""
        field, _ = local_solve(bump0_f, 0)
        with pytest.raises(InvariantViolationError) as exc:
            verify_assembly(field, [field, field])
        assert exc.value.details["error"] > 0.0

    def test_sum_passes(self, bump0_f):
        """Test that face-wise summation passes the check."""
        field, _ = local_solve(bump0_f, 0)
        verify_assembly(assemble([field, field]), [field, field])

    def test_empty(self):
        """Test that there is nothing to assemble from an empty list."""
        with pytest.raises(ShapeError):
            assemble([])


class TestWeightedNorms:
    """Tests for the weighted norms."""

    def test_weighted_l2_known_value(self):
        """Test f = x1, omega = x1^-1, gamma = 2: int f^2 omega^-2 = 1/7."""
        grid = CompositeGrid.for_subdomains(2.0, 6, 32)
        f = GridFunction.from_callable(grid, lambda x1, x2: x1)
        assert weighted_l2_squared(f, power_weight(-1.0)) == pytest.approx(1.0 / 7.0, rel=1e-2)

    def test_unit_weight_convex_energy(self, convex_grid):
        """Test gamma = 1, omega = 1 leaves the energy unscaled."""
        field, _ = local_solve(bump(convex_grid, 0), 0)
        assert weighted_gradient_energy(field, power_weight(0.0)) == pytest.approx(field.energy(), rel=1e-14)

    def test_dispatch(self, bump0_f, log_weight_spec):
        """Test weighted_norms on a field and on a function."""
        field, _ = local_solve(bump0_f, 0)
        assert weighted_norms(bump0_f, log_weight_spec) == pytest.approx(
            np.sqrt(weighted_l2_squared(bump0_f, log_weight_spec))
        )
        assert weighted_norms(field, log_weight_spec) == pytest.approx(
            np.sqrt(weighted_gradient_energy(field, log_weight_spec))
        )
        with pytest.raises(ShapeError):
            weighted_norms(np.zeros(3), log_weight_spec)

    def test_gamma_mismatch(self, bump0_f, unit_weight):
        """Test that the weight must be evaluated for the grid's gamma."""
        with pytest.raises(ShapeError):
            weighted_l2_squared(bump0_f, unit_weight, gamma=1.0)


class TestBounds:
    """Tests for the constants of the main estimate."""

    def test_main_bound_formula(self):
        """Test gamma^2 2^{12+4 gamma} C_omega^8 C_H^2."""
        assert main_bound(2.0, 1.0, 1.0) == pytest.approx(4.0 * 2.0**20)
        assert main_bound(1.0, 2.0, 3.0) == pytest.approx(2.0**16 * 2.0**8 * 9.0)

    def test_hardy_constant_upper(self):
        """Test 4 A_N for omega = 1, gamma = 2 is below 32/7."""
        assert hardy_constant_upper(power_weight(0.0), 2.0, 5000) <= 32.0 / 7.0 + 1e-12

    def test_log_weight_constant_finite(self):
        """Test the log weight gives a finite 4 A_N."""
        assert np.isfinite(hardy_constant_upper(log_power_weight(-1.0), 2.0, 1000))
