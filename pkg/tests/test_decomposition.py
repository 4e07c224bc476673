"""Tests for the composite grid, the partition of unity and the decomposition."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardydiv.core.errors import (
    DataError,
    DegenerateInputError,
    DomainError,
    PreconditionError,
    ShapeError,
    TailMassError,
)
from hardydiv.decomposition import (
    LIBRARY,
    CompositeGrid,
    GridFunction,
    PartitionOfUnity,
    build_partition_of_unity,
    correction_hardy_check,
    decompose,
    decomposition_bound,
    decomposition_constant,
    library_function,
    random_zero_mean,
    read_grid_csv,
    read_grid_npz,
    write_grid_csv,
    write_grid_npz,
)
from hardydiv.decomposition.library import column_blocks
from hardydiv.solver.global_solve import hardy_constant_upper
from hardydiv.weights.catalog import admissibility, power_weight


def pou_for(grid, ramp="log"):
    return build_partition_of_unity(grid.gamma, grid.n_columns - 1, ramp)


class TestCompositeGrid:
    """Tests for the cut-cell grid."""

    @pytest.mark.parametrize("gamma", [1.0, 1.5, 2.0, 3.0])
    def test_column_areas_exact(self, gamma):
        """Test that clipped cell areas sum to the exact column area."""
        grid = CompositeGrid.for_subdomains(gamma, 4, 8)
        domain = grid.domain
        expected = [domain.column_area(c.a, c.b) for c in grid.columns]
        np.testing.assert_allclose(grid.column_areas(), expected, rtol=1e-12)

    def test_first_moment_exact(self, small_grid):
        """Test that centroid quadrature integrates x1 exactly."""
        f = GridFunction.from_callable(small_grid, lambda x1, x2: x1)
        lo = 2.0 ** -small_grid.n_columns
        expected = (1.0 - lo**4) / 4.0
        assert f.integral() == pytest.approx(expected, rel=1e-12)

    def test_cells_active_iff_positive_area(self, small_grid):
        """Test that active cells have positive clipped area within the nominal cell."""
        assert np.all(small_grid.areas > 0.0)
        assert np.all(small_grid.areas <= small_grid.nominal_areas * (1.0 + 1e-12))

    def test_nested_rows(self, small_grid):
        """Test h2 of column m+1 is h2 of column m over rho."""
        cols = small_grid.columns
        for left, right in zip(cols, cols[1:]):
            assert left.h2 == pytest.approx(right.h2 * small_grid.rho, rel=1e-15)

    def test_subdomain_columns(self, small_grid):
        """Test Omega_i covers columns i and i + 1."""
        assert small_grid.subdomain_columns(0) == (0, 1)
        assert small_grid.subdomain_columns(3) == (3,)
        with pytest.raises(DomainError):
            small_grid.subdomain_columns(4)

    def test_invalid_sizes(self):
        """Test that n_sub < 2 and tiny resolutions are rejected."""
        with pytest.raises(DomainError):
            CompositeGrid.for_subdomains(2.0, 1, 8)
        with pytest.raises(DomainError):
            CompositeGrid.for_subdomains(2.0, 3, 1)

    def test_shape_mismatch(self, small_grid, convex_grid):
        """Test arithmetic across grids and wrong value counts raise ShapeError."""
        with pytest.raises(ShapeError):
            GridFunction.zeros(small_grid) + GridFunction.zeros(convex_grid)
        with pytest.raises(ShapeError):
            GridFunction(small_grid, np.zeros(small_grid.n_cells + 1))


class TestPartitionOfUnity:
    """Tests for the partition of unity."""

    @pytest.mark.parametrize("ramp", ["log", "linear"])
    def test_sums_to_one(self, ramp):
        """Test sum phi_i = 1 with at most two nonzero functions everywhere."""
        pou = PartitionOfUnity(n_sub=6, ramp=ramp)
        x = np.geomspace(1e-4, 1.0, 5001)
        phi = pou.values(x)
        np.testing.assert_allclose(phi.sum(axis=0), 1.0, atol=1e-15)
        assert np.all((phi >= 0.0) & (phi <= 1.0))
        assert np.all(np.count_nonzero(phi, axis=0) <= 2)

    def test_supports(self):
        """Test supp phi_i within [2^{-(i+2)}, 2^{-i}]."""
        pou = PartitionOfUnity(n_sub=5)
        x = np.geomspace(2.0**-5, 1.0, 4001)
        phi = pou.values(x)
        for i in range(4):
            outside = (x < 2.0 ** (-(i + 2))) | (x > 2.0 ** (-i))
            assert np.all(phi[i, outside] == 0.0)

    def test_tail_absorbed_by_last(self):
        """Test phi_{n_sub-1} = 1 below 2^{-n_sub}."""
        pou = PartitionOfUnity(n_sub=4)
        np.testing.assert_array_equal(pou.evaluate(3, [2.0**-5, 2.0**-9]), [1.0, 1.0])

    @pytest.mark.parametrize(
        "ramp, point",
        [("log", lambda m: 2.0 ** (-(m + 0.5))), ("linear", lambda m: 3.0 * 2.0 ** (-(m + 2)))],
    )
    def test_midpoints(self, ramp, point):
        """Test phi_{m-1} = phi_m = 1/2 at the ramp midpoint."""
        pou = PartitionOfUnity(n_sub=6, ramp=ramp)
        for m in range(1, 6):
            x = point(m)
            assert pou.midpoint(m) == pytest.approx(x)
            phi = pou.values(x)[:, 0]
            assert phi[m - 1] == pytest.approx(0.5, abs=1e-14)
            assert phi[m] == pytest.approx(0.5, abs=1e-14)

    def test_errors(self):
        """Test invalid n_sub, ramps and points."""
        with pytest.raises(DomainError):
            build_partition_of_unity(2.0, 1)
        with pytest.raises(DomainError):
            PartitionOfUnity(n_sub=3, ramp="cubic")
        with pytest.raises(DomainError):
            PartitionOfUnity(n_sub=3).values([0.0])


class TestDecompose:
    """Tests for decompose and its invariants."""

    def check_properties(self, dec, f):
        grid = f.grid
        assert dec.report.reconstruction_error <= 1e-12 * f.max_abs()
        assert dec.report.support_ok
        assert dec.report.corrections_disjoint
        for i, piece in enumerate(dec.pieces):
            assert np.all(piece.values[~grid.subdomain_mask(i)] == 0.0)
            assert abs(piece.integral()) <= 1e-10 * f.l1_norm()

    def test_dipole(self, dipole_f):
        """Test the three decomposition properties for mass moved through every overlap."""
        dec = decompose(dipole_f, pou_for(dipole_f.grid))
        self.check_properties(dec, dipole_f)
        assert dec.corrections[0] is None and dec.corrections[-1] is None
        assert all(c is not None for c in dec.corrections[1:-1])

    @pytest.mark.parametrize("ramp", ["log", "linear"])
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_random_eight_strips(self, ramp, seed):
        """Test random zero-mean f with n_sub = 8."""
        grid = CompositeGrid.for_subdomains(2.0, 8, 8)
        f = random_zero_mean(grid, seed)
        self.check_properties(decompose(f, pou_for(grid, ramp)), f)

    def test_single_subdomain_is_identity(self, bump0_f, unit_weight):
        """Test f inside Omega_0 gives g_0 = f and C_d = 1."""
        dec = decompose(bump0_f, pou_for(bump0_f.grid))
        np.testing.assert_array_equal(dec.pieces[0].values, bump0_f.values)
        for piece in dec.pieces[1:]:
            assert not np.any(piece.values)
        assert decomposition_constant(bump0_f, dec, unit_weight, 2.0) == pytest.approx(1.0)

    def test_three_strip_identity(self, dipole_f):
        """Test g_0 = f_0 + h_1, g_1 = f_1 + h_2 - h_1, g_2 = f_2 - h_2."""
        dec = decompose(dipole_f, pou_for(dipole_f.grid))
        f0, f1, f2 = (p.values for p in dec.parts)
        h1, h2 = dec.corrections[1].values, dec.corrections[2].values
        np.testing.assert_allclose(dec.pieces[0].values, f0 + h1, rtol=0, atol=0)
        np.testing.assert_allclose(dec.pieces[1].values, f1 + h2 - h1, rtol=1e-15)
        np.testing.assert_allclose(dec.pieces[2].values, f2 - h2, rtol=1e-15)

    @given(
        st.integers(min_value=-6, max_value=6).map(lambda k: k / 2.0),
        st.integers(min_value=-6, max_value=6).map(lambda k: k / 2.0),
    )
    @settings(max_examples=15, deadline=None)
    def test_linearity(self, a, b):
        """Test decompose(a f + b g) = a decompose(f) + b decompose(g)."""
        grid = CompositeGrid.for_subdomains(2.0, 3, 8)
        f, g = random_zero_mean(grid, 4), random_zero_mean(grid, 5)
        pou = pou_for(grid)
        combined = decompose(f * a + g * b, pou)
        left, right = decompose(f, pou), decompose(g, pou)
        scale = max(abs(a), abs(b), 1.0) * max(f.max_abs(), g.max_abs())
        for c, l, r in zip(combined.pieces, left.pieces, right.pieces):
            np.testing.assert_allclose(c.values, a * l.values + b * r.values, rtol=0, atol=1e-12 * scale)

    def test_nonzero_mean_rejected(self, small_grid):
        """Test that f with nonzero integral raises a precondition error."""
        f = GridFunction(small_grid, np.ones(small_grid.n_cells))
        with pytest.raises(PreconditionError) as exc:
            decompose(f, pou_for(small_grid))
        assert exc.value.details["integral"] == pytest.approx(f.integral())

    def test_tail_mass_rejected(self):
        """Test that mass beyond the last strip raises a tail-mass error."""
        grid = CompositeGrid.for_subdomains(2.0, 5, 8)
        f = library_function("dipole", grid)
        with pytest.raises(TailMassError):
            decompose(f, PartitionOfUnity(n_sub=2))

    def test_partition_size_mismatch(self, dipole_f):
        """Test that n_sub must match the partition."""
        with pytest.raises(DomainError):
            decompose(dipole_f, PartitionOfUnity(n_sub=3), n_sub=4)


class TestDecompositionConstant:
    """Tests for the measured C_d against its bound."""

    def test_random_below_bound(self, unit_weight):
        """Test random zero-mean f with omega = 1, q = 2, gamma = 2."""
        grid = CompositeGrid.for_subdomains(2.0, 6, 8)
        f = random_zero_mean(grid, 3)
        dec = decompose(f, pou_for(grid))
        c_h = hardy_constant_upper(unit_weight, 2.0, 1000)
        assert c_h <= 32.0 / 7.0 + 1e-12
        bound = decomposition_bound(1.0, c_h, 2.0)
        assert decomposition_bound(1.0, 32.0 / 7.0, 2.0) == pytest.approx(2.0**2.5 * 32.0 / 7.0)
        assert decomposition_constant(f, dec, unit_weight, 2.0) <= bound

    @pytest.mark.parametrize("beta", [-1.0, 0.0, 0.5])
    def test_adversarial_dipole(self, beta):
        """Test +mass in Omega_7 against -mass in Omega_0 stays below the bound."""
        grid = CompositeGrid.for_subdomains(2.0, 7, 8)
        f = column_blocks(grid, plus=7, minus=0)
        omega = power_weight(beta)
        dec = decompose(f, pou_for(grid))
        c_omega = admissibility(omega, 2.0, 2.0).C_omega
        bound = decomposition_bound(c_omega, hardy_constant_upper(omega, 2.0, 1000), 2.0)
        measured = decomposition_constant(f, dec, omega, 2.0)
        assert 0.0 < measured <= bound

    @pytest.mark.slow
    def test_fifty_random_functions_at_full_resolution(self):
        """Test 50 random zero-mean f, gamma = 2, eight strips of 64 x 64 cells, three power weights."""
        grid = CompositeGrid.for_subdomains(2.0, 8, 64)
        pou = pou_for(grid)
        weights = [power_weight(beta) for beta in (0.0, 0.5, -0.4)]
        bounds = [
            decomposition_bound(
                admissibility(omega, 2.0, 2.0).C_omega, hardy_constant_upper(omega, 2.0), 2.0
            )
            for omega in weights
        ]
        for seed in range(50):
            f = random_zero_mean(grid, seed)
            dec = decompose(f, pou)
            TestDecompose().check_properties(dec, f)
            for omega, bound in zip(weights, bounds):
                assert decomposition_constant(f, dec, omega, 2.0) <= bound

    def test_correction_hardy_check(self, dipole_f, unit_weight):
        """Test the correction sums satisfy the dual Hardy inequality with 4 A."""
        dec = decompose(dipole_f, pou_for(dipole_f.grid))
        check = correction_hardy_check(dec, unit_weight, 2.0)
        assert check["ratio"] <= check["bound"]
        assert len(check["masses"]) == dec.n_sub - 1

    def test_zero_function_is_degenerate(self, small_grid, unit_weight):
        """Test that f = 0 has no decomposition constant."""
        f = GridFunction.zeros(small_grid)
        dec = decompose(f, pou_for(small_grid))
        with pytest.raises(DegenerateInputError):
            decomposition_constant(f, dec, unit_weight, 2.0)


class TestLibrary:
    """Tests for the test-function library."""

    @pytest.mark.parametrize("name", sorted(LIBRARY))
    def test_entries_have_zero_mean(self, small_grid, name):
        """Test that every library function is mean-free on the grid."""
        f = library_function(name, small_grid, seed=9)
        assert f.l1_norm() > 0.0
        assert abs(f.integral()) <= 1e-12 * f.l1_norm()

    def test_dipole_support(self, dipole_f):
        """Test the dipole lives in column 0 and the deepest column."""
        np.testing.assert_array_equal(dipole_f.support_columns(), [0, dipole_f.grid.n_columns - 1])

    def test_random_is_seeded(self, small_grid):
        """Test that one seed reproduces the same values."""
        np.testing.assert_array_equal(
            random_zero_mean(small_grid, 12).values, random_zero_mean(small_grid, 12).values
        )

    def test_unknown_name(self, small_grid):
        """Test that an unknown name is a domain error."""
        with pytest.raises(DomainError):
            library_function("nope", small_grid)


class TestGridIO:
    """Tests for CSV and binary grid function files."""

    def test_npz_bit_exact(self, tmp_path, dipole_f):
        """Test that the binary form restores grid and values exactly."""
        path = write_grid_npz(dipole_f, tmp_path / "f.npz")
        loaded = read_grid_npz(path)
        assert loaded.grid.same_as(dipole_f.grid)
        np.testing.assert_array_equal(loaded.values, dipole_f.values)

    def test_csv_values(self, tmp_path, dipole_f):
        """Test that CSV restores the values on the same grid bit for bit."""
        path = write_grid_csv(dipole_f, tmp_path / "f.csv")
        loaded = read_grid_csv(path, dipole_f.grid)
        np.testing.assert_array_equal(loaded.values, dipole_f.values)

    def test_csv_accepts_its_own_clipped_areas(self, tmp_path, convex_grid):
        """Test clipped cell areas written to CSV still match the grid when read back."""
        f = GridFunction(convex_grid, np.sin(np.arange(convex_grid.n_cells) * 0.7))
        loaded = read_grid_csv(write_grid_csv(f, tmp_path / "f.csv"), convex_grid)
        np.testing.assert_array_equal(loaded.values, f.values)

    def test_csv_wrong_grid(self, tmp_path, dipole_f, convex_grid):
        """Test that reading onto another grid raises ShapeError."""
        path = write_grid_csv(dipole_f, tmp_path / "f.csv")
        with pytest.raises(ShapeError):
            read_grid_csv(path, convex_grid)

    def test_missing_file(self, tmp_path):
        """Test that a missing file is a data error."""
        with pytest.raises(DataError):
            read_grid_npz(tmp_path / "absent.npz")
