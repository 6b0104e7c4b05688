"""Jump basis, convolution kernels, system assembly, and eigenpairs."""

from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crackedbeam import (
    BeamProblem,
    assemble_system,
    basis_eval,
    build_eigenfunction,
    char_det,
    compute_spectrum,
    find_eigenvalues,
    jump_basis,
    kernel_M,
    solve_nullspace,
)
from crackedbeam.transition import find_eigenvalues as transition_eigenvalues


@pytest.fixture(scope="module")
def mid_crack() -> BeamProblem:
    return BeamProblem(positions=(math.pi / 2,), flexibilities=(0.5,))


class TestJumpBasis:
    def test_midpoint_value(self, mid_crack):
        # ((pi/2 - pi)/pi) * (pi/2) = -pi/4
        assert basis_eval(mid_crack, 1, math.pi / 2) == pytest.approx(-math.pi / 4, abs=1e-15)

    def test_vanishes_at_supports(self, mid_crack):
        assert basis_eval(mid_crack, 1, 0.0) == 0.0
        assert basis_eval(mid_crack, 1, math.pi) == pytest.approx(0.0, abs=1e-15)

    def test_unit_slope_jump(self, mid_crack):
        w = jump_basis(mid_crack, 1)
        jump = w.eval(w.breakpoint, 1, side="R") - w.eval(w.breakpoint, 1, side="L")
        assert jump == pytest.approx(1.0, abs=1e-15)

    @given(x=st.floats(1e-6, math.pi - 1e-6), xi=st.floats(0.2, math.pi - 0.2))
    def test_negative_on_interior(self, x, xi):
        problem = BeamProblem(positions=(xi,), flexibilities=(1.0,))
        assert basis_eval(problem, 1, x) < 0.0

    def test_continuous_across_other_cracks(self):
        problem = BeamProblem(positions=(1.0, 2.0), flexibilities=(0.3, 0.3))
        w1 = jump_basis(problem, 1)
        # w_1 is globally continuous and its slope only jumps at x_1
        assert w1.eval(2.0, 1, side="L") == w1.eval(2.0, 1, side="R")

    def test_index_out_of_range(self, mid_crack):
        with pytest.raises(IndexError):
            jump_basis(mid_crack, 2)
        with pytest.raises(IndexError):
            jump_basis(mid_crack, 0)


# Five crack layouts; the kernel of crack i only sees positions, not thetas.
KERNEL_CONFIGS = [
    (BeamProblem(positions=(math.pi / 2,), flexibilities=(0.5,)), 1),
    (BeamProblem(positions=(1.0,), flexibilities=(0.3,)), 1),
    (BeamProblem(positions=(0.7, 2.0), flexibilities=(0.3, 0.7)), 1),
    (BeamProblem(positions=(0.7, 2.0), flexibilities=(0.3, 0.7)), 2),
    (BeamProblem(positions=(2.6,), flexibilities=(1.0,)), 1),
]
KERNEL_XS = [0.4, 1.1, 2.0, 2.7, math.pi]
KERNEL_LAMS = [0.6, 0.9, 1.3, 1.7, 2.1]


class TestKernel:
    def test_vanishes_at_origin(self, mid_crack):
        for order in (0, 1, 2, 3):
            assert kernel_M(mid_crack, 1, 0.0, 1.3, order=order) == 0.0

    @pytest.mark.parametrize("problem, i", KERNEL_CONFIGS)
    @pytest.mark.parametrize("lam", KERNEL_LAMS)
    def test_matches_adaptive_quadrature(self, problem, i, lam):
        from scipy.integrate import quad

        xi = problem.positions[i - 1]
        for x in KERNEL_XS:
            for order, kern in ((0, lambda u: np.sinh(u) - np.sin(u)),
                                (2, lambda u: lam**2 * (np.sinh(u) + np.sin(u)))):
                expected, _ = quad(
                    lambda s: kern(lam * (x - s)) * basis_eval(problem, i, s),
                    0.0,
                    x,
                    points=[xi] if xi < x else None,
                    epsabs=1e-13,
                    epsrel=1e-13,
                    limit=200,
                )
                got = kernel_M(problem, i, x, lam, order=order)
                assert got == pytest.approx(expected, abs=1e-10)

    def test_first_and_third_derivatives_against_quadrature(self, mid_crack):
        from scipy.integrate import quad

        lam, x = 1.3, 2.0
        xi = mid_crack.positions[0]
        kernels = {
            1: lambda u: lam * (np.cosh(u) - np.cos(u)),
            3: lambda u: lam**3 * (np.cosh(u) + np.cos(u)),
        }
        for order, kern in kernels.items():
            expected, _ = quad(
                lambda s: kern(lam * (x - s)) * basis_eval(mid_crack, 1, s),
                0.0,
                x,
                points=[xi],
                epsabs=1e-13,
                epsrel=1e-13,
                limit=200,
            )
            assert kernel_M(mid_crack, 1, x, lam, order=order) == pytest.approx(expected, abs=1e-10)

    def test_rejects_bad_order_and_wavenumber(self, mid_crack):
        with pytest.raises(ValueError):
            kernel_M(mid_crack, 1, 1.0, 1.3, order=4)
        with pytest.raises(ValueError):
            kernel_M(mid_crack, 1, 1.0, 0.0)


class TestSystemMatrix:
    def test_size_and_unit_delta_diagonal(self):
        problem = BeamProblem(positions=(0.9, 2.0), flexibilities=(0.4, 0.8))
        system = assemble_system(problem, 1.7)
        assert system.matrix.shape == (6, 6)
        assert system.m == 2
        assert system.matrix[0, 0] == 1.0
        assert system.matrix[1, 1] == 1.0
        # later cracks never influence earlier crack rows
        assert system.matrix[0, 1] == 0.0

    def test_solved_form_annihilates_every_row(self, mid_crack):
        lam = find_eigenvalues(mid_crack, 1)[0]
        form = solve_nullspace(mid_crack, lam)
        vec = np.concatenate([form.deltas, form.coefficients])
        mat = assemble_system(mid_crack, lam).matrix
        assert np.linalg.norm(mat @ vec) <= 1e-8 * np.linalg.norm(mat)

    def test_uniform_determinant_closed_form(self):
        # For m=0 the equilibrated determinant is -sin(lam pi)(1 - e^{-2 lam pi})
        # divided by the max-abs entry of the oscillatory row.
        uniform = BeamProblem()
        for lam in (0.5, 1.3, 2.7, 4.4, 9.2):
            row_scale = max(abs(math.cos(lam * math.pi)), abs(math.sin(lam * math.pi)))
            expected = -math.sin(lam * math.pi) * (1.0 - math.exp(-2.0 * lam * math.pi))
            assert char_det(uniform, lam) * row_scale == pytest.approx(expected, abs=1e-12)

    def test_uniform_determinant_symbolic(self):
        # Symbolic expansion of the 4x4 boundary block, and its equivalence
        # to the classical sin * sinh characteristic function up to the
        # positive factor 2 e^{-lam pi}.
        import sympy as sp

        lam = sp.symbols("lam", positive=True)
        e = sp.exp(-lam * sp.pi)
        mat = sp.Matrix(
            [
                [0, 0, 1, e],
                [1, 0, 0, 0],
                [0, 0, e, 1],
                [sp.cos(lam * sp.pi), sp.sin(lam * sp.pi), 0, 0],
            ]
        )
        det = sp.simplify(mat.det())
        target = -sp.sin(lam * sp.pi) * (1 - sp.exp(-2 * lam * sp.pi))
        assert sp.simplify(det - target) == 0
        classical = -2 * sp.exp(-lam * sp.pi) * sp.sin(lam * sp.pi) * sp.sinh(lam * sp.pi)
        assert sp.expand((target - classical).rewrite(sp.exp)) == 0


class TestCharDet:
    def test_uniform_roots_are_integers(self):
        roots = find_eigenvalues(BeamProblem(), 5)
        assert np.allclose(roots, [1, 2, 3, 4, 5], atol=1e-10)

    @pytest.mark.parametrize("theta", [0.1, 1.0, 10.0])
    def test_node_crack_even_modes_survive(self, theta):
        problem = BeamProblem(positions=(math.pi / 2,), flexibilities=(theta,))
        assert abs(char_det(problem, 2.0)) < 1e-12

    def test_sign_change_brackets_transition_root(self):
        problem = BeamProblem(positions=(1.0,), flexibilities=(0.3,))
        root = transition_eigenvalues(problem, 1)[0]
        assert char_det(problem, root - 0.01) * char_det(problem, root + 0.01) < 0.0

    def test_requires_positive_wavenumber(self, mid_crack):
        with pytest.raises(ValueError):
            char_det(mid_crack, -1.0)


class TestFindEigenvalues:
    def test_node_crack_second_root_exact(self, mid_crack):
        roots = find_eigenvalues(mid_crack, 2)
        assert roots[1] == pytest.approx(2.0, abs=1e-10)
        assert roots[0] < 1.0

    def test_roots_strictly_increasing(self, one_crack_spectrum):
        lams = one_crack_spectrum.lambdas
        assert np.all(np.diff(lams) > 0.0)

    @settings(max_examples=15, deadline=None)
    @given(
        position=st.floats(0.4, math.pi - 0.4),
        theta=st.floats(0.01, 5.0),
    )
    def test_single_crack_first_root_never_exceeds_uniform(self, position, theta):
        # A crack only removes stiffness, so the fundamental drops.
        problem = BeamProblem(positions=(position,), flexibilities=(theta,))
        root = find_eigenvalues(problem, 1)[0]
        assert 0.0 < root <= 1.0 + 1e-12

    def test_theta_continuity_to_uniform(self):
        problem = BeamProblem(positions=(1.3,), flexibilities=(1e-8,))
        roots = find_eigenvalues(problem, 3)
        assert np.allclose(roots, [1.0, 2.0, 3.0], atol=1e-4)

    def test_fundamental_nonincreasing_in_theta(self):
        thetas = [0.01, 0.1, 0.5, 1.0, 5.0]
        roots = [
            find_eigenvalues(BeamProblem(positions=(1.3,), flexibilities=(t,)), 1)[0]
            for t in thetas
        ]
        assert all(b <= a + 1e-12 for a, b in zip(roots, roots[1:]))


class TestNullspace:
    def test_uniform_mode_is_pure_sine(self):
        form = solve_nullspace(BeamProblem(), 1.0)
        a, b, c, d = form.classical_coefficients
        assert abs(b) > 0.1
        assert abs(a) < 1e-12 and abs(c) < 1e-12 and abs(d) < 1e-12

    def test_node_crack_mode_has_no_jump(self, mid_crack):
        form = solve_nullspace(mid_crack, 2.0)
        assert abs(form.deltas[0]) < 1e-10
        xs = np.linspace(0.1, 3.0, 7)
        reference = form.eval(math.pi / 4) / math.sin(2.0 * math.pi / 4)
        assert np.allclose(form.eval(xs), reference * np.sin(2.0 * xs), atol=1e-10)

    def test_hinged_reduction_kills_cos_and_cosh(self, one_crack_spectrum):
        for pair in one_crack_spectrum.pairs:
            form = pair.shifrin
            norm = float(
                np.linalg.norm(np.concatenate([form.deltas, form.coefficients]))
            )
            a, _, c, _ = form.classical_coefficients
            assert abs(a) <= 1e-12 * norm
            assert abs(c) <= 1e-12 * norm

    def test_left_slope_sign_convention(self, one_crack_spectrum, two_crack_spectrum):
        for spectrum in (one_crack_spectrum, two_crack_spectrum):
            for pair in spectrum.pairs:
                assert pair.eval_one_sided(0.0, 1, "R") > 0.0


class TestShifrinForm:
    def test_fourth_derivative_identity(self, one_crack_spectrum):
        # Every term of the representation solves u'''' = lam^4 u piecewise.
        pair = one_crack_spectrum.pairs[2]
        form = pair.shifrin
        xs = np.linspace(0.05, math.pi - 0.05, 41)
        assert np.allclose(form.eval(xs, 4), form.lam**4 * form.eval(xs, 0), rtol=1e-12, atol=1e-12)

    def test_slope_jump_equals_delta(self, two_crack_spectrum):
        for pair in two_crack_spectrum.pairs[:4]:
            form = pair.shifrin
            for delta, x_i in zip(form.deltas, form.positions):
                jump = form.eval_one_sided(x_i, 1, "R") - form.eval_one_sided(x_i, 1, "L")
                assert jump == pytest.approx(delta, abs=1e-12 * max(1.0, abs(delta)))

    def test_classical_split_reproduces_evaluation(self, one_crack_problem):
        # Reassemble phi from the classical coefficients, the convolution
        # kernels, and the piecewise-linear jump functions; this ties the
        # internal representation to the public kernel formula.
        lam = find_eigenvalues(one_crack_problem, 2)[1]
        form = solve_nullspace(one_crack_problem, lam)
        ap, bp, cp, dp = form.classical_coefficients
        xs = np.linspace(0.0, math.pi, 29)
        t = lam * xs
        rebuilt = ap * np.cos(t) + bp * np.sin(t) + cp * np.cosh(t) + dp * np.sinh(t)
        for i in range(1, one_crack_problem.m + 1):
            rebuilt += form.deltas[i - 1] * (
                (lam / 2.0) * kernel_M(one_crack_problem, i, xs, lam)
                + basis_eval(one_crack_problem, i, xs)
            )
        assert np.max(np.abs(rebuilt - form.eval(xs))) < 1e-10

    def test_left_slope_matches_eval(self, two_crack_spectrum):
        form = two_crack_spectrum.pairs[0].shifrin
        assert form.left_slope() == pytest.approx(form.eval_one_sided(0.0, 1, "R"), rel=1e-12)


class TestEigenpairs:
    def test_junction_conditions(self, two_crack_spectrum, two_crack_problem):
        for pair in two_crack_spectrum.pairs:
            xs = two_crack_problem.positions
            thetas = two_crack_problem.flexibilities
            scale = max(
                1.0, np.max(np.abs(pair.eval(np.linspace(0.0, math.pi, 200), 2)))
            )
            for x_i, theta in zip(xs, thetas):
                right = [pair.eval_one_sided(x_i, o, "R") for o in range(4)]
                left = [pair.eval_one_sided(x_i, o, "L") for o in range(4)]
                assert abs(right[0] - left[0]) <= 1e-9
                assert abs(right[2] - left[2]) <= 1e-9 * scale
                assert abs(right[3] - left[3]) <= 1e-9 * scale
                assert abs((right[1] - left[1]) - theta * right[2]) <= 1e-9 * scale

    def test_representations_agree_pointwise(self, one_crack_spectrum, one_crack_problem):
        # The coefficient form and the per-interval form describe one
        # function; check values on every subinterval.
        for pair in one_crack_spectrum.pairs[:5]:
            bp = one_crack_problem.breakpoints
            for lo, hi in zip(bp[:-1], bp[1:]):
                xs = np.linspace(lo + 1e-9, hi - 1e-9, 23)
                assert np.max(np.abs(pair.shifrin.eval(xs) - pair.eval(xs))) <= 1e-9

    def test_boundary_values(self, two_crack_spectrum):
        for pair in two_crack_spectrum.pairs:
            scale = max(1.0, np.max(np.abs(pair.eval(np.linspace(0.0, math.pi, 200), 2))))
            assert abs(pair.eval(0.0)) <= 1e-12
            assert abs(pair.eval(math.pi)) <= 1e-9 * scale

    def test_no_degeneracy_warnings_from_clean_spectra(self, one_crack_problem):
        with warnings.catch_warnings():
            warnings.simplefilter("error", RuntimeWarning)
            compute_spectrum(one_crack_problem, 6)

    def test_build_from_perturbed_form_keeps_jump(self, one_crack_problem):
        # build_eigenfunction must honor whatever jump amplitudes the form
        # carries; the fault-injection path in the CLI depends on this.
        lam = find_eigenvalues(one_crack_problem, 1)[0]
        form = solve_nullspace(one_crack_problem, lam)
        from dataclasses import replace

        bumped = replace(form, deltas=form.deltas + 0.01)
        pair = build_eigenfunction(one_crack_problem, bumped)
        x1 = one_crack_problem.positions[0]
        jump = pair.eval_one_sided(x1, 1, "R") - pair.eval_one_sided(x1, 1, "L")
        law = jump - one_crack_problem.flexibilities[0] * pair.eval_one_sided(x1, 2, "R")
        assert abs(law) > 1e-4
