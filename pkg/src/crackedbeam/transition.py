"""Independent eigen-solver that propagates local coefficients across cracks.

On each subinterval the mode is A sin + B cos + C sinh + D cosh of the local
coordinate.  A 4x4 transition matrix carries the coefficient vector across a
crack by evaluating the end state, adding the spring's slope jump, and
re-anchoring the local origin.  Hinged supports kill two of the four
starting coefficients, so the two end conditions close a 2x2 system whose
determinant vanishes exactly at the eigenvalues.

This solver shares no assembly code with the jump-amplitude solver; the two
agreeing is a genuine cross-check.
"""

from __future__ import annotations

import numpy as np

from . import rootfind
from .beam_model import BeamProblem
from .modes import (
    Eigenpair,
    PiecewiseForm,
    Spectrum,
    inverse_state_matrix,
    local_state_matrix,
    normalize_eigenpair,
)
from .quadrature import QuadratureRule


def transition_matrix(problem: BeamProblem, i: int, lam: float) -> np.ndarray:
    """Map coefficients on interval i to coefficients on interval i+1.

    Built as (state-to-coefficients at 0) o (slope jump) o (state at the
    interval length): continuity of value, moment and shear is the identity
    part, and the spring adds theta_i times the moment to the slope.
    """
    if not 1 <= i <= problem.m:
        raise IndexError(f"crack index {i} out of range 1..{problem.m}")
    if lam <= 0.0:
        raise ValueError("wavenumber must be positive")
    bp = problem.breakpoints
    length = bp[i] - bp[i - 1]
    end_state = local_state_matrix(lam, length)
    jump = np.eye(4)
    jump[1, 2] = problem.flexibilities[i - 1]
    return inverse_state_matrix(lam) @ jump @ end_state


def _end_rows(problem: BeamProblem, lam: float) -> np.ndarray:
    """Rows mapping final-interval coefficients to (w(pi), w''(pi))."""
    bp = problem.breakpoints
    state = local_state_matrix(lam, bp[-1] - bp[-2])
    return state[[0, 2]]


def boundary_det(problem: BeamProblem, lam: float) -> float:
    """Determinant of the reduced 2x2 end-condition system.

    A hinged start forces the local coefficient vector to (A1, 0, C1, 0), so
    only two columns of the propagated end rows matter.  Every chain factor
    is divided by its max-abs entry (a positive scalar, so zeros and signs
    survive) to keep growth like cosh in check, and the final 2x2 is
    row-equilibrated for the same reason.
    """
    if lam <= 0.0:
        raise ValueError("wavenumber must be positive")
    chain = _end_rows(problem, lam)
    chain = chain / np.max(np.abs(chain))
    for i in range(problem.m, 0, -1):
        factor = transition_matrix(problem, i, lam)
        chain = chain @ (factor / np.max(np.abs(factor)))
    reduced = chain[:, [0, 2]]
    scale = np.max(np.abs(reduced), axis=1)
    scale = np.where(scale > 0.0, scale, 1.0)
    return float(np.linalg.det(reduced / scale[:, None]))


def find_eigenvalues(
    problem: BeamProblem,
    count: int,
    lam_max: float | None = None,
    step: float = rootfind.DEFAULT_STEP,
) -> list[float]:
    """First ``count`` eigenvalue wavenumbers by scanning boundary_det."""
    if count < 1:
        raise ValueError("count must be at least 1")
    if lam_max is None:
        lam_max = count + problem.m + 5
    roots, _ = rootfind.find_roots(
        lambda lam: boundary_det(problem, lam), count, lam_max, step=step
    )
    return roots


def _mode_from_root(problem: BeamProblem, lam: float) -> Eigenpair:
    """Recover per-interval coefficients for one located root."""
    chain = _end_rows(problem, lam)
    chain = chain / np.max(np.abs(chain))
    for i in range(problem.m, 0, -1):
        factor = transition_matrix(problem, i, lam)
        chain = chain @ (factor / np.max(np.abs(factor)))
    reduced = chain[:, [0, 2]]
    scale = np.max(np.abs(reduced), axis=1)
    scale = np.where(scale > 0.0, scale, 1.0)
    _, _, vt = np.linalg.svd(reduced / scale[:, None])
    a1, c1 = vt[-1]

    coeffs = [np.array([a1, 0.0, c1, 0.0])]
    for i in range(1, problem.m + 1):
        coeffs.append(transition_matrix(problem, i, lam) @ coeffs[-1])
    pw = PiecewiseForm(
        lam=lam,
        breakpoints=np.asarray(problem.breakpoints),
        coefficients=np.vstack(coeffs),
    )
    pair = Eigenpair(lam=lam, piecewise=pw, solver="transition")
    rule = QuadratureRule.for_problem(problem, lam=lam)
    return normalize_eigenpair(pair, rule)


def oracle_eigenpairs(
    problem: BeamProblem,
    count: int,
    lam_max: float | None = None,
    step: float = rootfind.DEFAULT_STEP,
) -> Spectrum:
    """Spectrum computed wholly by the transition-matrix route."""
    if count < 1:
        raise ValueError("count must be at least 1")
    if lam_max is None:
        lam_max = count + problem.m + 5
    roots, diagnostics = rootfind.find_roots(
        lambda lam: boundary_det(problem, lam), count, lam_max, step=step
    )
    pairs = tuple(_mode_from_root(problem, lam) for lam in roots)
    return Spectrum(
        problem=problem, pairs=pairs, solver="transition", diagnostics=tuple(diagnostics)
    )
