"""Shared problems and precomputed spectra for the test suite.

Spectra are session-scoped: root finding is the expensive step and every
test consumes the same handful of reference problems.
"""

from __future__ import annotations

import math

import pytest

from crackedbeam import BeamProblem, compute_spectrum


@pytest.fixture(scope="session")
def uniform_problem() -> BeamProblem:
    return BeamProblem()


@pytest.fixture(scope="session")
def one_crack_problem() -> BeamProblem:
    return BeamProblem(positions=(1.0,), flexibilities=(0.3,))


@pytest.fixture(scope="session")
def two_crack_problem() -> BeamProblem:
    return BeamProblem(positions=(1.0, 2.2), flexibilities=(0.3, 0.7))


@pytest.fixture(scope="session")
def node_crack_problem() -> BeamProblem:
    return BeamProblem(positions=(math.pi / 2,), flexibilities=(0.5,))


@pytest.fixture(scope="session")
def uniform_spectrum(uniform_problem):
    return compute_spectrum(uniform_problem, 5)


@pytest.fixture(scope="session")
def one_crack_spectrum(one_crack_problem):
    return compute_spectrum(one_crack_problem, 8)


@pytest.fixture(scope="session")
def two_crack_spectrum(two_crack_problem):
    return compute_spectrum(two_crack_problem, 8)
