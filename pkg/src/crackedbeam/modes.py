"""Mode-shape containers built on per-interval closed-form solutions.

Between consecutive cracks every mode is an exact combination
``A sin + B cos + C sinh + D cosh`` of the local coordinate scaled by the
wavenumber.  Storing those four coefficients per subinterval keeps all
derivative evaluations exact and free of cancellation, which matters for
residual checks at the fourth derivative.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, types only
    from .shifrin import ShifrinForm

#: Map from side labels to the searchsorted side that selects the interval.
_SIDE_LEFT = ("L", "-", "left")
_SIDE_RIGHT = ("R", "+", "right")


def _basis_rows(lam: float, t: np.ndarray, order: int) -> tuple[np.ndarray, ...]:
    """Order-th derivative of (sin, cos, sinh, cosh) at phase ``t = lam*xi``.

    Returns the four factors multiplying (A, B, C, D); the common lam**order
    scale is included in the first factor pair via the caller.
    """
    sin_t, cos_t = np.sin(t), np.cos(t)
    sinh_t, cosh_t = np.sinh(t), np.cosh(t)
    r = order % 4
    if r == 0:
        trig = (sin_t, cos_t)
    elif r == 1:
        trig = (cos_t, -sin_t)
    elif r == 2:
        trig = (-sin_t, -cos_t)
    else:
        trig = (-cos_t, sin_t)
    hyp = (sinh_t, cosh_t) if order % 2 == 0 else (cosh_t, sinh_t)
    return trig[0], trig[1], hyp[0], hyp[1]


def local_state_matrix(lam: float, xi: float) -> np.ndarray:
    """Matrix sending local coefficients (A,B,C,D) to (w, w', w'', w''') at xi."""
    rows = []
    for order in range(4):
        fs = _basis_rows(lam, np.asarray(lam * xi), order)
        rows.append([lam**order * float(f) for f in fs])
    return np.array(rows)


def coefficients_from_state(lam: float, state: np.ndarray) -> np.ndarray:
    """Invert the local state map at xi = 0.

    The value fixes B + D, the slope A + C, and the second and third
    derivatives split the pairs, so the inverse is explicit.
    """
    s0, s1, s2, s3 = (float(s) for s in state)
    a = 0.5 * s1 / lam - 0.5 * s3 / lam**3
    b = 0.5 * s0 - 0.5 * s2 / lam**2
    c = 0.5 * s1 / lam + 0.5 * s3 / lam**3
    d = 0.5 * s0 + 0.5 * s2 / lam**2
    return np.array([a, b, c, d])


def inverse_state_matrix(lam: float) -> np.ndarray:
    """Explicit inverse of ``local_state_matrix(lam, 0)``."""
    il, il3 = 0.5 / lam, 0.5 / lam**3
    il2 = 0.5 / lam**2
    return np.array(
        [
            [0.0, il, 0.0, -il3],
            [0.5, 0.0, -il2, 0.0],
            [0.0, il, 0.0, il3],
            [0.5, 0.0, il2, 0.0],
        ]
    )


@dataclass(frozen=True)
class PiecewiseForm:
    """Closed-form mode shape: four local coefficients per subinterval.

    ``breakpoints`` has length m+2 (supports plus crack positions) and
    ``coefficients`` is (m+1, 4) with rows (A, B, C, D) for interval i in the
    local coordinate ``x - breakpoints[i]``.
    """

    lam: float
    breakpoints: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        bp = np.asarray(self.breakpoints, dtype=float)
        co = np.asarray(self.coefficients, dtype=float)
        if co.shape != (len(bp) - 1, 4):
            raise ValueError(f"{len(bp)} breakpoints need {len(bp) - 1}x4 coefficients")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "coefficients", co)

    @classmethod
    def from_left_states(cls, lam: float, breakpoints, states) -> "PiecewiseForm":
        """Build from the (w, w', w'', w''') state at each interval's left end."""
        coeffs = np.array([coefficients_from_state(lam, s) for s in states])
        return cls(lam=lam, breakpoints=np.asarray(breakpoints, float), coefficients=coeffs)

    def _intervals(self, x: np.ndarray, side: str) -> np.ndarray:
        mode = "left" if side in _SIDE_LEFT else "right"
        idx = np.searchsorted(self.breakpoints, x, side=mode) - 1
        return np.clip(idx, 0, len(self.coefficients) - 1)

    def eval(self, x, order: int = 0, side: str = "R"):
        """Derivative of the mode at ``x``; right-continuous at cracks.

        ``side`` only matters at breakpoints, where slope and higher
        derivatives may jump.
        """
        if side not in _SIDE_LEFT and side not in _SIDE_RIGHT:
            raise ValueError(f"side must be one of {_SIDE_LEFT + _SIDE_RIGHT}")
        xa = np.asarray(x, dtype=float)
        scalar = xa.ndim == 0
        xf = np.atleast_1d(xa)
        idx = self._intervals(xf, side)
        xi = xf - self.breakpoints[idx]
        fa, fb, fc, fd = _basis_rows(self.lam, self.lam * xi, order)
        co = self.coefficients[idx]
        out = self.lam**order * (co[:, 0] * fa + co[:, 1] * fb + co[:, 2] * fc + co[:, 3] * fd)
        return float(out[0]) if scalar else out

    def eval_one_sided(self, x: float, order: int, side: str) -> float:
        return float(self.eval(x, order=order, side=side))

    def scaled(self, factor: float) -> "PiecewiseForm":
        return replace(self, coefficients=self.coefficients * factor)


@dataclass(frozen=True)
class Eigenpair:
    """One wavenumber with its mode shape (and the producing solver's form)."""

    lam: float
    piecewise: PiecewiseForm
    solver: str
    shifrin: "ShifrinForm | None" = None

    def eval(self, x, order: int = 0, side: str = "R"):
        return self.piecewise.eval(x, order=order, side=side)

    def eval_one_sided(self, x: float, order: int, side: str) -> float:
        return self.piecewise.eval_one_sided(x, order, side)

    def slope_jump(self, x: float) -> float:
        """Jump of the first derivative across ``x`` (zero off cracks)."""
        return self.eval_one_sided(x, 1, "R") - self.eval_one_sided(x, 1, "L")

    def scaled(self, factor: float) -> "Eigenpair":
        sh = None if self.shifrin is None else self.shifrin.scaled(factor)
        return replace(self, piecewise=self.piecewise.scaled(factor), shifrin=sh)


@dataclass(frozen=True)
class Spectrum:
    """Ordered eigenpairs of one problem, tagged with solver provenance."""

    problem: object
    pairs: tuple[Eigenpair, ...]
    solver: str
    diagnostics: tuple = ()

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([p.lam for p in self.pairs])

    def __len__(self) -> int:
        return len(self.pairs)

    def __getitem__(self, k: int) -> Eigenpair:
        return self.pairs[k]


def normalize_eigenpair(pair: Eigenpair, rule) -> Eigenpair:
    """Rescale to unit displacement norm with a positive slope at the left end.

    When the left slope vanishes (possible only in degenerate constructions)
    the sign falls back to the third derivative there.
    """
    values = pair.eval(rule.nodes)
    norm = float(np.sqrt(rule.integrate(values**2)))
    if norm == 0.0:
        raise ValueError("cannot normalize the zero function")
    sign = 1.0
    for order in (1, 3):
        probe = pair.eval_one_sided(0.0, order, "R")
        if probe != 0.0:
            sign = 1.0 if probe > 0.0 else -1.0
            break
    return pair.scaled(sign / norm)
