"""Sign-change scanning and bisection for characteristic determinants.

Eigenvalues are simple zeros of a smooth real function of the wavenumber, so
a fixed-step scan followed by bisection is reliable as long as the step is
well below the eigenvalue spacing (which is near 1 for hinged beams).  A
near-zero local minimum of |f| without a sign change is flagged instead of
silently skipped, since it hints at a double root straddled by the grid.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_STEP = 0.01
# Bisect until the bracket collapses at floating-point resolution; residuals
# of reconstructed modes inherit the wavenumber error amplified by hyperbolic
# growth, so the root should be as tight as doubles allow (well inside the
# 1e-12 contract).
BISECT_TOL = 0.0

# A gridpoint counts as a double-root suspect when |f| dips below this
# fraction of the largest |f| seen so far without changing sign.
SUSPECT_RATIO = 1e-8


class RootCountError(RuntimeError):
    """Scan exhausted its range before finding the requested number of roots."""

    def __init__(self, requested: int, found: list[float], lam_max: float):
        self.requested = requested
        self.found = found
        self.lam_max = lam_max
        super().__init__(
            f"found {len(found)} of {requested} requested roots below lambda = {lam_max}; "
            "raise the scan ceiling"
        )


@dataclass(frozen=True)
class ScanDiagnostic:
    """Note about a suspicious point seen during the scan."""

    kind: str
    lam: float
    value: float


def bisect(f, a: float, b: float, fa: float, fb: float, tol: float = BISECT_TOL) -> float:
    """Bisection on a bracketing interval; returns the midpoint at tolerance."""
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise ValueError(f"no sign change on [{a}, {b}]")
    while b - a > tol:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break  # interval at floating-point resolution
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (fa > 0.0):
            a, fa = mid, fm
        else:
            b, fb = mid, fm
    return 0.5 * (a + b)


def find_roots(
    f,
    count: int,
    lam_max: float,
    step: float = DEFAULT_STEP,
    lam_min: float | None = None,
) -> tuple[list[float], list[ScanDiagnostic]]:
    """First ``count`` positive roots of ``f`` below ``lam_max``.

    Scans a uniform grid from ``lam_min`` (default: one step) and bisects
    every bracket.  Raises :class:`RootCountError` when the range runs out
    first; the exception carries the roots that were found.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    if step <= 0.0:
        raise ValueError("step must be positive")
    lo = step if lam_min is None else lam_min
    if lo <= 0.0:
        raise ValueError("scan must start at a positive wavenumber")

    roots: list[float] = []
    diagnostics: list[ScanDiagnostic] = []
    n_steps = max(0, int(round((lam_max - lo) / step)))
    prev_lam = lo
    prev_val = f(lo)
    # Track the two previous |f| values to spot dips without a sign change.
    hist = [abs(prev_val)]
    scale = abs(prev_val)

    if prev_val == 0.0:
        roots.append(prev_lam)

    for k in range(1, n_steps + 1):
        if len(roots) >= count:
            break
        lam = lo + k * step
        val = f(lam)
        scale = max(scale, abs(val))
        if val == 0.0:
            roots.append(lam)
        elif prev_val != 0.0 and (val > 0.0) != (prev_val > 0.0):
            roots.append(bisect(f, prev_lam, lam, prev_val, val))
        elif (
            len(hist) >= 2
            and hist[-1] < hist[-2]
            and abs(val) > hist[-1]
            and hist[-1] < SUSPECT_RATIO * scale
            and prev_val != 0.0
        ):
            diagnostics.append(ScanDiagnostic("possible_double_root", prev_lam, prev_val))
        hist.append(abs(val))
        if len(hist) > 2:
            hist.pop(0)
        prev_lam, prev_val = lam, val

    if len(roots) < count:
        raise RootCountError(count, roots, lam_max)
    return roots[:count], diagnostics
