"""Command-line front end: spectra, mode shapes, frequencies, verification.

Exit codes are a stable contract: 0 success, 2 input validation failure,
3 root-count shortfall, 4 verification failure.  Numeric output carries 15
significant digits, which round-trips exactly through a double, so emitted
files can be parsed and re-emitted byte-identically for diff-based testing.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import shifrin, spectral, transition
from .beam_model import (
    BeamProblem,
    PhysicalBeam,
    ValidationError,
    load_problem_file,
)
from .quadrature import QuadratureRule
from .rootfind import RootCountError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_ROOTS = 3
EXIT_VERIFY = 4

#: Verification thresholds; residual families are relative to the report's
#: curvature scale and the ODE residual is relative to lambda**4.
THRESHOLDS = {
    "bc_left": 1e-8,
    "bc_right": 1e-8,
    "moment_left": 1e-8,
    "moment_right": 1e-8,
    "jump_disp": 1e-8,
    "jump_moment": 1e-8,
    "jump_shear": 1e-8,
    "crack_law": 1e-8,
    "ode_residual": 1e-7,
    "h_normalization": 1e-10,
    "gram_identity": 1e-6,
    "rayleigh": 1e-5,
    "cross_solver_lambda": 1e-8,
    "cross_solver_modes": 1e-7,
}

CROSS_GRID_POINTS = 200


class VerificationFailure(RuntimeError):
    """Cross-solver or residual check failed outside cmd_validate."""

    def __init__(self, name: str, detail: str):
        self.name = name
        super().__init__(f"verification check {name} failed: {detail}")


@dataclass(frozen=True)
class RunConfig:
    """Resolved options of one invocation."""

    command: str
    input_path: str
    n_modes: int = 5
    lam_max: float | None = None
    solver: str = "shifrin"
    fmt: str = "csv"
    samples: int = 201
    output: str | None = None
    lam_min: float = 0.5
    scan_max: float = 5.5
    step: float = 0.01

    def __post_init__(self) -> None:
        if self.n_modes < 1:
            raise ValidationError("need at least one mode")
        if self.samples < 2:
            raise ValidationError("need at least two sample points")
        if self.solver not in ("shifrin", "transition", "both"):
            raise ValidationError(f"unknown solver {self.solver}")
        if self.fmt not in ("csv", "json"):
            raise ValidationError(f"unknown format {self.fmt}")


def _fmt_float(x: float) -> str:
    return f"{x:.15g}"


def _round15(x: float) -> float:
    return float(_fmt_float(x))


def _cell(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return _fmt_float(value)
    return str(value)


def _emit_table(config: RunConfig, columns: list[str], rows: list[list]) -> str:
    if config.fmt == "csv":
        lines = [",".join(columns)]
        lines.extend(",".join(_cell(v) for v in row) for row in rows)
        return "\n".join(lines) + "\n"
    body = {
        "columns": columns,
        "rows": [[_round15(v) if isinstance(v, float) else v for v in row] for row in rows],
    }
    return json.dumps(body, indent=2) + "\n"


def _write(config: RunConfig, text: str) -> None:
    if config.output is None:
        sys.stdout.write(text)
    else:
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _solve_lambdas(problem: BeamProblem, config: RunConfig):
    """Wavenumbers by the configured solver; 'both' returns the pair."""
    if config.solver in ("shifrin", "both"):
        lam_s = shifrin.find_eigenvalues(problem, config.n_modes, lam_max=config.lam_max)
    if config.solver in ("transition", "both"):
        lam_t = transition.find_eigenvalues(problem, config.n_modes, lam_max=config.lam_max)
    if config.solver == "shifrin":
        return lam_s, None
    if config.solver == "transition":
        return lam_t, None
    return lam_s, lam_t


def _spectrum_for_output(problem: BeamProblem, config: RunConfig):
    """Mode shapes by the configured solver, cross-checked for 'both'."""
    if config.solver == "transition":
        return transition.oracle_eigenpairs(problem, config.n_modes, lam_max=config.lam_max)
    spectrum = shifrin.compute_spectrum(problem, config.n_modes, lam_max=config.lam_max)
    if config.solver == "both":
        oracle = transition.oracle_eigenpairs(problem, config.n_modes, lam_max=config.lam_max)
        gap = float(np.max(np.abs(spectrum.lambdas - oracle.lambdas)))
        if gap > THRESHOLDS["cross_solver_lambda"]:
            raise VerificationFailure("cross_solver_lambda", f"max wavenumber gap {gap:.3e}")
        grid = np.linspace(0.0, math.pi, CROSS_GRID_POINTS)
        for ps, pt in zip(spectrum.pairs, oracle.pairs):
            gap = float(np.max(np.abs(ps.eval(grid) - pt.eval(grid))))
            if gap > THRESHOLDS["cross_solver_modes"]:
                raise VerificationFailure(
                    "cross_solver_modes", f"mode at lambda={ps.lam:.6f} differs by {gap:.3e}"
                )
    return spectrum


def cmd_spectrum(config: RunConfig) -> int:
    problem, _, _ = load_problem_file(config.input_path)
    lams, oracle = _solve_lambdas(problem, config)
    columns = ["k", "lambda", "lambda4"]
    if config.solver == "both":
        columns.append("agreement")
    rows = []
    for k, lam in enumerate(lams, start=1):
        row = [k, lam, lam**4]
        if config.solver == "both":
            row.append(abs(lam - oracle[k - 1]))
        rows.append(row)
    _write(config, _emit_table(config, columns, rows))
    return EXIT_OK


def _mode_rows(problem: BeamProblem, pair, k: int, samples: int) -> list[list]:
    crack_set = set(problem.positions)
    grid = [x for x in np.linspace(0.0, math.pi, samples) if x not in crack_set]
    points = [(x, "") for x in grid]
    points.extend((x, "L") for x in problem.positions)
    points.extend((x, "R") for x in problem.positions)
    points.sort(key=lambda p: (p[0], {"L": 0, "": 1, "R": 2}[p[1]]))
    rows = []
    for x, side in points:
        if side:
            values = [pair.eval_one_sided(x, order, side) for order in range(3)]
        else:
            values = [pair.eval(x, order) for order in range(3)]
        rows.append([k, float(x), side, *map(float, values)])
    return rows


def cmd_modes(config: RunConfig) -> int:
    problem, _, _ = load_problem_file(config.input_path)
    spectrum = _spectrum_for_output(problem, config)
    rows = []
    for k, pair in enumerate(spectrum.pairs, start=1):
        rows.extend(_mode_rows(problem, pair, k, config.samples))
    _write(config, _emit_table(config, ["k", "x", "side", "phi", "dphi", "d2phi"], rows))
    return EXIT_OK


def cmd_frequencies(config: RunConfig) -> int:
    problem, beam, _ = load_problem_file(config.input_path)
    if beam is None:
        raise ValidationError("frequencies need a physical beam block in the input")
    lams, oracle = _solve_lambdas(problem, config)
    if config.solver == "both":
        gap = max(abs(a - b) for a, b in zip(lams, oracle))
        if gap > THRESHOLDS["cross_solver_lambda"]:
            raise VerificationFailure("cross_solver_lambda", f"max wavenumber gap {gap:.3e}")
    rows = []
    for k, lam in enumerate(lams, start=1):
        omega = lam**2 * beam.frequency_scale
        rows.append([k, lam, omega, omega / (2.0 * math.pi)])
    _write(config, _emit_table(config, ["k", "lambda", "omega", "f_hz"], rows))
    return EXIT_OK


def cmd_det_scan(config: RunConfig) -> int:
    problem, _, _ = load_problem_file(config.input_path)
    if config.lam_min <= 0.0:
        raise ValidationError("scan must start at a positive wavenumber")
    if config.scan_max < config.lam_min:
        raise ValidationError("scan range is reversed")
    if config.step <= 0.0:
        raise ValidationError("scan step must be positive")
    n_steps = int(round((config.scan_max - config.lam_min) / config.step))
    grid = [config.lam_min + k * config.step for k in range(n_steps + 1)]
    rows = []
    prev_sign = 0.0
    for lam in grid:
        det_s = shifrin.char_det(problem, lam)
        det_t = transition.boundary_det(problem, lam)
        sign = math.copysign(1.0, det_s) if det_s != 0.0 else 0.0
        changed = int(prev_sign != 0.0 and sign != 0.0 and sign != prev_sign)
        rows.append([lam, det_s, det_t, changed])
        prev_sign = sign if sign != 0.0 else prev_sign
    _write(
        config,
        _emit_table(config, ["lambda", "det_shifrin", "det_transition", "sign_change"], rows),
    )
    return EXIT_OK


def _perturbed_mode(problem: BeamProblem, doc: dict, spectrum):
    """Apply the debug fault injection: offset jump amplitudes of one mode."""
    debug = doc.get("debug_perturb_delta")
    if debug is None:
        return spectrum
    if not isinstance(debug, dict) or set(debug) - {"mode", "offsets"}:
        raise ValidationError("debug_perturb_delta needs exactly {mode, offsets}")
    k = int(debug.get("mode", 1))
    offsets = np.asarray(debug.get("offsets", ()), dtype=float)
    if not 1 <= k <= len(spectrum.pairs):
        raise ValidationError(f"debug_perturb_delta mode {k} out of range")
    if offsets.shape != (problem.m,):
        raise ValidationError("debug_perturb_delta offsets must list one value per crack")
    pair = spectrum.pairs[k - 1]
    form = replace(pair.shifrin, deltas=pair.shifrin.deltas + offsets)
    pairs = list(spectrum.pairs)
    pairs[k - 1] = shifrin.build_eigenfunction(problem, form)
    return replace(spectrum, pairs=tuple(pairs))


def cmd_validate(config: RunConfig) -> int:
    problem, _, doc = load_problem_file(config.input_path)
    n = config.n_modes
    spectrum = shifrin.compute_spectrum(problem, n, lam_max=config.lam_max)
    oracle = transition.oracle_eigenpairs(problem, n, lam_max=config.lam_max)
    spectrum = _perturbed_mode(problem, doc, spectrum)

    lam_top = max(spectrum.lambdas.max(), 1.0)
    rule = QuadratureRule.for_problem(problem, lam=lam_top)
    checks = []

    def add(name: str, worst: float, threshold: float) -> None:
        checks.append(
            {
                "name": name,
                "worst": _round15(float(worst)),
                "threshold": threshold,
                "passed": bool(worst <= threshold),
            }
        )

    reports = [spectral.residual_report(p, problem) for p in spectrum.pairs]
    for family in ("bc_left", "bc_right", "moment_left", "moment_right",
                   "jump_disp", "jump_moment", "jump_shear", "crack_law"):
        worst = max(r.worst()[family] / r.scale for r in reports)
        add(family, worst, THRESHOLDS[family])
    add(
        "ode_residual",
        max(r.ode_residual / r.lam**4 for r in reports),
        THRESHOLDS["ode_residual"],
    )

    norms = [abs(spectral.h_inner(p, p, rule) - 1.0) for p in spectrum.pairs]
    add("h_normalization", max(norms), THRESHOLDS["h_normalization"])

    gram = spectral.gram_matrix(spectrum.pairs, rule)
    add("gram_identity", np.max(np.abs(gram - np.eye(n))), THRESHOLDS["gram_identity"])

    rayleigh = [
        abs(spectral.a_form(p, p, problem, rule) / spectral.h_inner(p, p, rule) - p.lam**4)
        / p.lam**4
        for p in spectrum.pairs
    ]
    add("rayleigh", max(rayleigh), THRESHOLDS["rayleigh"])

    add(
        "cross_solver_lambda",
        np.max(np.abs(spectrum.lambdas - oracle.lambdas)),
        THRESHOLDS["cross_solver_lambda"],
    )
    grid = np.linspace(0.0, math.pi, CROSS_GRID_POINTS)
    mode_gap = max(
        float(np.max(np.abs(ps.eval(grid) - pt.eval(grid))))
        for ps, pt in zip(spectrum.pairs, oracle.pairs)
    )
    add("cross_solver_modes", mode_gap, THRESHOLDS["cross_solver_modes"])

    passed = all(c["passed"] for c in checks)
    body = {
        "problem": config.input_path,
        "n_modes": n,
        "passed": passed,
        "failed_checks": [c["name"] for c in checks if not c["passed"]],
        "checks": checks,
    }
    _write(config, json.dumps(body, indent=2) + "\n")
    return EXIT_OK if passed else EXIT_VERIFY


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crackedbeam",
        description="Eigenvalues and mode shapes of hinged beams with spring-modeled cracks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, solver: bool = True, fmt: bool = True) -> None:
        p.add_argument("input", help="JSON problem file")
        p.add_argument("--modes", type=int, default=5, help="number of modes (default 5)")
        p.add_argument("--lambda-max", type=float, default=None, help="scan ceiling")
        if solver:
            p.add_argument(
                "--solver",
                choices=("shifrin", "transition", "both"),
                default="shifrin",
                help="which solver to run (both adds agreement checking)",
            )
        if fmt:
            p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", default=None, help="write here instead of stdout")

    common(sub.add_parser("spectrum", help="wavenumbers and eigenvalues"))
    p_modes = sub.add_parser("modes", help="sampled mode shapes")
    common(p_modes)
    p_modes.add_argument("--samples", type=int, default=201, help="grid points (default 201)")
    common(sub.add_parser("frequencies", help="dimensional natural frequencies"))
    p_val = sub.add_parser("validate", help="run the verification suite (JSON report)")
    common(p_val, solver=False, fmt=False)
    p_scan = sub.add_parser("det-scan", help="characteristic determinants on a grid")
    p_scan.add_argument("input", help="JSON problem file")
    p_scan.add_argument("--lambda-min", type=float, default=0.5)
    p_scan.add_argument("--lambda-max", type=float, default=5.5)
    p_scan.add_argument("--step", type=float, default=0.01)
    p_scan.add_argument("--format", choices=("csv", "json"), default="csv")
    p_scan.add_argument("--output", default=None)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.command == "det-scan":
        return RunConfig(
            command=args.command,
            input_path=args.input,
            fmt=args.format,
            output=args.output,
            lam_min=args.lambda_min,
            scan_max=args.lambda_max,
            step=args.step,
        )
    return RunConfig(
        command=args.command,
        input_path=args.input,
        n_modes=args.modes,
        lam_max=args.lambda_max,
        solver=getattr(args, "solver", "both"),
        fmt=getattr(args, "format", "json"),
        samples=getattr(args, "samples", 201),
        output=args.output,
    )


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "modes": cmd_modes,
    "frequencies": cmd_frequencies,
    "validate": cmd_validate,
    "det-scan": cmd_det_scan,
}


def _error_body(kind: str, message: str, **extra) -> str:
    body = {"error": {"type": kind, "message": message, **extra}}
    return json.dumps(body, indent=2) + "\n"


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        return _COMMANDS[args.command](config)
    except (ValidationError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(_error_body("validation", str(exc)))
        return EXIT_VALIDATION
    except RootCountError as exc:
        sys.stderr.write(
            _error_body("root_shortfall", str(exc), found=len(exc.found), requested=exc.requested)
        )
        return EXIT_NO_ROOTS
    except VerificationFailure as exc:
        sys.stderr.write(_error_body("verification", str(exc), check=exc.name))
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
