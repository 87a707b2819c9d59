"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 I/O error, 3 validation failure.
"""

from __future__ import annotations

import argparse
import io
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .fock import CutoffError, minimal_cutoff
from .model import InvalidInputError, ModelParams
from .qubit import CoherentQubit, qubit_normalization
from .transfer import (
    avg_photon_number,
    find_transfer_time,
    population_trajectory,
    qubit_transfer_fidelity,
    scan_step,
    sweep_detuning,
)

log = logging.getLogger("cavity_transfer")

EXIT_OK, EXIT_INPUT, EXIT_IO, EXIT_VALIDATION = 0, 1, 2, 3
ORACLE_MAX_ALPHA = 0.3


class OutputError(Exception):
    pass


def fmt(x: float) -> str:
    """17 significant digits: round-trips every double."""
    return format(float(x), ".17g")


def _params(args) -> ModelParams:
    return ModelParams(omega=args.omega, delta=args.delta, g=args.g, c=args.c)


def _qubit(args) -> CoherentQubit:
    q = CoherentQubit(
        alpha=args.alpha,
        mu=complex(args.mu_re, args.mu_im),
        nu=complex(args.nu_re, args.nu_im),
    )
    qubit_normalization(q)
    return q


def _window(args):
    return (args.window_lo, args.window_hi)


def _write(path, text: str, stdout) -> None:
    if path is None or str(path) == "-":
        stdout.write(text)
        return
    try:
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")
    return buf.getvalue()


def cmd_simulate(args, stdout) -> int:
    params = _params(args)
    points = args.points
    if points is None:
        step = scan_step(params)
        points = 2001 if step is None else max(int(math.ceil(args.t_max / step)) + 1, 2)
    traj = population_trajectory(params, args.t_max, points)
    _write(args.out, _csv(("t", "F_pop", "U2", "U4", "U6"), traj.rows()), stdout)
    title = f"delta={args.delta:g}, g={args.g:g}, c={args.c:g}"
    if args.svg:
        from .plotting import trajectory_svg

        _write(args.svg, trajectory_svg(traj, title), stdout)
    if args.figure:
        from .plotting import save_figure

        try:
            save_figure(traj, args.figure, title)
        except OSError as exc:
            raise OutputError(f"cannot write {args.figure}: {exc}") from exc
    return EXIT_OK


def cmd_find_tstar(args, stdout) -> int:
    res = find_transfer_time(_params(args), _window(args), args.rel_tol)
    for key in ("t_star", "quality", "phase", "max_f_pop"):
        stdout.write(f"{key}={fmt(getattr(res, key))}\n")
    return EXIT_OK


def _report_time(args, params):
    if args.t is not None:
        if not math.isfinite(args.t):
            raise InvalidInputError(f"t must be finite, got {args.t}")
        return args.t
    return find_transfer_time(params, _window(args), args.rel_tol).t_star


def cmd_fidelity(args, stdout) -> int:
    params, q = _params(args), _qubit(args)
    t = _report_time(args, params)
    stdout.write(f"t={fmt(t)}\n")
    stdout.write(f"fidelity_raw={fmt(qubit_transfer_fidelity(q, params, t, False))}\n")
    stdout.write(f"fidelity_phase_corrected={fmt(qubit_transfer_fidelity(q, params, t, True))}\n")
    stdout.write(f"mean_photon_number={fmt(avg_photon_number(q, params, t))}\n")
    return EXIT_OK


def delta_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive arithmetic grid ``start, start+step, ...`` up to ``stop``."""
    if not all(math.isfinite(x) for x in (start, stop, step)):
        raise InvalidInputError("delta grid bounds must be finite")
    if start == stop:
        return np.array([start])
    if step == 0 or (stop - start) / step < 0:
        raise InvalidInputError(f"delta step {step} does not lead from {start} to {stop}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def cmd_sweep(args, stdout) -> int:
    grid = delta_grid(args.delta_from, args.delta_to, args.delta_step)
    rows = sweep_detuning(args.g, args.c, grid, args.pop_cap, _window(args), args.omega, args.rel_tol)
    table = [
        (d, r.t_star, r.quality, r.max_f_pop, "true" if ok else "false") for d, r, ok in rows
    ]
    _write(args.out, _csv(("delta", "t_star", "quality", "max_f_pop", "feasible"), table), stdout)
    n_ok = sum(ok for _, _, ok in rows)
    log.info("%d of %d detunings feasible at pop_cap=%g", n_ok, len(rows), args.pop_cap)
    return EXIT_OK


def cmd_validate(args, stdout) -> int:
    from .validation import misprint_defect, run_suites

    if args.trials < 0:
        raise InvalidInputError(f"trials must be >= 0, got {args.trials}")
    if args.trials == 0:
        log.warning("--trials 0: randomised suites are vacuous")
    results = run_suites(args.seed, args.trials)
    for r in results:
        stdout.write(r.line() + "\n")
    if args.include_as_printed_eq10:
        for t in (0.02, 0.1, 0.5, 1.0, 2.0):
            stdout.write(f"as_printed_eq10_defect(t={t:g})={fmt(misprint_defect(t))}\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


def cmd_oracle(args, stdout) -> int:
    from .validation import run_oracle

    params, q = _params(args), _qubit(args)
    if abs(q.alpha) > ORACLE_MAX_ALPHA:
        raise InvalidInputError(f"oracle requires |alpha| <= {ORACLE_MAX_ALPHA}, got {q.alpha}")
    cutoff = args.cutoff if args.cutoff is not None else max(minimal_cutoff(q.alpha), 1)
    t = _report_time(args, params)
    report = run_oracle(params, q, t, cutoff)
    stdout.write(f"t={fmt(t)}\ncutoff={cutoff}\n")
    for line in report.lines():
        stdout.write(line + "\n")
    return EXIT_OK if report.passed else EXIT_VALIDATION


COMMANDS = {
    "simulate": (cmd_simulate, "write F/U2/U4/U6 population curves as CSV (optionally SVG/figure)"),
    "find-tstar": (cmd_find_tstar, "locate the transfer time in a window"),
    "fidelity": (cmd_fidelity, "raw and phase-corrected qubit transfer fidelity"),
    "sweep": (cmd_sweep, "detuning sweep with a cavity-population cap"),
    "validate": (cmd_validate, "randomised invariant suites"),
    "oracle": (cmd_oracle, "cross-check against truncated Fock-space evolution"),
}


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", type=Path, help="key = value file; flags override it")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--g", type=float, default=65.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--t-max", type=float, default=5.0)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--t", type=float, default=None, help="evaluation time (default: searched t*)")
    p.add_argument("--window-lo", type=float, default=0.0)
    p.add_argument("--window-hi", type=float, default=10.0)
    p.add_argument("--rel-tol", type=float, default=1e-4)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--mu-re", type=float, default=1.0)
    p.add_argument("--mu-im", type=float, default=0.0)
    p.add_argument("--nu-re", type=float, default=0.0)
    p.add_argument("--nu-im", type=float, default=0.0)
    p.add_argument("--pop-cap", type=float, default=0.05)
    p.add_argument("--delta-from", type=float, default=-800.0)
    p.add_argument("--delta-to", type=float, default=-400.0)
    p.add_argument("--delta-step", type=float, default=50.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--include-as-printed-eq10", action="store_true")
    p.add_argument("--out", default=None, help="output file ('-' or omitted: stdout)")
    p.add_argument("--svg", default=None)
    p.add_argument("--figure", default=None, help="matplotlib figure path (.png/.pdf/.svg)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="cavity-transfer",
        description="Coherent-state qubit transfer through three coupled cavities.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def read_config(path: Path, known: set[str]) -> dict[str, str]:
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInputError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInputError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        dest = key.lstrip("-").replace("-", "_")
        if dest not in known or dest == "config":
            raise InvalidInputError(f"{path}:{lineno}: unknown key {key!r}")
        values[dest] = value
    return values


def _parse(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in sub._actions}
    values = read_config(args.config, known)
    for dest, value in values.items():
        action = next(a for a in sub._actions if a.dest == dest)
        if isinstance(action, argparse._StoreTrueAction):
            if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise InvalidInputError(f"config key {dest!r} expects a boolean, got {value!r}")
            values[dest] = value.lower() in ("true", "1", "yes")
    # string defaults go through each option's type= conversion on reparse
    sub.set_defaults(**values)
    return parser.parse_args(argv)


def main(argv=None, stdout=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    try:
        args = _parse(argv)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    handler, _ = COMMANDS[args.command]
    try:
        return handler(args, stdout)
    except (InvalidInputError, CutoffError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
