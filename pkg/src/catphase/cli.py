"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import math
import sys
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import __version__, analytic, interferometer, montecarlo, optimizer
from .emit import to_csv, to_json, to_svg
from .errors import BracketingError, CatPhaseError, TruncationError

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    """Uniform 1-D grid of ``steps`` points from ``min`` to ``max`` inclusive."""

    name: str
    min: float
    max: float
    steps: int

    def __post_init__(self):
        if not (math.isfinite(self.min) and math.isfinite(self.max)) or not self.min < self.max:
            raise UsageError(f"--{self.name}-min must be below --{self.name}-max")
        if self.steps < 2:
            raise UsageError("--steps must be at least 2")

    def grid(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.steps)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _alpha_key(a: float) -> str:
    return format(a, "g").replace(".", "p").replace("-", "m")


def _curve_columns(quantity: str, alphas: Sequence[float]) -> list[str]:
    if len(alphas) == 1:
        return [quantity]
    return [f"{quantity}_alpha_{_alpha_key(a)}" for a in alphas]


def _emit_curve(args, quantity: str, x_name: str, x: np.ndarray, columns: list[str],
                values: list[np.ndarray], meta: dict, title: str) -> str:
    if args.format == "csv":
        rows = [[float(xi), *(float(v[i]) for v in values)] for i, xi in enumerate(x)]
        return to_csv([x_name, *columns], rows)
    if args.format == "json":
        rows = [[float(xi), *(float(v[i]) for v in values)] for i, xi in enumerate(x)]
        return to_json({**meta, "columns": [x_name, *columns], "rows": rows})
    series = {c: v for c, v in zip(columns, values)}
    return to_svg(x_name, x, series, title=title, y_label=quantity)


def _emit_record(args, record: dict) -> str:
    if args.format == "json":
        return to_json(record)
    if args.format == "csv":
        flat = {}
        for k, v in record.items():
            if isinstance(v, (list, tuple)):
                flat[f"{k}_lo"], flat[f"{k}_hi"] = v
            else:
                flat[k] = v
        return to_csv(list(flat), [list(flat.values())])
    raise UsageError(f"{args.command} produces a single record; --format svg applies to curves only")


def _delta_sweep(args) -> SweepSpec:
    return SweepSpec("delta", args.delta_min, args.delta_max, args.steps)


def cmd_overlap_curve(args) -> str:
    sweep = _delta_sweep(args)
    alphas = args.alpha or [1.5, 3.0]
    x = sweep.grid()
    values = [np.asarray(analytic.overlap(a, x)) for a in alphas]
    meta = {"command": "overlap-curve", "alphas": alphas}
    return _emit_curve(args, "overlap", "delta", x, _curve_columns("overlap", alphas), values, meta,
                       "Overlap of initial and displaced cat state")


def cmd_parity_curve(args) -> str:
    sweep = _delta_sweep(args)
    alphas = args.alpha or [1.5, 3.0]
    x = sweep.grid()
    values = [np.asarray(analytic.parity(a, x)) for a in alphas]
    meta = {"command": "parity-curve", "alphas": alphas}
    return _emit_curve(args, "parity", "delta", x, _curve_columns("parity", alphas), values, meta,
                       "Parity of the displaced cat state")


def cmd_error_curve(args) -> str:
    sweep = SweepSpec("alpha", args.alpha_min, args.alpha_max, args.steps)
    pts = optimizer.false_negative_curve(sweep.grid(), args.tolerance)
    x = np.array([p.alpha for p in pts])
    cols = ["delta_star", "p_even", "p_odd"]
    values = [np.array([getattr(p, c) for p in pts]) for c in cols]
    if args.format == "svg":
        series = {"p_even": values[1], "p_odd": values[2]}
        return to_svg("alpha", x, series, title="Detection probabilities at the parity minimum",
                      y_label="probability")
    return _emit_curve(args, "", "alpha", x, cols, values, {"command": "error-curve"}, "")


def cmd_optimize(args) -> str:
    alphas = args.alpha or [1.5]
    if len(alphas) != 1:
        raise UsageError("optimize takes a single --alpha")
    a = alphas[0]
    opt = optimizer.minimize_parity(a, args.tolerance)
    series = optimizer.parity_min_series(a)
    record = {
        "alpha": opt.alpha,
        "delta_star": opt.delta_star,
        "parity_at_min": opt.parity_at_min,
        "p_even_at_min": opt.p_even_at_min,
        "iterations": opt.iterations,
        "bracket": list(opt.bracket),
        "method": opt.method,
        "series_delta": series,
        "relative_gap": abs(series - opt.delta_star) / opt.delta_star,
        "approx_condition_delta": optimizer.approximate_condition_root(a, args.tolerance),
    }
    return _emit_record(args, record)


def cmd_simulate(args) -> str:
    alphas = args.alpha or [1.5]
    if len(alphas) != 1:
        raise UsageError("simulate takes a single --alpha")
    a = alphas[0]
    if args.auto_delta == (args.delta is not None):
        raise UsageError("give exactly one of --delta or --auto-delta")
    delta = optimizer.minimize_parity(a, args.tolerance).delta_star if args.auto_delta else args.delta
    stats = montecarlo.detection_experiment(a, delta, args.shots, montecarlo.RngSpec(args.seed))
    p_even, p_odd = analytic.even_odd_probabilities(a, delta)
    record = {**stats.to_dict(), "expected_p_even": p_even, "expected_p_odd": p_odd}
    if args.format == "csv":
        record.pop("algorithm")
    return _emit_record(args, record)


_TOPOLOGY = {"asym": interferometer.Topology.ASYMMETRIC,
             "antisym": interferometer.Topology.ANTISYMMETRIC,
             "general": interferometer.Topology.GENERAL}


def _ifo_config(args) -> interferometer.IfoConfig:
    topo = _TOPOLOGY[args.topology]
    R, T, A = args.reflectivity, args.transmissivity, args.carrier_amplitude
    if topo is interferometer.Topology.ANTISYMMETRIC:
        if R is not None or T is not None:
            raise UsageError("antisymmetric topology fixes R = T = 1/sqrt(2)")
        return interferometer.IfoConfig.antisymmetric(A)
    if R is None and T is None:
        raise UsageError("give --reflectivity and/or --transmissivity")
    if R is None:
        R = math.sqrt(1.0 - T * T)
    if T is None:
        T = math.sqrt(1.0 - R * R)
    if topo is interferometer.Topology.GENERAL:
        return interferometer.IfoConfig(R, T, A, args.phi1, args.phi2, topo)
    return interferometer.IfoConfig(R, T, A, topology=topo)


def cmd_ifo(args) -> str:
    cfg = _ifo_config(args)
    if cfg.topology is interferometer.Topology.GENERAL:
        if args.phi is not None:
            raise UsageError("general topology takes --phi1/--phi2, not --phi")
        phi = None
    else:
        if args.phi is None:
            raise UsageError("--phi is required")
        phi = args.phi
    disp = interferometer.displacement_of(cfg, phi)
    exact = interferometer.dark_port_amplitude(cfg, phi)
    record = {
        "topology": cfg.topology.value,
        "reflectivity": cfg.reflectivity,
        "transmissivity": cfg.transmissivity,
        "carrier_amplitude": cfg.carrier_amplitude,
        "B": disp.B,
        "N": disp.n_photons,
        "delta": disp.delta,
        "dark_port_real": exact.real,
        "dark_port_imag": exact.imag,
        "linearization_error": abs(exact - 1j * disp.delta),
    }
    if phi is not None:
        record["phi"] = phi
    else:
        record["phi1"], record["phi2"] = cfg.phi1, cfg.phi2
    return _emit_record(args, record)


def cmd_limits(args) -> str:
    lim = analytic.reference_limits(analytic.ReferenceLimits(args.n_carrier, args.squeeze))
    record = {"n_photons": args.n_carrier, "squeeze_factor": args.squeeze,
              "snl": lim.snl, "sqz": lim.sqz, "hl": lim.hl}
    for a in args.alpha or []:
        key = _alpha_key(a)
        record[f"phi0_alpha_{key}"] = analytic.detectable_phase(a, args.n_carrier)
        record[f"phi0_approx_alpha_{key}"] = analytic.detectable_phase_approx(a, args.n_carrier)
    return _emit_record(args, record)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="-", help="output path ('-' for stdout)")
    common.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    common.add_argument("--alpha", type=float, action="append", help="cat amplitude (repeatable)")

    delta_sweep = argparse.ArgumentParser(add_help=False)
    delta_sweep.add_argument("--delta-min", type=float, default=0.0)
    delta_sweep.add_argument("--delta-max", type=float, default=3.0)
    delta_sweep.add_argument("--steps", type=int, default=601)

    tol = argparse.ArgumentParser(add_help=False)
    tol.add_argument("--tolerance", type=float, default=optimizer.DEFAULT_TOLERANCE)

    p = _Parser(prog="catphase", description="Cat-state phase detection: closed forms, "
                                             "optimization and Monte-Carlo campaigns.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("overlap-curve", parents=[common, delta_sweep],
                       help="overlap of initial and displaced cat vs delta")
    s.set_defaults(func=cmd_overlap_curve)
    s = sub.add_parser("parity-curve", parents=[common, delta_sweep], help="parity vs delta")
    s.set_defaults(func=cmd_parity_curve)

    s = sub.add_parser("error-curve", parents=[common, tol],
                       help="p_even/p_odd at the parity minimum vs alpha")
    s.add_argument("--alpha-min", type=float, default=1.0)
    s.add_argument("--alpha-max", type=float, default=4.0)
    s.add_argument("--steps", type=int, default=31)
    s.set_defaults(func=cmd_error_curve)

    s = sub.add_parser("optimize", parents=[common, tol], help="locate the parity minimum")
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("simulate", parents=[common, tol], help="Monte-Carlo detection campaign")
    s.add_argument("--delta", type=float)
    s.add_argument("--auto-delta", action="store_true", help="use the parity-minimizing delta")
    s.add_argument("--shots", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("ifo", parents=[common], help="phase-to-displacement map of the interferometer")
    s.add_argument("--topology", choices=tuple(_TOPOLOGY), default="antisym")
    s.add_argument("--reflectivity", type=float)
    s.add_argument("--transmissivity", type=float)
    s.add_argument("--carrier-amplitude", type=float, default=1000.0)
    s.add_argument("--phi", type=float)
    s.add_argument("--phi1", type=float, default=0.0, help="arm 1 phase (general topology)")
    s.add_argument("--phi2", type=float, default=0.0, help="arm 2 phase (general topology)")
    s.set_defaults(func=cmd_ifo)

    s = sub.add_parser("limits", parents=[common],
                       help="reference sensitivities and detectable phase for N carrier photons")
    s.add_argument("--n-carrier", type=float, default=1e6)
    s.add_argument("--squeeze", type=float, default=0.0)
    s.set_defaults(func=cmd_limits)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            text = args.func(args)
    except UsageError as exc:
        print(f"catphase: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TruncationError, BracketingError) as exc:
        print(f"catphase: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (CatPhaseError, ValueError) as exc:
        print(f"catphase: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.out == "-":
            sys.stdout.write(text)
        else:
            with open(args.out, "w", newline="\n", encoding="utf-8") as fh:
                fh.write(text)
    except OSError as exc:
        print(f"catphase: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
