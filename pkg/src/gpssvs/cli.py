"""Command-line front end.

Subcommands: ``state`` dumps coefficients, ``quadratures`` and
``number-squeezing`` run parameter sweeps, ``wigner`` evaluates a
phase-space grid, ``verify`` runs the cross-module check suite.

Exit codes: 0 success, 2 usage error, 3 domain failure (no convergence,
annihilated state, oracle window too small), 4 verification failure.  All outputs
are deterministic for fixed flags; floats are written with 17 significant
digits so files round-trip bit-exactly.
"""

import argparse
from dataclasses import dataclass, field
import json
import sys

import numpy as np

from .deform import Nonlinearity
from .errors import GpssvsError
from . import observables as obs
from . import states as st
from . import verify as vf
from . import wigner as wg

SWEEP_AXES = ("r", "theta", "m")


@dataclass
class RunConfig:
    """Parsed invocation: one subcommand plus its flag values."""

    subcommand: str
    f: str = "harmonic"
    pt_lambda: float = 1.5
    pt_kappa: float = 1.5
    custom_file: str | None = None
    r: float = 0.0
    theta: float = 0.0
    m: int = 0
    parity: str = st.EVEN
    sweep: dict = field(default_factory=dict)
    quantities: tuple = ()
    grid: tuple | None = None
    tol: float = 1e-12
    nmax: int = st.DEFAULT_N_MAX
    oracle_dim: int = vf.DEFAULT_ORACLE_DIM
    out: str | None = None
    format: str = "csv"


def _add_nl_flags(p: argparse.ArgumentParser):
    p.add_argument("--f", choices=("harmonic", "poschl-teller", "custom"),
                   default="harmonic", help="deformation function family")
    p.add_argument("--pt-lambda", type=float, default=1.5,
                   help="Poschl-Teller lambda (>= 1/2)")
    p.add_argument("--pt-kappa", type=float, default=1.5,
                   help="Poschl-Teller kappa (>= 1/2)")
    p.add_argument("--custom-file", default=None,
                   help="text file with one positive f(n) value per line, n = 1, 2, ...")


def _add_state_flags(p: argparse.ArgumentParser):
    p.add_argument("--r", type=float, default=0.0, help="squeezing magnitude")
    p.add_argument("--theta", type=float, default=0.0, help="squeezing phase, radians")
    p.add_argument("--m", type=int, default=0, help="pair-subtraction index")
    p.add_argument("--parity", choices=(st.EVEN, st.ODD), default=st.EVEN)


def _add_numeric_flags(p: argparse.ArgumentParser):
    p.add_argument("--tol", type=float, default=1e-12, help="relative tail tolerance")
    p.add_argument("--nmax", type=int, default=st.DEFAULT_N_MAX,
                   help="cap on retained series terms")
    p.add_argument("--oracle-dim", type=int, default=vf.DEFAULT_ORACLE_DIM,
                   help="Fock dimension of the dense verification oracle")


def _add_out_flags(p: argparse.ArgumentParser, formats=("csv", "json")):
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=formats, default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gpssvs",
        description="Generalized photon-subtracted squeezed vacuum states: "
                    "construction and nonclassicality diagnostics.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_state = sub.add_parser("state", help="dump the Fock coefficients of one state")
    for add in (_add_nl_flags, _add_state_flags, _add_numeric_flags):
        add(p_state)
    _add_out_flags(p_state)

    for name, default_q in (("quadratures", "var_x,var_p,robertson_rhs"),
                            ("number-squeezing", "n_squeeze,mandel_q")):
        p_cmd = sub.add_parser(name, help=f"sweep {default_q.split(',')[0]} and friends")
        for add in (_add_nl_flags, _add_state_flags, _add_numeric_flags):
            add(p_cmd)
        p_cmd.add_argument("--sweep", action="append", default=[],
                           metavar="axis=start:stop:count",
                           help="sweep an axis (r, theta or m); repeatable")
        p_cmd.add_argument("--quantities", default=default_q,
                           help="comma list from " + ",".join(obs.SWEEP_QUANTITIES))
        _add_out_flags(p_cmd)

    p_wig = sub.add_parser("wigner", help="evaluate the Wigner function on a grid")
    for add in (_add_nl_flags, _add_state_flags, _add_numeric_flags):
        add(p_wig)
    p_wig.add_argument("--grid", default="-3:3:121",
                       metavar="xmin:xmax:n[,pmin:pmax:n]",
                       help="grid extent and node count (p axis defaults to x axis)")
    p_wig.add_argument("--out", required=True, help="output path")
    p_wig.add_argument("--format", choices=("csv", "json", "matrix"), default="csv")

    p_ver = sub.add_parser("verify", help="run the cross-module verification suite")
    _add_numeric_flags(p_ver)
    p_ver.add_argument("--out", default=None, help="report path (default: stdout)")
    return parser


def _parse_sweep(parser, entries) -> dict:
    axes = {}
    for entry in entries:
        try:
            axis, rng = entry.split("=", 1)
            start, stop, count = rng.split(":")
            start, stop, count = float(start), float(stop), int(count)
        except ValueError:
            parser.error(f"malformed --sweep {entry!r}; expected axis=start:stop:count")
        if axis not in SWEEP_AXES:
            parser.error(f"unknown sweep axis {axis!r}; pick from {SWEEP_AXES}")
        if count < 1:
            parser.error("sweep count must be at least 1")
        if axis in axes:
            parser.error(f"axis {axis!r} swept twice")
        values = np.linspace(start, stop, count)
        if axis == "m":
            rounded = np.rint(values)
            if np.max(np.abs(values - rounded)) > 1e-9:
                parser.error("m sweep must hit integers")
            values = rounded.astype(int)
        axes[axis] = values
    return axes


def _parse_grid(parser, text) -> tuple:
    def triple(part):
        bits = part.split(":")
        if len(bits) != 3:
            parser.error(f"malformed --grid component {part!r}")
        lo, hi, n = float(bits[0]), float(bits[1]), int(bits[2])
        if n < 2:
            parser.error("grid needs at least 2 nodes per axis")
        return lo, hi, n

    parts = text.split(",")
    if len(parts) == 1:
        x = triple(parts[0])
        return x, x
    if len(parts) == 2:
        return triple(parts[0]), triple(parts[1])
    parser.error(f"malformed --grid {text!r}")


def _config_from_args(parser, args) -> RunConfig:
    cfg = RunConfig(subcommand=args.subcommand)
    for name in ("f", "pt_lambda", "pt_kappa", "custom_file", "r", "theta", "m",
                 "parity", "tol", "nmax", "oracle_dim", "out", "format"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if hasattr(args, "sweep"):
        cfg.sweep = _parse_sweep(parser, args.sweep)
    if hasattr(args, "quantities"):
        cfg.quantities = tuple(q.strip() for q in args.quantities.split(",") if q.strip())
        for q in cfg.quantities:
            if q not in obs.SWEEP_QUANTITIES:
                parser.error(f"unknown quantity {q!r}")
        if not cfg.quantities:
            parser.error("--quantities must name at least one quantity")
    if hasattr(args, "grid"):
        cfg.grid = _parse_grid(parser, args.grid)
    return cfg


def _nonlinearity(parser, cfg: RunConfig) -> Nonlinearity:
    if cfg.f == "harmonic":
        return Nonlinearity.harmonic()
    if cfg.f == "poschl-teller":
        try:
            return Nonlinearity.poschl_teller(cfg.pt_lambda, cfg.pt_kappa)
        except ValueError as exc:
            parser.error(str(exc))
    if cfg.custom_file is None:
        parser.error("--f custom requires --custom-file")
    try:
        with open(cfg.custom_file) as fh:
            values = [float(line.strip()) for line in fh
                      if line.strip() and not line.lstrip().startswith("#")]
        return Nonlinearity.custom(values)
    except OSError as exc:
        parser.error(f"cannot read {cfg.custom_file}: {exc}")
    except ValueError as exc:
        parser.error(f"bad custom table: {exc}")


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _run_state(cfg: RunConfig, nl: Nonlinearity) -> int:
    spec = st.SqueezeSpec(cfg.r, cfg.theta, cfg.m, cfg.parity)
    state = st.pssvs(nl, spec, tol=cfg.tol, n_max=cfg.nmax)
    if cfg.format == "csv":
        lines = ["photon_number,re,im,prob"]
        for n, c, p in zip(state.photon_numbers, state.coeffs, state.probabilities):
            lines.append(f"{int(n)},{c.real:.17g},{c.imag:.17g},{p:.17g}")
        _emit("\n".join(lines) + "\n", cfg.out)
    else:
        rows = [{"photon_number": int(n), "re": float(c.real), "im": float(c.imag),
                 "prob": float(p)}
                for n, c, p in zip(state.photon_numbers, state.coeffs,
                                   state.probabilities)]
        _emit(json.dumps(rows, indent=2) + "\n", cfg.out)
    return 0


def _run_sweep(cfg: RunConfig, nl: Nonlinearity) -> int:
    r_values = cfg.sweep.get("r", np.array([cfg.r]))
    theta_values = cfg.sweep.get("theta", np.array([cfg.theta]))
    m_values = cfg.sweep.get("m", np.array([cfg.m], dtype=int))
    rows = obs.sweep(nl, r_values, theta_values, m_values, cfg.parity,
                     cfg.quantities, tol=cfg.tol, n_max=cfg.nmax)
    if cfg.format == "csv":
        lines = ["r,theta,m,parity,quantity,value,status"]
        for row in rows:
            value = "" if row.value is None else f"{row.value:.17g}"
            lines.append(f"{row.r:.17g},{row.theta:.17g},{row.m},{row.parity},"
                         f"{row.quantity},{value},{row.status}")
        _emit("\n".join(lines) + "\n", cfg.out)
    else:
        payload = [{"r": row.r, "theta": row.theta, "m": row.m, "parity": row.parity,
                    "quantity": row.quantity, "value": row.value, "status": row.status}
                   for row in rows]
        _emit(json.dumps(payload, indent=2) + "\n", cfg.out)
    return 0


def _run_wigner(cfg: RunConfig, nl: Nonlinearity) -> int:
    spec = st.SqueezeSpec(cfg.r, cfg.theta, cfg.m, cfg.parity)
    state = st.pssvs(nl, spec, tol=cfg.tol, n_max=cfg.nmax)
    (xmin, xmax, nx), (pmin, pmax, np_) = cfg.grid
    grid = wg.wigner_grid(state, (xmin, xmax), (pmin, pmax), (nx, np_))
    if cfg.format == "csv":
        wg.write_wigner_csv(grid, cfg.out)
    elif cfg.format == "matrix":
        wg.write_wigner_matrix(grid, cfg.out)
    else:
        payload = wg._sidecar_payload(grid)
        payload["x"] = [float(v) for v in grid.x_axis]
        payload["p"] = [float(v) for v in grid.p_axis]
        payload["w"] = [[float(v) for v in row] for row in grid.values]
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", cfg.out)
    return 0


def _run_verify(cfg: RunConfig) -> int:
    report = vf.run_suite(oracle_dim=cfg.oracle_dim, tol=cfg.tol, n_max=cfg.nmax)
    _emit(vf.report_to_json(report), cfg.out)
    if not report.all_passed:
        failed = [c.name for c in report.checks if not c.passed]
        print(f"verification failed: {', '.join(sorted(set(failed)))}", file=sys.stderr)
        return 4
    return 0


def run(cfg: RunConfig, parser: argparse.ArgumentParser) -> int:
    """Dispatch a parsed configuration; returns the process exit code."""
    try:
        if cfg.subcommand == "verify":
            return _run_verify(cfg)
        nl = _nonlinearity(parser, cfg)
        if cfg.subcommand == "state":
            return _run_state(cfg, nl)
        if cfg.subcommand in ("quadratures", "number-squeezing"):
            return _run_sweep(cfg, nl)
        if cfg.subcommand == "wigner":
            return _run_wigner(cfg, nl)
        parser.error(f"unknown subcommand {cfg.subcommand!r}")
    except GpssvsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def _merge_dash_values(argv, flags=("--grid",)):
    # Grid extents are often negative ("--grid -3:3:121"); argparse would
    # read the value as an option, so fold it into "--grid=-3:3:121".
    merged, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if (tok in flags and i + 1 < len(argv)
                and argv[i + 1].startswith("-") and ":" in argv[i + 1]):
            merged.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            merged.append(tok)
            i += 1
    return merged


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_dash_values(list(argv)))
    cfg = _config_from_args(parser, args)
    return run(cfg, parser)
