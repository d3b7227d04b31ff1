"""Command-line front end.

Subcommands: spectrum, squeeze, wavepacket, wigner, report, verify.
Exit codes: 0 success, 1 usage, 2 netlist syntax error, 3 semantic error,
4 numeric error (pole saturation, truncation gate), 5 verify failure.
Outputs are deterministic: CSV floats use 17 significant digits, JSON floats
use shortest round-trip decimals.  SQR_THREADS caps kernel parallelism
(0 = auto).
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, circuit, fock, netlist, verify, wavepacket
from .fock import FockSpace, OscillatorFrame, SqueezeSpec, TruncationError
from .netlist import NetlistSemanticError, NetlistSyntaxError
from .sfg import PoleError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_SEMANTIC = 3
EXIT_NUMERIC = 4
EXIT_VERIFY = 5


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _f17(v: float) -> str:
    return f"{v:.17g}"


def _write(args, text: str):
    if args.output is None:
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")


def _csv(rows, header) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_f17(v) for v in row))
    return "\n".join(lines) + "\n"


def _json(payload) -> str:
    return json.dumps(payload) + "\n"


def _read_netlist(path: str) -> netlist.RingCircuit:
    p = Path(path)
    if not p.is_file():
        raise _UsageError(f"netlist file not found: {path}")
    return netlist.parse(p.read_text(encoding="utf-8"))


def _sweep_spec(args) -> circuit.SweepSpec:
    try:
        return circuit.SweepSpec(args.lambda_start, args.lambda_stop, args.points)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _frame(args) -> OscillatorFrame:
    try:
        return OscillatorFrame(hbar=args.hbar, m=args.m, omega=args.omega)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def cmd_spectrum(args) -> int:
    circ = _read_netlist(args.netlist)
    resp = circuit.sweep(circ, _sweep_spec(args))
    if len(resp.pole_points) == len(resp.lambdas):
        raise PoleError("every sweep point is a pole", 0.0)
    if args.format == "json":
        payload = {
            "lambda_um": [float(v) for v in resp.lambdas],
            "re_through": [float(v) for v in resp.through.real],
            "im_through": [float(v) for v in resp.through.imag],
            "mag2_through": [float(v) for v in np.abs(resp.through) ** 2],
            "re_drop": [float(v) for v in resp.drop.real],
            "im_drop": [float(v) for v in resp.drop.imag],
            "mag2_drop": [float(v) for v in np.abs(resp.drop) ** 2],
            "pole_points": list(resp.pole_points),
        }
        _write(args, _json(payload))
    else:
        rows = zip(
            resp.lambdas,
            resp.through.real,
            resp.through.imag,
            np.abs(resp.through) ** 2,
            resp.drop.real,
            resp.drop.imag,
            np.abs(resp.drop) ** 2,
        )
        _write(
            args,
            _csv(
                rows,
                [
                    "lambda_um",
                    "re_through",
                    "im_through",
                    "mag2_through",
                    "re_drop",
                    "im_drop",
                    "mag2_drop",
                ],
            ),
        )
    return EXIT_OK


def cmd_squeeze(args) -> int:
    spec = SqueezeSpec(complex(args.alpha, args.alpha_im), args.r, args.phi)
    space = FockSpace(args.dim)
    frame = _frame(args)
    state = fock.squeezed_coherent_state(space, spec, force=args.force)
    rep = fock.variances(state, frame)
    payload = {
        "alpha_re": spec.alpha.real,
        "alpha_im": spec.alpha.imag,
        "r": spec.r,
        "phi": spec.phi,
        "dim": space.dim,
        "var_x": rep.var_x,
        "var_p": rep.var_p,
        "product": rep.product,
        "photon_dist": [float(p) for p in fock.photon_distribution(state)],
    }
    _write(args, _json(payload))
    return EXIT_OK


def cmd_wavepacket(args) -> int:
    try:
        params = wavepacket.WavePacketParams(
            C=args.c, x0=args.x0, w0=args.w0, p0=args.p0
        )
        grid = wavepacket.DisplacementGrid(args.x_min, args.x_max, args.points)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    xs = grid.xs()
    psi = wavepacket.evaluate_psi(params, xs)
    dens = wavepacket.density_profile(params, grid)
    rows = zip(xs, psi.real, psi.imag, dens)
    _write(args, _csv(rows, ["x_um", "re_psi", "im_psi", "density"]))
    return EXIT_OK


def cmd_wigner(args) -> int:
    spec = SqueezeSpec(complex(args.alpha, args.alpha_im), args.r, args.phi)
    space = FockSpace(args.dim)
    frame = _frame(args)
    state = fock.squeezed_coherent_state(space, spec, force=args.force)
    x = np.linspace(args.x_min, args.x_max, args.nx)
    p = np.linspace(args.p_min, args.p_max, args.np)
    w = fock.wigner(state, frame, x, p, check_coverage=not args.no_coverage_check)
    if args.format == "json":
        payload = {
            "x": [float(v) for v in x],
            "p": [float(v) for v in p],
            "w": [[float(v) for v in row] for row in w],
        }
        _write(args, _json(payload))
    else:
        rows = ((x[i], p[j], w[i, j]) for i in range(len(x)) for j in range(len(p)))
        _write(args, _csv(rows, ["x", "p", "w"]))
    return EXIT_OK


def cmd_report(args) -> int:
    circ = _read_netlist(args.netlist)
    try:
        pump = circuit.FwmPump(
            pump_power=args.pump_power,
            gamma_nl=args.gamma_nl,
            interaction_length=args.interaction_length,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    reports = circuit.squeezing_report(circ, pump, _sweep_spec(args), _frame(args))
    payload = [
        {
            "lambda_res_um": rep.lambda_res_um,
            "enhancement": rep.enhancement,
            "r": rep.r,
            "var_x": rep.var_x,
            "var_p": rep.var_p,
            "product": rep.product,
            "near_pole": rep.near_pole,
        }
        for rep in reports
        if math.isfinite(rep.enhancement)
    ]
    _write(args, _json(payload))
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify.run_all()
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        lines.append(f"{status}  {r.name:<{width}}  {r.detail}")
    n_fail = sum(not r.ok for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    _write(args, "\n".join(lines) + "\n")
    return EXIT_OK if n_fail == 0 else EXIT_VERIFY


def _add_output_flags(p, formats=("csv", "json"), default="csv"):
    p.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    if formats:
        p.add_argument("--format", choices=formats, default=default)


def _add_sweep_flags(p):
    p.add_argument("--lambda-start", type=float, default=1.54, help="um")
    p.add_argument("--lambda-stop", type=float, default=1.56, help="um")
    p.add_argument("--points", type=int, default=2000)


def _add_state_flags(p, dim_default=96):
    p.add_argument("--alpha", type=float, default=0.0, help="Re(alpha)")
    p.add_argument("--alpha-im", type=float, default=0.0, help="Im(alpha)")
    p.add_argument("--r", type=float, default=0.0, help="squeeze magnitude")
    p.add_argument("--phi", type=float, default=0.0, help="squeeze phase, rad")
    p.add_argument("--dim", type=int, default=dim_default)
    p.add_argument("--force", action="store_true",
                   help="proceed past the truncation gate")


def _add_frame_flags(p):
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=1.0)


def build_parser() -> _Parser:
    parser = _Parser(
        prog="sqring",
        description="Squeezed-light microring toolkit: spectra, Fock-space "
        "squeezing reports, wave packets, and Wigner maps.",
    )
    parser.add_argument("--version", action="version", version=f"sqring {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="sweep a netlist's through/drop response")
    p.add_argument("netlist")
    _add_sweep_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("squeeze", help="variances and photon statistics of a state")
    _add_state_flags(p)
    _add_frame_flags(p)
    _add_output_flags(p, formats=())
    p.set_defaults(func=cmd_squeeze)

    p = sub.add_parser("wavepacket", help="Gaussian packet density over a grid")
    p.add_argument("--c", type=float, default=5.0, help="amplitude C")
    p.add_argument("--x0", type=float, default=5.0, help="center, um")
    p.add_argument("--w0", type=float, default=1.0, help="width, um")
    p.add_argument("--p0", type=float, default=0.0, help="momentum, 1/um")
    p.add_argument("--x-min", type=float, default=0.0)
    p.add_argument("--x-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=1001)
    _add_output_flags(p, formats=())
    p.set_defaults(func=cmd_wavepacket)

    p = sub.add_parser("wigner", help="Wigner map of a squeezed coherent state")
    _add_state_flags(p)
    _add_frame_flags(p)
    p.add_argument("--x-min", type=float, default=-6.0)
    p.add_argument("--x-max", type=float, default=6.0)
    p.add_argument("--p-min", type=float, default=-6.0)
    p.add_argument("--p-max", type=float, default=6.0)
    p.add_argument("--nx", type=int, default=161)
    p.add_argument("--np", type=int, default=161)
    p.add_argument("--no-coverage-check", action="store_true")
    _add_output_flags(p)
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("report", help="per-resonance squeezing report")
    p.add_argument("netlist")
    _add_sweep_flags(p)
    p.add_argument("--pump-power", type=float, default=0.05, help="W")
    p.add_argument("--gamma-nl", type=float, default=100.0, help="1/(W m)")
    p.add_argument("--interaction-length", type=float, default=2e-5, help="m")
    _add_frame_flags(p)
    _add_output_flags(p, formats=())
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("verify", help="run the built-in invariant suite")
    _add_output_flags(p, formats=())
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except NetlistSyntaxError as exc:
        print(f"netlist syntax error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NetlistSemanticError as exc:
        print(f"netlist semantic error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except (TruncationError, PoleError, fock.WignerCoverageError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
