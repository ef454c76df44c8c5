"""Command-line interface.

Commands: classify, apply, simulate, fidelity, convergence, peel, capacity.
Channel, state and scan-config arguments accept either inline JSON or a path
to a JSON file.  Output is JSON (CSV for convergence scans) with floats
printed to 17 significant digits so that every emitted number re-parses to
the identical value.  Exit codes: 0 success, 2 input error, 3 request outside
the supported domain.

Channel spec   {"t": [[...]], "n": [[...]], "d": [...]}  or
               {"class": "C_Att", "tau": 0.5, "nbar": 0.0} (see channels module)
State spec     {"mean": [...], "cm": [[...]]}
Scan config    {"channel": ..., "grid": {"param": "mu"|"mu_tilde", "start": ...,
               "stop": ..., "points": ..., "log": true},
               "witness": {"mu": ..., "a": ..., "c": ..., "r": ...},
               "output": {"format": "csv"|"json", "path": "..."}}

The environment variable BOSONIC_TELESIM_TOL overrides the default tolerance
bundle; the --tol flag takes precedence over the environment.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__
from .capacity import corrected_key_bound
from .channels import (apply_channel, channel_from_dict, channel_to_dict,
                       classify)
from .convergence import convergence_scan, decide_uniform, diamond_upper_bound
from .errors import (BosonicTelesimError, NoUniformBoundError,
                     UnsupportedFormError, ValidationError)
from .fidelity import fuchs_vdg, gaussian_fidelity
from .peeling import peel_bound
from .symplectic import GaussianState
from .teleportation import simulate_channel
from .tolerances import DEFAULT, Tolerances

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNSUPPORTED = 3


class _CliInputError(Exception):
    pass


def _format_float(x: float) -> str:
    return format(float(x), ".17g")


def _emit_json(obj) -> str:
    """Minimal JSON emitter with 17-significant-digit floats."""
    out = io.StringIO()

    def write(o, indent):
        pad = "  " * indent
        if isinstance(o, dict):
            if not o:
                out.write("{}")
                return
            out.write("{\n")
            for i, (k, v) in enumerate(o.items()):
                out.write(f'{pad}  {json.dumps(str(k))}: ')
                write(v, indent + 1)
                out.write(",\n" if i < len(o) - 1 else "\n")
            out.write(pad + "}")
        elif isinstance(o, (list, tuple)):
            if not o:
                out.write("[]")
                return
            out.write("[")
            for i, v in enumerate(o):
                write(v, indent)
                if i < len(o) - 1:
                    out.write(", ")
            out.write("]")
        elif isinstance(o, bool):
            out.write("true" if o else "false")
        elif o is None:
            out.write("null")
        elif isinstance(o, (int, np.integer)):
            out.write(str(int(o)))
        elif isinstance(o, (float, np.floating)):
            out.write(_format_float(o))
        else:
            out.write(json.dumps(o))

    write(obj, 0)
    return out.getvalue()


def _load_json_arg(arg: str):
    """Accept inline JSON, @path, or a plain path to a JSON file."""
    text = arg
    if arg.startswith("@"):
        path = arg[1:]
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise _CliInputError(f"cannot read {path}: {exc}") from exc
    else:
        stripped = arg.strip()
        if not stripped.startswith(("{", "[")):
            try:
                with open(arg, "r", encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise _CliInputError(f"cannot read {arg}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _CliInputError(f"malformed JSON: {exc}") from exc


def _state_from_dict(spec) -> GaussianState:
    if not isinstance(spec, dict) or set(spec) != {"mean", "cm"}:
        raise _CliInputError('state spec must be {"mean": [...], "cm": [[...]]}')
    return GaussianState(np.asarray(spec["mean"], dtype=float),
                         np.asarray(spec["cm"], dtype=float))


def _state_to_dict(state: GaussianState) -> dict:
    return {"mean": state.mean.tolist(), "cm": state.cm.tolist()}


def _tolerances(args) -> Tolerances:
    tol = getattr(args, "tol", None)
    if tol is None:
        env = os.environ.get("BOSONIC_TELESIM_TOL")
        if env is not None:
            try:
                tol = float(env)
            except ValueError:
                raise _CliInputError(
                    f"BOSONIC_TELESIM_TOL is not a number: {env!r}") from None
    if tol is None:
        return DEFAULT
    if tol <= 0.0:
        raise _CliInputError(f"tolerance must be positive, got {tol}")
    return Tolerances.uniform(tol)


def _cmd_classify(args) -> int:
    tol = _tolerances(args)
    ch = channel_from_dict(_load_json_arg(args.channel))
    form = classify(ch, tol)
    verdict = decide_uniform(ch, tol=tol)
    print(_emit_json({"class": form.tag.value, "tau": form.tau, "r": form.r,
                      "noise_param": form.noise_param,
                      "uniform_convergence": verdict.uniform}))
    return EXIT_OK


def _cmd_apply(args) -> int:
    _tolerances(args)
    ch = channel_from_dict(_load_json_arg(args.channel))
    state = _state_from_dict(_load_json_arg(args.state))
    out = apply_channel(ch, state, target_mode=args.mode)
    print(_emit_json(_state_to_dict(out)))
    return EXIT_OK


def _cmd_simulate(args) -> int:
    _tolerances(args)
    ch = channel_from_dict(_load_json_arg(args.channel))
    sim = simulate_channel(ch, args.mu)
    print(_emit_json({"mu": sim.params.mu, "xi": sim.params.xi,
                      "base": channel_to_dict(sim.base),
                      "effective": channel_to_dict(sim.effective)}))
    return EXIT_OK


def _cmd_fidelity(args) -> int:
    s1 = _state_from_dict(_load_json_arg(args.state1))
    s2 = _state_from_dict(_load_json_arg(args.state2))
    f = gaussian_fidelity(s1, s2)
    sandwich = fuchs_vdg(f)
    print(_emit_json({"fidelity": f, "trace_lower": sandwich.lower,
                      "trace_upper": sandwich.upper}))
    return EXIT_OK


_GRID_KEYS = {"param", "start", "stop", "points", "log"}
_WITNESS_KEYS = {"mu", "a", "c", "r"}
_OUTPUT_KEYS = {"format", "path"}
_SCAN_COLUMNS = ("mu", "mu_tilde", "xi", "upper_bound", "witness_lower_bound")


def _parse_scan_config(spec: dict):
    if not isinstance(spec, dict):
        raise _CliInputError("scan config must be a JSON object")
    unknown = set(spec) - {"channel", "grid", "witness", "output"}
    if unknown:
        raise _CliInputError(f"unknown scan config keys: {sorted(unknown)}")
    if "channel" not in spec or "grid" not in spec:
        raise _CliInputError("scan config requires 'channel' and 'grid'")
    grid_spec = spec["grid"]
    if not isinstance(grid_spec, dict) or set(grid_spec) - _GRID_KEYS:
        raise _CliInputError(f"grid spec keys must be a subset of {sorted(_GRID_KEYS)}")
    for key in ("start", "stop", "points"):
        if key not in grid_spec:
            raise _CliInputError(f"grid spec is missing {key!r}")
    param = grid_spec.get("param", "mu")
    if param not in ("mu", "mu_tilde"):
        raise _CliInputError(f"grid param must be 'mu' or 'mu_tilde', got {param!r}")
    points = grid_spec["points"]
    if not isinstance(points, int) or points < 1:
        raise _CliInputError(f"grid points must be a positive integer, got {points!r}")
    start, stop = float(grid_spec["start"]), float(grid_spec["stop"])
    if grid_spec.get("log", False):
        if start <= 0.0 or stop <= 0.0:
            raise _CliInputError("log-spaced grids require positive endpoints")
        grid = np.geomspace(start, stop, points)
    else:
        grid = np.linspace(start, stop, points)
    witness = spec.get("witness", {})
    if not isinstance(witness, dict) or set(witness) - _WITNESS_KEYS:
        raise _CliInputError(f"witness keys must be a subset of {sorted(_WITNESS_KEYS)}")
    output = spec.get("output", {"format": "csv", "path": None})
    if not isinstance(output, dict) or set(output) - _OUTPUT_KEYS:
        raise _CliInputError(f"output keys must be a subset of {sorted(_OUTPUT_KEYS)}")
    fmt = output.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise _CliInputError(f"output format must be 'csv' or 'json', got {fmt!r}")
    return spec["channel"], param, grid, witness, fmt, output.get("path")


def _cmd_convergence(args) -> int:
    tol = _tolerances(args)
    channel_spec, param, grid, witness, fmt, path = _parse_scan_config(
        _load_json_arg(args.config))
    ch = channel_from_dict(channel_spec)
    uniform = decide_uniform(ch, tol=tol).uniform
    if uniform and param != "mu":
        raise _CliInputError(
            "full-rank-noise channels scan over 'mu' (upper-bound column)")
    if not uniform and param != "mu_tilde":
        raise _CliInputError(
            "rank-deficient channels scan over 'mu_tilde' (witness column)")
    rows = convergence_scan(ch, grid, witness, tol=tol)
    records = [{col: getattr(row, col) for col in _SCAN_COLUMNS} for row in rows]
    if fmt == "json":
        text = _emit_json(records) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_SCAN_COLUMNS)
        for rec in records:
            writer.writerow(["" if rec[col] is None else _format_float(rec[col])
                             for col in _SCAN_COLUMNS])
        text = buf.getvalue()
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_peel(args) -> int:
    _tolerances(args)
    if args.delta is None and args.channel is None:
        raise _CliInputError("peel requires either --delta or --channel with --mu")
    if args.delta is not None:
        delta = args.delta
    else:
        if args.mu is None:
            raise _CliInputError("--channel requires --mu")
        ch = channel_from_dict(_load_json_arg(args.channel))
        delta = diamond_upper_bound(ch, args.mu)
    bound = peel_bound(args.n, delta, args.topology)
    print(_emit_json({"topology": bound.topology, "n": args.n,
                      "per_use_delta": bound.per_use_delta, "total": bound.total,
                      "epsilon_tp": bound.total / 2.0}))
    return EXIT_OK


def _cmd_capacity(args) -> int:
    tol = _tolerances(args)
    ch = channel_from_dict(_load_json_arg(args.channel))
    report = corrected_key_bound(ch, args.n, args.eps, args.mu, args.V, tol=tol)
    print(_emit_json({"value": report.value, "formula": report.formula,
                      "threshold_active": report.threshold_active,
                      "unbounded": report.unbounded, "inputs": report.inputs}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bosonic-telesim",
        description="Gaussian-channel teleportation simulation: classification, "
                    "convergence diagnostics and key-capacity bounds.")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="override the tolerance bundle (takes precedence "
                             "over BOSONIC_TELESIM_TOL)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common],
                       help="canonical class, invariants and convergence verdict")
    p.add_argument("--channel", required=True, help="channel JSON (inline or path)")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("apply", parents=[common], help="apply a channel to a state")
    p.add_argument("--channel", required=True)
    p.add_argument("--state", required=True, help="state JSON (inline or path)")
    p.add_argument("--mode", type=int, default=0, help="target mode (default 0)")
    p.set_defaults(func=_cmd_apply)

    p = sub.add_parser("simulate", parents=[common],
                       help="teleportation simulation of a channel at resource mu")
    p.add_argument("--channel", required=True)
    p.add_argument("--mu", type=float, required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("fidelity", parents=[common],
                       help="fidelity and trace-distance sandwich of two states")
    p.add_argument("--state1", required=True)
    p.add_argument("--state2", required=True)
    p.set_defaults(func=_cmd_fidelity)

    p = sub.add_parser(
        "convergence", parents=[common],
        help="scan the convergence diagnostics over a mu or mu_tilde grid; "
             f"CSV columns: {', '.join(_SCAN_COLUMNS)}")
    p.add_argument("--config", required=True, help="scan config JSON (inline or path)")
    p.set_defaults(func=_cmd_convergence)

    p = sub.add_parser("peel", parents=[common],
                       help="accumulated n-round simulation error")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=float, default=None,
                   help="per-use error (otherwise computed from --channel/--mu)")
    p.add_argument("--channel", default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--topology", choices=["bounded_uniform", "uniform", "strong"],
                   default="uniform")
    p.set_defaults(func=_cmd_peel)

    p = sub.add_parser("capacity", parents=[common],
                       help="finite-size secret-key bound with simulation error")
    p.add_argument("--channel", required=True)
    p.add_argument("--n", type=int, required=True, help="channel uses")
    p.add_argument("--eps", type=float, required=True, help="security parameter")
    p.add_argument("--mu", type=float, required=True, help="simulation resource")
    p.add_argument("--V", type=float, default=0.0,
                   help="variance parameter of the finite-size expansion (default 0)")
    p.set_defaults(func=_cmd_capacity)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UnsupportedFormError, NoUniformBoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (_CliInputError, BosonicTelesimError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
