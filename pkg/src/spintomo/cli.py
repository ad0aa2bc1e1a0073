"""Command-line front end.

Exit codes: 0 success, 2 input validation, 3 dimension mismatch,
4 reconstruction failure, 5 minimizer non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import entropy as ent
from . import io
from . import tomography as tomo
from .errors import DimensionError, QuadratureError, ReconstructionError, SpinTomoError, ValidationError
from .minimizer import MinimizerConfig, minimize
from .state import BipartiteShape, check
from .su2 import EulerAngles, HalfInteger, quadrature_grid

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DIMENSION = 3
EXIT_RECONSTRUCTION = 4
EXIT_NONCONVERGENCE = 5


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _positive(kind):
    def parse(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def _half(text):
    try:
        return HalfInteger.parse(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _shape(text):
    try:
        return BipartiteShape.parse(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"expected j1,j2 such as 1/2,1: {exc}") from exc


def _common(p, *, state=True):
    if state:
        p.add_argument("--state", required=True, help="density-matrix JSON file")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp from JSON output")
    p.add_argument("--bits", action="store_true", help="report entropies in bits")
    p.add_argument("--tol", type=_positive(float), default=None, help="validation / convergence tolerance")
    p.add_argument("--config", help="JSON file with flag values; explicit flags win")


def _angles(p, suffix="", label="first spin"):
    p.add_argument(f"--phi{suffix}", type=float, default=None, help=f"azimuth of the {label}")
    p.add_argument(f"--theta{suffix}", type=float, default=None, help=f"polar angle of the {label}")
    p.add_argument(f"--psi{suffix}", type=float, default=None, help=f"third Euler angle of the {label}")


def build_parser():
    parser = argparse.ArgumentParser(prog="spintomo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tomogram", help="spin tomogram of a state")
    _common(p)
    spin = p.add_mutually_exclusive_group()
    spin.add_argument("--j", type=_half)
    spin.add_argument("--shape", type=_shape)
    _angles(p)
    _angles(p, "2", "second spin")
    p.add_argument("--frame", help="'identity' or a unitary JSON file")
    p.add_argument("--grid-theta", type=_positive(int))
    p.add_argument("--grid-phi", type=_positive(int))

    p = sub.add_parser("entropy-map", help="tomographic entropy on a sphere grid")
    _common(p)
    p.add_argument("--j", type=_half, required=True)
    p.add_argument("--grid-theta", type=_positive(int), default=9)
    p.add_argument("--grid-phi", type=_positive(int), default=16)

    p = sub.add_parser("reconstruct", help="state -> tomogram -> reconstructed state")
    _common(p)
    p.add_argument("--j", type=_half, required=True)
    p.add_argument("--band-limit", type=int, default=None, help="quadrature band limit (default 4j)")
    p.add_argument("--verify", action="store_true", help="exit 4 if the round-trip error exceeds --threshold")
    p.add_argument("--threshold", type=_positive(float), default=1e-8)
    p.add_argument("--report", help="write the error report JSON here")

    p = sub.add_parser("minimize", help="minimize tomographic entropy over U(n)")
    _common(p)
    p.add_argument("--restarts", type=_positive(int), default=8)
    p.add_argument("--max-iters", type=_positive(int), default=20000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("info", help="joint, subsystem entropies and mutual information")
    _common(p)
    p.add_argument("--shape", type=_shape, default=None)
    _angles(p)
    _angles(p, "2", "second spin")
    p.add_argument("--frame", help="'identity' or a unitary JSON file")

    p = sub.add_parser("verify", help="run the property suite and print a pass/fail table")
    _common(p, state=False)
    return parser


def _config_path(argv):
    for k, token in enumerate(argv):
        if token == "--config" and k + 1 < len(argv):
            return argv[k + 1]
        if token.startswith("--config="):
            return token.split("=", 1)[1]
    return None


def _apply_config(parser, argv):
    argv = list(sys.argv[1:] if argv is None else argv)
    path = _config_path(argv)
    command = argv[0] if argv else None
    sub_parsers = parser._subparsers._group_actions[0].choices
    if path is None or command not in sub_parsers:
        return parser.parse_args(argv)
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read config {path}: {exc}", EXIT_VALIDATION) from exc
    if not isinstance(cfg, dict):
        raise CliError("config must be a JSON object", EXIT_VALIDATION)
    # config values become defaults, so explicit flags still win
    sub_parser = sub_parsers[command]
    defaults = {}
    for key, value in cfg.items():
        dest = key.lstrip("-").replace("-", "_")
        action = next((a for a in sub_parser._actions if a.dest == dest), None)
        if action is None or dest in ("config", "help"):
            raise CliError(f"unknown config key {key!r} for {command}", EXIT_VALIDATION)
        if action.type is not None and value is not None and not isinstance(value, bool):
            try:
                value = action.type(str(value))
            except (ValueError, TypeError, argparse.ArgumentTypeError) as exc:
                raise CliError(f"config key {key!r}: {exc}", EXIT_VALIDATION) from exc
        defaults[dest] = value
    sub_parser.set_defaults(**defaults)
    for action in sub_parser._actions:
        if action.dest in defaults:
            action.required = False
    for group in sub_parser._mutually_exclusive_groups:
        if any(a.dest in defaults for a in group._group_actions):
            group.required = False
    return parser.parse_args(argv)


def _check_paths(args):
    """Fail fast on unreadable inputs or unwritable output locations."""
    for name in ("state", "config"):
        path = getattr(args, name, None)
        if path and not os.path.isfile(path):
            raise CliError(f"--{name} {path}: no such file", EXIT_VALIDATION)
    frame = getattr(args, "frame", None)
    if frame and frame != "identity" and not os.path.isfile(frame):
        raise CliError(f"--frame {frame}: no such file", EXIT_VALIDATION)
    for name in ("out", "report"):
        path = getattr(args, name, None)
        if path and not os.path.isdir(os.path.dirname(os.path.abspath(path))):
            raise CliError(f"--{name} {path}: directory does not exist", EXIT_VALIDATION)


def _load_state(path, tol):
    try:
        return io.load_state(path, tol=tol)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_VALIDATION) from exc


def _frame_matrix(spec):
    if spec is None:
        return None
    if spec == "identity":
        return "identity"
    try:
        m, _ = io.load_matrix_json(spec)
    except OSError as exc:
        raise CliError(f"cannot read frame {spec}: {exc}", EXIT_VALIDATION) from exc
    return tomo.UnitaryFrame(m)


def _angle_triple(args, suffix=""):
    vals = [getattr(args, f"{name}{suffix}") for name in ("phi", "theta", "psi")]
    return vals


def _first_angles(args):
    phi, theta, psi = _angle_triple(args)
    return EulerAngles(phi or 0.0, theta or 0.0, psi or 0.0)


def _second_angles(args, first):
    phi, theta, psi = _angle_triple(args, "2")
    if phi is None and theta is None and psi is None:
        return first
    return EulerAngles(phi or 0.0, theta or 0.0, psi or 0.0)


def _grid(args):
    nt = args.grid_theta or 1
    nphi = args.grid_phi or 1
    thetas = [math.pi * k / (nt - 1) for k in range(nt)] if nt > 1 else [0.0]
    phis = [2.0 * math.pi * k / nphi for k in range(nphi)]
    return [EulerAngles(phi, theta, 0.0) for theta in thetas for phi in phis]


def _timestamp(args):
    return {} if args.no_timestamp else {"timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds")}


def _emit(args, text):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _scale(args):
    return 1.0 / math.log(2.0) if args.bits else 1.0


def _resolve_shape(args, rho):
    shape = args.shape or rho.shape
    if shape is None:
        raise CliError("a bipartite shape is required (--shape or 'shape' in the state file)", EXIT_VALIDATION)
    if shape.n != rho.dim:
        raise DimensionError(f"shape {shape} implies dimension {shape.n}, state has {rho.dim}")
    return shape


def cmd_tomogram(args):
    rho = _load_state(args.state, args.tol)
    frame = _frame_matrix(args.frame)
    fmt_ = args.format or "csv"
    gridded = args.grid_theta is not None or args.grid_phi is not None
    if args.j is not None:
        if args.j.dim != rho.dim:
            raise DimensionError(f"spin {args.j} needs dimension {args.j.dim}, state has {rho.dim}")
        if frame is not None:
            u = tomo.UnitaryFrame.identity(rho.dim) if frame == "identity" else frame
            tomograms = [tomo.unitary_tomogram(rho, u, args.j)]
            lines = io.unitary_tomogram_rows(tomograms)
        else:
            directions = _grid(args) if gridded else [_first_angles(args)]
            tomograms = [tomo.spin_tomogram(rho, args.j, a) for a in directions]
            lines = io.single_tomogram_rows(tomograms)
    else:
        shape = _resolve_shape(args, rho)
        if frame is not None:
            u = tomo.UnitaryFrame.identity(shape.n) if frame == "identity" else frame
            tomograms = [tomo.two_spin_unitary_tomogram(rho, shape, u)]
        elif gridded:
            tomograms = [tomo.two_spin_tomogram(rho, shape, a, a) for a in _grid(args)]
        else:
            first = _first_angles(args)
            tomograms = [tomo.two_spin_tomogram(rho, shape, first, _second_angles(args, first))]
        lines = io.joint_tomogram_rows(tomograms)
    frames = [io.frame_to_json(i, t.frame) for i, t in enumerate(tomograms)]
    if fmt_ == "json":
        payload = {"tomograms": [
            {"frame": f, "probabilities": t.probabilities.tolist()} for f, t in zip(frames, tomograms)
        ]}
        payload.update(_timestamp(args))
        _emit(args, io.dumps(payload))
        return EXIT_OK
    _emit(args, "\n".join(lines) + "\n")
    if args.out and not lines[0].startswith("m,phi"):
        sidecar = {"frames": frames}
        sidecar.update(_timestamp(args))
        with open(args.out + ".frames.json", "w") as fh:
            fh.write(io.dumps(sidecar))
    return EXIT_OK


def cmd_entropy_map(args):
    rho = _load_state(args.state, args.tol)
    if args.j.dim != rho.dim:
        raise DimensionError(f"spin {args.j} needs dimension {args.j.dim}, state has {rho.dim}")
    scale = _scale(args)
    rows = []
    for a in _grid(args):
        rows.append((a.phi, a.theta, ent.tomographic_entropy(tomo.spin_tomogram(rho, args.j, a))))
    s_n = ent.von_neumann_entropy(rho)
    lowest = min(r[2] for r in rows)
    bound_ok = lowest >= s_n - 1e-10
    if (args.format or "csv") == "json":
        payload = {
            "unit": "bits" if args.bits else "nats",
            "points": [{"phi": p, "theta": t, "S": s * scale} for p, t, s in rows],
            "summary": {"min": lowest * scale, "max": max(r[2] for r in rows) * scale,
                        "von_neumann": s_n * scale, "lower_bound_ok": bound_ok},
        }
        payload.update(_timestamp(args))
        _emit(args, io.dumps(payload))
        return EXIT_OK
    lines = ["phi,theta,S"]
    lines += [f"{io.fmt(p)},{io.fmt(t)},{io.fmt(s * scale)}" for p, t, s in rows]
    lines.append(f"# min={io.fmt(lowest * scale)} von_neumann={io.fmt(s_n * scale)} "
                 f"lower_bound_ok={str(bound_ok).lower()} unit={'bits' if args.bits else 'nats'}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_reconstruct(args):
    rho = _load_state(args.state, args.tol)
    if args.j.dim != rho.dim:
        raise DimensionError(f"spin {args.j} needs dimension {args.j.dim}, state has {rho.dim}")
    band = 2 * args.j.twice if args.band_limit is None else args.band_limit
    quad = quadrature_grid(band)
    raw = tomo.reconstruct_matrix(lambda a: tomo.spin_tomogram(rho, args.j, a), args.j, quad)
    error = float(np.abs(raw - rho.entries).max())
    report = check(raw, 1e-6, 1e-6, 1e-6)
    passed = error <= args.threshold
    summary = {
        "j": str(args.j),
        "band_limit": band,
        "nodes": quad.size,
        "max_error": error,
        "threshold": args.threshold,
        "passed": passed,
        "valid": report.ok,
        "violations": [{"invariant": v.invariant, "magnitude": v.magnitude} for v in report.violations],
    }
    summary.update(_timestamp(args))
    state_obj = io.state_to_json(raw, extra={"reconstruction": summary})
    _emit(args, io.dumps(state_obj))
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(io.dumps(summary))
    print(f"max |rho - rho_hat| = {error:.3e} (threshold {args.threshold:.1e})", file=sys.stderr)
    if args.verify and not passed:
        return EXIT_RECONSTRUCTION
    return EXIT_OK


def cmd_minimize(args):
    rho = _load_state(args.state, None)
    config = MinimizerConfig(restarts=args.restarts, max_iters=args.max_iters,
                             tol=args.tol if args.tol is not None else 1e-6, seed=args.seed)
    res = minimize(rho, config)
    scale = _scale(args)
    payload = {
        "unit": "bits" if args.bits else "nats",
        "dim": rho.dim,
        "best_entropy": res.best_entropy * scale,
        "von_neumann_entropy": res.von_neumann * scale,
        "entropy_gap": res.entropy_gap * scale,
        "converged": res.converged,
        "iterations": res.iterations,
        "restarts_used": res.restarts_used,
        "tol": config.tol,
        "seed": config.seed,
        "best_frame": {"dim": rho.dim, "entries": io.matrix_to_pairs(res.best_frame.matrix)},
    }
    payload.update(_timestamp(args))
    _emit(args, io.dumps(payload))
    return EXIT_OK if res.converged else EXIT_NONCONVERGENCE


def cmd_info(args):
    rho = _load_state(args.state, args.tol)
    shape = _resolve_shape(args, rho)
    frame = _frame_matrix(args.frame)
    if frame is not None:
        u = tomo.UnitaryFrame.identity(shape.n) if frame == "identity" else frame
        joint = tomo.two_spin_unitary_tomogram(rho, shape, u)
    else:
        first = _first_angles(args)
        joint = tomo.two_spin_tomogram(rho, shape, first, _second_angles(args, first))
    scale = _scale(args)
    info = ent.tomographic_mutual_information(joint)
    kullback = ent.kullback_mutual_information(joint.probabilities)
    if abs(info - kullback) > 1e-10:
        raise SpinTomoError(f"mutual information forms disagree: {info!r} vs {kullback!r}")
    payload = {
        "unit": "bits" if args.bits else "nats",
        "shape": io.shape_to_json(shape),
        "S_joint": ent.joint_tomographic_entropy(joint) * scale,
        "S1": ent.subsystem_tomographic_entropy(joint, "first") * scale,
        "S2": ent.subsystem_tomographic_entropy(joint, "second") * scale,
        "I": info * scale,
        "I_kullback": kullback * scale,
    }
    payload.update(_timestamp(args))
    _emit(args, io.dumps(payload))
    return EXIT_OK


def cmd_verify(args):
    from .verification import run_all

    results = run_all(report=lambda r: print(r.line(), file=sys.stderr))
    rows = [{"check": r.name, "passed": r.passed, "detail": r.detail} for r in results]
    passed = all(r.passed for r in results)
    if (args.format or "csv") == "json":
        payload = {"passed": passed, "checks": rows}
        payload.update(_timestamp(args))
        _emit(args, io.dumps(payload))
    else:
        width = max(len(r.name) for r in results)
        table = [f"{'check'.ljust(width)}  result"]
        table += [f"{r.name.ljust(width)}  {'PASS' if r.passed else 'FAIL'}" for r in results]
        table.append(f"{'overall'.ljust(width)}  {'PASS' if passed else 'FAIL'}")
        _emit(args, "\n".join(table) + "\n")
    return EXIT_OK if passed else 1


COMMANDS = {
    "tomogram": cmd_tomogram,
    "entropy-map": cmd_entropy_map,
    "reconstruct": cmd_reconstruct,
    "minimize": cmd_minimize,
    "info": cmd_info,
    "verify": cmd_verify,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        _check_paths(args)
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except DimensionError as exc:
        print(f"error: dimension mismatch: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except ValidationError as exc:
        names = ", ".join(exc.report.names()) if exc.report is not None else "input"
        print(f"error: validation failed [{names}]: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ReconstructionError as exc:
        print(f"error: reconstruction failed: {exc}", file=sys.stderr)
        return EXIT_RECONSTRUCTION
    except (QuadratureError, ValueError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
