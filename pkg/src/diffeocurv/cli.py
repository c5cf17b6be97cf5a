"""Command-line front end: ``diffeocurv {curvature,scan,geodesic,jacobi,verify}``.

Fields are given with ``--u`` / ``--v`` either as a path to a field-spec JSON
file or as an inline expression such as ``cos:1``, ``0.1*cos:1+0.05*sin:2``,
``cos:1,2`` (a torus mode) or ``const:1``.  Rigid-body vectors are written
``0,1,0``.  Named pairs are available through ``--builtin``.

Exit codes: 0 ok, 1 verification failures, 2 configuration error,
3 domain or singular-mode error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import verify as verify_mod
from .circle_metrics import ABMetric, hs_backend, much_backend, much_example, negative_section
from .dynamics import EquationSpec, flow_map, initial_state, integrate, jacobi_linearized, System
from .euler_arnold import RigidBody, curvature_S
from .torus_metrics import (
    ABCMetric,
    BurgersT2,
    LambdaMetric,
    abc_sin_pair,
    arnold_limit_pair,
    field_dx,
    field_dy,
    stream_cos,
)
from .trigpoly import DomainError, SingularModeError, TrigPoly, from_spec

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_DOMAIN = 0, 1, 2, 3

CURVATURE_METRICS = ("ab", "hs", "much", "abc", "l2-torus", "lambda", "so3")
FLOW_METRICS = ("ch", "burgers", "hs", "kdv", "rigid")
BUILTINS = ("negative-section", "much-example:K", "abc-sin:K", "l2-mixed", "arnold-limit:K")


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing helpers


def parse_floats(text: str, count: int | None = None) -> tuple[float, ...]:
    try:
        vals = tuple(float(t) for t in text.split(","))
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise ConfigError(f"expected {count} numbers, got {text!r}")
    return vals


def parse_period(text: str | None, dim: int):
    if text is None:
        return 1.0 if dim == 1 else (1.0,) * dim
    vals = parse_floats(text)
    if len(vals) == 1:
        return vals[0] if dim == 1 else vals * dim
    if len(vals) != dim:
        raise ConfigError(f"--period needs 1 or {dim} values")
    return vals


def parse_expression(text: str, dim: int, period) -> TrigPoly:
    """Parse ``[amp*]kind:n[,m] + ...`` with kind in cos, sin, const."""
    total = TrigPoly.zero(dim, period)
    for raw in text.replace(" ", "").split("+"):
        if not raw:
            raise ConfigError(f"empty term in {text!r}")
        amp = 1.0
        if "*" in raw:
            head, raw = raw.split("*", 1)
            try:
                amp = float(head)
            except ValueError:
                raise ConfigError(f"bad amplitude {head!r}") from None
        kind, _, arg = raw.partition(":")
        if kind == "const":
            total = total + TrigPoly.constant(amp * (float(arg) if arg else 1.0), dim, period)
            continue
        if kind not in ("cos", "sin"):
            raise ConfigError(f"unknown term {raw!r}; expected cos:n, sin:n or const:c")
        try:
            n = tuple(int(v) for v in arg.split(","))
        except ValueError:
            raise ConfigError(f"bad frequency in {raw!r}") from None
        if len(n) != dim:
            raise ConfigError(f"term {raw!r} has {len(n)} frequency components, expected {dim}")
        total = total + getattr(TrigPoly, kind)(n, amp, period)
    return total


def load_field(text: str, dim: int, period):
    if os.path.exists(text):
        try:
            with open(text) as fh:
                spec = json.load(fh)
            return from_spec(spec)
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ConfigError(f"cannot read field spec {text}: {exc}") from None
    return parse_expression(text, dim, period)


def _builtin_index(name: str, stem: str) -> int:
    try:
        k = int(name.split(":", 1)[1])
    except (IndexError, ValueError):
        raise ConfigError(f"builtin {stem} needs an integer, e.g. {stem}:1") from None
    if k < 1:
        raise ConfigError("builtin index must be positive")
    return k


def builtin_pair(name: str, args):
    """Resolve a named pair into ``(backend, u, v)``."""
    if name == "negative-section":
        m = ABMetric(args.a, args.b)
        cert = negative_section(m)
        return m, cert.u, cert.v
    if name.startswith("much-example"):
        k = _builtin_index(name, "much-example")
        u, v = much_example(args.c, k)
        return much_backend(args.c), u, v
    if name.startswith("abc-sin"):
        k = _builtin_index(name, "abc-sin")
        m = ABCMetric(args.a, args.b, args.c)
        u, v = abc_sin_pair(k)
        return m, u, v
    if name == "l2-mixed":
        P = (1.0, 1.0)
        return BurgersT2(args.a, P), field_dx(TrigPoly.sin(1), P), field_dy(TrigPoly.sin(1) ** 2, P)
    if name.startswith("arnold-limit"):
        k = _builtin_index(name, "arnold-limit")
        f, g = arnold_limit_pair(k)
        return LambdaMetric("l2", period=f.period), f, g
    raise ConfigError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")


def make_backend(args):
    metric = args.metric
    if metric == "ab":
        return ABMetric(args.a, args.b, parse_period(args.period, 1)), 1
    if metric == "hs":
        return hs_backend(parse_period(args.period, 1)), 1
    if metric == "much":
        return much_backend(args.c, parse_period(args.period, 1)), 1
    if metric == "abc":
        return ABCMetric(args.a, args.b, args.c, parse_period(args.period, 2)), 2
    if metric == "l2-torus":
        return BurgersT2(args.a, parse_period(args.period, 2)), 2
    if metric == "lambda":
        return LambdaMetric(args.lambda_, parse_period(args.period, 2)), 2
    if metric == "so3":
        return RigidBody(parse_floats(args.moments, 3)), 0
    raise ConfigError(f"unknown metric {metric!r}; choose from {', '.join(CURVATURE_METRICS)}")


def write_output(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x) -> str:
    if x is None:
        return ""
    return repr(float(x) + 0.0)


# ---------------------------------------------------------------------------
# commands


def cmd_curvature(args) -> int:
    if args.builtin:
        backend, u, v = builtin_pair(args.builtin, args)
    else:
        if not (args.u and args.v):
            raise ConfigError("curvature needs --u and --v, or --builtin")
        backend, dim = make_backend(args)
        if dim == 0:
            u, v = np.array(parse_floats(args.u, 3)), np.array(parse_floats(args.v, 3))
        else:
            u, v = load_field(args.u, dim, backend.period), load_field(args.v, dim, backend.period)
    rep = curvature_S(backend, u, v)
    out = {"metric": backend.name, **rep.to_dict(), "sign": rep.sign}
    write_output(json.dumps(out, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def _scan_pairs(args):
    n = args.modes if args.modes is not None else 6
    if n < 0:
        raise ConfigError("--modes must be nonnegative")
    backend, dim = make_backend(args)
    if dim == 1:
        period = backend.period
        labels = [(f"{kind}:{k}", getattr(TrigPoly, kind)(k, 1.0, period))
                  for k in range(1, n + 1) for kind in ("cos", "sin")]
        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                yield backend, labels[i][0], labels[j][0], labels[i][1], labels[j][1]
    elif args.metric == "lambda":
        vecs = [(x, y) for x in range(0, n + 1) for y in range(-n, n + 1)
                if (x > 0 or y > 0) and x * x + y * y <= n * n]
        for i in range(len(vecs)):
            for j in range(i + 1, len(vecs)):
                p, q = vecs[i], vecs[j]
                if p[0] * q[1] - p[1] * q[0] == 0:
                    continue
                yield (backend, f"{p[0]},{p[1]}", f"{q[0]},{q[1]}",
                       stream_cos(p, backend.period), stream_cos(q, backend.period))
    elif args.metric in ("abc", "l2-torus"):
        for k in range(1, n + 1):
            u, v = abc_sin_pair(k, backend.period)
            yield backend, f"sin:{k} d/dy", f"sin:{k} d/dx", u, v
    else:
        raise ConfigError(f"scan does not support metric {args.metric!r}")


def cmd_scan(args) -> int:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["metric", "params", "p", "q", "S", "K", "sign"])
    counts = {"+": 0, "-": 0, "0": 0, "degenerate": 0}
    for backend, p, q, u, v in _scan_pairs(args):
        rep = curvature_S(backend, u, v)
        counts[rep.sign] += 1
        name = backend.name
        metric, _, params = name.partition("(")
        w.writerow([metric, params.rstrip(")"), p, q, _fmt(rep.S), _fmt(rep.K), rep.sign])
    write_output(buf.getvalue(), args.out)
    print(f"positive={counts['+']} negative={counts['-']} zero={counts['0']} "
          f"degenerate={counts['degenerate']}", file=sys.stderr)
    return EXIT_OK


def flow_spec(args) -> EquationSpec:
    N = args.modes if args.modes is not None else 32
    kind = args.metric
    if kind == "ch":
        return EquationSpec.camassa_holm(args.a, args.b, N=N, period=parse_period(args.period, 1))
    if kind == "burgers":
        return EquationSpec.burgers(args.a, N=N, period=parse_period(args.period, 1))
    if kind == "hs":
        return EquationSpec.hunter_saxton(N=N, period=parse_period(args.period, 1))
    if kind == "kdv":
        return EquationSpec.kdv(args.central, N=N, period=parse_period(args.period, 1))
    if kind == "rigid":
        return EquationSpec.rigid_body(parse_floats(args.moments, 3))
    raise ConfigError(f"unknown equation {kind!r}; choose from {', '.join(FLOW_METRICS)}")


def _initial(spec: EquationSpec, text: str | None, what: str):
    if text is None:
        raise ConfigError(f"{what} is required")
    if spec.is_field:
        return load_field(text, 1, spec.period)
    return np.array(parse_floats(text, 3))


def cmd_geodesic(args) -> int:
    spec = flow_spec(args)
    u0 = _initial(spec, args.u, "--u (initial velocity)")
    initial_state(spec, u0)
    traj = integrate(spec, u0, args.dt, args.T, scheme=args.scheme)
    names, cols = traj.coefficient_columns()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "energy", "drift"] + names)
    drift = traj.drift
    for i, t in enumerate(traj.times):
        w.writerow([_fmt(t), _fmt(traj.energy[i]), _fmt(drift[i])] + [_fmt(x) for x in cols[i]])
    meta = "none" if not traj.breakdown else f"{traj.breakdown_time!r} ({traj.breakdown_reason})"
    line = f"# breakdown={meta}"
    if spec.is_field:
        fm = flow_map(traj, n_particles=256)
        fb = fm.breakdown_time
        line += f" flow_map_breakdown={'none' if fb is None else repr(float(fb))}"
    buf.write(line + "\n")
    write_output(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_jacobi(args) -> int:
    spec = flow_spec(args)
    if spec.kind == "kdv":
        raise ConfigError("Jacobi fields are available for ch, burgers, hs and rigid")
    u0 = _initial(spec, args.u, "--u (base velocity)")
    z0 = _initial(spec, args.v, "--v (Jacobi field velocity)")
    run = jacobi_linearized(spec, u0, z0, dt=args.dt, T=args.T, scheme=args.scheme)
    pert = u0 + args.eps * z0
    other = integrate(spec, pert, args.dt, args.T, scheme=args.scheme,
                      derivative_bound=np.inf, drift_bound=np.inf)
    sysm = System(spec)
    inner = sysm.g.inner if spec.is_field else sysm.body.inner
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "y_norm", "z_norm", "fd_gap"])
    for i, t in enumerate(run.times):
        d = (other.states[i] - run.base.states[i]) / args.eps - run.z[i]
        gap = math.sqrt(max(inner(d, d), 0.0))
        w.writerow([_fmt(t), _fmt(run.y_norm[i]), _fmt(run.z_norm[i]), _fmt(gap)])
    buf.write(f"# eps={args.eps!r} growth_rate={run.growth_rate()!r}\n")
    write_output(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = verify_mod.select(args.only)
    if args.only and not checks:
        raise ConfigError(f"no check id contains {args.only!r}; ids: "
                          + ", ".join(c.id for c in verify_mod.CHECKS))
    report = verify_mod.run_verify(args.only, args.tol)
    if args.format == "json":
        write_output(report.to_json() + "\n", args.out)
    else:
        print(report.table())
        if args.out:
            write_output(report.to_json() + "\n", args.out)
    return EXIT_OK if report.passed else EXIT_VERIFY


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diffeocurv",
                                     description="Curvature and geodesics of right-invariant metrics on diffeomorphism groups")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--metric", help="metric or equation name")
    common.add_argument("--a", type=float, default=1.0)
    common.add_argument("--b", type=float, default=1.0)
    common.add_argument("--c", type=float, default=1.0)
    common.add_argument("--lambda", dest="lambda_", default="l2",
                        help="F choice for the lambda metric: l2, biharmonic, one-plus-l2, custom-power:n")
    common.add_argument("--moments", default="1,2,3", help="rigid-body moments of inertia")
    common.add_argument("--central", type=float, default=1.0, help="KdV dispersion coefficient")
    common.add_argument("--period", help="period (one value, or one per axis)")
    common.add_argument("--u", help="field-spec JSON path or inline expression")
    common.add_argument("--v", help="field-spec JSON path or inline expression")
    common.add_argument("--builtin", help=f"named pair: {', '.join(BUILTINS)}")
    common.add_argument("--dt", type=float, default=1e-3)
    common.add_argument("--T", type=float, default=1.0)
    common.add_argument("--modes", type=int, help="Galerkin cutoff N, or grid size for scan")
    common.add_argument("--scheme", choices=("rk4", "rk2"), default="rk4")
    common.add_argument("--eps", type=float, default=1e-5, help="perturbation size for the FD gap")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--only", help="run only checks whose id contains this string")
    common.add_argument("--tol", type=float, help="override every check tolerance")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in [("curvature", cmd_curvature), ("scan", cmd_scan), ("geodesic", cmd_geodesic),
                     ("jacobi", cmd_jacobi), ("verify", cmd_verify)]:
        p = sub.add_parser(name, parents=[common])
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("curvature", "scan") and not args.metric and not args.builtin:
        parser.error(f"{args.command} needs --metric")
    if args.command in ("geodesic", "jacobi") and not args.metric:
        parser.error(f"{args.command} needs --metric")
    try:
        return args.func(args)
    except (DomainError, SingularModeError) as exc:
        print(f"diffeocurv: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConfigError, ValueError, TypeError, OSError) as exc:
        print(f"diffeocurv: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
