"""Command-line front end: ``heatgrad coeff | sweep | verify | selftest``.

Exit codes: 0 success, 1 suite or check failure, 2 usage or domain error,
3 numerical failure.
"""

import argparse
import csv
import io
import itertools
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import coefficients as co
from .errors import ConvergenceError, DomainError, HeatGradError
from .sphere_quad import QuadratureConfig

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

COLUMNS = ("problem", "n", "p", "a", "xn", "t", "kappa", "lambda", "value",
           "theta_star", "method", "err_est")
UNITS = {"a": "length/sqrt(time)", "xn": "length", "t": "time",
         "value": "dirichlet: length^-(2+(n+1)/p), neumann: length^-((n+1)/p) times a^(2/p)"}


class UsageError(Exception):
    pass


# -- parsing -----------------------------------------------------------------

def _number(tok, name, allow_inf=True):
    tok = tok.strip()
    if tok.lower() in ("inf", "infinity"):
        if not allow_inf:
            raise UsageError(f"{name}: 'inf' not allowed")
        return math.inf
    try:
        return float(tok)
    except ValueError:
        raise UsageError(f"{name}: cannot parse {tok!r}") from None


def parse_grid(value, name, kind=float):
    """Grid from a list, a number, or text like ``"1,2,inf"`` or ``"0.5:2:4"``.

    ``start:stop:count`` is an inclusive linear range; for integer grids
    ``start:stop`` lists every integer in between.
    """
    if isinstance(value, (list, tuple)):
        items = []
        for v in value:
            items.extend(parse_grid(v, name, kind))
        return items
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return [kind(value)]
    out = []
    for part in str(value).split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            bits = part.split(":")
            if kind is int:
                if len(bits) != 2:
                    raise UsageError(f"{name}: integer range must be start:stop")
                lo, hi = (int(b) for b in bits)
                out.extend(range(lo, hi + 1))
            else:
                if len(bits) != 3:
                    raise UsageError(f"{name}: range must be start:stop:count")
                lo, hi = _number(bits[0], name, False), _number(bits[1], name, False)
                out.extend(float(v) for v in np.linspace(lo, hi, int(bits[2])))
        elif kind is int:
            try:
                out.append(int(part))
            except ValueError:
                raise UsageError(f"{name}: cannot parse {part!r}") from None
        elif kind is str:
            out.append(part)
        else:
            out.append(_number(part, name))
    if not out:
        raise UsageError(f"{name}: empty grid")
    return out


def _fmt(v):
    if isinstance(v, np.floating):
        v = float(v)
    if isinstance(v, float):
        return "inf" if math.isinf(v) else repr(v)
    return "" if v is None else str(v)


def _json_value(v):
    if isinstance(v, np.floating):
        v = float(v)
    elif isinstance(v, np.integer):
        v = int(v)
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    return v


def render(records, fmt, extra=(), units=False):
    """Records as CSV text or a JSON array, columns in schema order."""
    cols = COLUMNS + tuple(extra)
    if fmt == "json":
        rows = [{c: _json_value(r.get(c)) for c in cols} for r in records]
        return json.dumps(rows, indent=2)
    buf = io.StringIO()
    if units:
        buf.write("# units: " + "; ".join(f"{k}={v}" for k, v in UNITS.items()) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in records:
        w.writerow([_fmt(r.get(c)) for c in cols])
    return buf.getvalue().rstrip("\n")


def _record(res):
    rec = res.to_record()
    rec["p"] = str(rec["p"])
    return rec


# -- coefficient rows ----------------------------------------------------------

def compute_row(task):
    """One sweep row; never raises, failures land in the ``error`` column."""
    problem, n, p, a, xn, t, tol, force, norm = task
    base = {"problem": problem, "n": n, "p": p, "a": a, "xn": xn, "t": t}
    try:
        cfg = QuadratureConfig(rel_tol=tol) if tol else None
        pt = co.HeatPoint(n, a, xn, t)
        ex = co.Exponent(p)
        res = co.sharp_coefficient(problem, pt, ex, cfg, force_maximize=force,
                                   normalization=norm)
        rec = _record(res)
        rec["error"] = ""
        return rec
    except ConvergenceError as exc:
        return dict(base, value=exc.value, err_est=exc.err_est, error=f"convergence: {exc}")
    except HeatGradError as exc:
        return dict(base, error=f"domain: {exc}")


def cmd_coeff(args):
    tol = args.tol
    cfg = QuadratureConfig(rel_tol=tol) if tol else None
    try:
        pt = co.HeatPoint(args.n, _number(args.a, "a"), _number(args.xn, "xn"),
                          _number(args.t, "t"))
        ex = co.Exponent(args.p)
        res = co.sharp_coefficient(args.problem, pt, ex, cfg, force_maximize=args.force_maximize,
                                   normalization=args.normalization)
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}; partial value={exc.value!r} err_est={exc.err_est!r}",
              file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if res.warning:
        print(f"warning: {res.warning}", file=sys.stderr)
    print(render([_record(res)], args.format))
    return EXIT_OK


def _load_config(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None


def sweep_tasks(spec):
    """Grid tasks in lexicographic order of ``(n, p, a, xn, t)``."""
    problem = spec.get("problem")
    if problem not in co.PROBLEMS:
        raise UsageError(f"problem must be one of {co.PROBLEMS}")
    grids = [parse_grid(spec.get("n", 3), "n", int), parse_grid(spec.get("p", "2"), "p", str),
             parse_grid(spec.get("a", 1.0), "a"), parse_grid(spec.get("xn", 1.0), "xn"),
             parse_grid(spec.get("t", 1.0), "t")]
    tol = spec.get("tol")
    force = bool(spec.get("force_maximize", False))
    norm = spec.get("normalization", co.PRINTED)
    return [(problem, n, p, a, xn, t, tol, force, norm)
            for n, p, a, xn, t in itertools.product(*grids)]


def cmd_sweep(args):
    spec = _load_config(args.config) if args.config else {}
    for key in ("problem", "n", "p", "a", "xn", "t", "tol", "format", "jobs"):
        val = getattr(args, key, None)
        if val is not None:
            spec[key] = val
    if args.force_maximize:
        spec["force_maximize"] = True
    if args.normalization:
        spec["normalization"] = args.normalization
    try:
        tasks = sweep_tasks(spec)
        for t in tasks:  # validate up front so bad grids are usage errors
            co.HeatPoint(t[1], t[3], t[4], t[5])
            co.Exponent(t[2])
    except (UsageError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    jobs = int(spec.get("jobs") or 1)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(compute_row, tasks))
    else:
        rows = [compute_row(t) for t in tasks]
    text = render(rows, spec.get("format", "csv"), extra=("error",), units=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK if any(not r["error"] for r in rows) else EXIT_NUMERIC


# -- verification ------------------------------------------------------------

def build_data(kind, pt, ex, problem, seed, spec=None):
    from . import potentials as pot

    n, a, t = pt.n, pt.a, pt.t
    scale = a * math.sqrt(t)
    rng = np.random.default_rng(seed)
    if spec is not None:
        return pot.data_from_spec(n, spec, t)
    if kind == "gaussian":
        center = tuple(rng.uniform(-1.0, 1.0, n - 1) * scale)
        return pot.gaussian_data(n, rng.uniform(0.5, 2.0), rng.uniform(0.5, 1.5) * scale, center)
    if kind == "constant":
        return pot.constant_data(n, 1.0, 8 * scale)
    if kind == "random":
        return pot.random_smooth_data(n, rng, t, a)
    if kind == "sign":
        cells = rng.choice([-1.0, 1.0], size=(4,) + (6,) * (n - 1))
        return pot.sign_pattern_data(n, cells, scale, t, origin=-3 * scale * np.ones(n - 1))
    if kind == "extremal":
        return pot.extremal_boundary_data(problem, pt, ex)
    raise UsageError(f"unknown data kind {kind!r}")


def cmd_verify(args):
    from .potentials import verify_inequality

    try:
        spec = _load_config(args.config) if args.config else {}
        problem = args.problem or spec.get("problem")
        if problem not in co.PROBLEMS:
            raise UsageError(f"problem must be one of {co.PROBLEMS}")
        pt = co.HeatPoint(int(args.n if args.n is not None else spec.get("n", 2)),
                          _number(str(args.a or spec.get("a", 1.0)), "a"),
                          _number(str(args.xn or spec.get("xn", 1.0)), "xn"),
                          _number(str(args.t or spec.get("t", 1.0)), "t", allow_inf=False))
        ex = co.Exponent(args.p or str(spec.get("p", "2")))
        data = build_data(args.data, pt, ex, problem, args.seed, spec.get("data"))
        res = verify_inequality(problem, pt, ex, data)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    rec = {"problem": problem, "n": pt.n, "p": str(ex), "a": pt.a, "xn": pt.x_n, "t": pt.t,
           "data": args.data, "seed": args.seed, "lhs": res.lhs, "rhs": res.rhs,
           "ratio": res.ratio, "coefficient": res.coefficient, "norm": res.norm}
    if args.format == "json":
        print(json.dumps({k: _json_value(v) for k, v in rec.items()}, indent=2))
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(rec.keys())
        w.writerow([_fmt(v) for v in rec.values()])
        print(buf.getvalue().rstrip("\n"))
    ok = args.data == "extremal" or res.ratio <= 1.0 + args.tol
    return EXIT_OK if ok else EXIT_FAIL


def cmd_selftest(args):
    from .suites import SUITES, run_suite

    names = args.suite or list(SUITES)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        print(f"error: unknown suite(s) {unknown}; choose from {list(SUITES)}", file=sys.stderr)
        return EXIT_USAGE
    cfg = QuadratureConfig(rel_tol=args.tol) if args.tol else None
    results = []
    for name in names:
        r = run_suite(name, args.grid_size, args.seed, cfg)
        results.append(r)
        print(r.line(), flush=True)
        for note in r.notes:
            print(f"      {note}")
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"first counterexample ({failed[0].name}): {json.dumps(failed[0].counterexample, default=_json_value)}",
              file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# -- argument parsing --------------------------------------------------------

def _add_point_args(p, required=True):
    p.add_argument("--problem", choices=co.PROBLEMS, required=required)
    p.add_argument("--n", type=int, required=required)
    p.add_argument("--p", required=required, help="exponent, number or 'inf'")
    p.add_argument("--a", required=required)
    p.add_argument("--xn", required=required)
    p.add_argument("--t", required=required, help="time, number or 'inf'")


def build_parser():
    parser = argparse.ArgumentParser(prog="heatgrad",
                                     description="Sharp gradient coefficients for the heat equation in a half-space.")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("coeff", help="compute one coefficient")
    _add_point_args(pc)
    pc.add_argument("--force-maximize", action="store_true")
    pc.add_argument("--tol", type=float, default=None, help="relative quadrature tolerance")
    pc.add_argument("--normalization", choices=(co.PRINTED, co.KERNEL), default=co.PRINTED)
    pc.add_argument("--format", choices=("json", "csv"), default="json")
    pc.set_defaults(func=cmd_coeff)

    ps = sub.add_parser("sweep", help="parameter sweep over grids")
    ps.add_argument("--config", help="JSON file with problem and grids")
    ps.add_argument("--problem", choices=co.PROBLEMS)
    ps.add_argument("--n", help="e.g. 2,3 or 2:5")
    ps.add_argument("--p", help="e.g. 2,3,inf")
    ps.add_argument("--a")
    ps.add_argument("--xn", help="e.g. 0.5,1 or 0.5:2:4")
    ps.add_argument("--t", help="e.g. 0.1,1,inf")
    ps.add_argument("--tol", type=float)
    ps.add_argument("--force-maximize", action="store_true")
    ps.add_argument("--normalization", choices=(co.PRINTED, co.KERNEL))
    ps.add_argument("--format", choices=("json", "csv"))
    ps.add_argument("--jobs", type=int, help="worker processes (output order is fixed)")
    ps.add_argument("--output", help="write to this file instead of stdout")
    ps.set_defaults(func=cmd_sweep)

    pv = sub.add_parser("verify", help="check the gradient inequality on boundary data")
    _add_point_args(pv, required=False)
    pv.add_argument("--config", help="JSON file; may hold a 'data' spec")
    pv.add_argument("--data", choices=("gaussian", "constant", "random", "sign", "extremal"),
                    default="gaussian")
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--tol", type=float, default=1e-3, help="allowed ratio excess over 1")
    pv.add_argument("--format", choices=("json", "csv"), default="json")
    pv.set_defaults(func=cmd_verify)

    pt = sub.add_parser("selftest", help="run the property suites")
    pt.add_argument("--suite", action="append", help="suite name (repeatable); default all")
    pt.add_argument("--grid-size", choices=("small", "full"), default="small")
    pt.add_argument("--seed", type=int, default=0)
    pt.add_argument("--tol", type=float, default=None, help="relative quadrature tolerance")
    pt.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
