"""Command-line front end: ``puritybounds {jc,gaussian,verify}``.

Exit codes: 0 success, 1 usage, 2 invariant violation, 3 domain contract.
Config files are JSON objects whose keys match the long flag names
(dashes become underscores); flags given on the command line win.
Complex numbers are ``[re, im]`` pairs.
"""
import argparse
import json
import math
import sys

import numpy as np

from . import gaussian as gs
from . import jaynes_cummings as jc
from .errors import ContractViolation, InvariantViolation
from .verify import DEFAULT_DIMS, DEFAULT_SAMPLES, Suite

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT, EXIT_CONTRACT = 0, 1, 2, 3

JC_DEFAULTS = {
    "omega": 1.0,
    "epsilon": 1.0,
    "g": 0.3,
    "spin_j": 5.0,
    "n_max": 40,
    "alpha": [math.sqrt(5.0), 0.0],
    "theta": math.pi / 2,
    "phi": 0.0,
    "t_max": 20.0,
    "steps": 2000,
    "seed": 0,
    "output": None,
}
GAUSSIAN_DEFAULTS = {"d1": 1, "d2": 1, "a": None, "b": None, "hbar": 1.0}
VERIFY_DEFAULTS = {"seed": 0, "samples": DEFAULT_SAMPLES, "dims": None, "corrupt": None}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; the contract here says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x):
    return format(float(x), ".17g")


def build_parser():
    p = _Parser(prog="puritybounds", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    j = sub.add_parser("jc", help="Jaynes-Cummings purity time series as CSV")
    j.add_argument("--config")
    j.add_argument("--omega", type=float)
    j.add_argument("--epsilon", type=float)
    j.add_argument("--g", type=float)
    j.add_argument("--spin-j", type=float)
    j.add_argument("--n-max", type=int)
    j.add_argument("--alpha", type=float, nargs=2, metavar=("RE", "IM"))
    j.add_argument("--theta", type=float)
    j.add_argument("--phi", type=float)
    j.add_argument("--t-max", type=float)
    j.add_argument("--steps", type=int)
    j.add_argument("--seed", type=int)
    j.add_argument("--output", help="CSV path (default: stdout)")

    g = sub.add_parser("gaussian", help="closed-form purity and cross-correlations")
    g.add_argument("--config")
    g.add_argument("--d1", type=int)
    g.add_argument("--d2", type=int)
    g.add_argument("--a", help="shape matrix as JSON rows of [re, im] pairs")
    g.add_argument("--b", help="block-diagonal reference shape, same format")
    g.add_argument("--hbar", type=float)

    v = sub.add_parser("verify", help="randomized property suite")
    v.add_argument("--config")
    v.add_argument("--seed", type=int)
    v.add_argument("--samples", type=int)
    v.add_argument("--dims", help="comma-separated splits, e.g. 2x2,3x4")
    v.add_argument("--corrupt", help=argparse.SUPPRESS)
    return p


def _merge(args, defaults):
    cfg = dict(defaults)
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(loaded) - set(defaults)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg.update(loaded)
    for key in defaults:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def _finite(cfg, keys):
    for k in keys:
        try:
            ok = math.isfinite(float(cfg[k]))
        except (TypeError, ValueError):
            ok = False
        if not ok:
            raise UsageError(f"{k} must be a finite number, got {cfg[k]!r}")


def _integer(cfg, key, minimum):
    val = cfg[key]
    if isinstance(val, bool) or not isinstance(val, (int, np.integer)) or val < minimum:
        raise UsageError(f"{key} must be an integer >= {minimum}, got {val!r}")


def _complex(pair, what):
    if (not isinstance(pair, (list, tuple)) or len(pair) != 2
            or not all(isinstance(x, (int, float)) and math.isfinite(x) for x in pair)):
        raise UsageError(f"{what} must be a [re, im] pair of finite numbers, got {pair!r}")
    return complex(pair[0], pair[1])


def _complex_matrix(rows, what):
    if isinstance(rows, str):
        try:
            rows = json.loads(rows)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{what}: invalid JSON ({exc})") from exc
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise UsageError(f"{what} must be a list of rows of [re, im] pairs")
    if len({len(r) for r in rows}) != 1:
        raise UsageError(f"{what} rows have unequal lengths")
    return np.array([[_complex(x, what) for x in r] for r in rows])


# -- jc -------------------------------------------------------------------
def cmd_jc(cfg, out):
    _finite(cfg, ("omega", "epsilon", "g", "spin_j", "theta", "phi", "t_max"))
    _integer(cfg, "n_max", 1)
    _integer(cfg, "steps", 1)
    _integer(cfg, "seed", 0)
    alpha = _complex(cfg["alpha"], "alpha")
    if cfg["t_max"] < 0:
        raise UsageError(f"t_max must be >= 0, got {cfg['t_max']!r}")

    model = jc.build_model(cfg["omega"], cfg["epsilon"], cfg["g"], cfg["spin_j"], cfg["n_max"])
    psi0 = jc.coherent_product_state(model, alpha, cfg["theta"], cfg["phi"])
    series = jc.run_time_series(model, psi0, cfg["t_max"], cfg["steps"], strict=False)
    best = [e.best for e in jc.best_reference_report(series, candidates=("initial", "mirror"))]

    cols = series.columns()
    lines = [",".join(list(cols) + ["best_reference"])]
    for i in range(series.times.size):
        lines.append(",".join([_fmt(c[i]) for c in cols.values()] + [best[i]]))
    text = "\n".join(lines) + "\n"
    if cfg["output"]:
        with open(cfg["output"], "w", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)

    bad = series.violations()
    if bad:
        raise InvariantViolation(bad)
    return EXIT_OK


# -- gaussian -------------------------------------------------------------
def cmd_gaussian(cfg, out):
    _integer(cfg, "d1", 1)
    _integer(cfg, "d2", 1)
    _finite(cfg, ("hbar",))
    if cfg["a"] is None:
        raise UsageError("shape matrix A is required (--a or 'a' in the config)")
    a_mat = _complex_matrix(cfg["a"], "A")
    b_mat = None if cfg["b"] is None else _complex_matrix(cfg["b"], "B")
    if cfg["hbar"] <= 0:
        raise ContractViolation(f"hbar must be positive, got {cfg['hbar']!r}")

    a = gs.GaussianShape(cfg["d1"], cfg["d2"], a_mat)
    pur = gs.purity_gaussian(a)
    report = [("d1", a.d1), ("d2", a.d2), ("purity", _fmt(pur))]
    if b_mat is not None:
        b = gs.GaussianShape(cfg["d1"], cfg["d2"], b_mat)
        cc = gs.cross_correlation_gaussian(a, b)
        report += [("cross_correlation", _fmt(cc)), ("slack", _fmt(pur - cc))]
    opt = gs.cross_correlation_gaussian(a, gs.optimal_reference(a))
    report += [("optimal_cross_correlation", _fmt(opt)), ("optimal_slack", _fmt(pur - opt))]

    for k, v in report:
        out.write(f"{k}={v}\n")
    slacks = [float(v) for k, v in report if k.endswith("slack")]
    if min(slacks) < -1e-9:
        raise InvariantViolation(["crosscorr<=purity"])
    return EXIT_OK


# -- verify ---------------------------------------------------------------
def _parse_dims(text):
    if text is None:
        return DEFAULT_DIMS
    if isinstance(text, list):
        items = text
    else:
        items = [s.strip() for s in str(text).split(",") if s.strip()]
    dims = []
    for item in items:
        try:
            d1, d2 = (int(x) for x in (item.lower().split("x") if isinstance(item, str) else item))
        except (ValueError, TypeError) as exc:
            raise UsageError(f"bad dimension pair {item!r}; expected e.g. 2x3") from exc
        if d1 < 1 or d2 < 1:
            raise UsageError(f"dimensions must be >= 1, got {item!r}")
        dims.append((d1, d2))
    if not dims:
        raise UsageError("empty dimension list")
    return tuple(dims)


def cmd_verify(cfg, out):
    _integer(cfg, "seed", 0)
    _integer(cfg, "samples", 1)
    dims = _parse_dims(cfg["dims"])
    suite = Suite(seed=cfg["seed"], samples=cfg["samples"], dims=dims, corrupt=cfg["corrupt"])

    def report(res):
        out.write(res.line() + "\n")
        out.flush()

    suite.run(report=report)
    failed = [r.name for r in suite.results if not r.passed]
    out.write(f"properties={len(suite.results)} failed={len(failed)}\n")
    if failed:
        out.write("failing: " + ", ".join(failed) + "\n")
        return EXIT_INVARIANT
    return EXIT_OK


COMMANDS = {
    "jc": (cmd_jc, JC_DEFAULTS),
    "gaussian": (cmd_gaussian, GAUSSIAN_DEFAULTS),
    "verify": (cmd_verify, VERIFY_DEFAULTS),
}


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    func, defaults = COMMANDS[args.command]
    try:
        return func(_merge(args, defaults), out)
    except UsageError as exc:
        print(f"puritybounds {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"puritybounds {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ContractViolation as exc:
        print(f"puritybounds {args.command}: contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
