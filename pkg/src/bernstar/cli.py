"""Command-line front end.

    bernstar eval     --function f1 --n 64 --m 2 --r 3 --x 0.5
    bernstar coeffs   --n 16 --m 3
    bernstar converge --function f2 --alpha 0.25 --beta 0.25 --lambda 1 --r 2 --m 1
    bernstar modulus  --function f2 --t 0.1,0.05,0.025,0.0125
    bernstar verify   --suite lemmas --out results/

Exit status: 0 when every check passes, 1 when any check fails, 2 on a
usage error.  Defaults live in :mod:`bernstar.config`.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from .boundary import modified_operator_apply
from .combinations import build_scheme
from .config import KEYS, UsageError, build_config, convert, read_config_file
from .errors import DomainError, EvaluationError, InvalidArgument
from .harness import checks
from .harness.corpus import corpus, corpus_ids, get_function
from .harness.rates import fit_rate
from .harness.report import (CHECK_COLUMNS, CURVE_COLUMNS, RATE_COLUMNS, emit_csv,
                             rate_row)
from .harness.verify import SUITES, run_suite
from .metrics import JacobiWeight, ModulusGrid, modulus

COMMANDS = ("eval", "coeffs", "converge", "modulus", "verify")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

HELP = {
    "function": "corpus function id",
    "alpha": "weight exponent at 0 (> 0)",
    "beta": "weight exponent at 1 (> 0)",
    "lambda": "step-weight exponent in [0, 1]",
    "r": "interpolation / derivative / difference order (>= 1)",
    "m": "number of combination terms (1..6)",
    "n": "comma-separated degrees, each >= 2r",
    "t": "comma-separated modulus scales",
    "x": "comma-separated evaluation points in [0, 1]",
    "grid-x": "x points per modulus region; converge uses 2*grid-x + 1 points",
    "grid-h": "h points per modulus estimate",
    "out": "output directory for checks.csv, rates.csv and curves.csv",
    "suite": "verification suite: " + ", ".join(SUITES),
    "seed": "seed for randomised panels",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("", message)


def _parser():
    listing = "\n".join(f"  {spec.id:4s} {spec.description}" for spec in corpus())
    p = _Parser(
        prog="bernstar",
        description="Weighted approximation by Bernstein combinations.",
        epilog="corpus function ids:\n" + listing,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("command", choices=COMMANDS)
    for key in KEYS:
        p.add_argument(f"--{key}", dest=key, default=None, metavar=key.upper().replace("-", "_"),
                       help=HELP[key])
    p.add_argument("--config", default=None, help="plain 'key = value' config file")
    return p


def parse_args(argv):
    """Build a validated RunConfig from argv (defaults <- config file <- flags)."""
    ns = vars(_parser().parse_args(argv))
    command = ns.pop("command")
    config_path = ns.pop("config")
    flags = {key: convert(key, value) for key, value in ns.items() if value is not None}
    file_values = read_config_file(config_path) if config_path else {}
    cfg = build_config(command, file_values, flags)
    if cfg.suite not in SUITES:
        raise UsageError("suite", f"choose from {', '.join(SUITES)}")
    if command in ("eval", "converge", "modulus"):
        if cfg.function is None:
            raise UsageError("function", f"required; known ids: {', '.join(corpus_ids())}")
        if cfg.function not in corpus_ids():
            raise UsageError("function", f"unknown id {cfg.function!r}; "
                                         f"known ids: {', '.join(corpus_ids())}")
    return cfg


def _weight(cfg):
    return JacobiWeight(cfg.alpha, cfg.beta)


def _out_dir(cfg):
    if cfg.out is None:
        return None
    path = Path(cfg.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _summary(check_id, params, passed, detail):
    fields = " ".join(f"{k}={v}" for k, v in params.items())
    print(f"{'PASS' if passed else 'FAIL'} {check_id} {fields} {detail}".rstrip())


def _run_eval(cfg):
    f = get_function(cfg.function)
    xs = np.asarray(cfg.x if cfg.x is not None else [0.5], dtype=float)
    for n in cfg.n:
        values = modified_operator_apply(build_scheme(n, cfg.m), f, cfg.r, xs)
        for x, v in zip(xs, np.atleast_1d(values)):
            print(f"n={n} m={cfg.m} r={cfg.r} x={float(x)!r} value={float(v)!r}")
    return EXIT_OK


def _run_coeffs(cfg):
    for n in cfg.n:
        scheme = build_scheme(n, cfg.m)
        print(", ".join(f"{float(c):.16g}" for c in scheme.coeffs))
    return EXIT_OK


def _run_converge(cfg):
    w = _weight(cfg)
    xs = np.asarray(cfg.x, dtype=float) if cfg.x is not None else checks.sup_grid(2 * cfg.grid_x + 1)
    fit, rows, diagnostics = checks.convergence_rate(cfg.function, w, cfg.lam, cfg.r, cfg.m,
                                                     cfg.n, xs)
    for diag in diagnostics:
        print(f"dropped n={diag['n']}: {diag['error']}", file=sys.stderr)
    passed = not diagnostics
    params = {"function": cfg.function, "alpha": cfg.alpha, "beta": cfg.beta,
              "lambda": cfg.lam, "r": cfg.r, "m": cfg.m}
    _summary("converge", params, passed,
             f"slope={fit.slope:.4f} max_residual={fit.max_residual:.3g}")
    out = _out_dir(cfg)
    if out:
        emit_csv(rows, out / "curves.csv", CURVE_COLUMNS)
        emit_csv([rate_row(fit, "sup_error")], out / "rates.csv", RATE_COLUMNS)
    return EXIT_OK if passed else EXIT_FAIL


def _run_modulus(cfg):
    f = get_function(cfg.function)
    w = _weight(cfg)
    grid = ModulusGrid(cfg.grid_h, cfg.grid_x)
    pairs = []
    for t in cfg.t:
        est = modulus(f, w, cfg.lam, cfg.r, t, grid)
        pairs.append((t, est.value))
        print(f"t={t!r} modulus={est.value!r}")
    params = {"function": cfg.function, "alpha": cfg.alpha, "beta": cfg.beta,
              "lambda": cfg.lam, "r": cfg.r, "m": cfg.m}
    out = _out_dir(cfg)
    if len(pairs) >= 4:
        fit = fit_rate(pairs, cfg.function, params)
        _summary("modulus", params, True, f"slope={fit.slope:.4f}")
        if out:
            emit_csv([rate_row(fit, "modulus_fit")], out / "rates.csv", RATE_COLUMNS)
    return EXIT_OK


def _run_verify(cfg):
    result = run_suite(cfg.suite, cfg.n, cfg.t)
    for rep in result.reports:
        _summary(rep.check_id, rep.params, rep.passed, rep.summary)
    out = _out_dir(cfg)
    if out:
        emit_csv(result.check_rows, out / "checks.csv", CHECK_COLUMNS)
        emit_csv(result.rate_rows, out / "rates.csv", RATE_COLUMNS)
        emit_csv(result.curve_rows, out / "curves.csv", CURVE_COLUMNS)
    return EXIT_OK if result.passed else EXIT_FAIL


RUNNERS = {"eval": _run_eval, "coeffs": _run_coeffs, "converge": _run_converge,
           "modulus": _run_modulus, "verify": _run_verify}


def run(cfg):
    """Dispatch a validated RunConfig; returns the exit status."""
    try:
        return RUNNERS[cfg.command](cfg)
    except InvalidArgument as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EvaluationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
