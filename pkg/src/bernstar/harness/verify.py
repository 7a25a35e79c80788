"""Pre-registered verification suites."""

from dataclasses import dataclass, field

from ..metrics import JacobiWeight
from . import checks
from .checks import CheckReport
from .report import check_rows, rate_row

W = JacobiWeight

# (function, weight, lambda, r, m, slope window)
RATE_TARGETS = [
    ("f1", W(1.0, 1.0), 0.0, 2, 1, (-1.15, -0.85)),
    ("f1", W(1.0, 1.0), 0.0, 3, 2, (-float("inf"), -1.8)),
]
INEQUALITY_CASES = [("f3", W(0.5, 0.5), 2, 1), ("f1", W(1.0, 1.0), 3, 2), ("f4", W(1.0, 1.0), 2, 1)]
DERIVATIVE_CASES = [("f3", W(0.5, 0.5), 1.0, 2, 1), ("f2", W(0.5, 0.5), 1.0, 2, 1),
              ("f1", W(1.0, 1.0), 0.0, 3, 2)]
DIRECT_CASES = [("f2", W(0.25, 0.25), 1.0, 2, 1), ("f1", W(1.0, 1.0), 0.0, 3, 2)]
INVERSE_CASES = [("f2", W(0.25, 0.25), 1.0, 2, 1), ("f6", W(0.5, 0.5), 0.0, 2, 1),
                 ("f1", W(1.0, 1.0), 0.0, 2, 1)]
SMOOTHNESS_CASES = [("f2", W(0.5, 0.5), 1.0, 2), ("f1", W(1.0, 1.0), 0.0, 3),
                    ("f5", W(1.0, 1.0), 1.0, 2)]
SUITES = ("lemmas", "theorems", "all")


@dataclass
class SuiteResult:
    reports: list = field(default_factory=list)
    check_rows: list = field(default_factory=list)
    rate_rows: list = field(default_factory=list)
    curve_rows: list = field(default_factory=list)

    def add(self, report):
        self.reports.append(report)
        self.check_rows.extend(check_rows(report))

    @property
    def passed(self):
        return all(rep.passed for rep in self.reports)


def rate_check(fid, w, lam, r, m, window, n_list):
    fit, rows, _ = checks.convergence_rate(fid, w, lam, r, m, n_list)
    lo, hi = window
    ok = lo <= fit.slope <= hi
    report = CheckReport("rate", checks._params(checks._spec(fid), w, lam=lam, r=r, m=m),
                         [(n, e, ok) for n, e in fit.pairs], ok,
                         f"slope={fit.slope:.4f} window=[{lo}, {hi}]", {"fit": fit})
    return report, rows


def run_suite(name, n_list=checks.DEFAULT_N, t_list=(0.2, 0.1, 0.05, 0.025)):
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    result = SuiteResult()
    n_list = tuple(n_list)
    small_n = tuple(n for n in n_list if n <= 512) or n_list
    if name in ("lemmas", "all"):
        for rep in checks.lemma_ratio_checks(n_list):
            result.add(rep)
        for fid, w, lam, r in SMOOTHNESS_CASES:
            result.add(checks.fn_smoothness_check(fid, w, lam, r, n_list))
    if name in ("theorems", "all"):
        for fid, w, lam, r, m, window in RATE_TARGETS:
            rep, rows = rate_check(fid, w, lam, r, m, window, n_list)
            result.add(rep)
            result.rate_rows.append(rate_row(rep.data["fit"], "sup_error"))
            result.curve_rows.extend(rows)
        for fid, w, r, m in INEQUALITY_CASES:
            result.add(checks.bernstein_inequality_check(fid, w, r, m, small_n))
        for fid, w, lam, r, m in DERIVATIVE_CASES:
            result.add(checks.derivative_bound_check(fid, w, lam, r, m, small_n))
        for fid, w, lam, r, m in DIRECT_CASES:
            result.add(checks.direct_theorem_check(fid, w, lam, r, m, n_list))
        for fid, w, lam, r, m in INVERSE_CASES:
            rep = checks.inverse_equivalence_check(fid, w, lam, r, m, n_list, t_list)
            result.add(rep)
            for kind in ("error_fit", "sup_fit", "modulus_fit"):
                result.rate_rows.append(rate_row(rep.data[kind], kind))
    return result
