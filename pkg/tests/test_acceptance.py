"""Acceptance criteria 1-10.

Each test records a one-line verdict that is printed in the terminal
summary, then asserts at the stated tolerance.
"""

import math
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from bernstar.basis import abs_moment, basis_matrix
from bernstar.boundary import modified_operator_apply, modify
from bernstar.combinations import build_scheme, moment_cancellation_check
from bernstar.harness import checks
from bernstar.harness.corpus import corpus, get_function
from bernstar.metrics import JacobiWeight, phi
from conftest import ACCEPTANCE
from oracles import basis_row_oracle, direct_sum_moment

BASIS_N = (16, 64, 256, 1024, 2048)
X_1001 = np.linspace(0.0, 1.0, 1001)
PANEL = (32, 64, 128, 256, 512, 1024)
PANEL_512 = (32, 64, 128, 256, 512)
UNDERFLOW = 1e-290


def verdict(key, ok, detail):
    ACCEPTANCE[key] = (bool(ok), detail)
    return ok


def test_criterion_01_basis_invariants():
    worst_unity = worst_linear = worst_rel = 0.0
    for n in BASIS_N:
        rows = basis_matrix(n, X_1001)
        worst_unity = max(worst_unity, np.max(np.abs(rows.sum(axis=1) - 1.0)))
        worst_linear = max(worst_linear, np.max(np.abs(rows @ (np.arange(n + 1) / n) - X_1001)))
        for x, row in zip(X_1001, rows):
            ref = basis_row_oracle(n, x)
            big = ref > UNDERFLOW
            rel = np.max(np.abs(row[big] - ref[big]) / ref[big])
            assert np.all(np.abs(row[~big] - ref[~big]) <= UNDERFLOW)
            worst_rel = max(worst_rel, rel)
    ok = worst_unity <= 1e-12 and worst_linear <= 1e-12 and worst_rel <= 1e-12
    verdict(1, ok, f"unity {worst_unity:.2e}, linear {worst_linear:.2e}, "
                   f"oracle rel {worst_rel:.2e} (tol 1e-12)")
    assert ok


def test_criterion_02_combination_coefficients():
    c2 = np.array(build_scheme(16, 2).coeffs)
    c3 = np.array(build_scheme(16, 3).coeffs)
    e2 = np.max(np.abs(c2 - [-1.0, 2.0]))
    e3 = np.max(np.abs(c3 - [1 / 3, -2.0, 8 / 3]))
    residual = max(np.max(np.abs(build_scheme(n, m).condition_residuals()))
                   for m in range(1, 7) for n in (16, 64, 256))
    ok = e2 <= 1e-12 and e3 <= 1e-10 and residual <= 1e-10
    verdict(2, ok, f"m=2 err {e2:.1e}, m=3 err {e3:.1e}, max (c)/(d) residual {residual:.1e}")
    assert ok


def _leading_term(m, x, scheme):
    """Leading surviving term of sum C_i B_{n_i}((t-x)^(m+1), x)."""
    p = x * (1 - x)
    if m == 2:
        # third central moment is exactly phi^2 (1 - 2x) / n^2
        return p * (1 - 2 * x) * sum(c / n**2 for c, n in zip(scheme.coeffs, scheme.degrees))
    if m == 3:
        # fourth moment 3 phi^4/n^2 + phi^2 (1 - 6 phi^2)/n^3; the n^-2 part cancels
        return p * (1 - 6 * p) * sum(c / n**3 for c, n in zip(scheme.coeffs, scheme.degrees))
    raise ValueError(m)


def test_criterion_03_moment_cancellation():
    worst, first, weakest, zero_lead = 0.0, 0.0, math.inf, []
    ok = True
    for m in (2, 3):
        for base in (16, 64):
            scheme = build_scheme(base, m)
            for x in (0.1, 0.5, 0.9):
                for k in range(1, m + 1):
                    res, scale = moment_cancellation_check(scheme, k, x)
                    if all(direct_sum_moment(n, k, x) == 0 for n in scheme.degrees):
                        # the moments vanish identically (k = 1, or odd k at x = 1/2);
                        # max|moment| is pure rounding, so use an absolute bound
                        first = max(first, res)
                        ok &= res <= 1e-15
                    else:
                        worst = max(worst, res / scale)
                        ok &= res <= 1e-9 * scale
                res, scale = moment_cancellation_check(scheme, m + 1, x)
                lead = _leading_term(m, x, scheme)
                if lead == 0.0:
                    # the surviving term vanishes identically here (x = 1/2, odd k)
                    zero_lead.append((m, base, x))
                    ok &= res <= 1e-9 * scale
                    continue
                weakest = min(weakest, res / abs(lead))
                ok &= res > 0 and res >= 0.1 * abs(lead)
    verdict(3, ok, f"vanishing-moment residual {first:.1e}; other k<=m residual/scale {worst:.1e}; "
                   f"min k=m+1 residual/lead "
                   f"{weakest:.3f}; identically-zero lead at {zero_lead}")
    assert ok


def test_criterion_04_absolute_moment_identity():
    xs = X_1001[1:-1]
    e2 = max1 = 0.0
    for n in BASIS_N:
        denom = n * phi(xs) ** 2
        e2 = max(e2, np.max(np.abs(abs_moment(n, 2, xs) / denom - 1.0)))
        max1 = max(max1, np.max(abs_moment(n, 1, xs) / np.sqrt(denom)))
    ok = e2 <= 1e-10 and max1 <= 1 + 1e-10
    verdict(4, ok, f"gamma=2 |ratio-1| {e2:.1e}; gamma=1 max ratio {max1:.6f}")
    assert ok


def test_criterion_05_smooth_convergence():
    w = JacobiWeight(1.0, 1.0)
    plain, _, _ = checks.convergence_rate("f1", w, 0.0, 2, 1, PANEL)
    comb, _, _ = checks.convergence_rate("f1", w, 0.0, 3, 2, PANEL)
    ok = abs(plain.slope + 1.0) <= 0.15 and comb.slope <= -1.8
    verdict(5, ok, f"m=1 slope {plain.slope:.4f} (-1 +- 0.15); "
                   f"m=2 r=3 slope {comb.slope:.4f} (<= -1.8)")
    assert ok


@pytest.mark.xfail(strict=True, reason="x=1/2 is an interior smooth point of sqrt(t), so the "
                   "pointwise error saturates at O(1/n); see the decisions ledger")
def test_criterion_06_singular_direct_estimate():
    rep = checks.inverse_equivalence_check("f2", JacobiWeight(0.25, 0.25), 1.0, 2, 1, PANEL,
                                           (0.2, 0.1, 0.05, 0.025), x0=0.5)
    slope = rep.data["error_fit"].slope
    a_mod = rep.data["alpha_mod"]
    ok_err = abs(slope + 0.5) <= 0.15
    ok_mod = abs(a_mod - 1.0) <= 0.15
    ok_eq = abs(2 * abs(slope) - a_mod) <= 0.3
    ok = ok_err and ok_mod and ok_eq
    verdict(6, ok, f"error slope {slope:.4f} (-0.5 +- 0.15), modulus slope {a_mod:.4f} "
                   f"(1 +- 0.15), |2|s| - a_mod| {abs(2 * abs(slope) - a_mod):.3f} (<= 0.3)")
    assert ok


def test_criterion_07_bernstein_inequality_trend():
    rep = checks.bernstein_inequality_check("f3", JacobiWeight(0.5, 0.5), 2, 1, PANEL_512)
    ratios = np.array([q for _, q, _ in rep.rows])
    spread = ratios.max() / np.median(ratios)
    growth = ratios[-1] / ratios[0]
    ok = spread <= 3.0 and growth <= 1.5
    verdict(7, ok, f"max/median {spread:.3f} (<= 3), last/first {growth:.3f} (<= 1.5)")
    assert ok


def test_criterion_08_stability():
    worst, growing = 0.0, []
    for spec in corpus():
        for r, m in ((2, 1), (3, 2)):
            rep = checks.stability_check(spec, spec.weight, r, m, PANEL_512)
            ratios = [q for _, q, _ in rep.rows]
            worst = max(worst, max(ratios))
            if not checks.bounded(ratios):
                growing.append((spec.id, r, m))
    ok = worst <= 2.0 and not growing
    verdict(8, ok, f"largest empirical constant {worst:.4f} (<= 2); growing: {growing or 'none'}")
    assert ok


def _symmetric_functions():
    return [get_function("f4"), get_function("f6"), lambda t: np.cos(3 * (t - 0.5))]


def test_criterion_09_boundary_construction():
    xs = np.linspace(0.0, 1.0, 2001)
    repro = 0.0
    for r in (1, 2, 3, 4):
        def p(t, r=r):
            return sum((-1) ** k * (k + 2) * t**k for k in range(r))

        for n in (2 * r, 16, 64, 256):
            repro = max(repro, np.max(np.abs(modify(p, n, r)(xs) - p(xs))))

    jump = 0.0
    for spec in corpus():
        for n, r in ((16, 2), (64, 3), (256, 2)):
            F = modify(spec, n, r)
            for edge in (1 / n, 2 / n, 1 - 2 / n, 1 - 1 / n):
                for side in (np.nextafter(edge, 0.0), np.nextafter(edge, 1.0)):
                    jump = max(jump, abs(F(side) - F(edge)))

    sym = 0.0
    for f in _symmetric_functions():
        for n, m, r in ((16, 1, 2), (32, 2, 3), (64, 3, 2)):
            s = build_scheme(n, m)
            a = modified_operator_apply(s, f, r, X_1001)
            b = modified_operator_apply(s, f, r, 1.0 - X_1001)
            sym = max(sym, np.max(np.abs(a - b)))
    ok = repro <= 1e-10 and jump <= 1e-12 and sym <= 1e-11
    verdict(9, ok, f"reproduction {repro:.1e} (1e-10), blend jump {jump:.1e} (1e-12), "
                   f"symmetry {sym:.1e} (1e-11)")
    assert ok


def _verify_all(out, threads):
    env = dict(os.environ, SB_THREADS=str(threads))
    return subprocess.Popen([sys.executable, "-m", "bernstar", "verify", "--suite", "all",
                             "--out", str(out)], env=env, stdout=subprocess.DEVNULL)


def test_criterion_10_determinism(tmp_path):
    runs = [(threads, tmp_path / f"t{threads}_{i}") for threads in (1, 8) for i in (0, 1)]
    procs = [_verify_all(out, threads) for threads, out in runs]
    codes = [proc.wait(timeout=600) for proc in procs]
    names = ("checks.csv", "rates.csv", "curves.csv")
    reference = {name: (runs[0][1] / name).read_bytes() for name in names}
    identical = all((out / name).read_bytes() == reference[name]
                    for _, out in runs for name in names)
    same_codes = len(set(codes)) == 1
    ok = identical and same_codes
    sizes = ", ".join(f"{name} {len(reference[name])} B" for name in names)
    verdict(10, ok, f"4 runs (SB_THREADS=1 x2, 8 x2) byte-identical: {identical}; "
                    f"exit codes {codes}; {sizes}")
    assert ok
