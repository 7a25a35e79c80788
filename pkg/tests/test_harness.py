import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from bernstar.errors import InvalidArgument
from bernstar.harness import checks
from bernstar.harness.corpus import FunctionSpec, corpus, corpus_ids, get_function
from bernstar.harness.parallel import parallel_map, worker_count
from bernstar.harness.rates import fit_rate
from bernstar.harness.report import (CHECK_COLUMNS, CURVE_COLUMNS, RATE_COLUMNS, check_rows,
                                     emit_csv)
from bernstar.metrics import JacobiWeight


def _poly(coeffs, fid="poly"):
    """FunctionSpec for sum c_k t^k with exact derivatives."""
    p = np.polynomial.Polynomial(coeffs)

    def derivative(x, k):
        return p.deriv(k)(np.asarray(x, dtype=float)) if k else p(np.asarray(x, dtype=float))

    return FunctionSpec(fid, "polynomial", derivative, 0.0, 0.0, JacobiWeight(1.0, 1.0))


# ---------------------------------------------------------------------------
# rates


def test_fit_rate_examples():
    fit = fit_rate([(n, 1.0 / n) for n in (2, 4, 8, 16)])
    assert_allclose(fit.slope, -1.0, atol=1e-14)
    assert fit.max_residual < 1e-14
    assert abs(fit_rate([(n, 3.0) for n in (2, 4, 8, 16)]).slope) < 1e-14
    rng = np.random.default_rng(7)
    pairs = [(n, n**-1.5 * (1 + 0.01 * rng.random())) for n in (32, 64, 128, 256, 512)]
    assert abs(fit_rate(pairs).slope + 1.5) <= 0.05


def test_fit_rate_excludes_and_requires_pairs():
    fit = fit_rate([(2, 0.5), (4, 0.25), (8, 0.0), (16, 1 / 16), (32, 1 / 32)])
    assert fit.excluded == [(8, 0.0)]
    assert_allclose(fit.slope, -1.0)
    with pytest.raises(InvalidArgument):
        fit_rate([(2, 1.0), (4, 0.5), (8, 0.0)])


# ---------------------------------------------------------------------------
# corpus


def test_corpus_ids_and_lookup():
    assert corpus_ids() == ["f1", "f2", "f3", "f4", "f5", "f6"]
    with pytest.raises(KeyError, match="f1, f2"):
        get_function("nope")


@pytest.mark.parametrize("spec", corpus(), ids=lambda s: s.id)
def test_corpus_derivatives_match_finite_differences(spec):
    xs = np.array([0.2, 0.35, 0.6, 0.8])
    h = 1e-5
    for k in range(1, 4):
        if spec.smooth_order is not None and k > spec.smooth_order + 1:
            continue
        fd = (spec.derivative(xs + h, k - 1) - spec.derivative(xs - h, k - 1)) / (2 * h)
        assert_allclose(spec.derivative(xs, k), fd, rtol=1e-5, atol=1e-7)


@pytest.mark.parametrize("spec", corpus(), ids=lambda s: s.id)
def test_default_weight_is_admissible(spec):
    assert spec.admissible(spec.weight)
    xs = np.array([1e-12, 1 - 1e-12])
    assert np.all(np.abs(spec.weight(xs) * spec(xs)) < 1e-2)


def test_admissibility_examples():
    f3, f1, f5 = get_function("f3"), get_function("f1"), get_function("f5")
    w = JacobiWeight(0.5, 0.5)
    assert f3.admissible(w)
    assert abs(w(1e-12) * f3(1e-12)) < 1e-2
    assert f1.admissible(JacobiWeight(0.01, 3.0))
    assert f5.admissible(JacobiWeight(0.1, 1.0))
    assert abs(1e-300**0.1 * f5(1e-300)) < 1e-25


# ---------------------------------------------------------------------------
# error curves and checks


def test_error_curve_of_linear_is_zero():
    rows, diags = checks.error_curve(lambda t: 2 * t + 1, JacobiWeight(1, 1), 1.0, 2, 1,
                                     [32, 64], np.linspace(0, 1, 11))
    assert not diags
    assert len(rows) == 22
    assert max(row["weighted_error"] for row in rows) <= 1e-11


def test_error_curve_smooth_saturation():
    rows, _ = checks.error_curve("f1", JacobiWeight(1, 1), 0.0, 2, 1,
                                 [32, 64, 128, 256, 512, 1024], [0.5])
    fit = fit_rate([(row["n"], row["weighted_error"]) for row in rows])
    assert abs(fit.slope + 1.0) < 0.05


def test_error_curve_drops_failing_rows_with_diagnostic():
    def bad(x):
        x = np.asarray(x, dtype=float)
        return np.where(np.isclose(x, 0.5), np.nan, x)

    rows, diags = checks.error_curve(bad, JacobiWeight(1, 1), 1.0, 1, 1, [2, 3], [0.25])
    assert [d["n"] for d in diags] == [2]
    assert [row["n"] for row in rows] == [3]


def test_error_curve_normalised_ratio():
    rows, _ = checks.error_curve("f2", JacobiWeight(0.25, 0.25), 1.0, 2, 1, [64], [0.5],
                                 alpha0=1.0)
    scale = 64**-0.5 / 0.5 * 0.5
    assert_allclose(rows[0]["normalized_ratio"], rows[0]["weighted_error"] / scale)


def test_bounded_rule():
    assert checks.bounded([1, 1.1, 0.9, 1.2])
    assert checks.bounded([1, 0.1, 0.01, 0.001])
    assert not checks.bounded([1, 1, 1, 1.6])
    assert not checks.bounded([1, 1, 10, 1])


def test_linear_function_checks_are_vacuous():
    lin = _poly([1.0, 2.0], "lin")
    w = JacobiWeight(1, 1)
    direct = checks.direct_theorem_check(lin, w, 1.0, 2, 1, [32, 64, 128])
    assert direct.passed and direct.rows == []
    ineq = checks.bernstein_inequality_check(lin, w, 2, 1, [32, 64, 128])
    assert ineq.passed and max(q for _, q, _ in ineq.rows) < 1e-8
    dbound = checks.derivative_bound_check(lin, w, 1.0, 2, 1, [32, 64, 128])
    assert dbound.passed and max(q for _, q, _ in dbound.rows) < 1e-8


def test_fn_smoothness_polynomial_ratio_is_one():
    rep = checks.fn_smoothness_check(_poly([0.5, -1.0, 3.0]), JacobiWeight(1, 1), 1.0, 3,
                                     [32, 64, 128])
    assert rep.passed
    assert_allclose([q for _, q, _ in rep.rows], 1.0, rtol=1e-8)


def test_constant_is_fixed_point():
    rep = checks.constant_fixed_point_check([32, 64, 128])
    assert_allclose([q for _, q, _ in rep.rows], 1.0, rtol=1e-12)


def test_corpus_checks_pass():
    assert checks.bernstein_inequality_check("f1", JacobiWeight(1, 1), 3, 2, [32, 64, 128, 256]).passed
    assert checks.derivative_bound_check("f3", JacobiWeight(0.5, 0.5), 1.0, 2, 1,
                                         [32, 64, 128, 256]).passed
    assert checks.direct_theorem_check("f2", JacobiWeight(0.25, 0.25), 1.0, 2, 1,
                                       [32, 64, 128, 256]).passed


def test_inverse_check_flags_saturation():
    rep = checks.inverse_equivalence_check("f1", JacobiWeight(1, 1), 0.0, 2, 1)
    assert rep.data["saturated"]
    assert rep.passed
    assert "saturated" in rep.summary


def test_inverse_check_kink():
    rep = checks.inverse_equivalence_check("f6", JacobiWeight(0.5, 0.5), 0.0, 2, 1)
    assert abs(rep.data["alpha_err"] - 1.5) < 0.05
    assert abs(rep.data["alpha_mod"] - 1.5) <= 0.3
    assert rep.passed


# ---------------------------------------------------------------------------
# parallel map


def test_parallel_map_keeps_order(monkeypatch):
    monkeypatch.setenv("SB_THREADS", "8")
    assert worker_count() == 8
    assert parallel_map(lambda v: v * v, range(50)) == [v * v for v in range(50)]
    monkeypatch.setenv("SB_THREADS", "1")
    assert worker_count() == 1
    monkeypatch.setenv("SB_THREADS", "zero")
    assert worker_count() >= 1


# ---------------------------------------------------------------------------
# csv


def test_emit_csv_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    emit_csv([], path, CHECK_COLUMNS)
    assert path.read_bytes() == b"lemma_id,param_json,n,ratio,pass\n"


def test_emit_csv_single_row(tmp_path):
    path = tmp_path / "one.csv"
    row = {"function_id": "f1", "alpha": 1.0, "beta": 1.0, "lambda": 0.0, "r": 2, "m": 1,
           "slope": -1.0, "intercept": 0.5, "max_residual": float("nan")}
    emit_csv([row], path, RATE_COLUMNS)
    lines = path.read_text().splitlines()
    assert lines == [",".join(RATE_COLUMNS), "f1,1.0,1.0,0.0,2,1,-1.0,0.5,"]


def test_emit_csv_sorts_rows(tmp_path):
    rows = [{"lemma_id": "b", "param_json": "{}", "n": 64, "ratio": 1.0, "pass": True},
            {"lemma_id": "a", "param_json": "{}", "n": 128, "ratio": 2.0, "pass": False},
            {"lemma_id": "a", "param_json": "{}", "n": 32, "ratio": 3.0, "pass": True}]
    path = tmp_path / "c.csv"
    emit_csv(rows, path, CHECK_COLUMNS)
    assert path.read_text().splitlines()[1:] == ["a,{},32,3.0,true", "a,{},128,2.0,false",
                                                 "b,{},64,1.0,true"]


def test_error_curve_csv_is_reproducible(tmp_path):
    def once(path):
        rows, _ = checks.error_curve("f2", JacobiWeight(0.25, 0.25), 1.0, 2, 1, [32, 64],
                                     checks.sup_grid(65))
        emit_csv(rows, path, CURVE_COLUMNS)
        return path.read_bytes()

    first = once(tmp_path / "a.csv")
    assert first == once(tmp_path / "b.csv")
    assert first.count(b"\n") == 1 + 2 * 65
    assert b"\r" not in first


def test_check_rows_json_is_sorted():
    rep = checks.CheckReport("x", {"b": 1, "a": 2}, [(32, 0.5, True)], True)
    (row,) = check_rows(rep)
    assert row["param_json"] == '{"a": 2, "b": 1}'
