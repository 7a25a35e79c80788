"""Bernstein basis, Bernstein operator, its derivatives, finite differences
and central moments.

All routines accept a scalar abscissa or a 1-d array of abscissae and are
pure functions of their arguments.
"""

import math

import numpy as np

from .errors import DomainError, EvaluationError, InvalidArgument

MAX_DEGREE = 10**5
# de Casteljau is the accuracy reference; above this degree, or for bulk
# grids, the basis-row dot product is used instead.
DE_CASTELJAU_MAX_N = 1024
DE_CASTELJAU_MAX_POINTS = 16


def _check_degree(n, minimum=1):
    if int(n) != n or n < minimum:
        raise InvalidArgument(f"degree must be an integer >= {minimum}, got {n!r}")
    if n > MAX_DEGREE:
        raise InvalidArgument(f"degree {n} exceeds supported maximum {MAX_DEGREE}")
    return int(n)


def _check_unit_interval(x):
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    bad = ~((xs >= 0.0) & (xs <= 1.0))
    if bad.any():
        raise DomainError("abscissa outside [0, 1]", float(xs[bad][0]))
    return xs


def basis_matrix(n, xs):
    """Rows ``p_{n,k}(x)`` for every x in ``xs``; shape ``(len(xs), n + 1)``.

    Each row is built by the ratio recurrence
    ``p_{n,k+1} / p_{n,k} = (n - k) / (k + 1) * x / (1 - x)`` run outward from
    the mode in both directions, then normalised to unit sum.  No factorials
    are formed, so nothing overflows for large n; tail entries underflow
    gracefully to zero.
    """
    n = _check_degree(n)
    xs = _check_unit_interval(xs)
    out = np.zeros((xs.size, n + 1))
    out[xs == 0.0, 0] = 1.0
    out[xs == 1.0, n] = 1.0
    inner = (xs > 0.0) & (xs < 1.0)
    if not inner.any():
        return out

    x = xs[inner][:, None]
    j = np.arange(n, dtype=float)[None, :]
    mode = np.clip(np.floor((n + 1) * x), 0, n)
    odds = x / (1.0 - x)
    # np.where evaluates both branches; the discarded one may overflow
    with np.errstate(over="ignore", divide="ignore"):
        up = np.where(j >= mode, (n - j) / (j + 1.0) * odds, 1.0)
        down = np.where(j < mode, (j + 1.0) / (n - j) / odds, 1.0)
    up = np.cumprod(up, axis=1)
    down = np.cumprod(down[:, ::-1], axis=1)[:, ::-1]

    k = np.arange(n + 1, dtype=float)[None, :]
    vals = np.ones((x.shape[0], n + 1))
    above = k > mode
    below = k < mode
    up_full = np.concatenate([np.ones((x.shape[0], 1)), up], axis=1)
    down_full = np.concatenate([down, np.ones((x.shape[0], 1))], axis=1)
    vals = np.where(above, up_full, vals)
    vals = np.where(below, down_full, vals)
    vals /= vals.sum(axis=1, keepdims=True)
    out[inner] = vals
    return out


def basis_row(n, x):
    """All ``p_{n,k}(x) = C(n,k) x^k (1-x)^(n-k)`` for k = 0..n.

    ``0**0`` is taken as 1, so the row at x=0 (x=1) is the first (last)
    unit vector.
    """
    if np.ndim(x) != 0:
        raise InvalidArgument("basis_row takes a scalar abscissa; use basis_matrix")
    return basis_matrix(n, [x])[0]


def sample_grid(f, n, points=None):
    """Samples ``f(k/n)`` for k = 0..n, checked to be finite."""
    n = _check_degree(n, minimum=0) if n == 0 else _check_degree(n)
    if points is None:
        points = np.arange(n + 1) / n if n else np.zeros(1)
    values = evaluate(f, points)
    bad = ~np.isfinite(values)
    if bad.any():
        raise EvaluationError("non-finite sample", float(points[bad][0]))
    return values


def evaluate(f, xs):
    """Evaluate a (preferably vectorised) callable on an array of points."""
    xs = np.asarray(xs, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        try:
            values = np.asarray(f(xs), dtype=float)
        except (TypeError, ValueError):
            values = None
        if values is None or values.shape != xs.shape:
            values = np.array([float(f(float(t))) for t in xs.ravel()]).reshape(xs.shape)
    return values


def _de_casteljau(samples, x):
    b = np.repeat(samples[:, None], x.size, axis=1)
    one_minus = 1.0 - x
    for _ in range(samples.size - 1):
        b = b[:-1] * one_minus + b[1:] * x
    return b[0]


def bernstein_apply(samples, x, method="auto"):
    """Evaluate ``B_n(f, x) = sum_k f(k/n) p_{n,k}(x)`` from the sample array.

    ``method`` is ``"casteljau"``, ``"basis"`` or ``"auto"``.  Auto picks de
    Casteljau up to degree ``DE_CASTELJAU_MAX_N`` for at most
    ``DE_CASTELJAU_MAX_POINTS`` abscissae, the basis dot product otherwise.
    Returns a float for scalar x, an array otherwise.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1 or samples.size < 1:
        raise InvalidArgument("samples must be a non-empty 1-d array")
    if not np.isfinite(samples).all():
        raise EvaluationError("non-finite sample value")
    n = samples.size - 1
    if n > MAX_DEGREE:
        raise InvalidArgument(f"degree {n} exceeds supported maximum {MAX_DEGREE}")
    scalar = np.ndim(x) == 0
    xs = _check_unit_interval(x)

    if n == 0:
        result = np.full(xs.size, samples[0])
    else:
        if method == "auto":
            small = n <= DE_CASTELJAU_MAX_N and xs.size <= DE_CASTELJAU_MAX_POINTS
            method = "casteljau" if small else "basis"
        if method == "casteljau":
            result = _de_casteljau(samples, xs)
        elif method == "basis":
            result = basis_matrix(n, xs) @ samples
        else:
            raise InvalidArgument(f"unknown method {method!r}")
    return float(result[0]) if scalar else result


def falling_factorial(n, r):
    """``n (n-1) ... (n-r+1)`` accumulated as a float product."""
    out = 1.0
    for i in range(r):
        out *= n - i
    return out


def bernstein_derivative(samples, r, x, method="auto"):
    """r-th derivative of ``B_n(f, .)`` at x.

    Uses ``B_n^{(r)}(f,x) = n!/(n-r)! * sum_{k=0}^{n-r} D^r f(k/n) p_{n-r,k}(x)``
    with ``D^r`` the r-th forward difference of the samples.
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.size - 1
    if int(r) != r or r < 0:
        raise InvalidArgument(f"derivative order must be a non-negative integer, got {r!r}")
    r = int(r)
    if r > n:
        raise InvalidArgument(f"derivative order {r} exceeds degree {n}")
    if r == 0:
        return bernstein_apply(samples, x, method)
    diffs = np.diff(samples, r)
    return falling_factorial(n, r) * bernstein_apply(diffs, x, method)


def _difference(f, nodes, signs, domain_check=True):
    if domain_check:
        bad = ~((nodes > 0.0) & (nodes < 1.0))
        if bad.any():
            raise DomainError("difference node outside (0, 1)", float(nodes[bad][0]))
    values = evaluate(f, nodes)
    return np.einsum("k,k...->...", signs, values)


def _diff_setup(x, h, r):
    if int(r) != r or r < 1:
        raise InvalidArgument(f"difference order must be a positive integer, got {r!r}")
    r = int(r)
    k = np.arange(r + 1)
    signs = np.array([(-1) ** i * math.comb(r, i) for i in range(r + 1)], dtype=float)
    x = np.asarray(x, dtype=float)
    h = np.asarray(h, dtype=float)
    shape = np.broadcast_shapes(x.shape, h.shape)
    k = k.reshape((r + 1,) + (1,) * len(shape))
    return r, k, signs, x, h


def _finish(value, x, h):
    return float(value) if np.ndim(x) == 0 and np.ndim(h) == 0 else value


def forward_diff(f, x, h, r):
    """``sum_k (-1)^k C(r,k) f(x + (r-k) h)``."""
    r, k, signs, x, h = _diff_setup(x, h, r)
    return _finish(_difference(f, x + (r - k) * h, signs), x, h)


def backward_diff(f, x, h, r):
    """``sum_k (-1)^k C(r,k) f(x - k h)``."""
    r, k, signs, x, h = _diff_setup(x, h, r)
    return _finish(_difference(f, x - k * h, signs), x, h)


def symmetric_diff(f, x, h, r):
    """``sum_k (-1)^k C(r,k) f(x + (r/2 - k) h)``.

    For the Ditzian-Totik step the caller passes ``h * phi(x)**lam`` as h.
    """
    r, k, signs, x, h = _diff_setup(x, h, r)
    return _finish(_difference(f, x + (r / 2.0 - k) * h, signs), x, h)


def moment(n, j, x):
    """Central moment ``B_n((t - x)^j, x)`` by compensated direct summation."""
    n = _check_degree(n)
    if int(j) != j or j < 0:
        raise InvalidArgument(f"moment order must be a non-negative integer, got {j!r}")
    scalar = np.ndim(x) == 0
    xs = _check_unit_interval(x)
    rows = basis_matrix(n, xs)
    t = np.arange(n + 1) / n
    out = np.array([math.fsum((t - xi) ** int(j) * row) for xi, row in zip(xs, rows)])
    return float(out[0]) if scalar else out


def abs_moment(n, gamma, x):
    """``sum_k |k - n x|^gamma p_{n,k}(x)`` by compensated direct summation."""
    n = _check_degree(n)
    if gamma < 0:
        raise InvalidArgument(f"exponent must be >= 0, got {gamma!r}")
    scalar = np.ndim(x) == 0
    xs = _check_unit_interval(x)
    rows = basis_matrix(n, xs)
    k = np.arange(n + 1, dtype=float)
    out = np.array([math.fsum(np.abs(k - n * xi) ** gamma * row)
                    for xi, row in zip(xs, rows)])
    return float(out[0]) if scalar else out
