"""Boundary-corrected functions and the modified combination ``B*``.

Near each endpoint the source function is replaced by a polynomial that
interpolates it at r nodes a fixed distance inside the interval, and the
replacement is switched in through a smooth cutoff:

    F_n = L_r                              on [0, 1/n]
    F_n = psi(n x - 1) L_r + (1 - psi) f   on [1/n, 2/n]
    F_n = f                                on [2/n, 1 - 2/n]
    (mirrored with R_r on the right)

so ``B*_{n,m}(f, x) = B_{n,m}(F_n, x)`` never samples f at 0 or 1.
"""

import math
from dataclasses import dataclass

import numpy as np

from .basis import evaluate
from .combinations import combined_apply, combined_derivative
from .errors import EvaluationError, InvalidArgument

CUTOFF_MAX_ORDER = 6


# ---------------------------------------------------------------------------
# truncated Taylor series, rows = coefficients, columns = expansion points


def _series_mul(a, b):
    out = np.zeros_like(a)
    for k in range(a.shape[0]):
        out[k] = sum(a[j] * b[k - j] for j in range(k + 1))
    return out


def _series_recip(a):
    out = np.zeros_like(a)
    out[0] = 1.0 / a[0]
    for k in range(1, a.shape[0]):
        out[k] = -sum(a[j] * out[k - j] for j in range(1, k + 1)) / a[0]
    return out


def _series_exp(a):
    out = np.zeros_like(a)
    out[0] = np.exp(a[0])
    for k in range(1, a.shape[0]):
        out[k] = sum(j * a[j] * out[k - j] for j in range(1, k + 1)) / k
    return out


def _bump_series(s0, sign, order):
    """Taylor coefficients of ``g(s0 + sign*eps)``, ``g(s) = exp(-1/s)`` for s > 0."""
    out = np.zeros((order + 1, s0.size))
    pos = s0 > 0
    if pos.any():
        s = np.zeros((order + 1, pos.sum()))
        s[0] = s0[pos]
        if order >= 1:
            s[1] = sign
        with np.errstate(under="ignore", over="ignore"):
            out[:, pos] = _series_exp(-_series_recip(s))
    return out


def _cutoff_series(t, order):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    a = _bump_series(1.0 - t, -1.0, order)
    b = _bump_series(t, 1.0, order)
    out = _series_mul(a, _series_recip(a + b))
    # the plateaus are exact: psi = 1 for t <= 0, 0 for t >= 1
    out[:, t <= 0.0] = 0.0
    out[0, t <= 0.0] = 1.0
    out[:, t >= 1.0] = 0.0
    return out


def cutoff_value(t):
    """``psi(t) = g(1-t) / (g(t) + g(1-t))``: 1 for t <= 0, 0 for t >= 1, C-infinity."""
    out = _cutoff_series(t, 0)[0]
    return float(out[0]) if np.ndim(t) == 0 else out


def cutoff_derivative(t, j):
    """j-th derivative of the cutoff, computed from its exact Taylor expansion."""
    if int(j) != j or not 0 <= j <= CUTOFF_MAX_ORDER:
        raise InvalidArgument(f"cutoff derivative order must be in 0..{CUTOFF_MAX_ORDER}")
    j = int(j)
    out = _cutoff_series(t, j)[j] * math.factorial(j)
    return float(out[0]) if np.ndim(t) == 0 else out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EndpointInterpolant:
    """Degree r-1 interpolant of f on r nodes next to one endpoint, in Newton form."""

    side: str
    n: int
    r: int
    nodes: tuple
    coeffs: tuple

    def __call__(self, x):
        return self.derivative(x, 0)

    def derivative(self, x, j=0):
        """j-th derivative by Horner's scheme on the Newton form."""
        scalar = np.ndim(x) == 0
        x = np.atleast_1d(np.asarray(x, dtype=float))
        d = np.zeros((j + 1, x.size))
        d[0] = self.coeffs[-1]
        for c, z in zip(self.coeffs[-2::-1], self.nodes[-2::-1]):
            for q in range(j, 0, -1):
                d[q] = d[q] * (x - z) + d[q - 1]
            d[0] = d[0] * (x - z) + c
        out = d[j] * math.factorial(j)
        return float(out[0]) if scalar else out


def _newton_coefficients(nodes, values):
    c = list(values)
    for level in range(1, len(nodes)):
        for i in range(len(nodes) - 1, level - 1, -1):
            c[i] = (c[i] - c[i - 1]) / (nodes[i] - nodes[i - level])
    return tuple(c)


def _interpolant(side, f, n, r):
    if int(r) != r or r < 1:
        raise InvalidArgument(f"interpolation order must be a positive integer, got {r!r}")
    if int(n) != n or 2 * r > n:
        raise InvalidArgument(f"need integer n >= 2r, got n={n!r}, r={r!r}")
    n, r = int(n), int(r)
    if side == "left":
        nodes = np.arange(1, r + 1) / n
    else:
        nodes = 1.0 - np.arange(r, 0, -1) / n
    values = evaluate(f, nodes)
    bad = ~np.isfinite(values)
    if bad.any():
        raise EvaluationError("non-finite value at interpolation node", float(nodes[bad][0]))
    return EndpointInterpolant(side, n, r, tuple(nodes), _newton_coefficients(nodes, values))


def lagrange_left(f, n, r):
    """Interpolant ``L_r(f)`` on the nodes i/n, i = 1..r."""
    return _interpolant("left", f, n, r)


def lagrange_right(f, n, r):
    """Interpolant ``R_r(f)`` on the nodes 1 - i/n, i = 1..r."""
    return _interpolant("right", f, n, r)


class ModifiedFunction:
    """The boundary-corrected ``F_n``; immutable once built.

    ``derivatives`` is an optional callable ``(x, k) -> f^{(k)}(x)`` that
    enables :meth:`derivative`.
    """

    def __init__(self, f, n, r, derivatives=None):
        self.f = f
        self.n = int(n)
        self.r = int(r)
        self.left = lagrange_left(f, n, r)
        self.right = lagrange_right(f, n, r)
        self._df = derivatives

    def _regions(self, x):
        n = self.n
        a, b = 1.0 / n, 2.0 / n
        return (
            x <= a,
            (x > a) & (x < b),
            (x >= b) & (x <= 1.0 - b),
            (x > 1.0 - b) & (x < 1.0 - a),
            x >= 1.0 - a,
        )

    def __call__(self, x):
        return self.derivative(x, 0, _allow_value=True)

    def derivative(self, x, j, _allow_value=False):
        """j-th derivative of F_n, piecewise by the product rule on the blend strips."""
        if j > 0 and self._df is None:
            raise InvalidArgument("F_n derivatives need the source function's derivatives")
        scalar = np.ndim(x) == 0
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(x)
        lo, lblend, mid, rblend, hi = self._regions(x)

        def f_der(xs, k):
            return evaluate(self.f, xs) if k == 0 else np.asarray(self._df(xs, k), dtype=float)

        out[lo] = self.left.derivative(x[lo], j)
        out[hi] = self.right.derivative(x[hi], j)
        out[mid] = f_der(x[mid], j)
        for mask, poly, sign in ((lblend, self.left, 1.0), (rblend, self.right, -1.0)):
            if not mask.any():
                continue
            xs = x[mask]
            t = self.n * xs - 1.0 if sign > 0 else self.n * (1.0 - xs) - 1.0
            acc = f_der(xs, j)
            for i in range(j + 1):
                gap = poly.derivative(xs, j - i) - f_der(xs, j - i)
                scale = math.comb(j, i) * (sign * self.n) ** i
                acc = acc + scale * cutoff_derivative(t, i) * gap
            out[mask] = acc
        return float(out[0]) if scalar else out


def modify(f, n, r, derivatives=None):
    """Build ``F_n`` from f with endpoint interpolants of order r (needs n >= 2r)."""
    if int(n) != n or int(r) != r or r < 1 or n < 2 * r:
        raise InvalidArgument(f"modify needs integers n >= 2r >= 2, got n={n!r}, r={r!r}")
    return ModifiedFunction(f, n, r, derivatives)


def modified_operator_apply(scheme, f, r, x, method="auto"):
    """``B*_{n,m}(f, x) = B_{n,m}(F_n, x)`` with a single F_n built at the base degree."""
    return combined_apply(scheme, modify(f, scheme.base_n, r), x, method)


def modified_operator_derivative(scheme, f, r, x, order=None, method="auto"):
    """Derivative of ``B*_{n,m}(f, .)``; ``order`` defaults to the interpolation order r."""
    order = r if order is None else order
    return combined_derivative(scheme, modify(f, scheme.base_n, r), order, x, method)
