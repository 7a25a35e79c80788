"""Jacobi weights, step weights, weighted sup-norms and grid estimators of the
weighted Ditzian-Totik modulus of smoothness."""

from dataclasses import dataclass, field

import numpy as np

from .basis import evaluate
from .errors import EvaluationError, InvalidArgument

ENDPOINT_CLAMP = 1e-12
# the weighted modulus uses endpoint strips of width 16 h^2
STRIP_FACTOR = 16.0
# geometric h-grid spans [t * H_SPAN, t]
H_SPAN = 2.0**-8


@dataclass(frozen=True)
class JacobiWeight:
    """``w(x) = x^alpha (1-x)^beta``."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha >= 0 and self.beta >= 0 and self.alpha + self.beta > 0):
            raise InvalidArgument(
                f"weight exponents need alpha, beta >= 0 and alpha + beta > 0, "
                f"got alpha={self.alpha!r}, beta={self.beta!r}")

    @property
    def strictly_positive(self):
        return self.alpha > 0 and self.beta > 0

    def __call__(self, x):
        return weight_value(self, x)


def weight_value(w, x):
    x = np.asarray(x, dtype=float)
    out = x**w.alpha * (1.0 - x) ** w.beta
    return float(out) if out.ndim == 0 else out


def phi(x):
    """``sqrt(x (1 - x))``."""
    x = np.asarray(x, dtype=float)
    out = np.sqrt(np.clip(x * (1.0 - x), 0.0, None))
    return float(out) if out.ndim == 0 else out


def delta_n(n, x):
    """``max(phi(x), n^{-1/2})``."""
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n!r}")
    out = np.maximum(phi(x), n**-0.5)
    return float(out) if np.ndim(out) == 0 else out


def _clamped_grid(w, a, b, count):
    xs = np.linspace(a, b, count)
    if w.alpha > 0:
        xs = np.maximum(xs, ENDPOINT_CLAMP)
    if w.beta > 0:
        xs = np.minimum(xs, 1.0 - ENDPOINT_CLAMP)
    return xs


def _checked(values, xs):
    bad = ~np.isfinite(values)
    if bad.any():
        raise EvaluationError("non-finite function value", float(xs[bad][0]))
    return values


def weighted_sup_norm(g, w, interval=(0.0, 1.0), grid_count=1001):
    """Max of ``w(x) |g(x)|`` over a uniform grid on ``interval``.

    Grid endpoints at 0 (1) are moved inward by ``ENDPOINT_CLAMP`` when the
    corresponding weight exponent is positive, so singular g is never
    evaluated at the endpoint itself.
    """
    a, b = interval
    if not 0.0 <= a <= b <= 1.0:
        raise InvalidArgument(f"interval must satisfy 0 <= a <= b <= 1, got {interval!r}")
    if grid_count < 2:
        raise InvalidArgument("grid_count must be >= 2")
    xs = _clamped_grid(w, a, b, grid_count)
    values = _checked(evaluate(g, xs), xs)
    return float(np.max(weight_value(w, xs) * np.abs(values)))


@dataclass(frozen=True)
class ModulusGrid:
    h_count: int = 16
    x_count: int = 256

    def steps(self, t):
        return np.geomspace(t * H_SPAN, t, self.h_count)


@dataclass(frozen=True)
class ModulusEstimate:
    r: int
    lam: float
    t: float
    value: float
    grid: ModulusGrid = field(default_factory=ModulusGrid)
    # (h, interior, left, right) contributions at the maximising step
    argmax: tuple = ()


def _signs(r):
    from math import comb

    return np.array([(-1) ** k * comb(r, k) for k in range(r + 1)], dtype=float)


def _region_sup(f, w, xs, nodes, signs):
    """Max of w |sum signs f(nodes)| over columns whose nodes all lie in (0, 1)."""
    ok = (nodes.min(axis=0) > 0.0) & (nodes.max(axis=0) < 1.0)
    if not ok.any():
        return 0.0
    xs, nodes = xs[ok], nodes[:, ok]
    values = _checked(evaluate(f, nodes), nodes)
    diff = signs @ values
    return float(np.max(weight_value(w, xs) * np.abs(diff)))


def _check_modulus_args(lam, r, t):
    if not 0.0 <= lam <= 1.0:
        raise InvalidArgument(f"lambda must lie in [0, 1], got {lam!r}")
    if int(r) != r or r < 1:
        raise InvalidArgument(f"order must be a positive integer, got {r!r}")
    if not 0.0 < t or STRIP_FACTOR * t * t >= 1.0:
        raise InvalidArgument(f"scale t must satisfy 0 < t < 1/4, got {t!r}")


def modulus_terms(f, w, lam, r, h, x_count=256):
    """The three region-wise weighted sup-norms at a single step h."""
    signs = _signs(r)
    k = np.arange(r + 1)[:, None]
    strip = STRIP_FACTOR * h * h

    interior = 0.0
    if strip < 1.0 - strip:
        xs = np.linspace(strip, 1.0 - strip, x_count)
        step = h * phi(xs) ** lam
        interior = _region_sup(f, w, xs, xs + (r / 2.0 - k) * step, signs)

    xs = _clamped_grid(w, 0.0, min(strip, 1.0), x_count)
    left = _region_sup(f, w, xs, xs + (r - k) * h, signs)

    xs = _clamped_grid(w, max(1.0 - strip, 0.0), 1.0, x_count)
    right = _region_sup(f, w, xs, xs - k * h, signs)
    return interior, left, right


def modulus(f, w, lam, r, t, grid=ModulusGrid()):
    """Grid estimate of the weighted modulus ``omega^r_{phi^lam}(f, t)_w``.

    For every step h on a geometric grid in (0, t] the symmetric difference
    with step ``h phi^lam`` is measured on [16h^2, 1 - 16h^2], the forward
    difference on [0, 16h^2] and the backward difference on [1 - 16h^2, 1];
    the three weighted sup-norms are added and the largest sum is returned.
    Abscissae whose difference nodes leave (0, 1) are skipped.
    """
    _check_modulus_args(lam, r, t)
    best, arg = 0.0, ()
    for h in grid.steps(t):
        parts = modulus_terms(f, w, lam, r, h, grid.x_count)
        total = sum(parts)
        if total > best or not arg:
            best, arg = total, (float(h),) + parts
    return ModulusEstimate(int(r), float(lam), float(t), best, grid, arg)


def main_part_modulus(f, w, lam, r, t, grid=ModulusGrid()):
    """Weighted sup of the symmetric difference over the admissible x.

    The admissible set at step h is every x of a uniform grid on (0, 1) whose
    r + 1 nodes ``x + (r/2 - k) h phi(x)^lam`` stay inside (0, 1).
    """
    _check_modulus_args(lam, r, t)
    signs = _signs(r)
    k = np.arange(r + 1)[:, None]
    xs = _clamped_grid(w, 0.0, 1.0, grid.x_count)
    xs = xs[(xs > 0.0) & (xs < 1.0)]
    best, arg = 0.0, ()
    for h in grid.steps(t):
        step = h * phi(xs) ** lam
        value = _region_sup(f, w, xs, xs + (r / 2.0 - k) * step, signs)
        if value > best or not arg:
            best, arg = value, (float(h), value)
    return ModulusEstimate(int(r), float(lam), float(t), best, grid, arg)
