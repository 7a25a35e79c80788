"""Test functions with endpoint singularities, with analytic derivatives."""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..metrics import JacobiWeight

MAX_DERIVATIVE = 6


def _falling(a, k):
    out = 1.0
    for i in range(k):
        out *= a - i
    return out


def _power_derivative(p):
    """Derivatives of t**p."""

    def d(x, k):
        x = np.asarray(x, dtype=float)
        return _falling(p, k) * x ** (p - k)

    return d


def _reflected_power_derivative(p):
    """Derivatives of (1-t)**p."""

    def d(x, k):
        x = np.asarray(x, dtype=float)
        return (-1) ** k * _falling(p, k) * (1.0 - x) ** (p - k)

    return d


def _product_derivative(da, db):
    from math import comb

    def d(x, k):
        return sum(comb(k, j) * da(x, j) * db(x, k - j) for j in range(k + 1))

    return d


def _exp_derivative(x, k):
    return np.exp(np.asarray(x, dtype=float))


def _log_derivative(x, k):
    x = np.asarray(x, dtype=float)
    if k == 0:
        return np.log(x)
    from math import factorial

    return (-1) ** (k - 1) * factorial(k - 1) * x**-k


def _kink_derivative(x, k):
    u = np.asarray(x, dtype=float) - 0.5
    with np.errstate(divide="ignore"):
        return np.sign(u) ** k * _falling(1.5, k) * np.abs(u) ** (1.5 - k)


@dataclass(frozen=True)
class FunctionSpec:
    """A corpus entry.

    ``gamma0`` / ``gamma1`` are the exponents of the endpoint behaviour
    ``f ~ t^gamma0`` at 0 and ``f ~ (1-t)^gamma1`` at 1; log-type growth is
    recorded as exponent 0 (it needs a strictly positive weight exponent).
    ``singular0`` / ``singular1`` mark endpoints where derivatives blow up
    like ``t^(gamma0 - k)``.
    """

    id: str
    description: str
    derivative: Callable
    gamma0: float
    gamma1: float
    weight: JacobiWeight
    singular0: bool = False
    singular1: bool = False
    # highest derivative order that stays bounded in the interior
    smooth_order: Optional[int] = None

    def __call__(self, x):
        return self.derivative(x, 0)

    def admissible(self, w):
        """Whether w*f tends to 0 at both endpoints."""
        return w.alpha > -self.gamma0 and w.beta > -self.gamma1 and w.strictly_positive


def corpus():
    def f4(x, k):
        return _product_derivative(_power_derivative(-0.25),
                                   _reflected_power_derivative(-0.25))(x, k)

    return [
        FunctionSpec("f1", "exp(t)", _exp_derivative, 0.0, 0.0, JacobiWeight(1.0, 1.0)),
        FunctionSpec("f2", "t^(1/2)", _power_derivative(0.5), 0.5, 0.0, JacobiWeight(0.5, 0.5),
                     singular0=True),
        FunctionSpec("f3", "t^(-1/4)", _power_derivative(-0.25), -0.25, 0.0,
                     JacobiWeight(1.0, 1.0), singular0=True),
        FunctionSpec("f4", "t^(-1/4) (1-t)^(-1/4)", f4, -0.25, -0.25, JacobiWeight(1.0, 1.0),
                     singular0=True, singular1=True),
        FunctionSpec("f5", "log(t)", _log_derivative, 0.0, 0.0, JacobiWeight(1.0, 1.0),
                     singular0=True),
        FunctionSpec("f6", "|t - 1/2|^(3/2)", _kink_derivative, 0.0, 0.0,
                     JacobiWeight(0.5, 0.5), smooth_order=1),
    ]


def corpus_ids():
    return [spec.id for spec in corpus()]


def get_function(function_id):
    for spec in corpus():
        if spec.id == function_id:
            return spec
    raise KeyError(f"unknown function id {function_id!r}; known: {', '.join(corpus_ids())}")
