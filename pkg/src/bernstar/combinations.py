"""Linear combinations ``B_{n,m} = sum_i C_i B_{n_i}`` of Bernstein operators.

The degree ladder is ``n_i = 2**i * n`` and the coefficients are fixed by

    sum_i C_i = 1,    sum_i C_i / n_i**k = 0  for k = 1..m-1,

i.e. Lagrange interpolation at ``y = 0`` on the nodes ``y_i = 1/n_i``.  These
are exactly the conditions that cancel the ``1/n**k`` terms of the
Bernstein central moments, so the combination reproduces polynomials of
degree <= m.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .basis import bernstein_apply, bernstein_derivative, moment, sample_grid
from .errors import InvalidArgument, Unsupported

MAX_TERMS = 6


@dataclass(frozen=True)
class CombinationScheme:
    base_n: int
    degrees: tuple
    coeffs: tuple

    @property
    def m(self):
        return len(self.degrees)

    def condition_residuals(self):
        """Residuals of ``sum C_i - 1`` and ``sum C_i n_i^-k`` for k = 1..m-1."""
        c = np.array(self.coeffs)
        n = np.array(self.degrees, dtype=float)
        res = [math.fsum(c) - 1.0]
        res += [math.fsum(c * n ** -k) * float(self.base_n) ** k for k in range(1, self.m)]
        return np.array(res)


def lagrange_coefficients(m):
    """Exact ``C_i = prod_{j != i} y_j / (y_j - y_i)`` with ``y_i = 2**-i``.

    The coefficients do not depend on the base degree.
    """
    y = [Fraction(1, 2**i) for i in range(m)]
    out = []
    for i in range(m):
        c = Fraction(1)
        for j in range(m):
            if j != i:
                c *= y[j] / (y[j] - y[i])
        out.append(c)
    return out


def build_scheme(base_n, m):
    if int(base_n) != base_n or base_n < 1:
        raise InvalidArgument(f"base_n must be a positive integer, got {base_n!r}")
    if int(m) != m or m < 1:
        raise InvalidArgument(f"term count must be a positive integer, got {m!r}")
    if m > MAX_TERMS:
        raise Unsupported(f"term count {m} > {MAX_TERMS} is not supported")
    base_n, m = int(base_n), int(m)
    degrees = tuple(base_n * 2**i for i in range(m))
    coeffs = tuple(float(c) for c in lagrange_coefficients(m))
    return CombinationScheme(base_n, degrees, coeffs)


def _terms(scheme, f, x, op, method):
    total = None
    for n_i, c in zip(scheme.degrees, scheme.coeffs):
        value = c * op(sample_grid(f, n_i), x, method)
        total = value if total is None else total + value
    return total


def combined_apply(scheme, f, x, method="auto"):
    """``sum_i C_i B_{n_i}(f, x)``."""
    if scheme.m == 1:
        return bernstein_apply(sample_grid(f, scheme.base_n), x, method)
    return _terms(scheme, f, x, bernstein_apply, method)


def combined_derivative(scheme, f, r, x, method="auto"):
    """``sum_i C_i B_{n_i}^{(r)}(f, x)``."""
    if r > scheme.base_n:
        raise InvalidArgument(f"derivative order {r} exceeds base degree {scheme.base_n}")

    def op(samples, xs, meth):
        return bernstein_derivative(samples, r, xs, meth)

    return _terms(scheme, f, x, op, method)


def moment_cancellation_check(scheme, k, x):
    """``|sum_i C_i B_{n_i}((t-x)^k, x)|`` together with ``max_i |moment|``."""
    if int(k) != k or k < 1:
        raise InvalidArgument(f"moment order must be a positive integer, got {k!r}")
    moments = [moment(n_i, k, x) for n_i in scheme.degrees]
    residual = abs(math.fsum(c * mu for c, mu in zip(scheme.coeffs, moments)))
    return residual, max(abs(mu) for mu in moments)
