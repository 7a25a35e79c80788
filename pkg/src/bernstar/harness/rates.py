"""Least-squares power-law fits on log-log data."""

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidArgument

MIN_PAIRS = 4


@dataclass
class RateReport:
    slope: float
    intercept: float
    max_residual: float
    pairs: list
    excluded: list = field(default_factory=list)
    function_id: str = ""
    params: dict = field(default_factory=dict)


def fit_rate(pairs, function_id="", params=None):
    """Fit ``log value = slope * log scale + intercept``.

    Pairs with a non-positive (or non-finite) value are excluded and listed
    in ``excluded``; fewer than four usable pairs is an error.
    """
    used, excluded = [], []
    for scale, value in pairs:
        if value > 0 and math.isfinite(value) and scale > 0:
            used.append((float(scale), float(value)))
        else:
            excluded.append((scale, value))
    if len(used) < MIN_PAIRS:
        raise InvalidArgument(f"need at least {MIN_PAIRS} positive pairs, got {len(used)}")
    lx = np.log([s for s, _ in used])
    ly = np.log([v for _, v in used])
    design = np.vstack([lx, np.ones_like(lx)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - (slope * lx + intercept)
    return RateReport(float(slope), float(intercept), float(np.max(np.abs(resid))),
                      used, excluded, function_id, dict(params or {}))
