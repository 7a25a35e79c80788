"""Run configuration: defaults, ``key = value`` config files and validation.

Defaults (also listed in the README):

========== ================================ =====================================
key        default                          meaning
========== ================================ =====================================
function   (none)                           corpus id, required by eval/converge/modulus
alpha      1.0                              weight exponent at 0
beta       1.0                              weight exponent at 1
lambda     1.0                              step-weight exponent in [0, 1]
r          2                                interpolation / derivative / difference order
m          1                                number of terms in the combination (1..6)
n          32,64,128,256,512,1024           degree panel
t          0.2,0.1,0.05,0.025               modulus scales
x          (none)                           evaluation points; converge uses a grid if unset
grid-x     256                              x points per region / error grid size
grid-h     16                               h points per modulus estimate
out        (none)                           output directory for CSV files
suite      all                              verify suite: lemmas, theorems or all
seed       0                                seed for randomised panels
========== ================================ =====================================
"""

from dataclasses import dataclass, field, fields

KEYS = ("function", "alpha", "beta", "lambda", "r", "m", "n", "t", "x", "grid-x", "grid-h",
        "out", "suite", "seed")


class UsageError(ValueError):
    def __init__(self, key, message):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


@dataclass
class RunConfig:
    command: str = ""
    function: str = None
    alpha: float = 1.0
    beta: float = 1.0
    lam: float = 1.0
    r: int = 2
    m: int = 1
    n: list = field(default_factory=lambda: [32, 64, 128, 256, 512, 1024])
    t: list = field(default_factory=lambda: [0.2, 0.1, 0.05, 0.025])
    x: list = None
    grid_x: int = 256
    grid_h: int = 16
    out: str = None
    suite: str = "all"
    seed: int = 0

    def validate(self):
        if not self.alpha > 0:
            raise UsageError("alpha", f"must be > 0, got {self.alpha}")
        if not self.beta > 0:
            raise UsageError("beta", f"must be > 0, got {self.beta}")
        if not 0.0 <= self.lam <= 1.0:
            raise UsageError("lambda", f"must lie in [0, 1], got {self.lam}")
        if not 1 <= self.m <= 6:
            raise UsageError("m", f"must lie in 1..6, got {self.m}")
        if self.r < 1:
            raise UsageError("r", f"must be >= 1, got {self.r}")
        if not self.n:
            raise UsageError("n", "empty degree list")
        for n in self.n:
            if n < 2 * self.r:
                raise UsageError("n", f"every n must be >= 2r = {2 * self.r}, got {n}")
        if any(not 0.0 < t for t in self.t):
            raise UsageError("t", "scales must be positive")
        if self.x is not None and any(not 0.0 <= v <= 1.0 for v in self.x):
            raise UsageError("x", "points must lie in [0, 1]")
        if self.grid_x < 2 or self.grid_h < 1:
            raise UsageError("grid-x" if self.grid_x < 2 else "grid-h", "grid too small")
        return self


def _attr(key):
    return {"lambda": "lam", "grid-x": "grid_x", "grid-h": "grid_h"}.get(key, key)


def _int_list(text):
    return [int(v) for v in str(text).split(",") if v.strip()]


def _float_list(text):
    return [float(v) for v in str(text).split(",") if v.strip()]


CONVERTERS = {
    "function": str, "alpha": float, "beta": float, "lambda": float, "r": int, "m": int,
    "n": _int_list, "t": _float_list, "x": _float_list, "grid-x": int, "grid-h": int,
    "out": str, "suite": str, "seed": int,
}


def convert(key, value):
    try:
        return CONVERTERS[key](value)
    except (TypeError, ValueError) as exc:
        raise UsageError(key, f"cannot parse {value!r}") from exc


def read_config_file(path):
    """Parse ``key = value`` lines; ``#`` starts a comment.  Unknown keys are errors."""
    values = {}
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError("config", f"cannot read {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError("config", f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("_", "-")
        if key not in KEYS:
            raise UsageError(key, f"unknown config key (line {lineno})")
        values[key] = convert(key, value)
    return values


def build_config(command, file_values, flag_values):
    """defaults <- config file <- flags."""
    cfg = RunConfig(command=command)
    names = {f.name for f in fields(cfg)}
    for source in (file_values, flag_values):
        for key, value in source.items():
            if value is None:
                continue
            attr = _attr(key)
            if attr not in names:
                raise UsageError(key, "unknown key")
            setattr(cfg, attr, value)
    return cfg.validate()
