"""Scalar functions ``phi`` and the monotonicity certificates for ``||M_t||``.

Certificates come in two strengths. Closed-form families (power and log)
are decided for every ``t > 0``; tabulated or preset functions can only be
checked on a grid, and say so through the ``NUMERIC_ONLY`` justification.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .curves import ParamSet
from .exceptions import DomainError, InvalidInputError, PreconditionError
from .numkit import Bracket

FD_STEP = 1e-6
RISE_TOL = 1e-13


def _domain(t):
    arr = np.asarray(t, dtype=float)
    if arr.ndim == 0:
        bad = not 0.0 <= float(arr) < math.inf
    else:
        bad = bool((arr < 0).any()) or not bool(np.isfinite(arr).all())
    if bad:
        raise DomainError("phi is defined on [0, inf) only")
    return arr


class PhiFunction:
    """Base class: a continuous ``phi: [0, inf) -> R`` with derivative access."""

    kind = "abstract"

    def __call__(self, t):
        raise NotImplementedError

    def derivative(self, t):
        """Central finite difference with step ``1e-6 * max(1, t)``."""
        arr = _domain(t)
        h = FD_STEP * np.maximum(1.0, arr)
        lo = np.maximum(arr - h, 0.0)
        hi = arr + h
        return (self(hi) - self(lo)) / (hi - lo)

    @property
    def strictly_increasing(self) -> Optional[bool]:
        """Known strict increase on ``[0, inf)``; ``None`` when undecided."""
        return None

    def spec_string(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class PowerPhi(PhiFunction):
    """``phi(t) = k + d t^alpha`` with ``k, d, alpha >= 0``."""

    k: float
    d: float
    alpha: float
    kind = "power"

    def __post_init__(self):
        for name in ("k", "d", "alpha"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0:
                raise InvalidInputError(f"power phi needs finite {name} >= 0, got {v}")
            object.__setattr__(self, name, v)

    def __call__(self, t):
        arr = _domain(t)
        return self.k + self.d * np.power(arr, self.alpha)

    def derivative(self, t):
        arr = _domain(t)
        if np.any(arr <= 0):
            raise DomainError("derivative is taken on (0, inf)")
        if self.alpha == 0 or self.d == 0:
            return np.zeros_like(arr)[()]
        return self.d * self.alpha * np.power(arr, self.alpha - 1.0)

    @property
    def constant(self) -> bool:
        return self.d * self.alpha == 0

    @property
    def strictly_increasing(self) -> bool:
        return not self.constant

    def spec_string(self) -> str:
        return f"power:{self.k:g},{self.d:g},{self.alpha:g}"


@dataclass(frozen=True)
class LogPhi(PhiFunction):
    """``phi(t) = ln(1 + alpha t)`` with ``alpha > 0``."""

    alpha: float
    kind = "log"

    def __post_init__(self):
        v = float(self.alpha)
        if not math.isfinite(v) or v <= 0:
            raise InvalidInputError(f"log phi needs alpha > 0, got {v}")
        object.__setattr__(self, "alpha", v)

    def __call__(self, t):
        return np.log1p(self.alpha * _domain(t))

    def derivative(self, t):
        arr = _domain(t)
        return self.alpha / (1.0 + self.alpha * arr)

    @property
    def strictly_increasing(self) -> bool:
        return True

    def spec_string(self) -> str:
        return f"log:{self.alpha:g}"


@dataclass(frozen=True, eq=False)
class TablePhi(PhiFunction):
    """Piecewise-linear interpolant of sorted samples ``(t_i, phi_i)``."""

    ts: np.ndarray
    values: np.ndarray
    source: str = field(default="")
    kind = "table"

    def __post_init__(self):
        ts = np.asarray(self.ts, dtype=float)
        vs = np.asarray(self.values, dtype=float)
        if ts.ndim != 1 or ts.shape != vs.shape or ts.size < 2:
            raise InvalidInputError("table phi needs at least two (t, value) pairs")
        if not (np.all(np.isfinite(ts)) and np.all(np.isfinite(vs))):
            raise InvalidInputError("table phi has non-finite samples")
        if ts[0] < 0 or np.any(np.diff(ts) <= 0):
            raise InvalidInputError("table t values must be non-negative and strictly ascending")
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "values", vs)

    @classmethod
    def from_csv(cls, path) -> "TablePhi":
        """Load a two-column ``t,phi`` CSV (a ``t,norm`` curve file also works)."""
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = [h.strip() for h in next(reader, [])]
            if header not in (["t", "phi"], ["t", "norm"]):
                raise InvalidInputError(f"{path}: expected header 't,phi', got {header!r}")
            rows = [(float(r[0]), float(r[1])) for r in reader if r]
        if not rows:
            raise InvalidInputError(f"{path}: no samples")
        ts, vs = zip(*rows)
        return cls(np.array(ts), np.array(vs), source=str(path))

    def _check_range(self, arr):
        if np.any(arr < self.ts[0]) or np.any(arr > self.ts[-1]):
            raise DomainError(
                f"table phi covers [{self.ts[0]:g}, {self.ts[-1]:g}] only; no extrapolation")

    def __call__(self, t):
        arr = _domain(t)
        self._check_range(arr)
        return np.interp(arr, self.ts, self.values)[()]

    def derivative(self, t):
        """Secant slope of the segment containing ``t`` (right segment at knots)."""
        arr = _domain(t)
        self._check_range(arr)
        idx = np.clip(np.searchsorted(self.ts, arr, side="right") - 1, 0, self.ts.size - 2)
        slope = np.diff(self.values) / np.diff(self.ts)
        return slope[idx][()]

    @property
    def strictly_increasing(self) -> bool:
        return bool(np.all(np.diff(self.values) > 0) and self.values[0] >= 0)

    def spec_string(self) -> str:
        return f"table:{self.source}"


_PRESETS: dict[str, tuple[Callable, bool]] = {
    "one": (lambda t: np.ones_like(t), False),
    "zero": (lambda t: np.zeros_like(t), False),
    "t5": (lambda t: np.power(t, 5), True),
    "2t5": (lambda t: 2.0 * np.power(t, 5), True),
    "sqrt": (np.sqrt, True),
    "atan": (np.arctan, True),
    "expm1": (np.expm1, True),
}


@dataclass(frozen=True)
class PresetPhi(PhiFunction):
    """A named function from a small registry; derivative by finite differences."""

    name: str
    kind = "preset"

    def __post_init__(self):
        if self.name not in _PRESETS:
            raise InvalidInputError(f"unknown phi preset {self.name!r}; choose from {sorted(_PRESETS)}")

    def __call__(self, t):
        arr = _domain(t)
        return _PRESETS[self.name][0](arr)[()]

    @property
    def strictly_increasing(self) -> bool:
        return _PRESETS[self.name][1]

    def spec_string(self) -> str:
        return f"preset:{self.name}"


def parse_phi(text: str) -> PhiFunction:
    """Parse ``power:k,d,alpha`` | ``log:alpha`` | ``table:path.csv`` | ``preset:name``."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "power":
            k, d, alpha = (float(x) for x in rest.split(","))
            return PowerPhi(k, d, alpha)
        if kind == "log":
            return LogPhi(float(rest))
        if kind == "table":
            return TablePhi.from_csv(rest)
        if kind == "preset":
            return PresetPhi(rest)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInputError):
            raise
        raise InvalidInputError(f"cannot parse phi spec {text!r}: {exc}") from exc
    raise InvalidInputError(f"unknown phi kind in {text!r}")


def eval_phi(phi: PhiFunction, t):
    return phi(t)


def eval_dphi(phi: PhiFunction, t):
    return phi.derivative(t)


class Status(enum.Enum):
    CERTIFIED_MONOTONE = "CERTIFIED_MONOTONE"
    CERTIFIED_NOT_COND_B = "CERTIFIED_NOT_COND_B"
    INCONCLUSIVE = "INCONCLUSIVE"


class Justification(enum.Enum):
    THM21_B = "THM21_B"
    COR24_ALPHA = "COR24_ALPHA"
    COR26_LOG = "COR26_LOG"
    COR27_PARAMS = "COR27_PARAMS"
    NUMERIC_ONLY = "NUMERIC_ONLY"


@dataclass(frozen=True)
class Certificate:
    status: Status
    justification: Justification
    violation_point: Optional[float] = None

    def __post_init__(self):
        if self.status is Status.CERTIFIED_NOT_COND_B and self.violation_point is None:
            raise InvalidInputError("a condition-(b) violation needs a violation point")

    @property
    def symbolic(self) -> bool:
        return self.justification is not Justification.NUMERIC_ONLY

    @property
    def monotone(self) -> bool:
        return self.status is Status.CERTIFIED_MONOTONE


def default_bracket(phi: PhiFunction, b) -> Bracket:
    if b is not None:
        return Bracket.of(b)
    if isinstance(phi, TablePhi):
        return Bracket.of((phi.ts[0], phi.ts[-1]))
    return Bracket(0.0, 10.0)


def _grid_increasing(phi: PhiFunction, ts: np.ndarray) -> np.ndarray:
    vals = np.asarray(phi(ts), dtype=float)
    if np.any(vals < 0):
        raise PreconditionError("phi must be non-negative on the bracket")
    rise = np.diff(vals)
    if np.any(rise <= RISE_TOL * np.maximum(1.0, np.abs(vals[:-1]))):
        raise PreconditionError("phi must be strictly increasing on the bracket")
    return vals


def check_condition_b(phi: PhiFunction, b=None, n: int = 4096) -> Certificate:
    """Decide ``phi(t) >= t phi'(t) / 4``.

    Power functions are answered for all ``t > 0`` (the bracket is ignored):
    the inequality reduces to ``k t^-alpha + d >= alpha d / 4``. Log functions
    always satisfy it. Anything else is checked on an ``n``-point grid.
    """
    if isinstance(phi, PowerPhi):
        if phi.constant or phi.alpha <= 4:
            return Certificate(Status.CERTIFIED_MONOTONE, Justification.COR24_ALPHA)
        if phi.k == 0:
            vp = 1.0
        else:
            # fails once t^alpha > k / (d (alpha/4 - 1))
            t_c = (phi.k / (phi.d * (phi.alpha / 4.0 - 1.0))) ** (1.0 / phi.alpha)
            vp = max(1.0, 2.0 * t_c)
        return Certificate(Status.CERTIFIED_NOT_COND_B, Justification.COR24_ALPHA, vp)
    if isinstance(phi, LogPhi):
        return Certificate(Status.CERTIFIED_MONOTONE, Justification.COR26_LOG)

    br = default_bracket(phi, b)
    ts = np.linspace(br.lo, br.hi, n)
    vals = _grid_increasing(phi, ts)
    pos = ts > 0
    tp = ts[pos]
    lhs = vals[pos]
    rhs = 0.25 * tp * np.asarray(phi.derivative(tp), dtype=float)
    bad = np.flatnonzero(lhs < rhs - 1e-12 * np.maximum(1.0, np.abs(lhs)))
    if bad.size:
        return Certificate(Status.CERTIFIED_NOT_COND_B, Justification.NUMERIC_ONLY,
                           float(tp[bad[0]]))
    return Certificate(Status.INCONCLUSIVE, Justification.NUMERIC_ONLY)


def check_condition_a(phi: PhiFunction, t0: float, b, n: int = 4096) -> bool:
    """Grid check of ``phi(t) <= phi(t0) (t / t0)^4`` on a bracket inside ``[t0, inf)``."""
    if not t0 > 0:
        raise PreconditionError("t0 must be positive")
    br = Bracket.of(b)
    if br.lo < t0:
        raise PreconditionError("bracket must lie in [t0, inf)")
    ts = np.linspace(br.lo, br.hi, n)
    bound = float(phi(t0)) * (ts / t0) ** 4
    return bool(np.all(np.asarray(phi(ts)) <= bound * (1.0 + 1e-12)))


def param_certificate(p: ParamSet) -> bool:
    """``Re(conj(a) conj(b) c) >= 0``."""
    return (p.a.conjugate() * p.b.conjugate() * p.c).real >= 0


def strictly_increasing(phi: PhiFunction, b=None, n: int = 4096) -> bool:
    """Known strict increase, falling back to a grid check for presets."""
    known = phi.strictly_increasing
    if known is not None:
        return known
    try:
        _grid_increasing(phi, np.linspace(*default_bracket(phi, b), n))
    except PreconditionError:
        return False
    return True


def certify(phi: PhiFunction, p: Optional[ParamSet] = None, b=None,
            n: int = 4096) -> Certificate:
    """Best available monotonicity verdict for ``t -> ||M_t||``.

    Order: a condition-(b) certificate for ``phi`` alone, then the parameter
    certificate (needs ``p`` and a strictly increasing ``phi``), then a
    condition-(b) violation, else inconclusive.
    """
    try:
        cond_b = check_condition_b(phi, b, n)
    except PreconditionError:
        cond_b = Certificate(Status.INCONCLUSIVE, Justification.NUMERIC_ONLY)
    if cond_b.monotone:
        return cond_b
    if p is not None and param_certificate(p) and strictly_increasing(phi, b, n):
        return Certificate(Status.CERTIFIED_MONOTONE, Justification.COR27_PARAMS)
    return cond_b


def check_phi_hypothesis(phi: PhiFunction, upper: float, n: int = 4096) -> None:
    """Require ``phi(t) >= phi(0) >= 0`` on ``[0, upper]`` (grid of ``n`` points)."""
    ts = np.linspace(0.0, max(float(upper), 0.0), n)
    vals = np.asarray(phi(ts), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise PreconditionError("phi is not finite on [0, upper]")
    phi0 = vals[0]
    if phi0 < 0:
        raise PreconditionError(f"phi(0) = {phi0} is negative")
    slack = 1e-14 * max(1.0, abs(phi0))
    if np.any(vals < phi0 - slack):
        i = int(np.argmax(vals < phi0 - slack))
        raise PreconditionError(f"phi({ts[i]:.6g}) < phi(0)")
