"""The parametrized 2x2 families and their closed-form norm curves.

``M_t = [[a, t], [c t, b phi(t)]]`` for ``t >= 0`` and
``N_s = [[a, d], [c, s]]`` for ``s >= 0``.

Scalar helpers accept either a float ``t`` or a numpy array of ``t`` values;
``phi`` is any callable mapping ``t`` (scalar or array) to ``phi(t)``.
"""
from __future__ import annotations

import cmath
import csv
import enum
import io
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from .exceptions import InvalidInputError
from .numkit import Bracket

TIE_TOL = 1e-11


def _finite_complex(name: str, z) -> complex:
    z = complex(z)
    if not cmath.isfinite(z):
        raise InvalidInputError(f"{name} must be finite, got {z!r}")
    return z


@dataclass(frozen=True)
class ParamSet:
    """Coefficients ``(a, b, c)`` of ``M_t``."""

    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, _finite_complex(name, getattr(self, name)))


@dataclass(frozen=True)
class NsParams:
    """Coefficients ``(a, c, d)`` of ``N_s = [[a, d], [c, s]]``."""

    a: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in ("a", "c", "d"):
            object.__setattr__(self, name, _finite_complex(name, getattr(self, name)))

    def transposed(self) -> "NsParams":
        return NsParams(self.a, self.d, self.c)


@dataclass(frozen=True)
class CurveSample:
    t: float
    value: float


class Monotonicity(enum.Enum):
    STRICTLY_INCREASING_ON_GRID = "STRICTLY_INCREASING_ON_GRID"
    VIOLATION_FOUND = "VIOLATION_FOUND"


@dataclass(frozen=True)
class MonotoneReport:
    verdict: Monotonicity
    witness: Optional[tuple[float, float]] = None

    @property
    def violated(self) -> bool:
        return self.verdict is Monotonicity.VIOLATION_FOUND


class NsCase(enum.Enum):
    STRICT_CASE_I = "STRICT_CASE_I"
    STRICT_CASE_II = "STRICT_CASE_II"
    STRICT_CASE_III = "STRICT_CASE_III"
    NOT_STRICT = "NOT_STRICT"


def _check_t(t):
    if isinstance(t, (int, float)):
        if t < 0:
            raise InvalidInputError("t must be non-negative")
    elif bool((np.asarray(t) < 0).any()):
        raise InvalidInputError("t must be non-negative")


def make_Mt(p: ParamSet, phi: Callable, t: float) -> np.ndarray:
    _check_t(t)
    return np.array([[p.a, t], [p.c * t, p.b * phi(t)]], dtype=complex)


def eval_a11(p: ParamSet, t):
    return abs(p.a) ** 2 + abs(p.c) ** 2 * np.square(t)


def eval_a22(p: ParamSet, phi: Callable, t):
    return np.square(t) + abs(p.b) ** 2 * np.square(phi(t))


def eval_h(p: ParamSet, phi: Callable, t):
    """Off-diagonal coupling ``h(t) = a + conj(b) c phi(t)``."""
    _check_t(t)
    return p.a + p.b.conjugate() * p.c * phi(t)


def eval_g(p: ParamSet, phi: Callable, t):
    """Discriminant ``(a11 - a22)^2 + 4 t^2 |h|^2`` of ``M_t^* M_t``."""
    _check_t(t)
    diff = eval_a11(p, t) - eval_a22(p, phi, t)
    return np.square(diff) + 4.0 * np.square(t) * np.square(np.abs(eval_h(p, phi, t)))


def eval_f(p: ParamSet, phi: Callable, t):
    """``||M_t||`` from the closed form ``((a11 + a22 + sqrt g) / 2)^(1/2)``."""
    _check_t(t)
    a11 = eval_a11(p, t)
    a22 = eval_a22(p, phi, t)
    g = np.square(a11 - a22) + 4.0 * np.square(t) * np.square(np.abs(eval_h(p, phi, t)))
    return np.sqrt((a11 + a22 + np.sqrt(g)) / 2.0)


def eval_phi_det(p: ParamSet, phi: Callable, lambda0: float, t):
    """``det(lambda0 I - M_t^* M_t)``; zero exactly when ``lambda0`` is an eigenvalue."""
    _check_t(t)
    a11 = eval_a11(p, t)
    a22 = eval_a22(p, phi, t)
    return (lambda0 - a11) * (lambda0 - a22) - np.square(t) * np.square(np.abs(eval_h(p, phi, t)))


def norm_block_constant(p: ParamSet, normA: float) -> float:
    """``||[[a I, A], [c A^*, b I]]||`` as a function of ``||A||`` only.

    The leading term carries ``||A||^2`` on the ``|c|^2 + 1`` part, so that the
    ``a = b = c = 0`` case returns ``||A||``.
    """
    if normA < 0:
        raise InvalidInputError("normA must be non-negative")
    a2, b2, c2 = abs(p.a) ** 2, abs(p.b) ** 2, abs(p.c) ** 2
    n2 = normA * normA
    r = a2 + b2 + (c2 + 1.0) * n2
    k = abs(p.b + p.a.conjugate() * p.c) ** 2 + abs(p.a + p.b.conjugate() * p.c) ** 2
    rad = (a2 - b2) ** 2 + (c2 - 1.0) ** 2 * n2 * n2 + 2.0 * k * n2
    return math.sqrt((r + math.sqrt(max(rad, 0.0))) / 2.0)


def norm_block_constant_printed(p: ParamSet, normA: float) -> float:
    """The same expression with the leading term ``|a|^2+|b|^2+|c|^2+1``.

    Only agrees with the true norm when ``||A|| = 1``; kept for comparison.
    """
    a2, b2, c2 = abs(p.a) ** 2, abs(p.b) ** 2, abs(p.c) ** 2
    n2 = normA * normA
    r = a2 + b2 + c2 + 1.0
    k = abs(p.b + p.a.conjugate() * p.c) ** 2 + abs(p.a + p.b.conjugate() * p.c) ** 2
    rad = (a2 - b2) ** 2 + (c2 - 1.0) ** 2 * n2 * n2 + 2.0 * k * n2
    return math.sqrt((r + math.sqrt(max(rad, 0.0))) / 2.0)


def classify_ns(q: NsParams) -> NsCase:
    re = (q.a.conjugate() * q.c * q.d).real
    if q.a == 0 and q.c == 0 and q.d == 0:
        return NsCase.STRICT_CASE_III
    if re > 0:
        return NsCase.STRICT_CASE_I
    if re == 0 and abs(q.c) + abs(q.d) > 0:
        return NsCase.STRICT_CASE_II
    return NsCase.NOT_STRICT


def eval_ns_norm(q: NsParams, s):
    """``||N_s||`` via ``(tr B_s + sqrt(F(s))) / 2`` with ``B_s = N_s^* N_s``."""
    _check_t(s)
    a2, c2, d2 = abs(q.a) ** 2, abs(q.c) ** 2, abs(q.d) ** 2
    s2 = np.square(s)
    tr = a2 + c2 + d2 + s2
    F = np.square(s2 + d2 - a2 - c2) + 4.0 * np.square(np.abs(q.a * q.d.conjugate() + q.c * s))
    return np.sqrt((tr + np.sqrt(F)) / 2.0)


def check_monotone_grid(f: Callable[[float], float], b, n: int = 4096,
                        tie_tol: float = TIE_TOL, vectorized: bool = False) -> MonotoneReport:
    """Grid falsifier for strict increase.

    Reports the first consecutive pair with
    ``f(t[i+1]) <= f(t[i]) + tie_tol * max(1, |f(t[i])|)``.
    Passing only means no violation was seen on the grid. With
    ``vectorized`` the grid is evaluated in a single call ``f(ts)``.
    """
    b = Bracket.of(b)
    if n < 2:
        raise InvalidInputError("n must be at least 2")
    ts = np.linspace(b.lo, b.hi, n)
    if vectorized:
        vals = np.asarray(f(ts), dtype=float)
    else:
        vals = np.array([f(float(t)) for t in ts], dtype=float)
    slack = tie_tol * np.maximum(1.0, np.abs(vals[:-1]))
    bad = np.flatnonzero(vals[1:] <= vals[:-1] + slack)
    if bad.size:
        i = int(bad[0])
        return MonotoneReport(Monotonicity.VIOLATION_FOUND, (float(ts[i]), float(ts[i + 1])))
    return MonotoneReport(Monotonicity.STRICTLY_INCREASING_ON_GRID)


def sample_curve(p: ParamSet, phi: Callable, b, n: int) -> list[CurveSample]:
    lo, hi = float(b[0]), float(b[1])
    if n < 1 or lo < 0 or hi < lo:
        raise InvalidInputError("need n >= 1 and 0 <= lo <= hi")
    ts = np.linspace(lo, hi, n)
    vals = eval_f(p, phi, ts)
    return [CurveSample(float(t), float(v)) for t, v in zip(ts, vals)]


def write_curve_csv(samples: Iterable[CurveSample], out=None) -> str:
    """Serialize samples as ``t,norm`` CSV at 17 significant digits."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "norm"])
    for s in samples:
        w.writerow([f"{s.t:.17g}", f"{s.value:.17g}"])
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def read_curve_csv(source) -> list[CurveSample]:
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["t", "norm"]:
        raise InvalidInputError(f"expected header 't,norm', got {header!r}")
    return [CurveSample(float(r[0]), float(r[1])) for r in reader if r]
