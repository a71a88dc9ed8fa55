"""Counterexamples to monotonicity of ``||M_t||`` where condition (b) fails,
and a full reproduction of the ``phi(t) = 2 t^5`` example.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import curves
from .curves import ParamSet
from .exceptions import ConsistencyError, PreconditionError, ReproductionError
from .numkit import bisect_root
from .phicrit import PhiFunction, PowerPhi

WITNESS_SHRINKS = 12
WITNESS_GRID = 64
WITNESS_GAP = 1e-12


@dataclass(frozen=True)
class CounterexampleResult:
    params: ParamSet
    t0: float
    margin: float
    d1: float
    d2: float
    slope_gap: float  # d1^2 - d2^2 = t0 (margin - 4 t0)
    decrease_witness: tuple[float, float]
    f_lo: float
    f_t0: float


def construct(phi: PhiFunction, t0: float, margin: Optional[float] = None) -> CounterexampleResult:
    """Parameters ``(a, b, c)`` for which ``||M_t||`` decreases just left of ``t0``.

    Requires ``t0 phi'(t0) > 4 phi(t0)``. Uses ``c = 1``,
    ``b = sqrt(margin / (phi'(t0) (t0 phi'(t0) - 4 phi(t0))))`` and
    ``a = -b phi(t0)``; ``margin`` defaults to ``4 t0 + 1`` and may be any
    number above ``4 t0``.
    """
    t0 = float(t0)
    if not t0 > 0:
        raise PreconditionError("t0 must be positive")
    if margin is None:
        margin = 4.0 * t0 + 1.0
    margin = float(margin)
    ph = float(phi(t0))
    dph = float(phi.derivative(t0))
    excess = t0 * dph - 4.0 * ph
    if not excess > 0:
        raise PreconditionError(f"condition (b) holds at t0={t0:g}: t0 phi'(t0) - 4 phi(t0) = {excess:g}")
    if not margin > 4.0 * t0:
        raise PreconditionError(f"margin must exceed 4 t0 = {4 * t0:g}")

    b = math.sqrt(margin / (dph * excess))
    p = ParamSet(-b * ph, b, 1.0)
    d1 = b * dph * math.sqrt(t0 * t0 + b * b * ph * ph)
    d2 = 2.0 * t0 + b * b * ph * dph
    slope_gap = d1 * d1 - d2 * d2
    expected = t0 * (margin - 4.0 * t0)
    if not (d1 > 0 and d2 > 0 and slope_gap > 0):
        raise ConsistencyError(f"slopes d1={d1}, d2={d2} do not give a decrease")
    if abs(slope_gap - expected) > 1e-9 * max(1.0, d1 * d1):
        raise ConsistencyError(f"d1^2 - d2^2 = {slope_gap} but expected {expected}")

    f_t0 = float(curves.eval_f(p, phi, t0))
    delta = 0.5
    for _ in range(WITNESS_SHRINKS):
        ts = np.linspace(t0 * (1.0 - delta), t0, WITNESS_GRID + 1)[:-1]
        vals = np.asarray(curves.eval_f(p, phi, ts), dtype=float)
        gaps = vals - f_t0
        i = int(np.argmax(gaps))
        if gaps[i] > WITNESS_GAP * max(1.0, f_t0):
            return CounterexampleResult(p, t0, margin, d1, d2, slope_gap,
                                        (float(ts[i]), t0), float(vals[i]), f_t0)
        delta /= 2.0
    raise ConsistencyError("no decrease witness found left of t0")


def ex24_closed_form(t):
    """``||M_t||`` for ``M_t = [[-2, t], [t, 2 t^5]]``, valid on ``[0, 1]``."""
    t5 = np.power(t, 5)
    return 1.0 - t5 + np.sqrt(t5 * t5 + 2.0 * t5 + np.square(t) + 1.0)


def ex24_root_poly(t):
    return 15.0 * t ** 8 - 10.0 * t ** 3 - 1.0


@dataclass
class Example24Report:
    t1: float
    h_t1: float
    h_t1_closed: float
    h_1: float
    t_star: float
    f_at_t_star: float
    f_at_1: float
    counterexample: CounterexampleResult
    rows: list[tuple[str, bool, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.rows)

    def as_dict(self) -> dict[str, float]:
        p = self.counterexample.params
        return {
            "t_star": self.t_star,
            "f_at_t_star": self.f_at_t_star,
            "f_at_1": self.f_at_1,
            "witness_t": self.counterexample.decrease_witness[0],
            "params_a": p.a.real,
            "params_b": p.b.real,
            "params_c": p.c.real,
        }

    def to_text(self) -> str:
        lines = [f"{k} = {v:.17g}" for k, v in self.as_dict().items()]
        lines += [f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})" for name, ok, detail in self.rows]
        return "\n".join(lines)


def reproduce_example24(tol: float = 1e-12, grid_n: int = 4096) -> Example24Report:
    """Re-derive the ``phi(t) = 2 t^5`` counterexample; raises on any mismatch."""
    t1 = 4.0 ** (-0.2)
    h_t1 = ex24_root_poly(t1)
    h_t1_closed = -25.0 / 4.0 * t1 ** 3 - 1.0
    h_1 = ex24_root_poly(1.0)
    t_star = bisect_root(ex24_root_poly, (t1, 1.0), tol)
    f_star = float(ex24_closed_form(t_star))
    f_one = float(ex24_closed_form(1.0))
    cx = construct(PowerPhi(0, 2, 5), 1.0, margin=20.0)

    rows: list[tuple[str, bool, str]] = []

    def row(name, ok, detail):
        rows.append((name, bool(ok), detail))

    row("h(t1) < 0 < h(1)", h_t1 < 0 < h_1, f"h(t1)={h_t1:.6g}, h(1)={h_1:.6g}")
    row("h(t1) = -(25/4) t1^3 - 1", abs(h_t1 - h_t1_closed) < 1e-12, f"{h_t1_closed:.12g}")
    row("t* ~ 0.9431", abs(t_star - 0.9431) < 5e-4, f"t*={t_star:.10f}")
    row("f(t*) ~ 2.2384", abs(f_star - 2.2384) < 5e-4, f"{f_star:.10f}")
    row("f(1) = sqrt(5)", abs(f_one - math.sqrt(5.0)) < 1e-12, f"{f_one:.15f}")
    row("f(t*) > f(1)", f_star > f_one, f"gap={f_star - f_one:.6g}")

    ts = np.linspace(0.0, 1.0, 257)
    forms = [
        curves.eval_f(ParamSet(-2, 2, 1), PowerPhi(0, 1, 5), ts),
        curves.eval_f(ParamSet(-2, 1, 1), PowerPhi(0, 2, 5), ts),
    ]
    ref = ex24_closed_form(ts)
    dev = max(float(np.max(np.abs(f - ref))) for f in forms)
    row("closed form = eval_f for (-2,2,1;t^5) and (-2,1,1;2t^5)", dev < 1e-12, f"max dev={dev:.3g}")

    f = ex24_closed_form
    up = curves.check_monotone_grid(f, (0.0, t_star), grid_n)
    down = curves.check_monotone_grid(lambda t: -f(t), (t_star, 1.0), grid_n)
    row("increasing on [0, t*]", not up.violated, up.verdict.value)
    row("decreasing on [t*, 1]", not down.violated,
        "no violation of decrease on grid" if not down.violated else f"witness {down.witness}")

    p = cx.params
    row("construction gives (a, b, c) = (-2, 1, 1)",
        abs(p.a + 2) < 1e-12 and abs(p.b - 1) < 1e-12 and p.c == 1, f"a={p.a.real:g}, b={p.b.real:g}")

    report = Example24Report(t1, h_t1, h_t1_closed, h_1, t_star, f_star, f_one, cx, rows)
    if not report.passed:
        failed = [name for name, ok, _ in rows if not ok]
        raise ReproductionError(f"example reproduction failed: {failed}")
    return report
