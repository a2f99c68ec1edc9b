"""Adaptive embedded Runge-Kutta 4(5) integrator with event location.

Dormand-Prince coefficients, PI-free step control on a scaled RMS error
norm, and terminal/non-terminal event functions located by bisection on a
cubic Hermite interpolant of the accepted step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

Rhs = Callable[[float, Sequence[float]], Sequence[float]]
EventFn = Callable[[float, Sequence[float]], float]

# Dormand-Prince 5(4) tableau.
_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0)
_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
_B5 = (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0)
_B4 = (
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
)

_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_SAFETY = 0.9


class StepUnderflowError(RuntimeError):
    """Step size shrank below machine resolution; carries the last valid state."""

    def __init__(self, t: float, y: list[float]):
        self.t = t
        self.y = y
        super().__init__(f"integrator step underflow at t={t}")


@dataclass
class Event:
    fn: EventFn
    name: str
    terminal: bool = True
    direction: int = 0  # 0: any crossing, -1: falling only, +1: rising only


@dataclass
class IntegrationResult:
    ts: list[float] = field(default_factory=list)
    ys: list[list[float]] = field(default_factory=list)
    event: str | None = None  # terminal event that stopped integration, if any
    triggered: list[tuple[str, float]] = field(default_factory=list)

    @property
    def t_end(self) -> float:
        return self.ts[-1]

    @property
    def y_end(self) -> list[float]:
        return self.ys[-1]


def _hermite(t0, y0, f0, t1, y1, f1, t):
    """Cubic Hermite interpolation of the state inside an accepted step."""
    h = t1 - t0
    s = (t - t0) / h
    h00 = (1.0 + 2.0 * s) * (1.0 - s) ** 2
    h10 = s * (1.0 - s) ** 2
    h01 = s * s * (3.0 - 2.0 * s)
    h11 = s * s * (s - 1.0)
    return [
        h00 * a + h10 * h * fa + h01 * b + h11 * h * fb
        for a, fa, b, fb in zip(y0, f0, y1, f1)
    ]


def _crossed(g0: float, g1: float, direction: int) -> bool:
    if g0 == 0.0:
        return False  # already at the event when the step began
    if direction >= 0 and g0 < 0.0 <= g1:
        return True
    if direction <= 0 and g0 > 0.0 >= g1:
        return True
    return False


def integrate(
    rhs: Rhs,
    t0: float,
    y0: Sequence[float],
    t_max: float,
    rtol: float = 1e-6,
    atol: float = 1e-8,
    events: Sequence[Event] = (),
    max_step: float = math.inf,
    first_step: float | None = None,
) -> IntegrationResult:
    """Integrate y' = rhs(t, y) from t0 until t_max or a terminal event.

    Records every accepted step.  Events are located by bisection on the
    Hermite interpolant; non-terminal events are recorded and integration
    continues.  Raises StepUnderflowError when no acceptable step exists.
    """
    t = float(t0)
    y = [float(v) for v in y0]
    f = list(rhs(t, y))
    n = len(y)
    result = IntegrationResult(ts=[t], ys=[list(y)])
    g_prev = [ev.fn(t, y) for ev in events]

    h = first_step if first_step is not None else min(1.0, max_step, t_max - t0)
    h = max(h, 1e-12)

    while t < t_max:
        h = min(h, t_max - t, max_step)
        accepted = False
        while not accepted:
            if h < 1e-12 * max(1.0, abs(t)):
                raise StepUnderflowError(t, y)
            ks = [f]
            bad = False
            for stage in range(1, 7):
                ts_ = t + _C[stage] * h
                ys_ = [
                    y[i] + h * sum(_A[stage][j] * ks[j][i] for j in range(stage))
                    for i in range(n)
                ]
                try:
                    k = list(rhs(ts_, ys_))
                except (ValueError, ZeroDivisionError, OverflowError):
                    bad = True
                    break
                if any(not math.isfinite(v) for v in k):
                    bad = True
                    break
                ks.append(k)
            if bad:
                h *= 0.5
                continue
            y_new = [y[i] + h * sum(_B5[j] * ks[j][i] for j in range(7)) for i in range(n)]
            err = 0.0
            for i in range(n):
                e = h * sum((_B5[j] - _B4[j]) * ks[j][i] for j in range(7))
                scale = atol + rtol * max(abs(y[i]), abs(y_new[i]))
                err += (e / scale) ** 2
            err = math.sqrt(err / n)
            if err <= 1.0 or h <= 1e-12 * max(1.0, abs(t)):
                accepted = True
            else:
                h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2)

        f_new = ks[6]  # FSAL: last stage is rhs at (t+h, y_new)
        t_new = t + h

        # Event handling on the accepted interval.
        stop = None
        if events:
            g_new = [ev.fn(t_new, y_new) for ev in events]
            hits: list[tuple[float, int]] = []
            for idx, ev in enumerate(events):
                if _crossed(g_prev[idx], g_new[idx], ev.direction):
                    t_hit = _bisect_event(
                        ev.fn, t, y, f, t_new, y_new, f_new, g_prev[idx]
                    )
                    hits.append((t_hit, idx))
            if hits:
                hits.sort()
                for t_hit, idx in hits:
                    ev = events[idx]
                    result.triggered.append((ev.name, t_hit))
                    if ev.terminal:
                        stop = (t_hit, idx)
                        break

        if stop is not None:
            t_hit, idx = stop
            y_hit = _hermite(t, y, f, t_new, y_new, f_new, t_hit)
            result.ts.append(t_hit)
            result.ys.append(y_hit)
            result.event = events[idx].name
            return result

        t, y, f = t_new, y_new, f_new
        if events:
            g_prev = g_new
        result.ts.append(t)
        result.ys.append(list(y))
        if err == 0.0:
            factor = _MAX_FACTOR
        else:
            factor = min(_MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * err ** -0.2))
        h = h * factor

    return result


def _bisect_event(fn, t0, y0, f0, t1, y1, f1, g0) -> float:
    """Bisect a sign change of fn over [t0, t1] on the Hermite interpolant."""
    lo, hi = t0, t1
    sign_lo = 1.0 if g0 > 0.0 else -1.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-10 * max(1.0, abs(hi)):
            break
        g_mid = fn(mid, _hermite(t0, y0, f0, t1, y1, f1, mid))
        if g_mid == 0.0:
            return mid
        if (g_mid > 0.0) == (sign_lo > 0.0):
            lo = mid
        else:
            hi = mid
    return hi


def sample(result: IntegrationResult, cadence: float) -> tuple[list[float], list[list[float]]]:
    """Resample the recorded steps at a fixed cadence (linear interpolation).

    The terminal point is always included.
    """
    ts = result.ts
    t_out: list[float] = []
    t = ts[0]
    while t < ts[-1]:
        t_out.append(t)
        t += cadence
    t_out.append(ts[-1])
    n = len(result.ys[0])
    cols = []
    for i in range(n):
        col = [y[i] for y in result.ys]
        cols.append(_interp_column(t_out, ts, col))
    rows = [[cols[i][k] for i in range(n)] for k in range(len(t_out))]
    return t_out, rows


def _interp_column(t_out, ts, col):
    out = []
    j = 0
    for t in t_out:
        while j < len(ts) - 2 and ts[j + 1] < t:
            j += 1
        t0, t1 = ts[j], ts[j + 1]
        if t1 == t0:
            out.append(col[j])
        else:
            w = (t - t0) / (t1 - t0)
            out.append(col[j] * (1.0 - w) + col[j + 1] * w)
    return out
