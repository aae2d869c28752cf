"""Locating entanglement sudden death (ESD) and sudden birth (ESB).

Closed forms come from the dominant 2x2 block ``{|0,n>, |n,0>}`` of the
partially transposed two-party state, ``n`` being the top Fock level:

    t_ESD = -ln(1 - (a_0/a_n)^(1/n)) / kappa,    t_ESB = ln(a_n/a_0) / (n kappa).

For ``n = 1`` they are exact. For ``n = 2`` they are exact while the middle
amplitude is small enough that the corner block goes positive last (true
for ``a_1 = a_0``); a larger ``a_1`` moves the crossing, which shows up as a
nonzero difference in :class:`EventReport`. From ``n = 3`` on no closed form
is attached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, NotNormalized
from .series import SeriesSpec, measure_function, parse_series

T_TOL = 1e-8
TOUCH_TOL = 1e-9
TOUCH_WIDTH = 1e-4
DEFAULT_STEPS = 2000
DEFAULT_HORIZON = 6.0  # units of 1/kappa


@dataclass(frozen=True)
class Crossing:
    time: float
    direction: str  # "death", "birth" or "tangency"


@dataclass(frozen=True)
class EventReport:
    kind: str  # "ESD", "ESB" or "touch"
    partition: str
    t_numeric: float
    t_analytic: Optional[float]
    measure_kind: str

    @property
    def difference(self) -> Optional[float]:
        if self.t_analytic is None:
            return None
        return self.t_numeric - self.t_analytic

    def agrees(self, tol: float = 10 * T_TOL) -> bool:
        d = self.difference
        return d is not None and abs(d) < tol


def _check_norm(alphas: Sequence[float]) -> None:
    norm = math.sqrt(sum(abs(a) ** 2 for a in alphas))
    if abs(norm - 1.0) > 1e-9:
        raise NotNormalized(norm)


def analytic_times_qubit(alpha: float, beta: float, kappa: float = 1.0):
    """``(t_ESD, t_ESB)`` for ``alpha|00> + beta|11>``, or ``None`` when ``beta <= alpha``.

    ``None`` means there is no sudden death: the cavity entanglement only
    decays asymptotically.
    """
    _check_norm([alpha, beta])
    if not (alpha > 0 and beta > 0):
        raise DomainError("alpha and beta must be positive")
    if beta <= alpha:
        return None
    return -math.log1p(-alpha / beta) / kappa, math.log(beta / alpha) / kappa


def analytic_times_qutrit(alpha: float, gamma: float, kappa: float = 1.0) -> tuple[float, float]:
    """``(t_ESD, t_ESB)`` for ``alpha|00> + beta|11> + gamma|22>``; needs ``gamma > alpha > 0``."""
    if not (gamma > alpha > 0):
        raise DomainError(f"need gamma > alpha > 0, got alpha={alpha}, gamma={gamma}")
    ratio = alpha / gamma
    return -math.log1p(-math.sqrt(ratio)) / kappa, math.log(1.0 / ratio) / (2.0 * kappa)


def corner_block_times(alphas: Sequence[float], kappa: float = 1.0):
    """Corner-block estimate of ``(t_ESD, t_ESB)`` for any cutoff, or ``None``."""
    a0, an = float(alphas[0]), float(alphas[-1])
    n = len(alphas) - 1
    if not (a0 > 0 and an > a0):
        return None
    ratio = a0 / an
    return -math.log1p(-(ratio ** (1.0 / n))) / kappa, math.log(1.0 / ratio) / (n * kappa)


def analytic_times(alphas: Sequence[float], kappa: float = 1.0):
    """Exact closed-form times for cutoffs 1 and 2; ``None`` otherwise or without ESD."""
    _check_norm(alphas)
    if len(alphas) == 2:
        return analytic_times_qubit(alphas[0], alphas[1], kappa)
    if len(alphas) == 3:
        if not (alphas[2] > alphas[0] > 0):
            return None
        return analytic_times_qutrit(alphas[0], alphas[2], kappa)
    return None


def simultaneity_condition(alphas: Sequence[float], tol: float = 1e-9) -> bool:
    """True when ESD and ESB coincide at ``ln 2 / kappa``.

    With ``n`` the top Fock level this needs ``a_n / a_0 = 2^n`` and
    ``a_k < a_n`` for every lower level.
    """
    _check_norm(alphas)
    n = len(alphas) - 1
    a0, an = alphas[0], alphas[-1]
    if a0 <= 0:
        return False
    if abs(an / a0 - 2.0**n) > tol:
        return False
    return all(a < an for a in alphas[:-1])


def _bisect(alive: Callable[[float], bool], lo: float, hi: float, lo_alive: bool, t_tol: float) -> float:
    while hi - lo >= t_tol:
        mid = 0.5 * (lo + hi)
        if alive(mid) == lo_alive:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def detect_crossings(
    measure: Callable[[float], float],
    times,
    threshold: float = 0.0,
    *,
    values=None,
    t_tol: float = T_TOL,
    touch_tol: float = TOUCH_TOL,
    touch_width: float = TOUCH_WIDTH,
) -> list[Crossing]:
    """Find where ``measure(t) - threshold`` enters or leaves ``(-inf, touch_tol]``.

    A point counts as alive when ``measure(t) - threshold > touch_tol``. Each
    alive/dead change between neighbouring grid points is refined by
    bisection on ``measure`` to ``|dt| < t_tol``. Local minima of alive runs
    that dip far enough are refined too: a dead set narrower than
    ``touch_width`` is reported as a single tangency. A quadratic touch of
    unit curvature has a dead set of width ``2 * sqrt(touch_tol)``.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2:
        raise DomainError("need a grid of at least two times")
    vals = np.array([measure(t) for t in times] if values is None else values, dtype=float)
    if vals.shape != times.shape or not np.all(np.isfinite(vals)):
        raise DomainError("series must be finite and match the time grid")
    excess = vals - threshold

    def alive(t: float) -> bool:
        return measure(t) - threshold > touch_tol

    live = excess > touch_tol
    found: list[Crossing] = []
    for i in range(times.size - 1):
        if live[i] != live[i + 1]:
            t = _bisect(alive, times[i], times[i + 1], bool(live[i]), t_tol)
            found.append(Crossing(t, "death" if live[i] else "birth"))
        if 0 < i and live[i] and live[i - 1] and live[i + 1]:
            dip = max(excess[i - 1], excess[i + 1]) - excess[i]
            if excess[i] <= min(excess[i - 1], excess[i + 1]) and excess[i] <= dip:
                found.extend(_refine_dip(measure, threshold, times[i - 1], times[i + 1], alive, t_tol, touch_tol, touch_width))
    found.sort(key=lambda c: c.time)
    return found


def _refine_dip(measure, threshold, lo, hi, alive, t_tol, touch_tol, touch_width) -> list[Crossing]:
    res = minimize_scalar(lambda t: measure(t) - threshold, bounds=(lo, hi), method="bounded",
                          options={"xatol": t_tol})
    if res.fun > touch_tol:
        return []
    t_min = float(res.x)
    left = _bisect(alive, lo, t_min, True, t_tol)
    right = _bisect(alive, t_min, hi, False, t_tol)
    if right - left < max(touch_width, 10 * t_tol):
        return [Crossing(0.5 * (left + right), "tangency")]
    return [Crossing(left, "death"), Crossing(right, "birth")]


def dead_intervals(crossings: Iterable[Crossing], alive_at_start: bool, t_end: float) -> list[tuple[float, float]]:
    """Intervals in ``[0, t_end]`` where the series is at or below threshold."""
    out = []
    start = None if alive_at_start else 0.0
    for c in sorted(crossings, key=lambda c: c.time):
        if c.direction == "death" and start is None:
            start = c.time
        elif c.direction == "birth" and start is not None:
            out.append((start, c.time))
            start = None
    if start is not None:
        out.append((start, t_end))
    return out


def intersect_intervals(a, b) -> list[tuple[float, float]]:
    out = []
    for lo1, hi1 in a:
        for lo2, hi2 in b:
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if hi > lo:
                out.append((float(lo), float(hi)))
    return sorted(out)


@dataclass
class EventAnalysis:
    """Numerical events per series plus the closed-form reference times."""

    alphas: list
    kappa: float
    t_end: float
    specs: list
    crossings: dict
    initially_alive: dict
    analytic: Optional[tuple]
    reports: list

    def dead(self, label: str) -> list[tuple[float, float]]:
        return dead_intervals(self.crossings[label], self.initially_alive[label], self.t_end)

    def both_dead(self, first: str = "cc", second: str = "rr") -> list[tuple[float, float]]:
        return intersect_intervals(self.dead(first), self.dead(second))

    def first(self, label: str, kind: str) -> Optional[float]:
        for r in self.reports:
            if r.partition == label and r.kind == kind:
                return r.t_numeric
        return None


def find_events(
    alphas: Sequence[float],
    kappa: float = 1.0,
    labels: Sequence[str] = ("cc", "rr"),
    t_max: Optional[float] = None,
    steps: int = DEFAULT_STEPS,
) -> EventAnalysis:
    """Scan each series on a uniform grid over ``[0, t_max]`` and refine its events.

    ``t_max`` defaults to ``6 / kappa``. Closed-form times are attached to the
    first ESD of ``cc`` and the first ESB of ``rr`` when they exist exactly.
    """
    alphas = [float(a) for a in alphas]
    _check_norm(alphas)
    if steps < 2:
        raise DomainError("need at least two grid points")
    t_end = DEFAULT_HORIZON / kappa if t_max is None else float(t_max)
    times = np.linspace(0.0, t_end, steps)
    d = len(alphas) - 1
    exact = analytic_times(alphas, kappa)
    specs, crossings, initially, reports = [], {}, {}, []
    for label in labels:
        spec: SeriesSpec = parse_series(label, d)
        f = measure_function(spec, alphas, kappa)
        vals = np.array([f(t) for t in times])
        found = detect_crossings(f, times, spec.threshold, values=vals)
        specs.append(spec)
        crossings[label] = found
        initially[label] = bool(vals[0] - spec.threshold > TOUCH_TOL)
        seen = set()
        for c in found:
            kind = {"death": "ESD", "birth": "ESB", "tangency": "touch"}[c.direction]
            ref = None
            if exact is not None and kind not in seen:
                if label == "cc" and kind == "ESD":
                    ref = exact[0]
                elif label == "rr" and kind == "ESB":
                    ref = exact[1]
            seen.add(kind)
            reports.append(EventReport(kind, label, float(c.time), ref, spec.kind))
    return EventAnalysis(alphas, kappa, t_end, specs, crossings, initially, exact, reports)
