"""Microscopic check of the exponential decay law.

One cavity photon coupled to ``N`` reservoir modes with a flat spectrum,
restricted to the single-excitation sector. In the interaction picture

    i d(xi)/dt      = g * sum_k lambda_k exp(+i Delta_k t)
    i d(lambda_k)/dt = g * xi exp(-i Delta_k t)

with detunings on a uniform grid over ``[-W/2, W/2]`` and
``g = sqrt(kappa W / (2 pi N))``. The cavity amplitude should follow
``exp(-kappa t / 2)`` up to corrections of order ``kappa / W``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class OracleConfig:
    n_modes: int = 400
    bandwidth: float = 40.0  # units of kappa
    kappa: float = 1.0
    t_max: float = 3.0
    dt: float = 1e-3

    @property
    def revival_time(self) -> float:
        return 2.0 * math.pi * self.n_modes / (self.bandwidth * self.kappa)

    @property
    def coupling(self) -> float:
        return math.sqrt(self.kappa * self.bandwidth * self.kappa / (2.0 * math.pi * self.n_modes))

    def detunings(self) -> np.ndarray:
        half = 0.5 * self.bandwidth * self.kappa
        return np.linspace(-half, half, self.n_modes)

    def validate(self) -> None:
        if self.n_modes < 50:
            raise ConfigError(f"need at least 50 reservoir modes, got {self.n_modes}")
        if not (self.kappa > 0 and self.bandwidth > 0 and self.t_max > 0 and self.dt > 0):
            raise ConfigError("kappa, bandwidth, t_max and dt must be positive")
        if self.t_max >= self.revival_time:
            raise ConfigError(
                f"t_max={self.t_max:g} reaches the discretisation revival time "
                f"2*pi*N/W = {self.revival_time:.6g}"
            )
        if self.dt > 1e-3 / self.kappa * (1 + 1e-12):
            raise ConfigError(f"dt={self.dt:g} exceeds 1e-3/kappa")


@dataclass(frozen=True, eq=False)
class OracleSeries:
    times: np.ndarray
    xi_n: np.ndarray  # |cavity amplitude|
    leaked: np.ndarray  # sum_k |lambda_k|^2

    def norm_error(self) -> float:
        return float(np.max(np.abs(self.xi_n**2 + self.leaked - 1.0)))


def simulate_single_excitation(config: OracleConfig) -> OracleSeries:
    """Fourth-order Runge-Kutta integration from ``|1>_c |vac>_r``."""
    config.validate()
    det = config.detunings()
    g = config.coupling
    dt = config.dt
    steps = int(round(config.t_max / dt))
    times = np.arange(steps + 1) * dt

    def rhs(t, y):
        phase = np.exp(1j * det * t)
        out = np.empty_like(y)
        out[0] = -1j * g * np.dot(y[1:], phase)
        out[1:] = (-1j * g * y[0]) * phase.conj()
        return out

    y = np.zeros(det.size + 1, dtype=np.complex128)
    y[0] = 1.0
    xi_n = np.empty(steps + 1)
    leaked = np.empty(steps + 1)
    xi_n[0], leaked[0] = 1.0, 0.0
    for i in range(steps):
        t = times[i]
        k1 = rhs(t, y)
        k2 = rhs(t + dt / 2, y + (dt / 2) * k1)
        k3 = rhs(t + dt / 2, y + (dt / 2) * k2)
        k4 = rhs(t + dt, y + dt * k3)
        y = y + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        xi_n[i + 1] = abs(y[0])
        leaked[i + 1] = float(np.sum(np.abs(y[1:]) ** 2))
    return OracleSeries(times=times, xi_n=xi_n, leaked=leaked)


def markov_xi(times, kappa: float = 1.0) -> np.ndarray:
    return np.exp(-0.5 * kappa * np.asarray(times))


def compare_to_markov(series: OracleSeries, kappa: float = 1.0) -> float:
    """Largest ``|xi_N(t) - exp(-kappa t / 2)|`` over the series."""
    return float(np.max(np.abs(series.xi_n - markov_xi(series.times, kappa))))


def fitted_decay_rate(series: OracleSeries, window=(0.5, 2.5), kappa: float = 1.0) -> float:
    """Least-squares slope of ``-ln xi_N^2`` over ``window`` (units of ``1/kappa``)."""
    lo, hi = window[0] / kappa, window[1] / kappa
    mask = (series.times >= lo) & (series.times <= hi)
    slope = np.polyfit(series.times[mask], np.log(series.xi_n[mask] ** 2), 1)[0]
    return float(-slope)
