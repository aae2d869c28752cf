"""Markovian damping amplitudes of a cavity mode leaking into a flat reservoir.

A Fock state ``|n>`` of the cavity with the reservoir in vacuum evolves into
``sum_k b_{n,k}(t) |n-k>_c |k>_r`` where ``|k>_r`` is the normalised
collective reservoir state carrying ``k`` excitations and

    b_{n,k}(t) = sqrt(C(n, k)) * xi(t)**(n-k) * chi(t)**k,
    xi(t) = exp(-kappa t / 2),  chi(t) = sqrt(1 - exp(-kappa t)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MAX_PHOTONS = 12


@dataclass(frozen=True)
class AmplitudeSet:
    """Damping amplitudes at one instant (time in units of ``1/kappa``)."""

    t: float
    kappa: float
    xi: float
    chi: float
    vartheta: float


def _check_time(t: float, kappa: float) -> None:
    if not kappa > 0:
        raise DomainError(f"decay rate must be positive, got kappa={kappa!r}")
    if not t >= 0:
        raise DomainError(f"time must be non-negative, got t={t!r}")


def xi_chi(t: float, kappa: float = 1.0) -> tuple[float, float]:
    _check_time(t, kappa)
    decay = math.exp(-kappa * t)
    # -expm1 keeps chi accurate for kappa*t << 1
    return math.sqrt(decay), math.sqrt(-math.expm1(-kappa * t))


def amplitudes(t: float, kappa: float = 1.0) -> AmplitudeSet:
    """Return xi, chi and vartheta at time ``t``.

    vartheta is the amplitude of the two-excitation reservoir branch,
    ``sqrt(1 - xi^4 - 2 xi^2 chi^2)``, which equals ``chi**2``.
    """
    xi, chi = xi_chi(t, kappa)
    xi2, chi2 = xi * xi, -math.expm1(-kappa * t)
    # 1 - xi^4 factored as (1 - xi^2)(1 + xi^2) to avoid cancellation at small kappa*t
    vartheta = math.sqrt(max(0.0, chi2 * (1.0 + xi2) - 2.0 * xi2 * chi2))
    return AmplitudeSet(t=float(t), kappa=float(kappa), xi=xi, chi=chi, vartheta=vartheta)


def _check_nk(n: int, k: int) -> None:
    if not (0 <= n <= MAX_PHOTONS):
        raise DomainError(f"photon number must lie in [0, {MAX_PHOTONS}], got n={n}")
    if not (0 <= k <= n):
        raise DomainError(f"transferred excitations must lie in [0, n], got k={k}, n={n}")


def binomial_amplitude(n: int, k: int, xi: float, chi: float) -> float:
    """``sqrt(C(n, k)) xi**(n-k) chi**k`` for explicit xi, chi."""
    _check_nk(n, k)
    return math.sqrt(math.comb(n, k)) * xi ** (n - k) * chi**k


def damping_amplitude(n: int, k: int, t: float, kappa: float = 1.0) -> float:
    """Amplitude for ``k`` of ``n`` photons having leaked into the reservoir by time ``t``."""
    _check_nk(n, k)
    xi, chi = xi_chi(t, kappa)
    return binomial_amplitude(n, k, xi, chi)


def damping_matrix(d: int, xi: float, chi: float) -> np.ndarray:
    """Lower-triangular table ``B[n, k] = b_{n,k}`` for ``0 <= k <= n <= d``."""
    B = np.zeros((d + 1, d + 1))
    for n in range(d + 1):
        for k in range(n + 1):
            B[n, k] = binomial_amplitude(n, k, xi, chi)
    return B
