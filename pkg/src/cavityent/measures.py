"""Entanglement quantifiers for the cavity/reservoir states."""

from __future__ import annotations

import math

import numpy as np

from . import numerics
from .errors import BadDims, DomainError, NotNormalized
from .states import (
    DensityMatrix,
    FourPartyState,
    all_partitions,
    partial_transpose,
    realign,
    reduced_density,
)

MEASURE_KINDS = ("concurrence", "i_concurrence", "multipartite_cn", "lboe")

# sigma_y (x) sigma_y in the Fock {|0>, |1>} basis; real
_YY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=np.complex128
)


def _matrix_2x2(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        if rho.dims != (2, 2):
            raise BadDims(f"two-qubit concurrence needs dims (2, 2), got {rho.dims}")
        return rho.matrix
    M = numerics.as_matrix(rho)
    if M.shape != (4, 4):
        raise BadDims(f"two-qubit concurrence needs a 4x4 matrix, got {M.shape}")
    return M


def concurrence_two_qubit(rho) -> float:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_i`` are the square roots of the eigenvalues of
    ``rho (Y x Y) rho* (Y x Y)``. With ``rho = V D V^H`` they are the
    singular values of ``sqrt(D) V^T (Y x Y) V sqrt(D)``, which keeps the
    computation inside Hermitian/SVD kernels.
    """
    M = _matrix_2x2(rho)
    w, V = numerics.hermitian_eigh(M)
    root = np.sqrt(np.clip(w, 0.0, None))
    L = root[:, None] * (V.T @ _YY @ V) * root[None, :]
    lam = numerics.singular_values(L)
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def _check_pair(alpha: float, beta: float) -> None:
    norm = math.hypot(abs(alpha), abs(beta))
    if abs(norm - 1.0) > 1e-9:
        raise NotNormalized(norm)


def x_state_lambda(which: str, alpha: float, beta: float, t: float, kappa: float = 1.0) -> float:
    """Closed-form negative-candidate eigenvalue of the partially transposed X state.

    ``which`` is ``"cavities"`` or ``"reservoirs"``. Concurrence is
    ``max(0, -2 * lambda)``.
    """
    _check_pair(alpha, beta)
    if t < 0:
        raise DomainError(f"time must be non-negative, got {t}")
    decay = math.exp(-kappa * t)
    grown = -math.expm1(-kappa * t)
    ab = abs(alpha * beta)
    b2 = abs(beta) ** 2
    if which == "cavities":
        return decay * (b2 * grown - ab)
    if which == "reservoirs":
        return grown * (b2 * decay - ab)
    raise DomainError(f"which must be 'cavities' or 'reservoirs', got {which!r}")


def closed_form_c1r1(beta: float, t: float, kappa: float = 1.0) -> float:
    """Cavity/own-reservoir concurrence ``2 beta^2 sqrt((1 - e^{-kt}) e^{-kt})``."""
    decay = math.exp(-kappa * t)
    return 2.0 * abs(beta) ** 2 * math.sqrt(-math.expm1(-kappa * t) * decay)


def i_concurrence_of(rho_a: DensityMatrix) -> float:
    """``sqrt(2 (1 - tr rho_A^2))`` for the reduced state of a pure global state."""
    return math.sqrt(max(0.0, 2.0 * (1.0 - rho_a.purity())))


def i_concurrence(state: FourPartyState, partition) -> float:
    """I-concurrence (square root of the tangle) across a bipartition of a pure state."""
    return i_concurrence_of(reduced_density(state, partition))


def multipartite_cn(state: FourPartyState) -> float:
    """Four-qubit multipartite concurrence from all 14 subset purities.

    ``C_N = 2^(1 - N/2) sqrt((2^N - 2) - sum_s tr rho_s^2)`` with ``N = 4``.
    """
    if state.d != 1:
        raise BadDims(f"multipartite concurrence is defined here for qubits (d=1), got d={state.d}")
    n = 4
    total = sum(reduced_density(state, part).purity() for part in all_partitions())
    return 2.0 ** (1 - n / 2) * math.sqrt(max(0.0, (2**n - 2) - total))


def lboe(rho: DensityMatrix) -> float:
    """Lower bound of entanglement ``max(||rho^{T_A}||_1, ||R(rho)||_1)``.

    Equals 1 for product states and the local dimension for maximally
    entangled ones; values above 1 certify entanglement.
    """
    pt = numerics.trace_norm(partial_transpose(rho))
    rr = float(np.sum(numerics.singular_values(realign(rho))))
    return max(pt, rr)
