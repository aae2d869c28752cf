"""Four-party pure states on c1 (x) r1 (x) c2 (x) r2 and their reductions.

Each party is truncated to ``d + 1`` Fock levels. A reservoir level ``k``
stands for the normalised collective state with ``k`` excitations, which we
treat as an orthonormal basis of an effective qudit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

import numpy as np

from . import numerics
from .amplitudes import damping_matrix, xi_chi
from .errors import BadDims, BadPartition, DomainError, NotNormalized

PARTIES = ("c1", "r1", "c2", "r2")
MAX_CUTOFF = 6
NORM_TOL = 1e-9


@dataclass(frozen=True)
class PartitionSpec:
    """Side A of a bipartition of the four parties; side B is the rest."""

    side_a: frozenset

    def __post_init__(self):
        side = frozenset(self.side_a)
        unknown = side - set(PARTIES)
        if unknown:
            raise BadPartition(f"unknown parties {sorted(unknown)}; expected a subset of {PARTIES}")
        if not side or len(side) == len(PARTIES):
            raise BadPartition("side A must be a nonempty proper subset of {c1, r1, c2, r2}")
        object.__setattr__(self, "side_a", side)

    @classmethod
    def of(cls, *parties: str) -> "PartitionSpec":
        return cls(frozenset(parties))

    @property
    def parties(self) -> tuple[str, ...]:
        """Side A in canonical order."""
        return tuple(p for p in PARTIES if p in self.side_a)

    @property
    def axes(self) -> tuple[int, ...]:
        return tuple(PARTIES.index(p) for p in self.parties)

    def complement(self) -> "PartitionSpec":
        return PartitionSpec(frozenset(PARTIES) - self.side_a)

    def __str__(self):
        return "".join(self.parties)


def all_partitions() -> list[PartitionSpec]:
    """The 14 nonempty proper subsets, smallest first."""
    return [PartitionSpec(frozenset(c)) for r in range(1, 4) for c in combinations(PARTIES, r)]


@dataclass(frozen=True, eq=False)
class FourPartyState:
    """Pure state with amplitudes indexed ``[i_c1, i_r1, i_c2, i_r2]``.

    ``t`` is ``None`` when the state was built from explicit xi, chi values.
    """

    d: int
    amplitudes: np.ndarray
    t: Optional[float] = None
    kappa: float = 1.0

    def __post_init__(self):
        D = self.d + 1
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape == (D**4,):
            amps = amps.reshape((D,) * 4)
        if amps.shape != (D,) * 4:
            raise BadDims(f"expected {(D,) * 4} amplitudes for d={self.d}, got {amps.shape}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def levels(self) -> int:
        return self.d + 1

    @property
    def vector(self) -> np.ndarray:
        """Flat amplitude vector, index ``((c1*D + r1)*D + c2)*D + r2``."""
        return self.amplitudes.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def paired_excitations(self, tol: float = 0.0) -> bool:
        """True if every amplitude with ``c1 + r1 != c2 + r2`` vanishes."""
        idx = np.indices(self.amplitudes.shape)
        off = (idx[0] + idx[1]) != (idx[2] + idx[3])
        return bool(np.all(np.abs(self.amplitudes[off]) <= tol))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    dims: tuple
    matrix: np.ndarray

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        mat = numerics.as_matrix(self.matrix)
        total = math.prod(dims)
        if mat.shape != (total, total):
            raise BadDims(f"matrix shape {mat.shape} does not match dims {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_pure(cls, psi, dims) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
        return cls(tuple(dims), np.outer(psi, psi.conj()))

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def purity(self) -> float:
        # tr rho^2 = sum |rho_ij|^2 for Hermitian rho
        return float(np.sum(np.abs(self.matrix) ** 2))

    def eigenvalues(self) -> np.ndarray:
        return numerics.hermitian_eigenvalues(self.matrix)

    def check(self, tol: float = 1e-10) -> None:
        """Raise ``DomainError`` unless Hermitian, unit-trace and positive within ``tol``."""
        defect = numerics.hermiticity_defect(self.matrix)
        if defect > tol:
            raise DomainError(f"density matrix not Hermitian: defect {defect:.3g}")
        if abs(self.trace() - 1.0) > tol:
            raise DomainError(f"density matrix trace {self.trace():.15g} != 1")
        lo = self.eigenvalues()[0]
        if lo < -tol:
            raise DomainError(f"density matrix has eigenvalue {lo:.3g} < 0")


def _as_alphas(alphas: Iterable[complex]) -> np.ndarray:
    arr = np.asarray(list(alphas), dtype=np.complex128)
    if arr.ndim != 1 or arr.size < 2:
        raise DomainError("need at least two amplitudes (d >= 1)")
    if arr.size - 1 > MAX_CUTOFF:
        raise DomainError(f"Fock cutoff d={arr.size - 1} exceeds the supported maximum {MAX_CUTOFF}")
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > NORM_TOL:
        raise NotNormalized(norm, NORM_TOL)
    return arr


def build_state_from_amplitudes(alphas, xi: float, chi: float) -> FourPartyState:
    """State ``sum_n alpha_n |phi_n>_{c1 r1} |phi_n>_{c2 r2}`` for given xi, chi.

    ``|phi_n> = sum_j b_{n,j} |n-j>_c |j>_r``. Swapping xi and chi swaps the
    roles of cavities and reservoirs.
    """
    a = _as_alphas(alphas)
    d = a.size - 1
    D = d + 1
    B = damping_matrix(d, xi, chi)
    # pair[n] holds |phi_n> as a D x D array over (cavity, reservoir)
    psi = np.zeros((D,) * 4, dtype=np.complex128)
    for n in range(D):
        if a[n] == 0:
            continue
        phi = np.zeros((D, D))
        for j in range(n + 1):
            phi[n - j, j] = B[n, j]
        psi += a[n] * np.multiply.outer(phi, phi)
    return FourPartyState(d=d, amplitudes=psi)


def build_state(alphas, t: float, kappa: float = 1.0) -> FourPartyState:
    """Evolve ``sum_n alpha_n |n>_c1 |n>_c2 |0>_r1 |0>_r2`` to time ``t``.

    Raises
    ------
    NotNormalized
        If ``| ||alphas|| - 1 | > 1e-9``; amplitudes are never rescaled here.
    """
    xi, chi = xi_chi(t, kappa)
    state = build_state_from_amplitudes(alphas, xi, chi)
    return FourPartyState(d=state.d, amplitudes=state.amplitudes, t=float(t), kappa=float(kappa))


def _partition(keep) -> PartitionSpec:
    if isinstance(keep, PartitionSpec):
        return keep
    if isinstance(keep, str):
        return PartitionSpec.of(keep)
    return PartitionSpec(frozenset(keep))


def reduced_density(state: FourPartyState, keep) -> DensityMatrix:
    """Partial trace over every party not in ``keep``.

    The kept parties appear in canonical order c1, r1, c2, r2.
    """
    part = _partition(keep)
    kept = part.axes
    traced = tuple(ax for ax in range(4) if ax not in kept)
    psi = state.amplitudes
    rho = np.tensordot(psi, psi.conj(), axes=(traced, traced))
    size = state.levels ** len(kept)
    return DensityMatrix(dims=(state.levels,) * len(kept), matrix=rho.reshape(size, size))


def _bipartite_dims(rho: DensityMatrix) -> tuple[int, int]:
    if len(rho.dims) != 2:
        raise BadPartition(f"expected a bipartite density matrix, got dims {rho.dims}")
    return rho.dims


def partial_transpose(rho: DensityMatrix, side: int = 0) -> np.ndarray:
    """Transpose the indices of subsystem ``side`` (0 = A, 1 = B).

    For ``side=0``: ``out[(i,k),(j,l)] = rho[(j,k),(i,l)]``.
    """
    dA, dB = _bipartite_dims(rho)
    t = rho.matrix.reshape(dA, dB, dA, dB)
    if side == 0:
        t = t.transpose(2, 1, 0, 3)
    elif side == 1:
        t = t.transpose(0, 3, 2, 1)
    else:
        raise BadPartition(f"side must be 0 or 1, got {side}")
    return t.reshape(dA * dB, dA * dB)


def realign(rho: DensityMatrix) -> np.ndarray:
    """Realignment ``R[(i,j),(k,l)] = rho[(i,k),(j,l)]``, shape ``(dA^2, dB^2)``."""
    dA, dB = _bipartite_dims(rho)
    return rho.matrix.reshape(dA, dB, dA, dB).transpose(0, 2, 1, 3).reshape(dA * dA, dB * dB)
