"""Dense complex linear algebra for small matrices.

Eigenvalues come from cyclic Jacobi rotations on the Hermitian input and
singular values from one-sided (Hestenes) Jacobi orthogonalisation, both
compiled with numba. Matrices here never exceed a few hundred rows, so the
O(n^3)-per-sweep cost is irrelevant next to the accuracy these methods give
on tiny eigenvalues and singular values.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import DomainError, NonConvergence, NonHermitian

HERMITIAN_TOL = 1e-10
OFFDIAG_TOL = 1e-12
MAX_SWEEPS = 100
# pair-orthogonality threshold for the one-sided SVD
ORTHO_TOL = 1e-15


def as_matrix(M) -> np.ndarray:
    """Coerce ``M`` to a finite 2-D complex array."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2:
        raise DomainError(f"expected a 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DomainError("matrix has non-finite entries")
    return A


def kron(A, B) -> np.ndarray:
    """Kronecker product, ``out[i*rB + k, j*cB + l] = A[i, j] * B[k, l]``."""
    return np.kron(as_matrix(A), as_matrix(B))


def hermiticity_defect(M) -> float:
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        return np.inf
    return float(np.max(np.abs(A - A.conj().T), initial=0.0))


def is_hermitian(M, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_defect(M) <= tol


@njit(cache=True)
def _jacobi_eigh(a, want_vectors, tol, max_sweeps):
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=np.complex128)
    scale = 1.0
    fro = np.sqrt(np.sum(np.abs(a) ** 2))
    if fro > 1.0:
        scale = fro
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += abs(a[p, q]) ** 2
        if np.sqrt(2.0 * off) < tol * scale:
            w = np.empty(n)
            for i in range(n):
                w[i] = a[i, i].real
            return w, v, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                mag = abs(a[p, q])
                if mag == 0.0:
                    continue
                phase = a[p, q] / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                cph = np.conj(phase)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q] * cph
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k] * phase
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if want_vectors:
                    for k in range(n):
                        vkp = v[k, p]
                        vkq = v[k, q] * cph
                        v[k, p] = c * vkp - s * vkq
                        v[k, q] = s * vkp + c * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, False


@njit(cache=True)
def _hestenes_columns(a, tol, max_sweeps):
    m, n = a.shape
    a = a.copy()
    converged = False
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0j
                for k in range(m):
                    alpha += a[k, p].real ** 2 + a[k, p].imag ** 2
                    beta += a[k, q].real ** 2 + a[k, q].imag ** 2
                    gamma += np.conj(a[k, p]) * a[k, q]
                mag = abs(gamma)
                if mag == 0.0 or mag <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                phase = gamma / mag
                theta = (beta - alpha) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                cph = np.conj(phase)
                for k in range(m):
                    akp = a[k, p]
                    akq = a[k, q] * cph
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
        if not rotated:
            converged = True
            break
    norms = np.empty(n)
    for j in range(n):
        acc = 0.0
        for k in range(m):
            acc += a[k, j].real ** 2 + a[k, j].imag ** 2
        norms[j] = np.sqrt(acc)
    return norms, converged


def _check_hermitian(A: np.ndarray) -> None:
    if A.shape[0] != A.shape[1]:
        raise NonHermitian(f"matrix is not square: {A.shape}")
    defect = hermiticity_defect(A)
    if defect > HERMITIAN_TOL:
        raise NonHermitian(f"max |M - M^H| = {defect:.3g} exceeds {HERMITIAN_TOL:g}")


def hermitian_eigh(M, max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a Hermitian matrix.

    Raises
    ------
    NonHermitian
        If ``max |M - M^H| > 1e-10``.
    NonConvergence
        If the off-diagonal Frobenius norm is still above ``1e-12`` (relative
        to ``max(1, ||M||_F)``) after ``max_sweeps`` sweeps.
    """
    A = as_matrix(M)
    _check_hermitian(A)
    if A.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=np.complex128)
    w, V, ok = _jacobi_eigh(A, True, OFFDIAG_TOL, max_sweeps)
    if not ok:
        raise NonConvergence(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def hermitian_eigenvalues(M, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in ascending order."""
    A = as_matrix(M)
    _check_hermitian(A)
    if A.shape[0] == 0:
        return np.zeros(0)
    w, _, ok = _jacobi_eigh(A, False, OFFDIAG_TOL, max_sweeps)
    if not ok:
        raise NonConvergence(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")
    return np.sort(w)


def singular_values(M, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Singular values in descending order; rectangular input is fine."""
    A = as_matrix(M)
    if A.size == 0:
        return np.zeros(0)
    # orthogonalise the shorter side
    if A.shape[1] > A.shape[0]:
        A = A.conj().T
    s, ok = _hestenes_columns(np.ascontiguousarray(A), ORTHO_TOL, max_sweeps)
    if not ok:
        raise NonConvergence(f"one-sided Jacobi SVD did not converge in {max_sweeps} sweeps")
    return np.sort(s)[::-1]


def trace_norm(M) -> float:
    """Sum of singular values, ``tr sqrt(M M^H)``.

    Hermitian input takes the cheaper route ``sum |eigenvalues|``.
    """
    A = as_matrix(M)
    if A.shape[0] == A.shape[1] and is_hermitian(A):
        return float(np.sum(np.abs(hermitian_eigenvalues(A))))
    return float(np.sum(singular_values(A)))
