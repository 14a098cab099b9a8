"""Hand-rolled Hermitian eigensolver (cyclic Jacobi with complex rotations).

The solver repeatedly zeroes the largest remaining off-diagonal entries by
two-sided unitary plane rotations.  For a Hermitian pivot pair ``(p, q)``
the off-diagonal phase is factored out first, reducing each 2x2 problem to
the classical real symmetric Jacobi rotation.  Convergence is quadratic;
the matrices handled here are small (a handful of generators), so a fixed
sweep cap is generous.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from .errors import NotHermitian

__all__ = ["hermitian_eig"]

#: Hermitian symmetry tolerance relative to the Frobenius norm.
HERMITIAN_TOL = 1e-10
#: Off-diagonal mass (relative to the Frobenius norm) considered converged.
SWEEP_TOL = 1e-15
MAX_SWEEPS = 64
#: Smallest eigenvector component eligible for deterministic phase fixing.
PHASE_FLOOR = 1e-12


def _offdiag_norm(a: NDArray[np.complex128]) -> float:
    mask = ~np.eye(a.shape[0], dtype=bool)
    return float(np.sqrt(np.sum(np.abs(a[mask]) ** 2)))


def hermitian_eig(
    G: NDArray[np.complex128],
) -> tuple[NDArray[np.float64], NDArray[np.complex128]]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(values, vectors)`` with eigenvalues sorted descending and
    eigenvectors as the corresponding columns of a unitary matrix.  Ties
    keep their pre-sort (index) order; each eigenvector's first component
    of magnitude above ``PHASE_FLOOR`` is rotated to the positive real
    axis so repeated runs agree exactly.

    Raises :class:`NotHermitian` when ``‖G - G*‖ > 1e-10 ‖G‖``.
    """
    a = np.asarray(G, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    m = a.shape[0]
    norm = float(np.linalg.norm(a))
    if float(np.linalg.norm(a - a.conj().T)) > HERMITIAN_TOL * max(norm, 1e-300):
        raise NotHermitian("matrix is not Hermitian within tolerance")

    a = 0.5 * (a + a.conj().T)  # symmetrize the representable rounding
    vectors = np.eye(m, dtype=np.complex128)
    if m > 1 and norm > 0.0:
        for _ in range(MAX_SWEEPS):
            if _offdiag_norm(a) <= SWEEP_TOL * norm:
                break
            rotated = False
            for p in range(m - 1):
                for q in range(p + 1, m):
                    apq = a[p, q]
                    if abs(apq) <= SWEEP_TOL * norm:
                        continue
                    rotated = True
                    # Factor out the phase, then rotate the real 2x2 block.
                    u = apq / abs(apq)
                    tau = (a[q, q].real - a[p, p].real) / (2.0 * abs(apq))
                    t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0 else 1.0
                    c = 1.0 / np.hypot(1.0, t)
                    s = t * c
                    # Column update: A <- A V, with V the plane rotation
                    # carrying the phase on the q-column.
                    col_p = a[:, p].copy()
                    col_q = a[:, q].copy()
                    a[:, p] = c * col_p - s * np.conj(u) * col_q
                    a[:, q] = s * u * col_p + c * col_q
                    row_p = a[p, :].copy()
                    row_q = a[q, :].copy()
                    a[p, :] = c * row_p - s * u * row_q
                    a[q, :] = s * np.conj(u) * row_p + c * row_q
                    vp = vectors[:, p].copy()
                    vq = vectors[:, q].copy()
                    vectors[:, p] = c * vp - s * np.conj(u) * vq
                    vectors[:, q] = s * u * vp + c * vq
            if not rotated:
                # Every remaining entry sits below the rotation threshold;
                # the aggregate is then O(m) * SWEEP_TOL * norm and further
                # sweeps cannot improve it.
                break
        else:
            raise ArithmeticError("Jacobi sweep cap exceeded without converging")

    values = np.real(np.diag(a)).copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]

    for i in range(m):
        col = vectors[:, i]
        significant = np.abs(col) > PHASE_FLOOR
        if np.any(significant):
            lead = col[np.argmax(significant)]
            vectors[:, i] = col * (np.conj(lead) / abs(lead))
    return values, vectors
