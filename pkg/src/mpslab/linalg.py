"""Dense complex linear algebra with pinned conventions.

Matrices are plain 2-D ``numpy`` arrays of ``complex128``; every routine
here upcasts its input to that dtype. Flattened multi-index tensors use a
single convention throughout the package: big-endian site order, i.e. the
first site is the most significant digit of the flat index (C-order
``reshape``).
"""

from typing import NamedTuple

import numpy as np

from .errors import InvalidInput, NumericalFailure

HERMITICITY_TOL = 1e-12


class SvdResult(NamedTuple):
    """Thin SVD ``m = u @ diag(s) @ vdag`` with ``s`` descending."""

    u: np.ndarray
    s: np.ndarray
    vdag: np.ndarray


def _as_cmatrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.size == 0:
        raise InvalidInput(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise InvalidInput("matrix contains non-finite entries")
    return m


def svd(m) -> SvdResult:
    """Thin singular value decomposition.

    Parameters
    ----------
    m : array_like
        Non-empty matrix with finite entries.

    Returns
    -------
    SvdResult
        ``u`` (rows x r) with orthonormal columns, ``s`` descending
        non-negative reals of length r = min(rows, cols), ``vdag``
        (r x cols) with orthonormal rows.
    """
    m = _as_cmatrix(m)
    try:
        u, s, vdag = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    return SvdResult(u, s, vdag)


def eigh(m) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition, eigenvalues descending.

    The input must be Hermitian to within ``HERMITICITY_TOL`` entrywise.
    Returns ``(w, v)`` with ``m @ v[:, k] = w[k] * v[:, k]`` and
    orthonormal eigenvector columns.
    """
    m = _as_cmatrix(m)
    if m.shape[0] != m.shape[1]:
        raise InvalidInput(f"eigh needs a square matrix, got {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
        raise InvalidInput("matrix is not Hermitian within tolerance")
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigh did not converge: {exc}") from exc
    return w[::-1].copy(), v[:, ::-1].copy()


def reshape_to_matrix(amplitudes, left_dim: int, right_dim: int) -> np.ndarray:
    """Reshape a flat amplitude vector into a left_dim x right_dim matrix.

    Entry (i, j) is the amplitude at flat index ``i * right_dim + j``,
    which under the big-endian convention groups the leading sites into
    the row index.
    """
    amplitudes = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if left_dim < 1 or right_dim < 1:
        raise InvalidInput("matrix dimensions must be positive")
    if amplitudes.size != left_dim * right_dim:
        raise InvalidInput(
            f"amplitude count {amplitudes.size} != {left_dim} * {right_dim}"
        )
    return amplitudes.reshape(left_dim, right_dim)
