"""Input validation helpers.

Each ``check_*`` function returns a cleaned complex ``ndarray`` or raises
:class:`~mbred.exceptions.ValidationError`. Checks run *before* any
symmetrization so genuine invariant violations are never masked.
"""

from __future__ import annotations

import numbers

import numpy as np

from ._config import get_config
from .exceptions import NumericError, ValidationError


def check_dim(dim, name: str = "dim") -> int:
    if isinstance(dim, bool) or not isinstance(dim, numbers.Integral) or dim < 1:
        raise ValidationError(f"{name} must be a positive integer, got {dim!r}")
    return int(dim)


def check_square(matrix, name: str = "matrix") -> np.ndarray:
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValidationError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} contains non-finite entries")
    return a


def check_ket(ket, *, normalized: bool = False, name: str = "ket") -> np.ndarray:
    """Validate a state vector; with ``normalized`` its norm must be 1 within ``unit_tol``."""
    v = np.asarray(ket, dtype=complex)
    if v.ndim != 1 or v.shape[0] == 0:
        raise ValidationError(f"{name} must be a non-empty 1-d array, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValidationError(f"{name} contains non-finite entries")
    if normalized:
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > get_config().unit_tol:
            raise ValidationError(f"{name} is not a unit vector (norm {norm!r})")
    return v


def check_kets(X, dim: int | None = None) -> np.ndarray:
    """Validate a batch of kets laid out as rows, shape ``(n_samples, dim)``.

    Unlike :func:`sklearn.utils.check_array` this accepts complex input.
    Rows must be non-zero; they are not normalized here.
    """
    a = np.asarray(X, dtype=complex)
    if a.ndim == 1:
        raise ValidationError(
            "expected a 2-d array of kets (one per row); reshape a single ket with ket[None, :]"
        )
    if a.ndim != 2 or a.shape[1] == 0:
        raise ValidationError(f"expected shape (n_samples, dim), got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("kets contain non-finite entries")
    if dim is not None and a.shape[1] != dim:
        raise ValidationError(f"kets have dimension {a.shape[1]}, expected {dim}")
    if a.shape[0] and np.any(np.linalg.norm(a, axis=1) == 0):
        raise ValidationError("zero vector does not define a ray")
    return a


def check_hermitian(matrix, name: str = "operator") -> np.ndarray:
    a = check_square(matrix, name)
    dev = np.max(np.abs(a - a.conj().T))
    if dev > get_config().herm_tol:
        raise ValidationError(f"{name} is not Hermitian (max |H - H*| = {dev:.3e})")
    return a


def _eigvalsh(a: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.eigvalsh(0.5 * (a + a.conj().T))
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"Hermitian eigensolver failed: {exc}") from exc


def check_density(matrix, name: str = "density operator") -> np.ndarray:
    """Positive semidefinite (down to ``-psd_tol``) with unit trace (``trace_tol``)."""
    a = check_hermitian(matrix, name)
    cfg = get_config()
    lam_min = _eigvalsh(a)[0]
    if lam_min < -cfg.psd_tol:
        raise ValidationError(f"{name} is not positive (min eigenvalue {lam_min:.3e})")
    tr = np.trace(a).real
    if abs(tr - 1.0) > cfg.trace_tol:
        raise ValidationError(f"{name} does not have unit trace (trace {tr!r})")
    return a


def check_effect(matrix, name: str = "effect") -> np.ndarray:
    """Eigenvalues in ``[-psd_tol, 1 + psd_tol]``."""
    a = check_hermitian(matrix, name)
    tol = get_config().psd_tol
    lam = _eigvalsh(a)
    if lam[0] < -tol or lam[-1] > 1.0 + tol:
        raise ValidationError(
            f"{name} is not between 0 and I (eigenvalues in [{lam[0]:.3e}, {lam[-1]:.3e}])"
        )
    return a


def check_unitary(matrix, name: str = "unitary") -> np.ndarray:
    u = check_square(matrix, name)
    dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if dev > get_config().recon_tol:
        raise ValidationError(f"{name} is not unitary (max |U*U - I| = {dev:.3e})")
    return u


def check_isometry(matrix, name: str = "isometry") -> np.ndarray:
    """Columns orthonormal: ``M* M = I`` within ``recon_tol``."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[1] == 0:
        raise ValidationError(f"{name} must be a 2-d array with at least one column")
    if m.shape[0] < m.shape[1]:
        raise ValidationError(f"{name} has more columns ({m.shape[1]}) than rows ({m.shape[0]})")
    dev = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[1])))
    if dev > get_config().recon_tol:
        raise ValidationError(f"{name} columns are not orthonormal (max deviation {dev:.3e})")
    return m


def check_probability(alpha, name: str = "alpha") -> float:
    a = float(alpha)
    if not 0.0 <= a <= 1.0:
        raise ValidationError(f"{name} must lie in [0, 1], got {alpha!r}")
    return a
