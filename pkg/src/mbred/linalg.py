"""Finite-dimensional complex linear algebra.

Operators are plain ``numpy`` arrays; the ``check_*`` helpers in
:mod:`mbred.validation` enforce the Hermitian / density / effect invariants.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._config import get_config
from .exceptions import NumericError, ValidationError
from .rng import as_generator
from .validation import check_dim, check_hermitian, check_ket


def eig_hermitian(H) -> tuple[np.ndarray, np.ndarray]:
    """Spectral decomposition of a Hermitian matrix.

    Parameters
    ----------
    H : array_like, shape (d, d)
        Must equal its conjugate transpose within ``herm_tol``.

    Returns
    -------
    eigenvalues : ndarray, shape (d,)
        Ascending.
    eigenvectors : ndarray, shape (d, d)
        Orthonormal eigenvectors as columns. Within a degenerate eigenspace
        the basis is whatever the solver returns.
    """
    a = check_hermitian(H)
    try:
        w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigh did not converge for {a.shape} input: {exc}") from exc
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(v))):
        raise NumericError("eigh returned non-finite values")
    return w, v


def reconstruct(eigenvalues, eigenvectors) -> np.ndarray:
    """``sum_k lambda_k |v_k><v_k|``."""
    v = np.asarray(eigenvectors)
    return (v * np.asarray(eigenvalues)) @ v.conj().T


def operator_norm(H) -> float:
    """Largest absolute eigenvalue of a Hermitian matrix."""
    w, _ = eig_hermitian(H)
    return float(np.max(np.abs(w)))


def trace_norm(H) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    w, _ = eig_hermitian(H)
    return float(np.sum(np.abs(w)))


def projector(ket) -> np.ndarray:
    """``|phi><phi|`` for the normalized ket."""
    v = check_ket(ket)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValidationError("zero vector has no projector")
    v = v / norm
    return np.outer(v, v.conj())


def random_haar_unitary(dim: int, rng_seed=None) -> np.ndarray:
    """Haar-distributed unitary from a Ginibre matrix and a phase-fixed QR."""
    dim = check_dim(dim)
    rng = as_generator(rng_seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    # QR is unique only up to the phases of diag(R); fixing them makes Q Haar.
    return q * (d / np.abs(d))


def random_isometry(rows: int, cols: int, rng_seed=None) -> np.ndarray:
    """``rows x cols`` matrix with orthonormal columns, Haar-distributed."""
    rows, cols = check_dim(rows, "rows"), check_dim(cols, "cols")
    if cols > rows:
        raise ValidationError(f"isometry needs cols <= rows, got {rows}x{cols}")
    return random_haar_unitary(rows, rng_seed)[:, :cols]


def random_hermitian(dim: int, rng_seed=None) -> np.ndarray:
    dim = check_dim(dim)
    rng = as_generator(rng_seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (g + g.conj().T)


def random_density(dim: int, rng_seed=None, rank: int | None = None) -> np.ndarray:
    """``G G* / tr(G G*)`` for a complex Ginibre ``G`` of shape ``(dim, rank)``.

    Full rank almost surely when ``rank`` is None.
    """
    dim = check_dim(dim)
    rank = dim if rank is None else check_dim(rank, "rank")
    rng = as_generator(rng_seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    w = g @ g.conj().T
    w = w / np.trace(w).real
    return 0.5 * (w + w.conj().T)


def random_effect(dim: int, rng_seed=None) -> np.ndarray:
    """``U diag(u) U*`` with ``u_k ~ Uniform[0, 1]`` and Haar ``U``."""
    dim = check_dim(dim)
    rng = as_generator(rng_seed)
    u = random_haar_unitary(dim, rng)
    a = (u * rng.uniform(0.0, 1.0, size=dim)) @ u.conj().T
    return 0.5 * (a + a.conj().T)


@dataclass(frozen=True, eq=False)
class PartialIsometry:
    """Linear map sending an orthonormal basis of a subspace K onto the
    standard basis of the target space and annihilating K-perp."""

    source_dim: int
    target_dim: int
    matrix: np.ndarray
    initial_subspace_basis: np.ndarray  # columns span K

    def __call__(self, ket) -> np.ndarray:
        return self.matrix @ np.asarray(ket, dtype=complex)

    @property
    def initial_projection(self) -> np.ndarray:
        b = self.initial_subspace_basis
        return b @ b.conj().T

    def conjugate(self, op) -> np.ndarray:
        """``V A V*``."""
        return self.matrix @ np.asarray(op, dtype=complex) @ self.matrix.conj().T


def partial_isometry(basis_K, target_dim: int) -> PartialIsometry:
    """Partial isometry ``V`` with ``V b_k = f_k`` and ``V K-perp = 0``.

    Parameters
    ----------
    basis_K : array_like, shape (k, source_dim)
        Orthonormal kets (rows) spanning the initial subspace K.
    target_dim : int
        Must equal ``k`` so that V maps K onto the whole target space.
    """
    target_dim = check_dim(target_dim, "target_dim")
    b = np.atleast_2d(np.asarray(basis_K, dtype=complex))
    if b.shape[0] != target_dim:
        raise ValidationError(
            f"need exactly target_dim={target_dim} basis kets, got {b.shape[0]}"
        )
    if b.shape[1] < target_dim:
        raise ValidationError("subspace dimension exceeds source dimension")
    gram = b.conj() @ b.T
    if np.max(np.abs(gram - np.eye(target_dim))) > get_config().unit_tol:
        raise ValidationError("basis of K is not orthonormal")
    # V = sum_k |f_k><b_k|; with f_k the standard basis this is just the conjugated rows.
    return PartialIsometry(
        source_dim=b.shape[1],
        target_dim=target_dim,
        matrix=b.conj().copy(),
        initial_subspace_basis=b.T.copy(),
    )


def hermitian_basis(dim: int) -> np.ndarray:
    """Real-orthogonal basis of the ``dim**2``-dimensional space of Hermitian matrices.

    Order: ``E_jj``; then for each ``j < k`` the pair ``E_jk + E_kj`` and
    ``i(E_jk - E_kj)``. Shape ``(dim**2, dim, dim)``.
    """
    dim = check_dim(dim)
    out = []
    for j in range(dim):
        e = np.zeros((dim, dim), dtype=complex)
        e[j, j] = 1.0
        out.append(e)
    for j in range(dim):
        for k in range(j + 1, dim):
            s = np.zeros((dim, dim), dtype=complex)
            s[j, k] = s[k, j] = 1.0
            a = np.zeros((dim, dim), dtype=complex)
            a[j, k], a[k, j] = 1j, -1j
            out.extend((s, a))
    return np.stack(out)


def projector_features(kets) -> np.ndarray:
    """Coordinates ``tr(P_phi B_b)`` of each (normalized) ket's projector.

    ``tr(P_phi A) = features @ c`` whenever ``A = sum_b c_b B_b`` in
    :func:`hermitian_basis` order, so ``f_A`` is linear in these features.
    """
    k = np.asarray(kets, dtype=complex)
    k = k / np.linalg.norm(k, axis=1, keepdims=True)
    dim = k.shape[1]
    cols = [np.abs(k) ** 2]
    iu, ju = np.triu_indices(dim, 1)
    cross = k[:, iu].conj() * k[:, ju]  # conj(phi_j) phi_k, j < k
    inter = np.empty((k.shape[0], 2 * iu.size))
    inter[:, 0::2] = 2.0 * cross.real
    inter[:, 1::2] = -2.0 * cross.imag
    cols.append(inter)
    return np.hstack(cols)


def hermitian_from_coefficients(coef, dim: int) -> np.ndarray:
    """Inverse of the coordinate map: ``sum_b coef_b B_b``."""
    return np.tensordot(np.asarray(coef, dtype=float), hermitian_basis(dim), axes=1)
