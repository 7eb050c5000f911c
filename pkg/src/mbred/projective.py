"""Pure states as points of the projective Hilbert space.

Points are compared through their transition probability, never through the
representative ket, whose global phase is arbitrary.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ._config import get_config
from .exceptions import ValidationError
from .rng import as_generator
from .validation import check_dim, check_ket


class PurePoint:
    """A ray ``[phi]``, stored as a unit representative and its projector.

    Equality is gauge invariant: ``P == Q`` iff ``tr(PQ) >= 1 - point_eq_tol``.
    Because that relation is tolerance based, points are unhashable.
    """

    __slots__ = ("_ket", "_projector")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, ket):
        v = check_ket(ket)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise ValidationError("zero vector does not define a pure state")
        v = v / norm
        v.setflags(write=False)
        self._ket = v
        self._projector = None

    @property
    def dim(self) -> int:
        return self._ket.shape[0]

    @property
    def ket(self) -> np.ndarray:
        return self._ket

    @property
    def projector(self) -> np.ndarray:
        if self._projector is None:
            p = np.outer(self._ket, self._ket.conj())
            p.setflags(write=False)
            self._projector = p
        return self._projector

    def overlap(self, other: PurePoint) -> float:
        return transition_probability(self, other)

    def __eq__(self, other):
        if not isinstance(other, PurePoint):
            return NotImplemented
        if other.dim != self.dim:
            return False
        return self.overlap(other) >= 1.0 - get_config().point_eq_tol

    def __repr__(self):
        amps = np.array2string(self._ket, precision=4, separator=", ")
        return f"PurePoint({amps})"


def pure_from_ket(ket) -> PurePoint:
    """The point ``P_phi`` for any non-zero ket (scale and phase are dropped)."""
    return PurePoint(ket)


def basis_point(dim: int, index: int) -> PurePoint:
    """Point of the ``index``-th standard basis vector (0-based)."""
    e = np.zeros(check_dim(dim), dtype=complex)
    e[index] = 1.0
    return PurePoint(e)


def _same_dim(P: PurePoint, Q: PurePoint) -> None:
    if P.dim != Q.dim:
        raise ValidationError(f"dimension mismatch: {P.dim} vs {Q.dim}")


def transition_probability(P: PurePoint, Q: PurePoint) -> float:
    """``tr(PQ) = |<phi, psi>|^2``, clipped to [0, 1]."""
    _same_dim(P, Q)
    t = abs(np.vdot(P.ket, Q.ket)) ** 2
    return float(min(1.0, max(0.0, t)))


def dist_opnorm(P: PurePoint, Q: PurePoint) -> float:
    """Operator-norm distance ``||P - Q|| = sqrt(1 - tr(PQ))``.

    Evaluated as the length of the component of one ket orthogonal to the
    other, ``||(I - P) psi||``, which keeps full precision when ``P`` and
    ``Q`` nearly coincide (``sqrt(1 - t)`` loses half the digits there).
    Averaged over both orders so the result is exactly symmetric.
    """
    _same_dim(P, Q)
    phi, psi = P.ket, Q.ket
    d_pq = np.linalg.norm(psi - np.vdot(phi, psi) * phi)
    d_qp = np.linalg.norm(phi - np.vdot(psi, phi) * psi)
    return float(min(1.0, 0.5 * (d_pq + d_qp)))


def dist_trace(P: PurePoint, Q: PurePoint) -> float:
    """Trace-norm distance, twice the operator-norm distance."""
    return 2.0 * dist_opnorm(P, Q)


def sample_haar_kets(dim: int, count: int, rng_seed=None) -> np.ndarray:
    """Unit kets as rows, uniformly distributed on the sphere."""
    dim = check_dim(dim)
    if count < 0:
        raise ValidationError(f"count must be >= 0, got {count}")
    rng = as_generator(rng_seed)
    z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def sample_haar_pure(dim: int, count: int, rng_seed=None) -> list[PurePoint]:
    """``count`` unitarily invariant random points of ``P(C^dim)``."""
    return [PurePoint(k) for k in sample_haar_kets(dim, count, rng_seed)]


def in_weak_neighborhood(
    P_tilde: PurePoint, center: PurePoint, probes: Sequence[PurePoint], eps: float
) -> bool:
    """Membership in the weak neighborhood ``U(center; probes; eps)``.

    True iff ``|tr(P_tilde Q_i) - tr(center Q_i)| < eps`` for every probe.
    """
    if len(probes) == 0:
        raise ValidationError("at least one probe point is required")
    if not eps > 0:
        raise ValidationError(f"eps must be positive, got {eps!r}")
    _same_dim(P_tilde, center)
    return all(
        bool(abs(transition_probability(P_tilde, Q) - transition_probability(center, Q)) < eps)
        for Q in probes
    )
