"""The Misra-Bugajski reduction map and its adjoint.

``reduce`` sends a probability measure on pure states to its barycenter
density operator; ``adjoint_effect`` sends an effect ``A`` to the function
``f_A(P) = tr(PA)`` on pure states. Together they satisfy
``tr(reduce(mu) A) = expectation(mu, f_A)``.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence

import numpy as np

from ._config import get_config
from .exceptions import ValidationError
from .linalg import eig_hermitian
from .measures import DiscreteMeasure
from .projective import PurePoint
from .validation import check_density, check_effect, check_hermitian, check_isometry


class ClassicalEffect:
    """A function on pure states with values in [0, 1]."""

    def __call__(self, point: PurePoint) -> float:
        raise NotImplementedError

    def values(self, points: Sequence[PurePoint]) -> np.ndarray:
        return np.array([self(p) for p in points], dtype=float)


class FromEffect(ClassicalEffect):
    """``P -> tr(PA)`` for an effect ``A``."""

    def __init__(self, A):
        self.operator = check_effect(A)

    @property
    def dim(self) -> int:
        return self.operator.shape[0]

    def __call__(self, point: PurePoint) -> float:
        if point.dim != self.dim:
            raise ValidationError(f"point of dim {point.dim} for a dim-{self.dim} effect")
        v = point.ket
        return float(np.real(np.vdot(v, self.operator @ v)))

    def values(self, points: Sequence[PurePoint]) -> np.ndarray:
        if len(points) == 0:
            return np.empty(0)
        kets = np.stack([p.ket for p in points])
        return np.real(np.einsum("ni,ij,nj->n", kets.conj(), self.operator, kets))


class Tabulated(ClassicalEffect):
    """Values given explicitly on a finite set of points.

    Evaluating at a point not in the table raises ``KeyError``.
    """

    def __init__(self, points: Sequence[PurePoint], values: Sequence[float]):
        values = np.asarray(values, dtype=float)
        if len(points) != values.shape[0]:
            raise ValidationError("points and values must have equal length")
        if np.any((values < 0) | (values > 1)):
            raise ValidationError("classical effect values must lie in [0, 1]")
        self.points = list(points)
        self._values = values

    def __call__(self, point: PurePoint) -> float:
        for p, v in zip(self.points, self._values):
            if p == point:
                return float(v)
        raise KeyError(f"{point!r} is not tabulated")


class Indicator(ClassicalEffect):
    """Characteristic function of ``{P : predicate(P)}``."""

    def __init__(self, predicate: Callable[[PurePoint], bool]):
        self.predicate = predicate

    def __call__(self, point: PurePoint) -> float:
        return 1.0 if self.predicate(point) else 0.0


def _support_dim(mu: DiscreteMeasure) -> int:
    if len(mu) == 0:
        raise ValidationError("empty support")
    if not all(isinstance(p, PurePoint) for p in mu.points):
        raise ValidationError("reduce needs a measure on pure states")
    dims = {p.dim for p in mu.points}
    if len(dims) != 1:
        raise ValidationError(f"support points have mixed dimensions {sorted(dims)}")
    return dims.pop()


def reduce(mu: DiscreteMeasure) -> np.ndarray:
    """Barycenter ``sum_i w_i P_i`` of a measure on pure states."""
    _support_dim(mu)
    kets = np.stack([p.ket for p in mu.points])
    W = (kets.T * mu.weights) @ kets.conj()
    return 0.5 * (W + W.conj().T)


def adjoint_effect(A) -> FromEffect:
    """The classical effect ``f_A``; raises for non-effects."""
    return FromEffect(A)


def purity(W) -> float:
    """``tr(W^2)``."""
    W = check_hermitian(W)
    return float(np.real(np.vdot(W, W)))


def to_pure_point(W) -> PurePoint:
    """Top eigenvector of ``W`` as a point, provided ``W`` is pure within ``purity_tol``."""
    W = check_density(W)
    p = purity(W)
    if p < 1.0 - get_config().purity_tol:
        raise ValidationError(f"state is mixed (purity {p:.12f})")
    _, v = eig_hermitian(W)
    return PurePoint(v[:, -1])


def eigen_ensemble(W) -> DiscreteMeasure:
    """Spectral ensemble: eigenprojections weighted by their eigenvalues.

    Eigenvalues not above ``weight_floor`` are dropped.
    """
    W = check_density(W)
    lam, v = eig_hermitian(W)
    keep = lam > get_config().weight_floor
    return DiscreteMeasure([PurePoint(v[:, k]) for k in np.flatnonzero(keep)], lam[keep])


def alternative_ensemble(W, M) -> DiscreteMeasure:
    """Ensemble for ``W`` obtained by mixing its eigen-ensemble with an isometry.

    With eigenpairs ``(p_i, v_i)`` (``i < r``, ``r`` the rank) and an
    ``m x r`` matrix ``M`` with orthonormal columns, the ensemble has kets
    ``psi_j = sum_i M[j, i] sqrt(p_i) v_i`` with weights ``||psi_j||^2``.
    Components whose weight falls below ``weight_floor`` are dropped.
    """
    W = check_density(W)
    M = check_isometry(M, "mixer")
    lam, v = eig_hermitian(W)
    keep = lam > get_config().weight_floor
    lam, v = lam[keep], v[:, keep]
    if M.shape[1] != lam.shape[0]:
        raise ValidationError(f"mixer has {M.shape[1]} columns but rank of W is {lam.shape[0]}")
    psi = (M * np.sqrt(lam)) @ v.T  # row j is psi_j
    q = np.sum(np.abs(psi) ** 2, axis=1)
    nz = q >= get_config().weight_floor
    return DiscreteMeasure([PurePoint(row) for row in psi[nz]], q[nz] / q[nz].sum())


def support_concentration(mu: DiscreteMeasure, P: PurePoint) -> float:
    """Weight of the support points ``Q`` with ``tr(QP) >= 1 - point_eq_tol``."""
    thresh = 1.0 - get_config().point_eq_tol
    return float(
        sum(w for Q, w in mu if isinstance(Q, PurePoint) and Q.dim == P.dim and Q.overlap(P) >= thresh)
    )


def ensemble_from_kets(kets, weights=None) -> DiscreteMeasure:
    """Measure on the rays of the given kets (rows); uniform if no weights."""
    kets = np.atleast_2d(np.asarray(kets, dtype=complex))
    if weights is None:
        weights = np.full(kets.shape[0], 1.0 / kets.shape[0])
    return DiscreteMeasure([PurePoint(k) for k in kets], weights)
