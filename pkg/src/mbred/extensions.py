"""Classical extensions on finite sample spaces.

A :class:`ClassicalExtension` assigns each sample point ``omega`` the state
``R(delta_omega)``. Its reduction map is then ``mu -> sum mu(omega) R(delta_omega)``
and, restricted to the points whose state is pure, it factors through the
Misra-Bugajski map as ``R(mu) = reduce(mu o i^{-1})``.

The three ``example*`` constructors are finite-dimensional versions of the
standard partial-isometry extensions; see each constructor's
``adaptation_note`` for what had to change at finite dimension.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from ._config import get_config
from .exceptions import ValidationError
from .linalg import partial_isometry, trace_norm
from .mbmap import purity, reduce, to_pure_point
from .measures import DiscreteMeasure, pushforward
from .projective import PurePoint
from .validation import check_density, check_dim, check_unitary


@dataclass(frozen=True, eq=False)
class ClassicalExtension:
    """Finite sample space with an assigned quantum state per point.

    Attributes
    ----------
    sample_points : tuple of str
        Labels of the sample points ``omega``.
    assigned_states : mapping label -> ndarray
        ``R(delta_omega)`` for each label.
    target_dim : int
    sources : mapping label -> PurePoint, optional
        For extensions built over pure states, the point each label stands for.
    adaptation_note : str
    """

    sample_points: tuple
    assigned_states: Mapping
    target_dim: int
    sources: Mapping = field(default_factory=dict)
    adaptation_note: str = ""

    def __post_init__(self):
        check_dim(self.target_dim, "target_dim")
        if len(set(self.sample_points)) != len(self.sample_points):
            raise ValidationError("sample-point labels must be distinct")
        if set(self.sample_points) != set(self.assigned_states):
            raise ValidationError("every label needs exactly one assigned state")
        for lab in self.sample_points:
            W = check_density(self.assigned_states[lab], f"state of {lab!r}")
            if W.shape[0] != self.target_dim:
                raise ValidationError(f"state of {lab!r} has dim {W.shape[0]}, expected {self.target_dim}")

    def state(self, label) -> np.ndarray:
        try:
            return self.assigned_states[label]
        except KeyError:
            raise ValidationError(f"unknown sample point {label!r}") from None


def reduce_extension(ext: ClassicalExtension, mu: DiscreteMeasure) -> np.ndarray:
    """``sum_omega mu(omega) R(delta_omega)``."""
    W = sum(w * ext.state(lab) for lab, w in mu)
    return 0.5 * (W + W.conj().T)


def extract_omega_tilde(ext: ClassicalExtension) -> tuple:
    """Labels whose assigned state is pure within ``purity_tol``, in label order."""
    thresh = 1.0 - get_config().purity_tol
    return tuple(lab for lab in ext.sample_points if purity(ext.assigned_states[lab]) >= thresh)


def index_map(ext: ClassicalExtension) -> dict:
    """``i(omega) = R(delta_omega)`` as a point, defined exactly on the pure part."""
    return {lab: to_pure_point(ext.assigned_states[lab]) for lab in extract_omega_tilde(ext)}


def verify_representation(
    ext: ClassicalExtension, mu: DiscreteMeasure, i: Mapping | None = None
) -> tuple[float, bool]:
    """Trace distance between ``R(mu)`` and ``reduce(mu o i^{-1})``.

    Returns ``(delta, delta <= recon_tol)``. ``mu`` must be supported on the
    pure part of the sample space.
    """
    if i is None:
        i = index_map(ext)
    escaped = [lab for lab in mu.points if lab not in i]
    if escaped:
        raise ValidationError(f"support leaves the pure part: {escaped[:5]!r}")
    delta = trace_norm(reduce_extension(ext, mu) - reduce(pushforward(mu, i)))
    return delta, delta <= get_config().recon_tol


def pure_fiber_weight(ext: ClassicalExtension, mu: DiscreteMeasure, P: PurePoint) -> float:
    """``mu``-weight of the labels whose state ``W`` has ``tr(W P) >= 1 - point_eq_tol``."""
    thresh = 1.0 - get_config().point_eq_tol
    proj = P.projector
    return float(
        sum(w for lab, w in mu if np.real(np.vdot(proj, ext.state(lab))) >= thresh)
    )


def _labels(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{k}" for k in range(n)]


def identity_extension(probe_points: Sequence[PurePoint]) -> ClassicalExtension:
    """Sample space = the probe points themselves, ``R(delta_P) = P``."""
    return example1(np.eye(probe_points[0].dim), probe_points)


def example1(U, probe_points: Sequence[PurePoint]) -> ClassicalExtension:
    """Unitary relabelling: ``R(delta_P) = U P U*`` on a finite probe set."""
    U = check_unitary(U)
    if not probe_points:
        raise ValidationError("probe set is empty")
    labels = _labels("p", len(probe_points))
    states = {lab: U @ P.projector @ U.conj().T for lab, P in zip(labels, probe_points)}
    return ClassicalExtension(
        sample_points=tuple(labels),
        assigned_states=states,
        target_dim=U.shape[0],
        sources=dict(zip(labels, probe_points)),
        adaptation_note=(
            "finite dimension: K = H and V = U unitary; the sample space is a "
            "finite probe set rather than all of P(H)"
        ),
    )


def example2(U, probe_points: Sequence[PurePoint]) -> ClassicalExtension:
    """Two labelled copies of the probe set: copy ``a`` assigns ``P``,
    copy ``b`` assigns ``U P U*``.

    ``("a", P)`` and ``("b", U* P U)`` then carry the same state, so ``i`` is
    two-to-one wherever the probe set is closed under ``P -> U* P U``.
    """
    U = check_unitary(U)
    if not probe_points:
        raise ValidationError("probe set is empty")
    la, lb = _labels("a", len(probe_points)), _labels("b", len(probe_points))
    states = {lab: P.projector.copy() for lab, P in zip(la, probe_points)}
    states.update({lab: U @ P.projector @ U.conj().T for lab, P in zip(lb, probe_points)})
    return ClassicalExtension(
        sample_points=tuple(la + lb),
        assigned_states=states,
        target_dim=U.shape[0],
        sources={**dict(zip(la, probe_points)), **dict(zip(lb, probe_points))},
        adaptation_note=(
            "finite dimension has no proper subspace K with VK = H; the partially "
            "two-to-one structure is reproduced by two disjoint copies of the probe "
            "set, the second relabelled by U"
        ),
    )


def example3_isometries(source_dim: int):
    """``(V1, V2)`` with ``V1 e_k = f_k`` and ``V2 e_{m+k} = f_k``, ``m = source_dim / 2``."""
    source_dim = check_dim(source_dim, "source_dim")
    if source_dim % 2:
        raise ValidationError(f"source_dim must be even, got {source_dim}")
    m = source_dim // 2
    eye = np.eye(source_dim)
    return partial_isometry(eye[:m], m), partial_isometry(eye[m:], m)


def example3(source_dim: int, probe_points: Sequence[PurePoint]) -> ClassicalExtension:
    """``R(delta_P) = V1 P V1* + V2 P V2*`` with target dimension ``source_dim / 2``.

    Generally mixed; pure exactly when ``V1 phi`` and ``V2 phi`` are parallel
    (including when one of them vanishes).
    """
    V1, V2 = example3_isometries(source_dim)
    if not probe_points:
        raise ValidationError("probe set is empty")
    if any(P.dim != source_dim for P in probe_points):
        raise ValidationError(f"probe points must have dim {source_dim}")
    labels = _labels("p", len(probe_points))
    states = {
        lab: V1.conjugate(P.projector) + V2.conjugate(P.projector)
        for lab, P in zip(labels, probe_points)
    }
    return ClassicalExtension(
        sample_points=tuple(labels),
        assigned_states=states,
        target_dim=V1.target_dim,
        sources=dict(zip(labels, probe_points)),
        adaptation_note=(
            "finite dimension: K = span(e_1..e_m), K-perp = span(e_m+1..e_2m) and "
            "V1, V2 map onto a target space of half the source dimension"
        ),
    )


def example3_pure_kets(m: int, count: int, rng) -> np.ndarray:
    """Random source kets ``(a chi, b chi)`` whose ``example3`` image is pure."""
    chi = rng.standard_normal((count, m)) + 1j * rng.standard_normal((count, m))
    chi /= np.linalg.norm(chi, axis=1, keepdims=True)
    ab = rng.standard_normal((count, 2)) + 1j * rng.standard_normal((count, 2))
    ab /= np.linalg.norm(ab, axis=1, keepdims=True)
    return np.hstack([ab[:, :1] * chi, ab[:, 1:] * chi])
