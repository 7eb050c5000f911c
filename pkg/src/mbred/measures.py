"""Finitely supported probability measures."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping

import numpy as np

from ._config import get_config
from .exceptions import ValidationError
from .validation import check_probability


class DiscreteMeasure:
    """Probability measure with finite support.

    Support points are pure states (:class:`~mbred.projective.PurePoint`,
    merged under their gauge-invariant equality) or opaque ``str``/``int``
    labels (merged under exact equality). The constructor always produces
    the canonical form: duplicates merged, weights below ``weight_floor``
    dropped, remaining weights renormalized.
    """

    __slots__ = ("_points", "_weights")

    def __init__(self, points: Iterable, weights: Iterable[float]):
        points = list(points)
        w = np.asarray(list(weights), dtype=float)
        if w.ndim != 1 or len(points) != w.shape[0]:
            raise ValidationError("points and weights must have equal length")
        cfg = get_config()
        if np.any(~np.isfinite(w)) or np.any(w < -cfg.weight_tol):
            raise ValidationError("weights must be finite and non-negative")
        total = w.sum()
        if abs(total - 1.0) > cfg.weight_tol:
            raise ValidationError(f"weights sum to {total!r}, not 1")
        merged_pts, merged_w = _merge(points, np.clip(w, 0.0, None))
        keep = merged_w >= cfg.weight_floor
        if not np.any(keep):
            raise ValidationError("measure has empty support")
        merged_w = merged_w[keep]
        self._points = tuple(p for p, k in zip(merged_pts, keep) if k)
        self._weights = merged_w / merged_w.sum()
        self._weights.setflags(write=False)

    @property
    def points(self) -> tuple:
        return self._points

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self):
        return iter(zip(self._points, self._weights.tolist()))

    def weight_of(self, point) -> float:
        return float(sum(w for p, w in self if p == point))

    def __repr__(self):
        body = ", ".join(f"{w:.4g}*d[{p!r}]" for p, w in self)
        return f"DiscreteMeasure({body})"


def _merge(points: list, weights: np.ndarray) -> tuple[list, np.ndarray]:
    if len(points) > 8 and _all_pure_same_dim(points):
        return _merge_pure(points, weights)
    out_pts: list = []
    out_w: list[float] = []
    for p, w in zip(points, weights):
        for j, q in enumerate(out_pts):
            if type(q) is type(p) and q == p:
                out_w[j] += w
                break
        else:
            out_pts.append(p)
            out_w.append(float(w))
    return out_pts, np.asarray(out_w, dtype=float)


def _all_pure_same_dim(points: list) -> bool:
    from .projective import PurePoint

    return all(isinstance(p, PurePoint) for p in points) and len({p.dim for p in points}) == 1


def _merge_pure(points: list, weights: np.ndarray) -> tuple[list, np.ndarray]:
    kets = np.stack([p.ket for p in points])
    same = np.abs(kets.conj() @ kets.T) ** 2 >= 1.0 - get_config().point_eq_tol
    owner = np.full(len(points), -1)
    out_pts: list = []
    out_w: list[float] = []
    for k in range(len(points)):
        if owner[k] >= 0:
            out_w[owner[k]] += weights[k]
            continue
        # first-come representative absorbs every later point equal to it
        members = np.flatnonzero(same[k] & (owner < 0))
        owner[members] = len(out_pts)
        out_pts.append(points[k])
        out_w.append(float(weights[k]))
    return out_pts, np.asarray(out_w, dtype=float)


def dirac(point) -> DiscreteMeasure:
    return DiscreteMeasure([point], [1.0])


def uniform(points: Iterable) -> DiscreteMeasure:
    points = list(points)
    if not points:
        raise ValidationError("uniform measure needs at least one point")
    return DiscreteMeasure(points, np.full(len(points), 1.0 / len(points)))


def mix(alpha: float, mu: DiscreteMeasure, nu: DiscreteMeasure) -> DiscreteMeasure:
    """Convex combination ``alpha * mu + (1 - alpha) * nu``."""
    alpha = check_probability(alpha)
    return DiscreteMeasure(
        mu.points + nu.points,
        np.concatenate([alpha * mu.weights, (1.0 - alpha) * nu.weights]),
    )


def expectation(mu: DiscreteMeasure, f: Callable) -> float:
    """``sum_i w_i f(x_i)``.

    ``f`` is any callable on support points; a tabulated function that lacks
    a support point is expected to raise ``KeyError``.
    """
    total = 0.0
    for p, w in mu:
        total += w * float(f(p))
    return total


def tv_distance(mu: DiscreteMeasure, nu: DiscreteMeasure) -> float:
    """Half the total-variation norm of ``mu - nu``; lies in [0, 1]."""
    pts, _ = _merge(list(mu.points) + list(nu.points), np.zeros(len(mu) + len(nu)))
    diff = np.zeros(len(pts))
    for sign, m in ((1.0, mu), (-1.0, nu)):
        for p, w in m:
            for j, q in enumerate(pts):
                if type(q) is type(p) and q == p:
                    diff[j] += sign * w
                    break
    return float(min(1.0, 0.5 * np.abs(diff).sum()))


def pushforward(mu: DiscreteMeasure, i: Mapping | Callable) -> DiscreteMeasure:
    """Image measure ``mu o i^{-1}``; weights of points with equal images add up."""
    lookup = i.__getitem__ if isinstance(i, Mapping) else i
    images = []
    for p in mu.points:
        try:
            images.append(lookup(p))
        except KeyError as exc:
            raise ValidationError(f"map undefined at support point {p!r}") from exc
    return DiscreteMeasure(images, mu.weights)
