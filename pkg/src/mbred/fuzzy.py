"""POVMs and their classical images, Markov kernels on pure states.

Outcome indices are 0-based throughout.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence

import numpy as np

from ._config import get_config
from .exceptions import ValidationError
from .linalg import eig_hermitian, projector_features
from .measures import DiscreteMeasure
from .projective import PurePoint
from .rng import as_generator, mix_seed_array, unit_uniforms
from .validation import check_density, check_dim, check_effect

_CHUNK = 1 << 18


class Povm:
    """Finite-outcome POVM: effects ``F[0..n-1]`` summing to the identity."""

    def __init__(self, effects):
        arr = np.asarray(effects, dtype=complex)
        if arr.ndim != 3 or arr.shape[0] == 0 or arr.shape[1] != arr.shape[2]:
            raise ValidationError(f"expected effects of shape (n, d, d), got {arr.shape}")
        arr = np.stack([check_effect(F, f"F[{b}]") for b, F in enumerate(arr)])
        dev = np.max(np.abs(arr.sum(axis=0) - np.eye(arr.shape[1])))
        if dev > get_config().recon_tol:
            raise ValidationError(f"POVM elements do not sum to I (max deviation {dev:.3e})")
        arr = 0.5 * (arr + arr.conj().transpose(0, 2, 1))
        arr.setflags(write=False)
        self.effects = arr

    @property
    def n_outcomes(self) -> int:
        return self.effects.shape[0]

    @property
    def dim(self) -> int:
        return self.effects.shape[1]

    def __len__(self):
        return self.n_outcomes

    def __getitem__(self, b):
        return self.effects[b]

    @classmethod
    def from_basis(cls, basis) -> Povm:
        """Projective measurement in an orthonormal basis given as columns."""
        u = np.asarray(basis, dtype=complex)
        return cls(np.einsum("ib,jb->bij", u, u.conj()))


def random_povm(dim: int, n_outcomes: int, rng_seed=None) -> Povm:
    """Random POVM ``F_b = S^{-1/2} G_b G_b* S^{-1/2}``, ``S = sum_b G_b G_b*``."""
    dim, n = check_dim(dim), check_dim(n_outcomes, "n_outcomes")
    rng = as_generator(rng_seed)
    g = rng.standard_normal((n, dim, dim)) + 1j * rng.standard_normal((n, dim, dim))
    pos = g @ g.conj().transpose(0, 2, 1)
    lam, v = eig_hermitian(pos.sum(axis=0))
    s_inv_half = (v / np.sqrt(lam)) @ v.conj().T
    return Povm(s_inv_half @ pos @ s_inv_half)


class MarkovKernel:
    """Map ``P -> (K(P, 0), ..., K(P, n-1))``, a probability vector per point.

    Parameters
    ----------
    evaluator : callable
        Takes a 2-d array of unit kets (rows) and returns the
        ``(n_points, n_outcomes)`` matrix of kernel values.
    n_outcomes : int
    """

    def __init__(self, evaluator: Callable[[np.ndarray], np.ndarray], n_outcomes: int):
        self._evaluator = evaluator
        self.n_outcomes = check_dim(n_outcomes, "n_outcomes")

    def rows(self, points: Sequence[PurePoint]) -> np.ndarray:
        if len(points) == 0:
            return np.empty((0, self.n_outcomes))
        out = np.asarray(self._evaluator(np.stack([p.ket for p in points])), dtype=float)
        if out.shape != (len(points), self.n_outcomes):
            raise ValidationError(f"kernel evaluator returned shape {out.shape}")
        return out

    def row(self, point: PurePoint) -> np.ndarray:
        return self.rows([point])[0]

    def __call__(self, point: PurePoint, b: int) -> float:
        return float(self.row(point)[b])


def kernel_from_povm(F: Povm) -> MarkovKernel:
    """Fuzzy random variable ``K(P, b) = tr(P F_b)``."""
    effects = F.effects

    def evaluate(kets: np.ndarray) -> np.ndarray:
        if kets.shape[1] != F.dim:
            raise ValidationError(f"points of dim {kets.shape[1]} for a dim-{F.dim} POVM")
        vals = np.real(np.einsum("ni,bij,nj->nb", kets.conj(), effects, kets))
        return np.clip(vals, 0.0, 1.0)

    return MarkovKernel(evaluate, F.n_outcomes)


def quantum_distribution(F: Povm, W) -> np.ndarray:
    """Outcome distribution ``b -> tr(W F_b)``."""
    W = check_density(W)
    if W.shape[0] != F.dim:
        raise ValidationError(f"state of dim {W.shape[0]} for a dim-{F.dim} POVM")
    p = np.real(np.einsum("ij,bji->b", W, F.effects))
    if np.any(p < -1e-12):
        raise ValidationError(f"negative outcome probability {p.min():.3e}")
    return np.clip(p, 0.0, 1.0)


def classical_distribution(K: MarkovKernel, mu: DiscreteMeasure) -> np.ndarray:
    """Outcome distribution ``b -> sum_i w_i K(P_i, b)``."""
    return mu.weights @ K.rows(list(mu.points))


def simulate_outcomes(K: MarkovKernel, mu: DiscreteMeasure, count: int, rng_seed: int) -> np.ndarray:
    """Outcome counts of ``count`` runs of the two-stage hidden-variables model.

    Draw ``k`` first picks an ontic state ``P_i ~ mu`` and then an outcome
    ``b ~ K(P_i, .)``, both by inverse CDF on uniforms derived from the
    child seed ``mix_seed(rng_seed, k)``. The counts are therefore
    independent of chunking or evaluation order.
    """
    if count < 0:
        raise ValidationError(f"count must be >= 0, got {count}")
    counts = np.zeros(K.n_outcomes, dtype=np.int64)
    if count == 0:
        return counts
    rows = K.rows(list(mu.points))
    mu_cdf = np.cumsum(mu.weights)
    mu_cdf[-1] = 1.0
    row_cdf = np.cumsum(rows, axis=1)
    row_cdf /= row_cdf[:, -1:]
    for start in range(0, count, _CHUNK):
        idx = np.arange(start, min(count, start + _CHUNK), dtype=np.uint64)
        child = mix_seed_array(int(rng_seed), idx)
        ontic = np.searchsorted(mu_cdf, unit_uniforms(child, 0), side="right")
        ontic = np.minimum(ontic, len(mu_cdf) - 1)
        u = unit_uniforms(child, 1)
        outcome = (u[:, None] >= row_cdf[ontic]).sum(axis=1)
        outcome = np.minimum(outcome, K.n_outcomes - 1)
        counts += np.bincount(outcome, minlength=K.n_outcomes)
    return counts


def simulation_report(
    K: MarkovKernel, mu: DiscreteMeasure, count: int, rng_seed: int, n_sigma: float = 4.0
) -> dict:
    """Simulate and compare every count with ``n * p_b`` at ``n_sigma`` binomial sigmas.

    ``sigma_bound`` in the result is the multiplier ``n_sigma``; the
    per-outcome absolute bounds are listed under ``bounds``.
    """
    p = classical_distribution(K, mu)
    counts = simulate_outcomes(K, mu, count, rng_seed)
    expected = count * p
    bounds = n_sigma * np.sqrt(count * p * (1.0 - p))
    ok = bool(np.all(np.abs(counts - expected) <= bounds))
    return {
        "counts": counts.tolist(),
        "expected": expected.tolist(),
        "sigma_bound": float(n_sigma),
        "bounds": bounds.tolist(),
        "pass": ok,
    }


def sharp_effect_residual(points: Sequence[PurePoint], labels: Sequence[int]) -> float:
    """Smallest RMS misfit ``min_A rms(tr(P_i A) - label_i)`` over Hermitian ``A``.

    Unconstrained least squares in the ``dim**2`` real coordinates of ``A``.
    A positive value certifies that no effect reproduces the 0/1 labels on
    these points.
    """
    if len(points) == 0 or len(points) != len(labels):
        raise ValidationError("need equally many points and labels (at least one)")
    y = np.asarray(labels, dtype=float)
    if not np.all((y == 0) | (y == 1)):
        raise ValidationError("labels must be 0 or 1")
    X = projector_features(np.stack([p.ket for p in points]))
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    return float(np.sqrt(np.mean((X @ coef - y) ** 2)))
