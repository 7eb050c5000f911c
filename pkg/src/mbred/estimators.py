"""scikit-learn compatible wrappers.

Inputs ``X`` are batches of kets, one per row, shape ``(n_samples, dim)``,
complex dtype allowed. Each row is read as the pure state it spans, so
scale and global phase are irrelevant.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .fuzzy import Povm, kernel_from_povm
from .linalg import hermitian_from_coefficients, projector_features
from .projective import PurePoint
from .validation import check_kets


class ProjectorFeatures(TransformerMixin, BaseEstimator):
    """Map kets to the ``dim**2`` real coordinates of their projectors.

    Every ``f_A(P) = tr(PA)`` is a linear functional of these features.
    """

    def fit(self, X, y=None):
        X = check_kets(X)
        self.dim_ = X.shape[1]
        self.n_features_in_ = self.dim_
        return self

    def transform(self, X):
        check_is_fitted(self, "dim_")
        return projector_features(check_kets(X, self.dim_))


class PovmKernel(TransformerMixin, BaseEstimator):
    """Transformer returning the Markov-kernel rows ``K(P, b) = tr(P F_b)``.

    Parameters
    ----------
    povm : Povm or array_like of shape (n_outcomes, dim, dim)
    """

    def __init__(self, povm=None):
        self.povm = povm

    def fit(self, X=None, y=None):
        if self.povm is None:
            raise ValueError("povm must be given")
        self.povm_ = self.povm if isinstance(self.povm, Povm) else Povm(self.povm)
        self.kernel_ = kernel_from_povm(self.povm_)
        self.n_features_in_ = self.povm_.dim
        if X is not None:
            check_kets(X, self.povm_.dim)
        return self

    def transform(self, X):
        check_is_fitted(self, "kernel_")
        X = check_kets(X, self.povm_.dim)
        return self.kernel_.rows([PurePoint(k) for k in X])


class QuantumEffectRegressor(RegressorMixin, BaseEstimator):
    """Least-squares fit of ``y_i ~ tr(P_i A)`` over Hermitian ``A``.

    The fit is unconstrained: ``operator_`` need not satisfy ``0 <= A <= I``.

    Attributes
    ----------
    coef_ : ndarray of shape (dim**2,)
        Coordinates of ``A`` in :func:`mbred.linalg.hermitian_basis`.
    operator_ : ndarray of shape (dim, dim)
    rms_residual_ : float
        Root-mean-square training residual.
    """

    def fit(self, X, y):
        X = check_kets(X)
        y = np.asarray(y, dtype=float)
        if y.shape != (X.shape[0],):
            raise ValueError(f"y must have shape ({X.shape[0]},), got {y.shape}")
        feats = projector_features(X)
        self.coef_, *_ = np.linalg.lstsq(feats, y, rcond=None)
        self.dim_ = X.shape[1]
        self.n_features_in_ = self.dim_
        self.operator_ = hermitian_from_coefficients(self.coef_, self.dim_)
        self.rms_residual_ = float(np.sqrt(np.mean((feats @ self.coef_ - y) ** 2)))
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        return projector_features(check_kets(X, self.dim_)) @ self.coef_
