"""scikit-learn wrappers: rows of X are truth tables over F_{p^n}.

The wrappers add nothing mathematical; they let a batch of functions flow
through a ``Pipeline`` and reuse ``get_params``/``set_params``.  "Fitting"
only fixes and validates the field, since the transforms are exact and
data-independent.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import cyclotomic as cyc
from .field import FieldSpec, field
from .walsh import classify_norms, walsh_tables

NOT_PLATEAUED_LABEL = -1


def check_truth_tables(X, p: int, n: int) -> np.ndarray:
    """Validate a 2-D batch of p-ary truth tables; returns int64 array."""
    X = check_array(X, dtype=None, ensure_2d=True)
    if not np.issubdtype(X.dtype, np.integer):
        as_int = X.astype(np.int64)
        if not np.array_equal(as_int, X):
            raise ValueError("truth-table entries must be integers")
        X = as_int
    X = X.astype(np.int64, copy=False)
    if X.shape[1] != p**n:
        raise ValueError(f"each row needs {p ** n} entries for F_{p}^{n}, got {X.shape[1]}")
    if X.min() < 0 or X.max() >= p:
        raise ValueError(f"entries must lie in [0, {p})")
    return X


def _field(p, n, modulus):
    return field(FieldSpec(p, n, tuple(modulus))) if modulus is not None else field(p, n)


class _FieldMixin:
    def _fit_field(self, X):
        self.field_ = _field(self.p, self.n, self.modulus)
        X = check_truth_tables(X, self.p, self.n)
        self.n_features_in_ = X.shape[1]
        return X

    def _check(self, X):
        check_is_fitted(self, "field_")
        return check_truth_tables(X, self.p, self.n)


class WalshSpectrumTransformer(_FieldMixin, TransformerMixin, BaseEstimator):
    """Map each truth table to its squared Walsh magnitudes |W(mu)|^2.

    Rational magnitudes are returned exactly (as floats of integers);
    irrational ones through the complex embedding.
    """

    def __init__(self, p: int = 3, n: int = 3, modulus=None):
        self.p = p
        self.n = n
        self.modulus = modulus

    def fit(self, X, y=None):
        self._fit_field(X)
        return self

    def transform(self, X):
        X = self._check(X)
        norms = cyc.norm_sq(walsh_tables(self.field_, X))
        vals, rational = cyc.rational_part(norms)
        approx = cyc.to_complex(norms).real
        return np.where(rational, vals, approx).astype(np.float64)


class PlateauedClassifier(_FieldMixin, ClassifierMixin, BaseEstimator):
    """Predict the plateau index s of each truth table, -1 if not plateaued."""

    def __init__(self, p: int = 3, n: int = 3, modulus=None):
        self.p = p
        self.n = n
        self.modulus = modulus

    def fit(self, X, y=None):
        self._fit_field(X)
        self.classes_ = np.arange(NOT_PLATEAUED_LABEL, self.n + 1)
        return self

    def predict(self, X):
        X = self._check(X)
        norms = cyc.norm_sq(walsh_tables(self.field_, X))
        out = np.empty(len(X), dtype=np.int64)
        for i, nm in enumerate(norms):
            cls = classify_norms(nm, self.p, self.n)
            out[i] = NOT_PLATEAUED_LABEL if cls.s is None else cls.s
        return out
