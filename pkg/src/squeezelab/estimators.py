"""scikit-learn compatible front ends.

Each transformer maps rows of squeezing parameters to physical observables,
so parameter grids can flow through pipelines, ``FunctionTransformer``
chains or ``ColumnTransformer`` like any other feature block.

Input layout: ``(alpha, tau, theta)`` with real ``tau``, or
``(alpha, tau_re, tau_im, theta)``.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, validate_data

from . import mach_zehnder, photon_stats, quadratures
from .errors import SqueezeLabError
from .su11 import SqueezeParams, disentangle_general


def check_params_array(X):
    """Validate a parameter matrix and return it as ``(n, 4)`` float64."""
    X = check_array(X, dtype=np.float64, ensure_all_finite=True)
    if X.shape[1] == 3:
        X = np.column_stack([X[:, 0], X[:, 1], np.zeros(len(X)), X[:, 2]])
    elif X.shape[1] != 4:
        raise ValueError(
            f"expected 3 columns (alpha, tau, theta) or 4 (alpha, tau_re, tau_im, theta), "
            f"got {X.shape[1]}"
        )
    return X


def iter_params(X):
    for alpha, tau_re, tau_im, theta in check_params_array(X):
        yield SqueezeParams(alpha, complex(tau_re, tau_im), theta)


class _ParamsTransformer(TransformerMixin, BaseEstimator):
    """Stateless base: ``fit`` only validates and records the input width."""

    feature_names = ()

    def fit(self, X, y=None):
        X = validate_data(self, X, dtype=np.float64, ensure_all_finite=True)
        check_params_array(X)
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = validate_data(self, X, dtype=np.float64, reset=False, ensure_all_finite=True)
        rows = [self._row(p) for p in iter_params(X)]
        return np.asarray(rows, dtype=float).reshape(len(rows), len(self.get_feature_names_out()))

    def get_feature_names_out(self, input_features=None):
        return np.asarray(self.feature_names, dtype=object)

    def _row(self, params):
        raise NotImplementedError

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.requires_fit = False
        return tags


class QuadratureVariances(_ParamsTransformer):
    """``(var_q, var_p)`` of the generalized squeezed vacuum."""

    feature_names = ("var_q", "var_p")

    def _row(self, params):
        pair = quadratures.variance_general(params)
        return pair.var_q, pair.var_p


class DisentanglementFeatures(_ParamsTransformer):
    """``(|p+|, Re p0, Im p0, <n>)`` per parameter row."""

    feature_names = ("abs_p", "p0_re", "p0_im", "mean_n")

    def _row(self, params):
        c = disentangle_general(params)
        return c.abs_p, c.p_zero.real, c.p_zero.imag, photon_stats.mean_n_total(params)


class MandelQ(_ParamsTransformer):
    """Output-port ``(<n>, <n^2>, Q)`` of the Mach-Zehnder setup.

    Points where ``Q`` is undefined yield NaN when ``on_error='nan'``
    (default) and raise when ``on_error='raise'``.
    """

    feature_names = ("mean_n", "mean_n2", "mandel_q")

    def __init__(self, z=1.0, phi=0.5 * math.pi, port="a", on_error="nan"):
        self.z = z
        self.phi = phi
        self.port = port
        self.on_error = on_error

    def fit(self, X, y=None):
        if self.on_error not in ("nan", "raise"):
            raise ValueError(f"on_error must be 'nan' or 'raise', got {self.on_error!r}")
        mach_zehnder.MZConfig(self.z, self.phi, self.port)
        return super().fit(X, y)

    def _row(self, params):
        config = mach_zehnder.MZConfig(self.z, self.phi, self.port)
        try:
            obs = mach_zehnder.observables(config, params)
        except SqueezeLabError:
            if self.on_error == "raise":
                raise
            n1 = mach_zehnder.mean_n_out(config, params)
            return n1, mach_zehnder.mean_n2_out(config, params), math.nan
        return obs.mean_n, obs.mean_n2, obs.mandel_q
