import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from squeezelab.errors import UndefinedMandelQError
from squeezelab.estimators import (
    DisentanglementFeatures,
    MandelQ,
    QuadratureVariances,
    check_params_array,
)
from squeezelab.photon_stats import mean_n_total
from squeezelab.quadratures import variance_general
from squeezelab.su11 import SqueezeParams

X3 = np.array([[0.0, 1.0, 0.0], [1.0, 0.5, 0.3], [-2.0, 1.5, 1.2]])


def test_three_and_four_column_layouts_agree():
    X4 = np.column_stack([X3[:, 0], X3[:, 1], np.zeros(3), X3[:, 2]])
    a = QuadratureVariances().fit_transform(X3)
    b = QuadratureVariances().fit_transform(X4)
    assert np.array_equal(a, b)
    pair = variance_general(SqueezeParams(1.0, 0.5, 0.3))
    assert a[1].tolist() == [pair.var_q, pair.var_p]


def test_validation():
    with pytest.raises(ValueError):
        check_params_array(np.ones((2, 5)))
    with pytest.raises(ValueError):
        QuadratureVariances().fit(np.array([[0.0, np.nan, 0.0]]))
    est = QuadratureVariances().fit(X3)
    with pytest.raises(ValueError):
        est.transform(np.ones((2, 4)))


def test_feature_names_and_params():
    est = MandelQ(z=2.0, port="b")
    assert est.get_params() == {"z": 2.0, "phi": 0.5 * math.pi, "port": "b", "on_error": "nan"}
    c = clone(est).set_params(z=0.5)
    assert c.z == 0.5 and est.z == 2.0
    assert DisentanglementFeatures().fit(X3).get_feature_names_out().tolist() == [
        "abs_p", "p0_re", "p0_im", "mean_n",
    ]  # fmt: skip


def test_disentanglement_features():
    out = DisentanglementFeatures().fit_transform(X3)
    assert out.shape == (3, 4)
    assert out[2, 3] == pytest.approx(mean_n_total(SqueezeParams(-2.0, 1.5, 1.2)))
    assert np.all(out[:, 0] < 1)


def test_mandel_nan_and_raise():
    X = np.array([[0.0, 0.0, 0.0], [1.0, 0.5, 0.3]])
    out = MandelQ(z=0.0).fit_transform(X)
    assert math.isnan(out[0, 2]) and math.isfinite(out[1, 2])
    with pytest.raises(UndefinedMandelQError):
        MandelQ(z=0.0, on_error="raise").fit_transform(X)
    with pytest.raises(ValueError):
        MandelQ(on_error="ignore").fit(X)


def test_in_pipeline():
    pipe = make_pipeline(QuadratureVariances(), StandardScaler())
    out = pipe.fit_transform(X3)
    assert out.shape == (3, 2)
    assert np.allclose(out.mean(axis=0), 0)
