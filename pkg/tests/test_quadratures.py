import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from squeezelab import fock_oracle
from squeezelab.errors import UndefinedTransitionError
from squeezelab.quadratures import (
    X_MAX,
    X_MIN,
    Quadrature,
    TransitionPolys,
    params_x,
    root_pair,
    smaller_variance,
    squeezed_quadrature,
    transition_polys,
    transition_roots,
    variance_conventional,
    variance_general,
    variance_one_photon,
)
from squeezelab.su11 import SqueezeParams

from conftest import squeeze_params


def test_conventional_values():
    pair = variance_conventional(1.0)
    assert pair.var_q == pytest.approx(0.5 * math.e**2, rel=1e-14)
    assert pair.var_p == pytest.approx(0.5 * math.e**-2, rel=1e-14)
    assert variance_conventional(0) == variance_general(SqueezeParams(0, 0, 0))


def test_one_photon_values():
    assert variance_one_photon(0.0).var_q == pytest.approx(1.5)
    pair = variance_one_photon(1.0)
    assert pair.var_q == pytest.approx(1.5 * math.e**2, rel=1e-14)
    assert pair.var_p == pytest.approx(1.5 * math.e**-2, rel=1e-14)


@given(st.floats(0, 2.5), st.floats(0, 2 * math.pi))
def test_reduction_chain(r, phase):
    tau = r * complex(math.cos(phase), math.sin(phase))
    for theta, ref in ((0.0, variance_conventional(tau)), (0.5 * math.pi, variance_one_photon(tau))):
        got = variance_general(SqueezeParams(0.0, tau, theta))
        assert abs(got.var_q - ref.var_q) < 1e-12 * max(1.0, ref.var_q)
        assert abs(got.var_p - ref.var_p) < 1e-12 * max(1.0, ref.var_p)


@given(squeeze_params())
def test_heisenberg_and_polynomial_identity(params):
    pair = variance_general(params)
    assert pair.product >= 0.25 - 1e-10
    polys = transition_polys(params)
    via = polys.variances(params.s)
    assert abs(via.var_q - pair.var_q) < 1e-10
    assert abs(via.var_p - pair.var_p) < 1e-10
    assert polys.N == pytest.approx(0.5 * (polys.L + polys.M), abs=1e-12)
    # F vanishes only at s = 0 for the bare vacuum (p- = 0)
    for s in np.linspace(0.1, 1, 10):
        assert polys.F(s) > 0
    assert polys.F(0.0) >= 0


@pytest.mark.parametrize(
    "params,var_q,var_p",
    [
        # truncated-Fock oracle values
        (SqueezeParams(0.7, 0.5 + 0.3j, 0.4), 1.0482807045864715, 0.40774355396363077),
        (SqueezeParams(-7.5, 1.2j, 1.2), 1.3828548321180818, 1.2438842855194363),
        (SqueezeParams(12.0, 0.8, 0.785398), 0.5155985367085882, 1.0322867748230853),
    ],
)
def test_frozen_oracle_variances(params, var_q, var_p):
    pair = variance_general(params)
    assert abs(pair.var_q - var_q) < 1e-10
    assert abs(pair.var_p - var_p) < 1e-10


def test_transition_point_values():
    pair = variance_general(SqueezeParams(2.0, 1.0, 0.0))
    assert pair.var_q == pytest.approx(2.5, abs=1e-12)
    assert pair.var_p == pytest.approx(0.5, abs=1e-12)


@given(st.floats(X_MIN, X_MAX))
def test_roots_solve_g(x):
    g = TransitionPolys.normalized(x)
    roots = transition_roots(x)
    assert roots
    for s in roots:
        assert 0 <= s <= 1
        assert abs(g.G(s)) < 1e-10


def test_root_endpoints():
    assert transition_roots(-1.0) == (0.0, 1.0)
    (s,) = transition_roots(X_MAX)
    assert abs(s - 0.5 * (math.sqrt(3) - 1)) < 1e-12
    lo, hi = root_pair(X_MAX)
    assert lo == hi
    assert transition_roots(0.5) == ()
    assert all(math.isnan(v) for v in root_pair(0.5))


def test_classification():
    polys = transition_polys(SqueezeParams(0.0, 1.0))
    assert smaller_variance(0.0, polys) is Quadrature.P_SQUEEZED
    assert squeezed_quadrature(0.0, polys) is Quadrature.P_SQUEEZED
    g = TransitionPolys.normalized(-1.0)
    assert smaller_variance(0.0, g) is Quadrature.NEITHER
    # smaller but not below vacuum
    polys = transition_polys(SqueezeParams(1.0, 1.0))
    s = 0.5
    pair = polys.variances(s)
    if min(pair.var_q, pair.var_p) >= 0.5:
        assert squeezed_quadrature(s, polys) is Quadrature.NEITHER


def test_classification_agrees_with_oracle():
    params = SqueezeParams(1.0, 1.0, math.pi / 4)
    ov = fock_oracle.oracle_variances(fock_oracle.oracle_state(params))
    expected = Quadrature.Q_SQUEEZED if ov.var_q < ov.var_p else Quadrature.P_SQUEEZED
    assert smaller_variance(params.s, transition_polys(params)) is expected


def test_x_undefined_when_l_vanishes():
    # tau = 0: p- = 0 and exp(-p0) = exp(-i alpha), so L = -cos(alpha)
    polys = transition_polys(SqueezeParams(0.5 * math.pi, 0.0))
    assert abs(polys.L) < 1e-15
    polys = TransitionPolys(1, 0, 1, 0.0, 1.0, 0.5)
    assert polys.x is None
    with pytest.raises(UndefinedTransitionError):
        polys.require_x()
    assert params_x(0.0, 1.0) == pytest.approx(transition_polys(SqueezeParams(0, 1)).x)
