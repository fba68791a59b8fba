import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings

from squeezelab import fock_oracle
from squeezelab.errors import InvalidParameterError, TruncationError
from squeezelab.states import c_even, c_odd, fock_amplitudes, sector_tail_bound
from squeezelab.su11 import SqueezeParams, disentangle_general

from conftest import squeeze_params


def test_identity_amplitudes():
    c = disentangle_general(SqueezeParams(0, 0))
    assert c_even(0, c) == 1 and c_odd(0, c) == 1
    assert c_even(4, c) == 0


def test_leading_amplitudes_read_off_p0():
    c = disentangle_general(SqueezeParams(1.3, 0.4 - 0.9j))
    assert c_even(0, c) == pytest.approx(cmath.exp(0.25 * c.p_zero), abs=1e-15)
    assert c_odd(0, c) == pytest.approx(cmath.exp(0.75 * c.p_zero), abs=1e-15)


def test_negative_index_rejected():
    c = disentangle_general(SqueezeParams(0, 1))
    with pytest.raises(InvalidParameterError):
        c_even(-1, c)


@pytest.mark.parametrize(
    "alpha,tau,n,column,odd",
    [(0.0, 1.0, 3, 0, False), (1.0, 1.0, 2, 1, True)],
)
def test_amplitudes_against_matrix_exponential(alpha, tau, n, column, odd):
    params = SqueezeParams(alpha, tau)
    u = fock_oracle.unitary(params).entries
    c = disentangle_general(params)
    value = c_odd(n, c) if odd else c_even(n, c)
    assert abs(value - u[2 * n + column, column]) < 1e-8


def test_large_index_no_overflow():
    c = disentangle_general(SqueezeParams(0.0, 3.0))
    v = c_even(10_000, c)
    assert math.isfinite(abs(v)) and abs(v) < 1e-10


def test_mixed_vacuum():
    fv = fock_amplitudes(SqueezeParams(0, 0, math.pi / 4))
    assert np.allclose(fv.amplitudes[:2], [2**-0.5, 2**-0.5], atol=1e-15)
    assert np.all(fv.amplitudes[2:] == 0)


def test_conventional_vacuum_amplitudes():
    r = 1.0
    fv = fock_amplitudes(SqueezeParams(0, r, 0))
    assert np.all(fv.amplitudes[1::2] == 0)
    n = np.arange(10)
    binom = np.array([math.comb(2 * k, k) for k in n], dtype=float)
    expected = np.sqrt(binom) * (0.5 * math.tanh(r)) ** n / math.sqrt(math.cosh(r))
    assert np.allclose(fv.amplitudes[0:20:2], expected, atol=1e-14)


def test_norm_within_eps():
    eps = 1e-10
    fv = fock_amplitudes(SqueezeParams(1.0, 1.0, math.pi / 3), eps=eps)
    assert 1 - eps <= fv.norm2 <= 1 + 1e-14
    assert fv.tail_bound <= eps


def test_parity_split():
    a = fock_amplitudes(SqueezeParams(0.5, 0.7, 0.0)).amplitudes
    b = fock_amplitudes(SqueezeParams(0.5, 0.7, 0.5 * math.pi)).amplitudes
    assert np.all(a[1::2] == 0)
    assert np.allclose(b[0::2], 0, atol=1e-16)


def test_tail_bound_is_an_upper_bound():
    c = disentangle_general(SqueezeParams(0.3, 1.5))
    y2 = c.abs_p**2
    full = fock_amplitudes(SqueezeParams(0.3, 1.5, 0.0), eps=1e-15).amplitudes
    weights = np.abs(full[0::2]) ** 2
    for k in (5, 20, 60):
        assert weights[k:].sum() <= sector_tail_bound(k, y2, odd=False) * (1 + 1e-12)


def test_truncation_error_when_unreachable():
    with pytest.raises(TruncationError) as info:
        fock_amplitudes(SqueezeParams(0.0, 15.0, 0.0), eps=1e-12)
    assert info.value.achieved is not None


def test_eps_must_be_positive():
    with pytest.raises(InvalidParameterError):
        fock_amplitudes(SqueezeParams(0, 1), eps=0.0)


@settings(max_examples=25)
@given(squeeze_params(alpha_max=8.0, tau_max=2.0))
def test_matches_oracle_state(params):
    fv = fock_amplitudes(params)
    ref = fock_oracle.oracle_state(params).amplitudes
    n = min(len(fv), len(ref))
    assert np.max(np.abs(fv.amplitudes[:n] - ref[:n])) < 1e-8
    assert abs(fv.norm2 + fv.tail_bound - 1.0) < 1e-9
