import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from squeezelab import fock_oracle
from squeezelab.errors import InvalidParameterError, UndefinedMandelQError
from squeezelab.mach_zehnder import (
    MZConfig,
    Port,
    mandel_q,
    mean_n2_out,
    mean_n_out,
    negative_q_intervals,
    negative_q_measure,
    observables,
    q_scan,
    transfer_matrix,
)
from squeezelab.photon_stats import mean_n_total
from squeezelab.su11 import SqueezeParams, smoothness_break_alphas

from conftest import squeeze_params

VACUUM = SqueezeParams(0.0, 0.0, 0.0)


@given(st.floats(-20, 20))
def test_transfer_matrix_unitary(phi):
    t = transfer_matrix(phi)
    m = t.as_array()
    assert np.max(np.abs(m.conj().T @ m - np.eye(2))) < 1e-12
    assert t.t11 == -t.t22 and t.t21 == t.t12


def test_config_validation():
    with pytest.raises(InvalidParameterError):
        MZConfig(complex(math.nan, 0), 1.0)
    assert MZConfig(1, 0, "b").port is Port.B_PRIME


@given(
    st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
    st.floats(0, 2 * math.pi),
)
def test_coherent_closure(z, phi):
    config = MZConfig(z, phi)
    if mean_n_out(config, VACUUM) > 1e-6:
        assert abs(mandel_q(config, VACUUM)) < 1e-10


def test_undefined_q():
    with pytest.raises(UndefinedMandelQError):
        mandel_q(MZConfig(0.0, 1.0), VACUUM)


@given(squeeze_params(tau_max=1.5), st.complex_numbers(max_magnitude=2), st.floats(0, 2 * math.pi))
def test_port_complementarity(params, z, phi):
    a = mean_n_out(MZConfig(z, phi, Port.A_PRIME), params)
    b = mean_n_out(MZConfig(z, phi, Port.B_PRIME), params)
    assert abs(a + b - abs(z) ** 2 - mean_n_total(params)) < 1e-8


@given(squeeze_params(tau_max=1.5), st.complex_numbers(max_magnitude=2), st.floats(0, 2 * math.pi))
def test_phase_shift_sign_is_irrelevant(params, z, phi):
    # port b' via phi + pi and via phi - pi
    plus = MZConfig(z, phi + math.pi)
    minus = MZConfig(z, phi - math.pi)
    assert abs(mean_n_out(plus, params) - mean_n_out(minus, params)) < 1e-10
    assert abs(mean_n2_out(plus, params) - mean_n2_out(minus, params)) < 1e-9


def test_single_photon_routing():
    # |0> (x) |1>: <n_a'> = |T12|^2
    for phi in (0.3, 1.0, 2.5):
        t = transfer_matrix(phi)
        got = mean_n_out(MZConfig(0.0, phi), SqueezeParams(0, 0, 0.5 * math.pi))
        assert got == pytest.approx(abs(t.t12) ** 2, abs=1e-14)
        o = fock_oracle.oracle_mz(MZConfig(0.0, phi), SqueezeParams(0, 0, 0.5 * math.pi))
        assert o.mean_n == pytest.approx(abs(t.t12) ** 2, abs=1e-12)


def test_frozen_oracle_moments():
    # two-mode truncated-Fock values at z = 1, phi = pi/2
    config = MZConfig(1.0, 0.5 * math.pi)
    obs = observables(config, SqueezeParams(0.7, 0.5 + 0.3j, 0.4))
    assert obs.mean_n == pytest.approx(1.3982269537988392, abs=1e-10)
    assert obs.mean_n2 == pytest.approx(4.35141587363889, abs=1e-10)
    obs = observables(config, SqueezeParams(2.0, 1.0, 0.0))
    assert obs.mean_n == pytest.approx(1.0, abs=1e-10)
    assert obs.mean_n2 == pytest.approx(3.75, abs=1e-10)
    assert obs.variance == pytest.approx(obs.mean_n2 - obs.mean_n**2)


@pytest.mark.parametrize("port", ["a", "b"])
def test_spec_point_against_oracle(port):
    config = MZConfig(1.0, 0.5 * math.pi, port)
    params = SqueezeParams(1.0, 0.5, math.pi / 8)
    o = fock_oracle.oracle_mz(config, params)
    assert abs(o.mean_n - mean_n_out(config, params)) < 1e-7
    assert abs(o.mean_n2 - mean_n2_out(config, params)) < 1e-7


@settings(max_examples=20)
@given(
    squeeze_params(tau_max=1.5),
    st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
    st.floats(0, 2 * math.pi),
    st.sampled_from(["a", "b"]),
)
def test_against_two_mode_oracle(params, z, phi, port):
    config = MZConfig(z, phi, port)
    n1 = mean_n_out(config, params)
    if n1 < 1e-9:
        return
    o = fock_oracle.oracle_mz(config, params)
    assert abs(o.mean_n - n1) < 1e-7
    assert abs(o.mean_n2 - mean_n2_out(config, params)) < 1e-7


def test_scan_order_and_threads():
    config = MZConfig(1.0, 0.5 * math.pi)
    alphas = np.arange(0, 3, 0.5)
    rows1 = q_scan(config, alphas, [0.0, 0.3], [0.1, 0.5], workers=1)
    rows4 = q_scan(config, alphas, [0.0, 0.3], [0.1, 0.5], workers=4)
    assert rows1 == rows4
    assert [(r.tau.real, r.theta, r.alpha) for r in rows1[:7]] == [
        (0.1, 0.0, a) for a in alphas
    ] + [(0.1, 0.3, 0.0)]


def test_scan_flags_breaks():
    config = MZConfig(1.0, 0.5 * math.pi)
    alphas = np.round(np.arange(0, 30.0001, 0.1), 10)
    rows = q_scan(config, alphas, [0.0], [0.1])
    flagged = [r.alpha for r in rows if "smoothness_break" in r.flags]
    loci = smoothness_break_alphas(0.1, 30.0)
    assert len(flagged) == len(loci)
    for a, b in zip(flagged, loci):
        assert abs(a - b) <= 0.05 + 1e-12
    assert 2.0 * math.sqrt(math.pi**2 + 0.01) == pytest.approx(loci[0])
    rows = q_scan(MZConfig(0.0, 1.0), [0.0], [0.0], [0.0])
    # tau = 0 also has |p-| = 0, so the row carries both flags
    assert "undefined_q" in rows[0].flags and math.isnan(rows[0].mandel_q)


def test_negative_measure_helpers():
    a = [0, 1, 2, 3, 4]
    q = [1, -1, -1, 1, 1]
    assert negative_q_measure(a, q) == pytest.approx(0.5 + 1 + 0.5)
    assert negative_q_intervals(a, q) == [(1, 2)]
    assert negative_q_measure(a, [1] * 5) == 0
    assert negative_q_intervals(a, [-1] * 5) == [(0, 4)]


def test_workers_env(monkeypatch):
    from squeezelab.mach_zehnder import default_workers

    monkeypatch.setenv("SQUEEZELAB_THREADS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("SQUEEZELAB_THREADS", "x")
    with pytest.raises(InvalidParameterError):
        default_workers()


def test_complex_tau_phase_enters():
    config = MZConfig(1.0, 0.5 * math.pi)
    a = mandel_q(config, SqueezeParams(1.0, 0.5, 0.3))
    b = mandel_q(config, SqueezeParams(1.0, 0.5 * cmath.exp(1j), 0.3))
    assert abs(a - b) > 1e-3
