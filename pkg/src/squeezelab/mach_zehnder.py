"""Mach-Zehnder interferometer fed by ``|z> (x) |alpha, tau, theta>``.

A Glauber coherent state enters port ``a`` and the generalized squeezed
vacuum enters port ``b``.  Output port ``a'`` carries
``a' = T11 a + T12 b``; port ``b'`` is obtained by shifting the phase by pi.
"""

from __future__ import annotations

import cmath
import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, UndefinedMandelQError
from .su11 import SqueezeParams, disentangle_general, smoothness_break_alphas

#: <n> at or below this makes Q undefined
MEAN_FLOOR = 1e-12
#: |p-| below this marks a smoothness-break locus
BREAK_ATOL = 1e-10


class Port(enum.Enum):
    A_PRIME = "a"
    B_PRIME = "b"


@dataclass(frozen=True)
class MZConfig:
    z: complex = 1.0
    phi: float = 0.5 * math.pi
    port: Port = Port.A_PRIME

    def __post_init__(self):
        if not cmath.isfinite(self.z) or not math.isfinite(self.phi):
            raise InvalidParameterError("z and phi must be finite")
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "phi", float(self.phi))
        object.__setattr__(self, "port", Port(self.port))

    @property
    def effective_phi(self):
        return self.phi + math.pi if self.port is Port.B_PRIME else self.phi


@dataclass(frozen=True)
class TransferMatrix:
    t11: complex
    t12: complex
    t21: complex
    t22: complex

    def as_array(self):
        return np.array([[self.t11, self.t12], [self.t21, self.t22]])


@dataclass(frozen=True)
class MZObservables:
    mean_n: float
    mean_n2: float
    mandel_q: float

    @property
    def variance(self):
        return self.mean_n2 - self.mean_n**2


def transfer_matrix(phi):
    """Input-to-output mode matrix for a balanced interferometer with phase ``phi``."""
    e = cmath.exp(-1j * phi)
    t11 = -0.5 * (1.0 - e)
    t12 = -0.5j * (1.0 + e)
    return TransferMatrix(t11, t12, t12, -t11)


def _moments(z, phi, params):
    coeffs = disentangle_general(params)
    pm = coeffs.p_minus
    d = coeffs.d_ratio  # exp(-p0/2)
    y2 = abs(pm) ** 2
    gap = 1.0 - y2
    z2 = abs(z) ** 2
    s2 = params.s
    s2t = math.sin(2.0 * params.theta)
    sin_h2 = math.sin(0.5 * phi) ** 2
    cos_h2 = math.cos(0.5 * phi) ** 2
    sin_p = math.sin(phi)

    squeezed = (y2 + (1.0 + y2) * s2) / gap  # <n_b>
    cross = 2.0 * (z * d * (1.0 - pm)).real  # z exp(-p0/2)(1 - p-) + c.c.

    mean_n = z2 * sin_h2 + squeezed * cos_h2 + 0.25 * cross * s2t * sin_p

    mean_n2 = (
        sin_h2**2 * z2 * (1.0 + z2)
        + cos_h2**2 * ((1.0 + 8.0 * y2 + 3.0 * y2 * y2) * s2 + y2 * (2.0 + y2)) / gap**2
        + sin_p**2 * squeezed * (0.25 + z2)
        + 0.25 * sin_p**2 * (z2 - 2.0 * (z * z * d * d * pm).real * (1.0 + 2.0 * s2))
        + 0.25
        * s2t
        * sin_p
        * (
            (1.0 + 2.0 * z2) * cross * sin_h2
            + 2.0 * (z * d / gap * (1.0 + 5.0 * y2 - 3.0 * pm * (1.0 + y2))).real * cos_h2
        )
    )
    return mean_n, mean_n2


def mean_n_out(config, params):
    """``<n>`` at the selected output port."""
    return _moments(config.z, config.effective_phi, params)[0]


def mean_n2_out(config, params):
    """``<n^2>`` at the selected output port."""
    return _moments(config.z, config.effective_phi, params)[1]


def _q(mean_n, mean_n2):
    if mean_n <= MEAN_FLOOR:
        raise UndefinedMandelQError(f"<n> = {mean_n:g}: Mandel Q is undefined")
    return mean_n2 / mean_n - mean_n - 1.0


def mandel_q(config, params):
    """Mandel's ``Q = <n^2>/<n> - <n> - 1`` at the selected output port."""
    return _q(*_moments(config.z, config.effective_phi, params))


def observables(config, params):
    mean_n, mean_n2 = _moments(config.z, config.effective_phi, params)
    return MZObservables(mean_n, mean_n2, _q(mean_n, mean_n2))


@dataclass(frozen=True)
class ScanRow:
    alpha: float
    tau: complex
    theta: float
    mean_n: float
    mean_n2: float
    mandel_q: float
    abs_p: float
    flags: tuple = ()


def _scan_point(config, alpha, tau, theta, break_window):
    params = SqueezeParams(alpha, tau, theta)
    mean_n, mean_n2 = _moments(config.z, config.effective_phi, params)
    abs_p = disentangle_general(params).abs_p
    flags = []
    try:
        q = _q(mean_n, mean_n2)
    except UndefinedMandelQError:
        q = math.nan
        flags.append("undefined_q")
    if abs_p < BREAK_ATOL or _near_break(alpha, abs(tau), break_window):
        flags.append("smoothness_break")
    return ScanRow(alpha, complex(tau), params.theta, mean_n, mean_n2, q, abs_p, tuple(flags))


def _near_break(alpha, tau_abs, window):
    if window <= 0:
        return False
    a = abs(alpha)
    return any(abs(a - b) <= window for b in smoothness_break_alphas(tau_abs, a + window))


def default_workers():
    """Worker count from ``SQUEEZELAB_THREADS`` (default 1)."""
    raw = os.environ.get("SQUEEZELAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InvalidParameterError(f"SQUEEZELAB_THREADS must be an integer, got {raw!r}")


def _alpha_window(alphas):
    a = np.unique(np.asarray(alphas, dtype=float))
    if a.size < 2:
        return 0.0
    return 0.5 * float(np.min(np.diff(a)))


def q_scan(config, alphas, thetas, taus, workers=None):
    """Evaluate the output-port observables on the grid ``alphas x thetas x taus``.

    Rows come back in ``itertools.product(taus, thetas, alphas)`` order
    whatever the worker count.  A row is flagged ``smoothness_break`` when a
    locus ``alpha^2/4 - |tau|^2 = (k pi)^2`` lies within half a grid step of
    its ``alpha``, and ``undefined_q`` when ``<n>`` vanishes.
    """
    alphas = [float(a) for a in np.atleast_1d(alphas)]
    thetas = [float(t) for t in np.atleast_1d(thetas)]
    taus = [complex(t) for t in np.atleast_1d(taus)]
    window = _alpha_window(alphas)
    points = [(a, t, th) for t in taus for th in thetas for a in alphas]
    workers = default_workers() if workers is None else max(1, int(workers))

    def run(chunk):
        return [_scan_point(config, a, t, th, window) for a, t, th in chunk]

    if workers == 1 or len(points) < 2 * workers:
        return run(points)
    size = -(-len(points) // (4 * workers))
    chunks = [points[i : i + size] for i in range(0, len(points), size)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return [row for rows in pool.map(run, chunks) for row in rows]


def negative_q_measure(alphas, q_values):
    """Length of ``{alpha : Q(alpha) < 0}`` from samples, linear between grid points."""
    a = np.asarray(alphas, dtype=float)
    q = np.asarray(q_values, dtype=float)
    order = np.argsort(a)
    a, q = a[order], q[order]
    total = 0.0
    for a0, a1, q0, q1 in zip(a[:-1], a[1:], q[:-1], q[1:]):
        if not (math.isfinite(q0) and math.isfinite(q1)):
            continue
        width = a1 - a0
        if q0 < 0 and q1 < 0:
            total += width
        elif q0 < 0 <= q1:
            total += width * q0 / (q0 - q1)
        elif q1 < 0 <= q0:
            total += width * q1 / (q1 - q0)
    return total


def negative_q_intervals(alphas, q_values):
    """Maximal runs of grid points with ``Q < 0`` as ``(alpha_start, alpha_end)`` pairs."""
    a = np.asarray(alphas, dtype=float)
    q = np.asarray(q_values, dtype=float)
    order = np.argsort(a)
    a, q = a[order], q[order]
    out = []
    start = None
    for ai, qi in zip(a, q):
        if qi < 0 and start is None:
            start = ai
            last = ai
        elif qi < 0:
            last = ai
        elif start is not None:
            out.append((start, last))
            start = None
    if start is not None:
        out.append((start, last))
    return out
