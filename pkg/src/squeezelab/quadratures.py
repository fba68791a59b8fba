"""Quadrature variances and the squeezing-transition polynomials.

Variances refer to ``q = (a^dag + a)/sqrt(2)`` and ``p = i (a^dag - a)/sqrt(2)``;
the vacuum value of both is 1/2.  Writing ``s = sin(theta)^2`` the general
variances take the form ``1/2 + F(s) -/+ G(s)`` with quadratic ``F`` and ``G``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import UndefinedTransitionError
from .su11 import SqueezeParams, disentangle_general

#: |L| at or below this leaves x = M/L undefined
L_FLOOR = 1e-300
#: discriminants within this many ulps of zero are rounding noise (double root)
DISCRIMINANT_ULPS = 16
#: roots this close outside [0, 1] are snapped onto the interval
ROOT_ATOL = 1e-12

X_MIN = -1.0
X_MAX = 1.0 - math.sqrt(3.0)


@dataclass(frozen=True)
class VariancePair:
    var_q: float
    var_p: float

    @property
    def product(self):
        return self.var_q * self.var_p


class Quadrature(enum.Enum):
    Q_SQUEEZED = "q"
    P_SQUEEZED = "p"
    NEITHER = "neither"


def variance_conventional(tau):
    """Variances of ``S(tau)|0>``."""
    tau = complex(tau)
    r = abs(tau)
    sh, ch = math.sinh(r), math.cosh(r)
    cos_phi = tau.real / r if r else 1.0
    base = 0.5 + sh * sh
    cross = sh * ch * cos_phi
    return VariancePair(base + cross, base - cross)


def variance_one_photon(tau):
    """Variances of ``S(tau)|1>``."""
    tau = complex(tau)
    r = abs(tau)
    sh, ch = math.sinh(r), math.cosh(r)
    cos_phi = tau.real / r if r else 1.0
    base = 0.5 + (1.0 + 3.0 * sh * sh)
    cross = 3.0 * sh * ch * cos_phi
    return VariancePair(base + cross, base - cross)


def _cc(w):
    # w + c.c.
    return 2.0 * w.real


def variance_general(params):
    """Variances of ``|alpha, tau, theta>`` from the disentanglement coefficients."""
    coeffs = disentangle_general(params)
    pm = coeffs.p_minus
    d = coeffs.d_ratio  # exp(-p0/2)
    e_re = abs(d) ** 2  # exp(-(p0 + conj p0)/2)
    x = _cc(d * d * pm)  # exp(-p0) p- + c.c.
    y = d * (1.0 - pm)  # exp(-p0/2)(1 - p-)
    s = params.s
    sc = s * math.cos(params.theta) ** 2
    abs2 = abs(pm) ** 2

    var_q = (
        0.5
        + (e_re * abs2 - 0.5 * x)
        + (e_re * (1.0 + abs2) - x) * s
        - 0.5 * _cc(y) ** 2 * sc
    )
    # (y - c.c.)^2 = (2i Im y)^2
    var_p = (
        0.5
        + (e_re * abs2 + 0.5 * x)
        + (e_re * (1.0 + abs2) + x) * s
        + 0.5 * (-4.0 * y.imag**2) * sc
    )
    return VariancePair(var_q, var_p)


@dataclass(frozen=True)
class TransitionPolys:
    """``F(s) = A s^2 + B s + C`` and ``G(s) = L s^2 + M s + N``."""

    A: float
    B: float
    C: float
    L: float
    M: float
    N: float

    @property
    def x(self):
        """``M / L``, or ``None`` when ``L`` vanishes."""
        if abs(self.L) <= L_FLOOR:
            return None
        return self.M / self.L

    def require_x(self):
        x = self.x
        if x is None:
            raise UndefinedTransitionError("L = 0, so x = M/L is undefined")
        return x

    def F(self, s):
        return (self.A * s + self.B) * s + self.C

    def G(self, s):
        return (self.L * s + self.M) * s + self.N

    def variances(self, s):
        f, g = self.F(s), self.G(s)
        return VariancePair(0.5 + f - g, 0.5 + f + g)

    @classmethod
    def normalized(cls, x):
        """Polynomials with ``L = 1``, ``M = x``; ``N = (L + M)/2`` always holds.

        Only ``G`` is meaningful here; ``F`` is set to zero.
        """
        return cls(0.0, 0.0, 0.0, 1.0, x, 0.5 * (1.0 + x))


def transition_polys(params):
    """Coefficients of ``F`` and ``G`` from ``p0`` and ``p- = |p-| exp(i Phi)``."""
    coeffs = disentangle_general(params)
    pm = coeffs.p_minus
    d = coeffs.d_ratio
    e_re = abs(d) ** 2
    e_p0 = d * d  # exp(-p0)
    r = abs(pm)
    r_cos = pm.real  # |p-| cos(Phi)
    return TransitionPolys(
        A=e_re * (1.0 + r * r - 2.0 * r_cos),
        B=e_re * 2.0 * r_cos,
        C=e_re * r * r,
        L=-0.5 * _cc(e_p0 * (1.0 - pm) ** 2),
        M=0.5 * _cc(e_p0 * (1.0 + pm * pm)),
        N=0.5 * _cc(e_p0 * pm),
    )


def _discriminant(x):
    x = float(x)
    disc = x * x - 2.0 * x - 2.0
    noise = DISCRIMINANT_ULPS * 2.0**-52 * (x * x + 2.0 * abs(x) + 2.0)
    return 0.0 if abs(disc) <= noise else disc


def transition_roots(x):
    """Roots ``s = (-x +/- sqrt(x^2 - 2x - 2))/2`` of ``G`` that lie in ``[0, 1]``.

    Returned ascending; a double root appears once.  A negative discriminant
    gives an empty tuple.
    """
    disc = _discriminant(x)
    if disc < 0:
        return ()
    root = math.sqrt(disc)
    candidates = sorted({0.5 * (-x - root), 0.5 * (-x + root)})
    out = []
    for s in candidates:
        if -ROOT_ATOL <= s <= 1.0 + ROOT_ATOL:
            out.append(min(max(s, 0.0), 1.0))
    return tuple(out)


def root_pair(x):
    """``(s_minus, s_plus)``, NaN where a root is complex or outside ``[0, 1]``."""
    disc = _discriminant(x)
    if disc < 0:
        return math.nan, math.nan
    root = math.sqrt(disc)
    pair = []
    for s in (0.5 * (-x - root), 0.5 * (-x + root)):
        pair.append(min(max(s, 0.0), 1.0) if -ROOT_ATOL <= s <= 1.0 + ROOT_ATOL else math.nan)
    return tuple(pair)


def smaller_variance(s, polys):
    """Quadrature with the smaller variance at ``s`` (the sign of ``G``)."""
    g = polys.G(s)
    if g > 0:
        return Quadrature.Q_SQUEEZED
    if g < 0:
        return Quadrature.P_SQUEEZED
    return Quadrature.NEITHER


def squeezed_quadrature(s, polys):
    """Quadrature squeezed below the vacuum level 1/2 at ``s``, if any."""
    relative = smaller_variance(s, polys)
    pair = polys.variances(s)
    if relative is Quadrature.Q_SQUEEZED and pair.var_q < 0.5:
        return relative
    if relative is Quadrature.P_SQUEEZED and pair.var_p < 0.5:
        return relative
    return Quadrature.NEITHER


def params_x(alpha, tau):
    """``x = M/L`` for the operator ``U(alpha, tau)``, or ``None``."""
    return transition_polys(SqueezeParams(alpha, tau)).x
