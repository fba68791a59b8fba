"""Normal-order disentanglement of SU(1,1) group elements.

The generalized squeezing operator

    U(alpha, tau) = exp(i alpha K0 + tau K+ - conj(tau) K-)

is rewritten as ``exp(p+ K+) exp(p0 K0) exp(p- K-)``.  The sign of
``|tau|^2 - alpha^2/4`` selects hyperbolic or trigonometric functions; both
branches are evaluated here through the entire functions

    sinhc(b2) = sinh(sqrt(b2)) / sqrt(b2),   coshc(b2) = cosh(sqrt(b2))

of the signed quantity ``b2 = |tau|^2 - alpha^2/4`` (for ``b2 < 0`` they turn
into ``sin(beta)/beta`` and ``cos(beta)``), so ``D / beta`` never divides
zero by zero.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import InvalidParameterError

#: relative width of the band around |tau| = |alpha|/2 tagged as Transition
REGIME_RTOL = 1e-10
#: below this beta the Taylor series replaces sinh(beta)/beta
SERIES_BETA = 1e-6

HALF_PI = 0.5 * math.pi


def _check_finite(name, value):
    if not cmath.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class SqueezeParams:
    """Control triple of the generalized squeezed vacuum.

    ``theta`` is clamped to ``[0, pi/2]``, where ``s = sin(theta)**2`` sweeps
    ``[0, 1]`` once.
    """

    alpha: float
    tau: complex
    theta: float = 0.0

    def __post_init__(self):
        _check_finite("alpha", self.alpha)
        _check_finite("tau", self.tau)
        _check_finite("theta", self.theta)
        if isinstance(self.alpha, complex) or isinstance(self.theta, complex):
            raise InvalidParameterError("alpha and theta must be real")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "tau", complex(self.tau))
        object.__setattr__(self, "theta", min(max(float(self.theta), 0.0), HALF_PI))

    @property
    def s(self):
        """``sin(theta)**2``, the weight of the one-photon component."""
        return math.sin(self.theta) ** 2


class Regime(enum.Enum):
    HYPERBOLIC = "hyperbolic"
    TRIGONOMETRIC = "trigonometric"
    TRANSITION = "transition"


@dataclass(frozen=True)
class DisentangledCoeffs:
    p_plus: complex
    p_zero: complex
    p_minus: complex
    regime: Regime
    beta: float

    @property
    def abs_p(self):
        """``|p+|`` (equal to ``|p-|``)."""
        return abs(self.p_plus)

    @property
    def d_ratio(self):
        """``exp(-p0/2)``, i.e. ``D / beta``, free of logarithm branch choices."""
        return cmath.exp(-0.5 * self.p_zero)


def classify_regime(params, tol=None):
    """Tag ``params`` as hyperbolic, trigonometric or transition.

    With ``tol=None`` the band is ``REGIME_RTOL * max(|tau|^2, alpha^2/4)``;
    an explicit ``tol`` is absolute and must be positive.
    """
    tau2 = abs(params.tau) ** 2
    quarter = 0.25 * params.alpha**2
    if tol is None:
        tol = REGIME_RTOL * max(tau2, quarter)
    elif not (tol > 0 and math.isfinite(tol)):
        raise InvalidParameterError(f"tol must be positive and finite, got {tol!r}")
    if tau2 > quarter + tol:
        return Regime.HYPERBOLIC
    if tau2 < quarter - tol:
        return Regime.TRIGONOMETRIC
    return Regime.TRANSITION


def _sinhc_coshc(b2):
    """Return ``(sinh(b)/b, cosh(b))`` for ``b = sqrt(b2)``, any real ``b2``."""
    beta = math.sqrt(abs(b2))
    if beta < SERIES_BETA:
        # even series in beta; b2 carries the sign
        return 1.0 + b2 / 6.0 + b2 * b2 / 120.0, 1.0 + b2 / 2.0 + b2 * b2 / 24.0
    if b2 > 0:
        return math.sinh(beta) / beta, math.cosh(beta)
    return math.sin(beta) / beta, math.cos(beta)


def _continuous_log(w, alpha, b2):
    """Logarithm of ``D / beta`` continued from ``alpha = 0``.

    ``|D / beta| >= 1`` everywhere, so a continuous branch exists on the whole
    parameter half-plane.  In the trigonometric regime ``D / beta`` runs along
    an ellipse and its phase stays in the same quadrant as ``-sign(alpha) beta``;
    that fixes the multiple of 2 pi once |alpha| exceeds 2 pi.
    """
    principal = cmath.log(w)
    if b2 >= 0 or alpha == 0:
        return principal
    target = -math.copysign(math.sqrt(-b2), alpha)
    k = round((target - principal.imag) / (2.0 * math.pi))
    return complex(principal.real, principal.imag + 2.0 * math.pi * k)


def _phase_ratio(tau):
    # -conj(tau)/tau, undefined at tau = 0 (callers zero p- there)
    return -tau.conjugate() / tau


def disentangle_general(params):
    """Disentanglement coefficients ``(p+, p0, p-)`` of ``U(alpha, tau)``."""
    alpha, tau = params.alpha, params.tau
    regime = classify_regime(params)
    b2 = abs(tau) ** 2 - 0.25 * alpha**2
    beta = math.sqrt(abs(b2))

    if regime is Regime.TRANSITION:
        w = complex(1.0, -0.5 * alpha)
        p_plus = 2.0 * tau / complex(2.0, -alpha)
        p_zero = -2.0 * cmath.log(w)
    else:
        sinhc, coshc = _sinhc_coshc(b2)
        w = complex(coshc, -0.5 * alpha * sinhc)
        p_plus = tau * sinhc / w
        p_zero = -2.0 * _continuous_log(w, alpha, b2)

    p_minus = _phase_ratio(tau) * p_plus if tau != 0 else 0j
    return DisentangledCoeffs(p_plus, p_zero, p_minus, regime, beta)


def disentangle_conventional(tau):
    """Coefficients ``(t+, t0, t-)`` of ``S(tau) = exp(tau K+ - conj(tau) K-)``."""
    _check_finite("tau", tau)
    tau = complex(tau)
    r = abs(tau)
    regime = classify_regime(SqueezeParams(0.0, tau))
    if r == 0:
        return DisentangledCoeffs(0j, 0j, 0j, regime, 0.0)
    t_plus = tau / r * math.tanh(r)
    # log(cosh r) without overflow for large r
    log_cosh = r + math.log1p(math.exp(-2.0 * r)) - math.log(2.0)
    return DisentangledCoeffs(t_plus, complex(-2.0 * log_cosh), -t_plus.conjugate(), regime, r)


def property_residual(coeffs):
    """``|exp(-Re p0) (1 - |p+|^2) - 1|``; vanishes for exact coefficients."""
    return abs(math.exp(-coeffs.p_zero.real) * (1.0 - abs(coeffs.p_plus) ** 2) - 1.0)


def smoothness_break_alphas(tau_abs, alpha_max, k_max=None):
    """Positive ``alpha`` where ``alpha^2/4 - |tau|^2 = (k pi)^2`` and ``|p-|`` vanishes."""
    out = []
    k = 1
    while k_max is None or k <= k_max:
        a = 2.0 * math.sqrt((k * math.pi) ** 2 + tau_abs**2)
        if a > alpha_max:
            break
        out.append(a)
        k += 1
    return out
