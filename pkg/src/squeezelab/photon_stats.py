"""Photon-number statistics of the generalized squeezed vacuum.

Even and odd sectors are separately normalized geometric-binomial laws in
``y = |p+|``::

    p_{2n}   = sqrt(1 - y^2) (y^2/4)^n C(2n, n)
    p_{2n+1} = (1 - y^2) (2n + 1) p_{2n}

All terms are formed in the log domain; ``C(2n, n) ~ 4^n / sqrt(pi n)``
cancels against ``(y^2/4)^n`` only after exponentiation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DivergenceError, InvalidParameterError
from .states import sector_tail_bound
from .su11 import disentangle_general

#: 1 - |p+|^2 below this is treated as a divergence of the closed forms
DIVERGENCE_FLOOR = 1e-12
#: series are truncated once the geometric tail is below this fraction
SERIES_RTOL = 1e-12


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"


@dataclass(frozen=True)
class PhotonDistribution:
    """Probabilities indexed by ``n`` (parity sectors) or ``N`` (mixed).

    ``tail`` bounds the omitted mass and ``norm_defect = |1 - sum - tail|``.
    """

    parity: Parity
    probs: np.ndarray
    tail: float = 0.0

    @property
    def norm_defect(self):
        return abs(1.0 - math.fsum(self.probs) - self.tail)

    def photon_numbers(self):
        n = np.arange(len(self.probs))
        if self.parity is Parity.EVEN:
            return 2 * n
        if self.parity is Parity.ODD:
            return 2 * n + 1
        return n


def _y2(coeffs):
    return abs(coeffs.p_plus) ** 2


def _log_p_even(n, y2):
    log_binom = gammaln(2 * n + 1) - 2 * gammaln(n + 1)
    if y2 == 0:
        return np.where(n == 0, 0.0, -np.inf)
    return 0.5 * math.log1p(-y2) + n * math.log(0.25 * y2) + log_binom


def p_even(n, coeffs):
    """Probability of ``2n`` photons in ``U|0>``."""
    if n < 0:
        raise InvalidParameterError("n must be non-negative")
    return float(np.exp(_log_p_even(np.asarray(n), _y2(coeffs))))


def p_odd(n, coeffs):
    """Probability of ``2n+1`` photons in ``U|1>``."""
    if n < 0:
        raise InvalidParameterError("n must be non-negative")
    y2 = _y2(coeffs)
    return (1.0 - y2) * (2 * n + 1) * p_even(n, coeffs)


def even_distribution(coeffs, n_max=None):
    """``p_{2n}`` for ``n <= n_max``; ``n_max=None`` stops at the series tolerance."""
    return _sector_distribution(coeffs, 0, n_max)


def odd_distribution(coeffs, n_max=None):
    """``p_{2n+1}`` for ``n <= n_max``; ``n_max=None`` stops at the series tolerance."""
    return _sector_distribution(coeffs, 1, n_max)


def _series_terms(y2, odd):
    n = 1
    while sector_tail_bound(n, y2, odd) > SERIES_RTOL * 0.5:
        n *= 2
    return n


def _sector_distribution(coeffs, odd, n_max):
    y2 = _y2(coeffs)
    if n_max is None:
        n_terms = _series_terms(y2, odd)
    else:
        if n_max < 0:
            raise InvalidParameterError("n_max must be non-negative")
        n_terms = int(n_max) + 1
    n = np.arange(n_terms)
    probs = np.exp(_log_p_even(n, y2))
    if odd:
        probs = (1.0 - y2) * (2 * n + 1) * probs
    parity = Parity.ODD if odd else Parity.EVEN
    return PhotonDistribution(parity, probs, sector_tail_bound(n_terms, y2, odd))


def _one_minus_y2(coeffs):
    gap = 1.0 - _y2(coeffs)
    if gap < DIVERGENCE_FLOOR:
        raise DivergenceError(f"1 - |p+|^2 = {gap:g} is below {DIVERGENCE_FLOOR:g}")
    return gap


def mean_n_even(coeffs):
    """``<n>`` in the even state ``U|0>``."""
    return _y2(coeffs) / _one_minus_y2(coeffs)


def mean_n_odd(coeffs):
    """``<n>`` in the odd state ``U|1>``."""
    return (1.0 + 2.0 * _y2(coeffs)) / _one_minus_y2(coeffs)


def p_even_from_mean(n, mean_e):
    """``p_{2n}`` written through the even-sector mean ``<n>_e``.

    Substituting ``y^2 = <n>_e / (<n>_e + 1)`` gives
    ``(<n>_e + 1)^{-1/2} [<n>_e / (4 (<n>_e + 1))]^n C(2n, n)``.
    """
    if n < 0:
        raise InvalidParameterError("n must be non-negative")
    if not mean_e >= 0:
        raise InvalidParameterError(f"mean_e must be >= 0, got {mean_e!r}")
    log_binom = math.lgamma(2 * n + 1) - 2 * math.lgamma(n + 1)
    if n == 0:
        return (mean_e + 1.0) ** -0.5
    if mean_e == 0:
        return 0.0
    log_p = -0.5 * math.log1p(mean_e) + n * math.log(mean_e / (4.0 * (mean_e + 1.0)))
    return math.exp(log_p + log_binom)


def p_odd_from_mean(n, mean_o):
    """``p_{2n+1}`` written through the odd-sector mean ``<n>_o``.

    From ``<n>_o = (1 + 2y^2)/(1 - y^2)`` one gets ``y^2 = (<n>_o - 1)/(<n>_o + 2)``
    and ``1 - y^2 = 3/(<n>_o + 2)``, hence

        3^{3/2} (2n + 1) C(2n, n) (<n>_o + 2)^{-3/2} [(<n>_o - 1)/(4 (<n>_o + 2))]^n.

    The shift is ``+2``, not ``+1``: with ``+1`` the ``n = 0`` term at
    ``<n>_o = 1`` (the bare one-photon state) evaluates to ``(3/2)^{3/2}``
    instead of 1.  See :func:`p_odd_from_mean_unshifted`.
    """
    if n < 0:
        raise InvalidParameterError("n must be non-negative")
    if not mean_o >= 1:
        raise InvalidParameterError(
            f"mean_o must be >= 1 (the odd sector holds at least one photon), got {mean_o!r}"
        )
    prefactor = 3.0**1.5 * (2 * n + 1) * (mean_o + 2.0) ** -1.5
    if n == 0:
        return prefactor
    if mean_o == 1:
        return 0.0
    log_binom = math.lgamma(2 * n + 1) - 2 * math.lgamma(n + 1)
    return prefactor * math.exp(log_binom + n * math.log((mean_o - 1.0) / (4.0 * (mean_o + 2.0))))


def p_odd_from_mean_unshifted(n, mean_o):
    """The ``(<n>_o + 1)`` variant without the binomial factor, kept for audits.

    It is not a probability law: at ``<n>_o = 1`` it yields ``(3/2)^{3/2}``
    for ``n = 0``.  :func:`p_odd_from_mean` is the consistent form.
    """
    if not mean_o >= 1:
        raise InvalidParameterError(f"mean_o must be >= 1, got {mean_o!r}")
    return (
        3.0**1.5
        * (1 + 2 * n)
        * (mean_o + 1.0) ** -1.5
        * ((mean_o - 1.0) / (4.0 * (mean_o + 1.0))) ** n
    )


def p_N(N, params):
    """Probability of ``N`` photons in ``|alpha, tau, theta>``; sectors never interfere."""
    if N < 0:
        raise InvalidParameterError("N must be non-negative")
    coeffs = disentangle_general(params)
    n, odd = divmod(int(N), 2)
    if odd:
        return math.sin(params.theta) ** 2 * p_odd(n, coeffs)
    return math.cos(params.theta) ** 2 * p_even(n, coeffs)


def total_distribution(params, n_max=None):
    """``p_N`` for ``N <= n_max`` (or up to the series tolerance)."""
    coeffs = disentangle_general(params)
    c2 = math.cos(params.theta) ** 2
    s2 = 1.0 - c2
    if n_max is None:
        y2 = _y2(coeffs)
        n_terms = max(_series_terms(y2, 0), _series_terms(y2, 1))
    else:
        n_terms = int(n_max) // 2 + 1
    even = _sector_distribution(coeffs, 0, n_terms - 1)
    odd = _sector_distribution(coeffs, 1, n_terms - 1)
    probs = np.empty(2 * n_terms)
    probs[0::2] = c2 * even.probs
    probs[1::2] = s2 * odd.probs
    tail = c2 * even.tail + s2 * odd.tail
    if n_max is not None and int(n_max) % 2 == 0:
        # drop the trailing odd entry so the vector ends at N = n_max
        tail += probs[-1]
        probs = probs[:-1]
    return PhotonDistribution(Parity.MIXED, probs, tail)


def mean_n_total(params):
    """``<n>`` in ``|alpha, tau, theta>``."""
    coeffs = disentangle_general(params)
    c2 = math.cos(params.theta) ** 2
    return c2 * mean_n_even(coeffs) + (1.0 - c2) * mean_n_odd(coeffs)


def series_mean(dist):
    """First moment of a distribution by compensated summation of its terms."""
    return math.fsum(dist.photon_numbers() * dist.probs)
