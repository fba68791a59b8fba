"""Fock amplitudes of the generalized squeezed vacuum with a certified tail."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import InvalidParameterError, TruncationError
from .su11 import disentangle_general

#: refuse to build vectors longer than this
MAX_FOCK_DIM = 2_000_000


@dataclass(frozen=True)
class FockVector:
    """Amplitudes ``<N|psi>`` for ``N < len(amplitudes)``.

    ``tail_bound`` bounds the squared norm of everything that was cut off.
    """

    amplitudes: np.ndarray
    tail_bound: float = 0.0

    def __len__(self):
        return len(self.amplitudes)

    @property
    def norm2(self):
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2


def _log_ratio(n, odd):
    # log(sqrt((2n + odd)!) / n!)
    return 0.5 * math.lgamma(2 * n + odd + 1) - math.lgamma(n + 1)


def _amplitude(n, coeffs, odd):
    prefactor = cmath.exp((0.75 if odd else 0.25) * coeffs.p_zero)
    if n == 0:
        return prefactor
    half = 0.5 * coeffs.p_plus
    if half == 0:
        return 0j
    log_mag = n * math.log(abs(half)) + _log_ratio(n, odd)
    return prefactor * cmath.rect(math.exp(log_mag), n * cmath.phase(half))


def c_even(n, coeffs):
    """Amplitude of ``|2n>`` in ``U(alpha, tau)|0>``."""
    if n < 0:
        raise InvalidParameterError("n must be non-negative")
    return _amplitude(int(n), coeffs, odd=0)


def c_odd(n, coeffs):
    """Amplitude of ``|2n+1>`` in ``U(alpha, tau)|1>``."""
    if n < 0:
        raise InvalidParameterError("n must be non-negative")
    return _amplitude(int(n), coeffs, odd=1)


def _sector_amplitudes(n_terms, coeffs, odd):
    """Vectorized ``c_{2n+odd}`` for ``n < n_terms``."""
    n = np.arange(n_terms)
    prefactor = np.exp((0.75 if odd else 0.25) * coeffs.p_zero)
    half = 0.5 * coeffs.p_plus
    out = np.zeros(n_terms, dtype=complex)
    out[0] = prefactor
    if half == 0 or n_terms == 1:
        return out
    k = n[1:]
    log_mag = k * math.log(abs(half)) + 0.5 * gammaln(2 * k + odd + 1) - gammaln(k + 1)
    out[1:] = prefactor * np.exp(log_mag + 1j * k * cmath.phase(half))
    return out


def sector_tail_bound(n_terms, y2, odd):
    """Upper bound on ``sum_{n >= n_terms} |c_{2n+odd}|^2``.

    Successive even weights shrink by ``y2 (2n+1)/(2n+2) < y2``; odd ones by
    ``y2 (2n+3)/(2n+2)``, which decreases in ``n``.  Either way the tail is
    dominated by a geometric series from the last retained weight.
    """
    if y2 == 0:
        return 0.0 if n_terms > 0 else 1.0
    if n_terms == 0:
        return 1.0
    last = n_terms - 1
    log_w = (
        (0.5 + odd) * math.log1p(-y2)
        + last * math.log(0.25 * y2)
        + math.lgamma(2 * last + 1)
        - 2 * math.lgamma(last + 1)
    )
    if odd:
        log_w += math.log(2 * last + 1)
    r = y2 * (2 * last + 3) / (2 * last + 2) if odd else y2
    if r >= 1.0:
        return 1.0
    return min(1.0, math.exp(log_w) * r / (1.0 - r))


def _terms_needed(y2, odd, eps):
    if y2 == 0 or eps >= 1.0:
        return 1
    n = 1
    while sector_tail_bound(n, y2, odd) > eps:
        n *= 2
        if 2 * n > MAX_FOCK_DIM:
            raise TruncationError(
                f"cannot reach tail bound {eps:g} within {MAX_FOCK_DIM} Fock states",
                achieved=sector_tail_bound(n, y2, odd),
            )
    lo, hi = n // 2, n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if sector_tail_bound(mid, y2, odd) > eps:
            lo = mid
        else:
            hi = mid
    return hi


def fock_amplitudes(params, eps=1e-12):
    """Fock vector of ``cos(theta) U|0> + sin(theta) U|1>``.

    The cutoff is the smallest one whose certified tail is at most ``eps``.
    """
    if not eps > 0:
        raise InvalidParameterError("eps must be positive")
    coeffs = disentangle_general(params)
    y2 = abs(coeffs.p_plus) ** 2
    c, s = math.cos(params.theta), math.sin(params.theta)
    weights = (c * c, s * s)
    # each sector gets half the budget after its cos^2 / sin^2 weighting
    half = 0.5 * eps
    n_even = _terms_needed(y2, 0, half / weights[0]) if weights[0] > half else 1
    n_odd = _terms_needed(y2, 1, half / weights[1]) if weights[1] > half else 1
    n_terms = max(n_even, n_odd)

    amps = np.zeros(2 * n_terms, dtype=complex)
    amps[0::2] = c * _sector_amplitudes(n_terms, coeffs, 0)
    amps[1::2] = s * _sector_amplitudes(n_terms, coeffs, 1)
    tail = weights[0] * sector_tail_bound(n_terms, y2, 0) + weights[1] * sector_tail_bound(
        n_terms, y2, 1
    )
    return FockVector(amps, tail)
