"""Seeded invariant suite shared by ``squeezelab verify`` and the tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock_oracle, mach_zehnder, photon_stats, quadratures, states
from .su11 import SqueezeParams, disentangle_general, property_residual

DEFAULT_TOLERANCES = {
    "property_residual": 1e-12,
    "abs_p_below_one": 0.0,
    "heisenberg": 1e-10,
    "reduction_conventional": 1e-12,
    "reduction_one_photon": 1e-12,
    "variance_polynomials": 1e-10,
    "sector_normalization": 1e-9,
    "fock_norm": 1e-9,
    "variance_oracle": 1e-8,
    "distribution_oracle": 1e-8,
    "transition_roots": 1e-10,
    "transfer_unitarity": 1e-12,
    "coherent_closure": 1e-10,
    "port_complementarity": 1e-8,
    "mz_oracle": 1e-7,
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    worst: float
    tol: float
    points: int

    @property
    def passed(self):
        return self.worst <= self.tol

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: worst={self.worst:.3e} tol={self.tol:.1e} points={self.points}"


def random_params(rng, n, alpha_max=10.0, tau_max=2.0, complex_tau=True):
    out = []
    for _ in range(n):
        alpha = rng.uniform(-alpha_max, alpha_max)
        mag = rng.uniform(0.0, tau_max)
        phase = rng.uniform(0.0, 2.0 * math.pi) if complex_tau else 0.0
        theta = rng.uniform(0.0, 0.5 * math.pi)
        out.append(SqueezeParams(alpha, mag * complex(math.cos(phase), math.sin(phase)), theta))
    return out


def _heisenberg_gap(pair):
    return max(0.0, 0.25 - pair.var_q * pair.var_p)


def run_checks(seed=0, points=200, tolerances=None, mz_points=None):
    """Run every invariant over ``points`` seeded random parameter sets.

    Two-mode oracle comparisons use ``mz_points`` (default ``points // 4``)
    because each costs a sparse two-mode product.
    """
    tol = dict(DEFAULT_TOLERANCES)
    if tolerances:
        unknown = set(tolerances) - set(tol)
        if unknown:
            raise KeyError(f"unknown invariants: {sorted(unknown)}")
        tol.update(tolerances)
    rng = np.random.default_rng(seed)
    grid = random_params(rng, points)
    worst = dict.fromkeys(tol, 0.0)

    def bump(name, value):
        if not value <= worst[name]:
            worst[name] = value if math.isfinite(value) else math.inf

    for params in grid:
        coeffs = disentangle_general(params)
        bump("property_residual", property_residual(coeffs))
        # any |p+| >= 1 is an outright failure
        bump("abs_p_below_one", 0.0 if coeffs.abs_p < 1.0 else math.inf)

        pair = quadratures.variance_general(params)
        bump("heisenberg", _heisenberg_gap(pair))
        polys = quadratures.transition_polys(params)
        poly_pair = polys.variances(params.s)
        bump(
            "variance_polynomials",
            max(abs(poly_pair.var_q - pair.var_q), abs(poly_pair.var_p - pair.var_p)),
        )

        tau = params.tau
        conv = quadratures.variance_conventional(tau)
        red = quadratures.variance_general(SqueezeParams(0.0, tau, 0.0))
        bump("reduction_conventional", max(abs(conv.var_q - red.var_q), abs(conv.var_p - red.var_p)))
        one = quadratures.variance_one_photon(tau)
        red = quadratures.variance_general(SqueezeParams(0.0, tau, 0.5 * math.pi))
        bump("reduction_one_photon", max(abs(one.var_q - red.var_q), abs(one.var_p - red.var_p)))

        even = photon_stats.even_distribution(coeffs)
        odd = photon_stats.odd_distribution(coeffs)
        bump("sector_normalization", max(even.norm_defect, odd.norm_defect))

        fv = states.fock_amplitudes(params, eps=1e-12)
        bump("fock_norm", abs(fv.norm2 + fv.tail_bound - 1.0))

        state = fock_oracle.oracle_state(params)
        ov = fock_oracle.oracle_variances(state)
        bump("variance_oracle", max(abs(ov.var_q - pair.var_q), abs(ov.var_p - pair.var_p)))
        probs = fock_oracle.oracle_distribution(state).probs
        analytic = np.array([photon_stats.p_N(N, params) for N in range(min(len(probs), 60))])
        bump("distribution_oracle", float(np.max(np.abs(probs[: len(analytic)] - analytic))))

    for x in np.linspace(quadratures.X_MIN, quadratures.X_MAX, points):
        g = quadratures.TransitionPolys.normalized(x)
        roots = quadratures.transition_roots(x)
        resid = max((abs(g.G(s)) for s in roots), default=math.inf)
        bump("transition_roots", resid)

    for phi in rng.uniform(-2.0 * math.pi, 2.0 * math.pi, points):
        t = mach_zehnder.transfer_matrix(phi).as_array()
        bump("transfer_unitarity", float(np.max(np.abs(t.conj().T @ t - np.eye(2)))))

    for _ in range(points):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        config = mach_zehnder.MZConfig(z, rng.uniform(0.0, 2.0 * math.pi))
        if mach_zehnder.mean_n_out(config, SqueezeParams(0.0, 0.0, 0.0)) <= 1e-6:
            continue
        q = mach_zehnder.mandel_q(config, SqueezeParams(0.0, 0.0, 0.0))
        bump("coherent_closure", abs(q))

    mz_points = points // 4 if mz_points is None else mz_points
    mz_grid = random_params(rng, mz_points, tau_max=1.5)
    for params in mz_grid:
        z = complex(rng.uniform(-1.4, 1.4), rng.uniform(-1.4, 1.4))
        phi = rng.uniform(0.0, 2.0 * math.pi)
        a_cfg = mach_zehnder.MZConfig(z, phi, mach_zehnder.Port.A_PRIME)
        b_cfg = mach_zehnder.MZConfig(z, phi, mach_zehnder.Port.B_PRIME)
        total = abs(z) ** 2 + photon_stats.mean_n_total(params)
        bump(
            "port_complementarity",
            abs(mach_zehnder.mean_n_out(a_cfg, params) + mach_zehnder.mean_n_out(b_cfg, params) - total),
        )
        for cfg in (a_cfg, b_cfg):
            n1 = mach_zehnder.mean_n_out(cfg, params)
            n2 = mach_zehnder.mean_n2_out(cfg, params)
            o = fock_oracle.oracle_mz(cfg, params) if n1 > 1e-9 else None
            if o is not None:
                bump("mz_oracle", max(abs(o.mean_n - n1), abs(o.mean_n2 - n2)))

    counts = {name: points for name in tol}
    for name in ("port_complementarity", "mz_oracle"):
        counts[name] = mz_points
    return [CheckResult(name, worst[name], tol[name], counts[name]) for name in tol]
