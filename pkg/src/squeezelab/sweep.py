"""Declarative parameter sweeps with CSV/JSON emission and oracle spot checks."""

from __future__ import annotations

import ast
import io
import json
import math
import operator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__, fock_oracle, mach_zehnder, photon_stats, quadratures
from .errors import InvalidParameterError, SqueezeLabError
from .su11 import SqueezeParams, classify_regime, disentangle_general

QUANTITIES = ("variances", "transition", "photon_dist", "mandel")
MAX_POINTS = 10**7

COLUMNS = {
    "variances": (
        "alpha", "tau_re", "tau_im", "theta", "regime",
        "var_q", "var_p", "smaller", "squeezed", "flag",
    ),
    "transition": (
        "alpha", "tau_re", "tau_im", "A", "B", "C", "L", "M", "N",
        "x", "s_minus", "s_plus", "flag",
    ),
    "photon_dist": (
        "alpha", "tau_re", "tau_im", "theta", "parity", "n", "photons", "prob", "flag",
    ),
    "mandel": (
        "alpha", "tau_re", "tau_im", "theta", "z_re", "z_im", "phi", "port",
        "mean_n", "mean_n2", "mandel_q", "abs_p", "flag",
    ),
}  # fmt: skip

GRID_KEYS = ("alpha", "tau", "tau_abs", "tau_phase", "theta", "n", "x")
FIXED_KEYS = ("z", "phi", "port", "parity")

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def parse_number(text):
    """Evaluate a real literal such as ``1.5``, ``pi/2`` or ``-3*pi/8``."""
    if isinstance(text, (int, float)):
        return float(text)
    try:
        tree = ast.parse(str(text).strip(), mode="eval")
    except SyntaxError as exc:
        raise InvalidParameterError(f"cannot parse number {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise InvalidParameterError(f"unsupported expression in {text!r}")

    value = ev(tree)
    if not math.isfinite(value):
        raise InvalidParameterError(f"{text!r} is not finite")
    return value


def parse_grid(spec):
    """Expand ``start:stop[:step]`` (inclusive, step 1 by default), ``a,b,c`` or a scalar.

    Lists and numbers from config documents are accepted as they are.
    """
    if isinstance(spec, (list, tuple)):
        return [parse_number(v) for v in spec]
    if isinstance(spec, (int, float)):
        return [float(spec)]
    text = str(spec).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) == 2:
            parts.append("1")
        if len(parts) != 3:
            raise InvalidParameterError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (parse_number(p) for p in parts)
        if step == 0:
            raise InvalidParameterError("range step must be nonzero")
        count = math.floor((stop - start) / step + 1e-9) + 1
        if count < 1:
            raise InvalidParameterError(f"range {text!r} is empty")
        if count > MAX_POINTS:
            raise InvalidParameterError(f"range {text!r} has more than {MAX_POINTS} points")
        # index-based so the endpoints are not perturbed by accumulation
        return [start + i * step for i in range(count)]
    return [parse_number(v) for v in text.split(",")]


def parse_complex(spec):
    """``re,im`` or a real scalar."""
    if isinstance(spec, complex):
        return spec
    if isinstance(spec, (list, tuple)) and len(spec) == 2:
        return complex(parse_number(spec[0]), parse_number(spec[1]))
    text = str(spec).strip()
    parts = text.split(",")
    if len(parts) == 2:
        return complex(parse_number(parts[0]), parse_number(parts[1]))
    if len(parts) == 1:
        return complex(parse_number(text), 0.0)
    raise InvalidParameterError(f"complex value must be 're,im', got {text!r}")


def _tau_grid(grids):
    if "tau" in grids and ("tau_abs" in grids or "tau_phase" in grids):
        raise InvalidParameterError("give either tau or tau_abs/tau_phase, not both")
    if "tau" in grids:
        raw = grids["tau"]
        if isinstance(raw, str) and ":" not in raw and raw.count(",") == 1:
            return [parse_complex(raw)]
        return [complex(v) for v in parse_grid(raw)]
    mags = parse_grid(grids.get("tau_abs", 0.0))
    phases = parse_grid(grids.get("tau_phase", 0.0))
    if any(m < 0 for m in mags):
        raise InvalidParameterError("tau_abs must be non-negative")
    return [m * complex(math.cos(ph), math.sin(ph)) for m in mags for ph in phases]


@dataclass
class SweepSpec:
    """What to evaluate, where, and how to emit it.

    ``grids`` maps grid names (``alpha``, ``tau``, ``tau_abs``, ``tau_phase``,
    ``theta``, ``n``, ``x``) to range strings, lists or scalars; ``fixed``
    holds ``z``, ``phi``, ``port`` and ``parity``.
    """

    quantity: str
    grids: dict = field(default_factory=dict)
    fixed: dict = field(default_factory=dict)
    output_format: str = "csv"
    oracle_check: float = 0.0
    seed: int = 0
    max_points: int = MAX_POINTS

    def __post_init__(self):
        self.quantity = self.quantity.replace("-", "_")
        if self.quantity not in QUANTITIES:
            raise InvalidParameterError(
                f"quantity must be one of {', '.join(QUANTITIES)}, got {self.quantity!r}"
            )
        if self.output_format not in ("csv", "json"):
            raise InvalidParameterError("output_format must be csv or json")
        if not 0.0 <= float(self.oracle_check) <= 1.0:
            raise InvalidParameterError("oracle_check must lie in [0, 1]")
        unknown = set(self.grids) - set(GRID_KEYS)
        if unknown:
            raise InvalidParameterError(f"unknown grid parameters: {sorted(unknown)}")
        unknown = set(self.fixed) - set(FIXED_KEYS)
        if unknown:
            raise InvalidParameterError(f"unknown fixed parameters: {sorted(unknown)}")
        self.oracle_check = float(self.oracle_check)
        self.seed = int(self.seed)
        if self.n_points() > self.max_points:
            raise InvalidParameterError(
                f"sweep has {self.n_points()} points, above the cap of {self.max_points}"
            )

    @classmethod
    def from_mapping(cls, doc):
        doc = dict(doc)
        known = {"quantity", "grids", "fixed", "output_format", "oracle_check", "seed", "max_points"}
        unknown = set(doc) - known
        if unknown:
            raise InvalidParameterError(f"unknown spec fields: {sorted(unknown)}")
        if "quantity" not in doc:
            raise InvalidParameterError("spec document needs a 'quantity'")
        return cls(**doc)

    def echo(self):
        return json.dumps(asdict(self), sort_keys=True, default=str, separators=(",", ":"))

    # grid expansion -----------------------------------------------------

    def axes(self):
        g = self.grids
        if self.quantity == "transition" and "x" in g:
            return {"x": parse_grid(g["x"])}
        axes = {
            "tau": _tau_grid(g),
            "theta": parse_grid(g.get("theta", 0.0)),
            "alpha": parse_grid(g.get("alpha", 0.0)),
        }
        if self.quantity == "transition":
            del axes["theta"]
        if self.quantity == "photon_dist":
            n = [int(v) for v in parse_grid(g.get("n", "0:20:1"))]
            if any(v < 0 for v in n):
                raise InvalidParameterError("n must be non-negative")
            axes["n"] = n
        return axes

    def n_points(self):
        return math.prod(len(v) for v in self.axes().values())

    def points(self):
        """Grid points in row order: tau, theta outermost, then alpha, then n."""
        axes = self.axes()
        names = list(axes)
        out = [{}]
        for name in names:
            out = [dict(p, **{name: v}) for p in out for v in axes[name]]
        return out


def _fmt(v):
    if isinstance(v, float) or isinstance(v, np.floating):
        return format(float(v), ".17g")
    return str(v)


def _nan_row(columns, base, flag):
    row = {c: math.nan for c in columns}
    row.update(base)
    row["flag"] = flag
    return row


class _Evaluator:
    def __init__(self, spec):
        self.spec = spec
        fx = spec.fixed
        self.alpha_window = 0.0
        self.parity = str(fx.get("parity", "even")).lower()
        if self.parity not in ("even", "odd", "total"):
            raise InvalidParameterError("parity must be even, odd or total")
        if spec.quantity == "mandel":
            self.config = mach_zehnder.MZConfig(
                parse_complex(fx.get("z", 1.0)),
                parse_number(fx.get("phi", "pi/2")),
                _port(fx.get("port", "a")),
            )

    def columns(self):
        return COLUMNS[self.spec.quantity]

    def __call__(self, point):
        q = self.spec.quantity
        try:
            return getattr(self, "_" + q)(point)
        except SqueezeLabError as exc:
            return _nan_row(self.columns(), self._base(point), type(exc).__name__)

    def _base(self, point):
        base = {}
        if "tau" in point:
            base.update(alpha=point["alpha"], tau_re=point["tau"].real, tau_im=point["tau"].imag)
        if "theta" in point:
            base["theta"] = point["theta"]
        if "x" in point:
            base["x"] = point["x"]
        if "n" in point:
            base.update(n=point["n"], parity=self.parity)
        if self.spec.quantity == "mandel":
            c = self.config
            base.update(z_re=c.z.real, z_im=c.z.imag, phi=c.phi, port=c.port.value)
        return base

    def _params(self, point):
        return SqueezeParams(point["alpha"], point["tau"], point.get("theta", 0.0))

    def _variances(self, point):
        params = self._params(point)
        pair = quadratures.variance_general(params)
        polys = quadratures.transition_polys(params)
        row = self._base(point)
        row.update(
            regime=classify_regime(params).value,
            var_q=pair.var_q,
            var_p=pair.var_p,
            smaller=quadratures.smaller_variance(params.s, polys).value,
            squeezed=quadratures.squeezed_quadrature(params.s, polys).value,
            flag="",
        )
        return row

    def _transition(self, point):
        row = self._base(point)
        if "x" in point:
            polys = quadratures.TransitionPolys.normalized(point["x"])
            row.update(alpha=math.nan, tau_re=math.nan, tau_im=math.nan)
            row.update(A=math.nan, B=math.nan, C=math.nan)
            row.update(L=polys.L, M=polys.M, N=polys.N)
            x = point["x"]
        else:
            polys = quadratures.transition_polys(self._params(point))
            row.update(A=polys.A, B=polys.B, C=polys.C, L=polys.L, M=polys.M, N=polys.N)
            x = polys.x
        if x is None:
            row.update(x=math.nan, s_minus=math.nan, s_plus=math.nan, flag="undefined_x")
            return row
        s_minus, s_plus = quadratures.root_pair(x)
        row.update(x=x, s_minus=s_minus, s_plus=s_plus, flag="")
        return row

    def _photon_dist(self, point):
        params = self._params(point)
        n = point["n"]
        coeffs = disentangle_general(params)
        if self.parity == "even":
            photons, prob = 2 * n, photon_stats.p_even(n, coeffs)
        elif self.parity == "odd":
            photons, prob = 2 * n + 1, photon_stats.p_odd(n, coeffs)
        else:
            photons, prob = n, photon_stats.p_N(n, params)
        row = self._base(point)
        row.update(photons=photons, prob=prob, flag="")
        return row

    def _mandel(self, point):
        params = self._params(point)
        row = self._base(point)
        scan = mach_zehnder._scan_point(
            self.config, params.alpha, params.tau, params.theta, self.alpha_window
        )
        row.update(
            theta=scan.theta,
            mean_n=scan.mean_n,
            mean_n2=scan.mean_n2,
            mandel_q=scan.mandel_q,
            abs_p=scan.abs_p,
            flag="|".join(scan.flags),
        )
        return row

    # oracle -------------------------------------------------------------

    def oracle_deviation(self, point, row):
        """Largest |analytic - oracle| over the row's checked outputs, or None."""
        q = self.spec.quantity
        if q == "transition" and "x" in point:
            return None
        if row.get("flag") and q != "mandel":
            return None
        params = self._params(point)
        if q == "variances":
            ov = fock_oracle.oracle_variances(fock_oracle.oracle_state(params))
            return max(abs(ov.var_q - row["var_q"]), abs(ov.var_p - row["var_p"]))
        if q == "transition":
            # compare 1/2 + F -/+ G at s = 1/2 against the oracle
            mid = SqueezeParams(params.alpha, params.tau, 0.25 * math.pi)
            polys = quadratures.transition_polys(mid)
            ov = fock_oracle.oracle_variances(fock_oracle.oracle_state(mid))
            pair = polys.variances(mid.s)
            return max(abs(ov.var_q - pair.var_q), abs(ov.var_p - pair.var_p))
        if q == "photon_dist":
            n = point["n"]
            if self.parity == "even":
                ref = SqueezeParams(params.alpha, params.tau, 0.0)
                idx = 2 * n
            elif self.parity == "odd":
                ref = SqueezeParams(params.alpha, params.tau, 0.5 * math.pi)
                idx = 2 * n + 1
            else:
                ref, idx = params, n
            probs = fock_oracle.oracle_distribution(fock_oracle.oracle_state(ref)).probs
            return abs((probs[idx] if idx < len(probs) else 0.0) - row["prob"])
        obs = fock_oracle.oracle_mz(self.config, params)
        return max(abs(obs.mean_n - row["mean_n"]), abs(obs.mean_n2 - row["mean_n2"]))


def _port(value):
    text = str(value).lower().rstrip("'").replace("prime", "")
    try:
        return mach_zehnder.Port(text)
    except ValueError:
        raise InvalidParameterError(f"port must be a or b, got {value!r}") from None


@dataclass
class SweepResult:
    columns: tuple
    rows: list
    metadata: dict


def run_sweep(spec, workers=None):
    """Evaluate ``spec`` and return a :class:`SweepResult` in grid order."""
    evaluator = _Evaluator(spec)
    points = spec.points()
    if spec.quantity == "mandel":
        evaluator.alpha_window = mach_zehnder._alpha_window([p["alpha"] for p in points])
    workers = mach_zehnder.default_workers() if workers is None else max(1, int(workers))
    if workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(evaluator, points, chunksize=64))
    else:
        rows = [evaluator(p) for p in points]

    metadata = {
        "version": __version__,
        "quantity": spec.quantity,
        "spec": json.loads(spec.echo()),
        "seed": spec.seed,
        "points": len(rows),
    }
    if spec.oracle_check > 0 and rows:
        rng = np.random.default_rng(spec.seed)
        k = max(1, int(round(spec.oracle_check * len(points))))
        picks = sorted(rng.choice(len(points), size=min(k, len(points)), replace=False).tolist())
        devs = []
        for i in picks:
            try:
                d = evaluator.oracle_deviation(points[i], rows[i])
            except SqueezeLabError:
                d = None
            if d is not None:
                devs.append(d)
        metadata["oracle_check"] = {
            "fraction": spec.oracle_check,
            "seed": spec.seed,
            "checked": len(devs),
            "max_abs_dev": max(devs) if devs else None,
        }
    return SweepResult(evaluator.columns(), rows, metadata)


def write_csv(result, stream):
    meta = result.metadata
    stream.write(f"# squeezelab {meta['version']}\n")
    stream.write(f"# spec: {json.dumps(meta['spec'], sort_keys=True, separators=(',', ':'))}\n")
    stream.write(f"# seed: {meta['seed']}\n")
    stream.write(",".join(result.columns) + "\n")
    for row in result.rows:
        stream.write(",".join(_fmt(row.get(c, "")) for c in result.columns) + "\n")
    check = meta.get("oracle_check")
    if check is not None:
        dev = check["max_abs_dev"]
        dev_text = "nan" if dev is None else format(dev, ".3e")
        stream.write(
            f"# oracle_check: fraction={check['fraction']} seed={check['seed']} "
            f"checked={check['checked']} max_abs_dev={dev_text}\n"
        )


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        return float(v) if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    return v


def write_json(result, stream):
    doc = {
        "metadata": result.metadata,
        "rows": [{c: _json_value(row.get(c)) for c in result.columns} for row in result.rows],
    }
    json.dump(doc, stream, indent=1, sort_keys=False)
    stream.write("\n")


def render(result, output_format):
    buf = io.StringIO()
    (write_csv if output_format == "csv" else write_json)(result, buf)
    return buf.getvalue()
