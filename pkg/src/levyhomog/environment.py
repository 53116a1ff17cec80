"""Concrete samplable realizations of the stationary ergodic 1D medium.

Four families are provided.  The periodic-random-phase family is the
reference: a uniform random phase on the period cell makes stationarity exact
and reduces medium averages to cell quadrature.  The lattice-iid family is
ergodic but not periodic; its averages use long windows.  The random-fourier
family is a band-limited Gaussian field on a large circle (periodic, exactly
stationary).  Media are immutable after draw and all evaluations are pure,
vectorized over positions.

Fields per sample: diffusion coefficient a (elliptic), potential V
(renormalized so the average of e^{-2V} is 1), and a jump-rate modulation
c(x, z) served in symmetrized form.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidParameterError, UnsupportedOrderError
from .quadrature import integrate_linear, window_average

__all__ = ["EnvironmentModel", "MediumSample", "ConductanceMedium", "draw_sample"]

_FAMILIES = ("constant", "periodic-random-phase", "lattice-iid-smoothed", "random-fourier")

# ---------------------------------------------------------------------------
# deterministic site hashing (lattice family)

_GOLD = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _splitmix(x: np.ndarray) -> np.ndarray:
    z = x + _GOLD
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _site_uniform(seed: int, stream: int, idx: np.ndarray) -> np.ndarray:
    """Deterministic U[0,1) value per lattice site, keyed (seed, stream, site)."""
    s = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    base = _splitmix(s ^ (np.uint64(stream + 1) * _M2))
    raw = _splitmix(_splitmix(idx.astype(np.int64).view(np.uint64) * _GOLD ^ base))
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


# ---------------------------------------------------------------------------
# trigonometric fields

@dataclass(frozen=True)
class TrigField:
    """base + sum_j [s_j sin(2 pi k_j x / L) + c_j cos(2 pi k_j x / L)]."""

    base: float
    modes: tuple  # of (k, amp_sin, amp_cos)
    period: float

    def _omegas(self):
        return np.array([2.0 * np.pi * k / self.period for k, _, _ in self.modes])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, self.base, dtype=float)
        for k, s, c in self.modes:
            w = 2.0 * np.pi * k / self.period
            out = out + s * np.sin(w * x) + c * np.cos(w * x)
        return out

    def deriv(self, x, order: int):
        x = np.asarray(x, dtype=float)
        if order == 0:
            return self(x)
        out = np.zeros_like(x, dtype=float)
        for k, s, c in self.modes:
            w = 2.0 * np.pi * k / self.period
            # d/dx rotates (sin, cos) -> (cos, -sin) and multiplies by w
            ss, cc = s, c
            for _ in range(order):
                ss, cc = -cc, ss
            out = out + (w ** order) * (ss * np.sin(w * x) + cc * np.cos(w * x))
        return out

    def amplitude(self) -> float:
        return float(sum(math.hypot(s, c) for _, s, c in self.modes))

    def bounds(self):
        amp = self.amplitude()
        return self.base - amp, self.base + amp


# ---------------------------------------------------------------------------
# smooth bump for the lattice family

def _bump_stack(tau: np.ndarray):
    """psi, psi', psi'' of the C-infinity bump exp(-1/(1-tau^2)) on |tau|<1."""
    tau = np.asarray(tau, dtype=float)
    inside = np.abs(tau) < 1.0 - 1e-9
    t = np.where(inside, tau, 0.0)
    q = 1.0 - t * t
    psi = np.where(inside, np.exp(-1.0 / q), 0.0)
    dphi = -2.0 * t / (q * q)
    d2phi = -2.0 / (q * q) - 8.0 * t * t / (q ** 3)
    dpsi = np.where(inside, psi * dphi, 0.0)
    d2psi = np.where(inside, psi * (d2phi + dphi * dphi), 0.0)
    return psi, dpsi, d2psi


class _LatticeField:
    """Normalized bump-smoothed iid uniforms: g(x) in [0, 1], C-infinity."""

    def __init__(self, seed: int, stream: int, width: float, offset: float):
        self.seed = seed
        self.stream = stream
        self.width = width
        self.offset = offset
        self.reach = int(math.ceil(width)) + 1

    def _stacks(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        t = x - self.offset
        base = np.floor(t).astype(np.int64)
        ks = np.arange(-self.reach, self.reach + 1)
        sites = base[..., None] + ks
        u = _site_uniform(self.seed, self.stream, sites)
        tau = (t[..., None] - sites) / self.width
        psi, dpsi, d2psi = _bump_stack(tau)
        dpsi = dpsi / self.width
        d2psi = d2psi / self.width ** 2
        sums = lambda arr: np.sum(arr, axis=-1)
        return (sums(psi), sums(dpsi), sums(d2psi),
                sums(u * psi), sums(u * dpsi), sums(u * d2psi))

    def eval(self, x, order: int = 0):
        n0, n1, n2, s0, s1, s2 = self._stacks(x)
        g = s0 / n0
        if order == 0:
            return g
        g1 = (s1 * n0 - s0 * n1) / n0 ** 2
        if order == 1:
            return g1
        if order == 2:
            return (s2 * n0 - s0 * n2) / n0 ** 2 - 2.0 * n1 * g1 / n0
        raise UnsupportedOrderError(f"lattice fields support derivatives up to 2, got {order}")


class _FourierField:
    """Gaussian random trig polynomial on a circle of circumference L."""

    def __init__(self, coeffs: np.ndarray, period: float):
        self.coeffs = coeffs  # shape (K, 2): (cos amp, sin amp) per mode k=1..K
        self.period = period

    def eval(self, x, order: int = 0):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x, dtype=float)
        for k in range(1, self.coeffs.shape[0] + 1):
            w = 2.0 * np.pi * k / self.period
            cc, ss = self.coeffs[k - 1]
            c_amp, s_amp = cc, ss
            for _ in range(order):
                c_amp, s_amp = s_amp, -c_amp  # d/dx of (cos, sin) pair
            out = out + (w ** order) * (c_amp * np.cos(w * x) + s_amp * np.sin(w * x))
        return out

    def sup_bound(self) -> float:
        return float(np.sum(np.hypot(self.coeffs[:, 0], self.coeffs[:, 1])))


def _tanh_stack(f, df, d2f, order: int):
    th = np.tanh(f)
    if order == 0:
        return th
    sech2 = 1.0 - th * th
    if order == 1:
        return sech2 * df
    if order == 2:
        return sech2 * d2f - 2.0 * th * sech2 * df * df
    raise UnsupportedOrderError(f"tanh-squashed fields support derivatives up to 2, got {order}")


# ---------------------------------------------------------------------------
# decay shapes for the jump-rate modulation

def _decay_shape(kind: str, rate: float) -> Callable[[np.ndarray], np.ndarray]:
    if kind == "exp":
        return lambda z: np.exp(-rate * np.abs(z))
    if kind == "gauss":
        return lambda z: np.exp(-(rate * z) ** 2)
    raise InvalidParameterError(f"unknown c decay shape {kind!r}")


_DEFAULTS = {
    "constant": {"a": 1.0, "v": 0.0, "c0": 1.0},
    "periodic-random-phase": {
        "period": 1.0, "a0": 1.0, "a_modes": [], "v_modes": [],
        "c0": 1.0, "c_modes": [], "c_decay": "exp", "c_rate": 1.0,
    },
    "lattice-iid-smoothed": {
        "a_lo": 1.0, "a_hi": 2.0, "v_amp": 0.0, "width": 1.0,
        "c0": 1.0, "c_amp": 0.0, "c_decay": "exp", "c_rate": 1.0,
    },
    "random-fourier": {
        "period": 8.0, "n_modes": 6, "mode_decay": 0.6,
        "a_mid": 1.5, "a_dev": 0.5, "v_dev": 0.0,
        "c0": 1.0, "c_amp": 0.0, "c_decay": "exp", "c_rate": 1.0,
    },
}


@dataclass(frozen=True)
class EnvironmentModel:
    """Declarative description of a medium family; validated on construction."""

    family: str
    params: dict

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise InvalidParameterError(
                f"unknown environment family {self.family!r}; choose from {_FAMILIES}")
        merged = dict(_DEFAULTS[self.family])
        unknown = set(self.params) - set(merged)
        if unknown:
            raise InvalidParameterError(
                f"unknown parameters for family {self.family!r}: {sorted(unknown)}")
        merged.update(self.params)
        object.__setattr__(self, "params", merged)
        self._validate()

    def _validate(self):
        p = self.params
        fam = self.family
        if fam == "constant":
            if p["a"] <= 0:
                raise InvalidParameterError("constant family needs a > 0")
            if p["c0"] <= 0:
                raise InvalidParameterError("constant family needs c0 > 0")
        elif fam == "periodic-random-phase":
            if p["period"] <= 0:
                raise InvalidParameterError("period must be positive")
            a_amp = _modes_amp(p["a_modes"])
            if p["a0"] - a_amp <= 0:
                raise InvalidParameterError(
                    f"ellipticity violated: a0={p['a0']} minus mode amplitude {a_amp} <= 0")
            c_amp = _modes_amp(p["c_modes"])
            if p["c0"] - c_amp <= 0:
                raise InvalidParameterError("c modulation exceeds its baseline c0")
        elif fam == "lattice-iid-smoothed":
            if not (0 < p["a_lo"] <= p["a_hi"]):
                raise InvalidParameterError("need 0 < a_lo <= a_hi")
            if not (0.6 <= p["width"] <= 3.0):
                # clamp range keeps the bump overlap (and derivative bounds) safe
                raise InvalidParameterError("smoothing width must lie in [0.6, 3]")
            if p["c0"] - abs(p["c_amp"]) <= 0:
                raise InvalidParameterError("c modulation exceeds its baseline c0")
        elif fam == "random-fourier":
            if p["a_mid"] - p["a_dev"] <= 0:
                raise InvalidParameterError("fourier a range must stay positive")
            if not (0 < p["mode_decay"] < 1):
                raise InvalidParameterError("mode_decay must lie in (0, 1)")
            if p["c0"] - abs(p["c_amp"]) <= 0:
                raise InvalidParameterError("c modulation exceeds its baseline c0")

    def ellipticity_constant(self) -> float:
        """Smallest M with 1/M <= a <= M for every sample of this model."""
        lo, hi = self.a_bounds()
        return max(hi, 1.0 / lo)

    def a_bounds(self):
        p = self.params
        if self.family == "constant":
            return p["a"], p["a"]
        if self.family == "periodic-random-phase":
            amp = _modes_amp(p["a_modes"])
            return p["a0"] - amp, p["a0"] + amp
        if self.family == "lattice-iid-smoothed":
            return p["a_lo"], p["a_hi"]
        return p["a_mid"] - p["a_dev"], p["a_mid"] + p["a_dev"]


def _modes_amp(modes) -> float:
    return float(sum(math.hypot(float(s), float(c)) for _, s, c in modes))


# ---------------------------------------------------------------------------
# samples

class MediumSample:
    """One realization of a medium; immutable, deterministic in (model, seed)."""

    def __init__(self, model: EnvironmentModel, seed: int):
        self.model = model
        self.seed = int(seed)
        p = model.params
        fam = model.family
        rng = np.random.Generator(np.random.Philox(key=np.uint64(self.seed & (2 ** 64 - 1))))

        self._c_decay = None
        if fam == "constant":
            self.period = 1.0
            self._a_const = float(p["a"])
            self._c0 = float(p["c0"])
            self._c_amp = 0.0
        elif fam == "periodic-random-phase":
            L = float(p["period"])
            self.period = L
            u = rng.uniform(0.0, L)
            self._a_field = TrigField(p["a0"], _as_modes(p["a_modes"]), L)
            self._v_field = TrigField(0.0, _as_modes(p["v_modes"]), L)
            self._c_field = TrigField(0.0, _as_modes(p["c_modes"]), L)
            self._phase = u
            self._c0 = float(p["c0"])
            self._c_amp = self._c_field.amplitude()
            self._c_decay = _decay_shape(p["c_decay"], p["c_rate"])
        elif fam == "lattice-iid-smoothed":
            self.period = None
            u = rng.uniform(0.0, 1.0)
            w = float(p["width"])
            self._lat_a = _LatticeField(self.seed, 0, w, u)
            self._lat_v = _LatticeField(self.seed, 1, w, u)
            self._lat_c = _LatticeField(self.seed, 2, w, u)
            self._c0 = float(p["c0"])
            self._c_amp = abs(float(p["c_amp"]))
            self._c_decay = _decay_shape(p["c_decay"], p["c_rate"])
        elif fam == "random-fourier":
            L = float(p["period"])
            self.period = L
            k = np.arange(1, int(p["n_modes"]) + 1)
            sigma = float(p["mode_decay"]) ** k
            self._fr_a = _FourierField(rng.standard_normal((len(k), 2)) * sigma[:, None], L)
            self._fr_v = _FourierField(rng.standard_normal((len(k), 2)) * sigma[:, None], L)
            self._fr_c = _FourierField(rng.standard_normal((len(k), 2)) * sigma[:, None], L)
            self._c0 = float(p["c0"])
            self._c_amp = abs(float(p["c_amp"]))
            self._c_decay = _decay_shape(p["c_decay"], p["c_rate"])

        # renormalize V so that the medium average of e^{-2V} equals 1
        self.v_shift = 0.0
        z = self.medium_average(lambda x: np.exp(-2.0 * self._v_raw(x)))
        self.v_shift = 0.5 * math.log(z)

    # -- raw fields -----------------------------------------------------

    def _v_raw(self, x):
        fam = self.model.family
        x = np.asarray(x, dtype=float)
        if fam == "constant":
            return np.full_like(x, float(self.model.params["v"]))
        if fam == "periodic-random-phase":
            return self._v_field(x + self._phase)
        if fam == "lattice-iid-smoothed":
            amp = float(self.model.params["v_amp"])
            return amp * (2.0 * self._lat_v.eval(x) - 1.0)
        return float(self.model.params["v_dev"]) * _tanh_stack(self._fr_v.eval(x), 0, 0, 0)

    def _v_raw_deriv(self, x, order):
        fam = self.model.family
        x = np.asarray(x, dtype=float)
        if fam == "constant":
            return np.zeros_like(x)
        if fam == "periodic-random-phase":
            return self._v_field.deriv(x + self._phase, order)
        if fam == "lattice-iid-smoothed":
            amp = float(self.model.params["v_amp"])
            return amp * 2.0 * self._lat_v.eval(x, order)
        f = self._fr_v
        return float(self.model.params["v_dev"]) * _tanh_stack(
            f.eval(x), f.eval(x, 1), f.eval(x, 2), order)

    def _c_mod(self, x, order=0):
        """Spatial modulation p(x) multiplying the decay shape in c_raw."""
        fam = self.model.family
        x = np.asarray(x, dtype=float)
        if fam == "constant":
            return np.zeros_like(x)
        if fam == "periodic-random-phase":
            return self._c_field.deriv(x + self._phase, order) if order else \
                self._c_field(x + self._phase)
        if fam == "lattice-iid-smoothed":
            amp = float(self.model.params["c_amp"])
            return amp * 2.0 * self._lat_c.eval(x, order) if order else \
                amp * (2.0 * self._lat_c.eval(x) - 1.0)
        f = self._fr_c
        amp = float(self.model.params["c_amp"])
        return amp * _tanh_stack(f.eval(x), f.eval(x, 1), f.eval(x, 2), order)

    # -- public fields ----------------------------------------------------

    def eval_a(self, x):
        fam = self.model.family
        x = np.asarray(x, dtype=float)
        if fam == "constant":
            return np.full_like(x, self._a_const)
        if fam == "periodic-random-phase":
            return self._a_field(x + self._phase)
        if fam == "lattice-iid-smoothed":
            p = self.model.params
            return p["a_lo"] + (p["a_hi"] - p["a_lo"]) * self._lat_a.eval(x)
        p = self.model.params
        return p["a_mid"] + p["a_dev"] * _tanh_stack(self._fr_a.eval(x), 0, 0, 0)

    def eval_v(self, x):
        """Renormalized potential V (medium average of e^{-2V} equals 1)."""
        return self._v_raw(x) + self.v_shift

    def e2v(self, x):
        return np.exp(2.0 * self.eval_v(x))

    def em2v(self, x):
        return np.exp(-2.0 * self.eval_v(x))

    def eval_c_raw(self, x, z):
        x = np.asarray(x, dtype=float)
        z = np.asarray(z, dtype=float)
        if self._c_decay is None:
            return np.broadcast_to(np.float64(self._c0), np.broadcast_shapes(x.shape, z.shape)).copy()
        return self._c0 + self._c_mod(x) * self._c_decay(z)

    def eval_c(self, x, z):
        """Symmetrized jump-rate kernel 0.5*(c_raw(x+z, -z) + c_raw(x, z))."""
        x = np.asarray(x, dtype=float)
        z = np.asarray(z, dtype=float)
        return 0.5 * (self.eval_c_raw(x + z, -z) + self.eval_c_raw(x, z))

    def eval_derivative(self, field: str, order: int, x, z=None):
        """Analytic spatial derivative of order ``order`` of a realized field."""
        if order < 0:
            raise UnsupportedOrderError("derivative order must be nonnegative")
        x = np.asarray(x, dtype=float)
        fam = self.model.family
        if field == "a":
            if order == 0:
                return self.eval_a(x)
            if fam == "constant":
                return np.zeros_like(x)
            if fam == "periodic-random-phase":
                return self._a_field.deriv(x + self._phase, order)
            if fam == "lattice-iid-smoothed":
                p = self.model.params
                return (p["a_hi"] - p["a_lo"]) * self._lat_a.eval(x, order)
            p = self.model.params
            f = self._fr_a
            return p["a_dev"] * _tanh_stack(f.eval(x), f.eval(x, 1), f.eval(x, 2), order)
        if field == "V":
            if order == 0:
                return self.eval_v(x)
            return self._v_raw_deriv(x, order)
        if field == "c_at_z":
            if z is None:
                raise InvalidParameterError("c_at_z derivative needs the jump size z")
            z = np.asarray(z, dtype=float)
            if order == 0:
                return self.eval_c(x, z)
            if self._c_decay is None:
                return np.zeros_like(x)
            # d^k/dx^k of 0.5*(p(x+z) s(-z) + p(x) s(z)) with s even
            s = self._c_decay(z)
            return 0.5 * s * (self._c_mod(x + z, order) + self._c_mod(x, order))
        raise InvalidParameterError(f"unknown field {field!r}")

    def drift_b(self, x):
        """b = a'/2 - a V'."""
        return 0.5 * self.eval_derivative("a", 1, x) \
            - self.eval_a(x) * self.eval_derivative("V", 1, x)

    def drift_b_alt(self, x):
        """Same drift through (e^{2V}/2) d/dx (e^{-2V} a); agreement is exact
        up to rounding and is asserted by the test-suite."""
        da = self.eval_derivative("a", 1, x)
        dv = self.eval_derivative("V", 1, x)
        em2v = self.em2v(x)
        return 0.5 * self.e2v(x) * (da * em2v - 2.0 * dv * self.eval_a(x) * em2v)

    # -- averages ---------------------------------------------------------

    def medium_average(self, f, panels: int = 1024, n_nodes: int = 8,
                       window: float = 256.0, rtol: float = 5e-3):
        """Medium expectation of a field expression.

        Periodic families: exact cell quadrature (composite Gauss-Legendre).
        Ergodic non-periodic families: long-window average with doubling; a
        RuntimeWarning is issued if successive windows disagree.
        """
        f = _as_field(self, f)
        if self.period is not None:
            return integrate_linear(f, 0.0, self.period, panels, n_nodes) / self.period
        val, _err, _w = window_average(f, window=window, rtol=rtol)
        return val

    def medium_average_report(self, f, **kw):
        """Window-average variant returning (value, error_estimate, window)."""
        f = _as_field(self, f)
        if self.period is not None:
            val = integrate_linear(f, 0.0, self.period, kw.get("panels", 1024),
                                   kw.get("n_nodes", 8)) / self.period
            return val, 0.0, self.period
        return window_average(f, window=kw.get("window", 256.0),
                              rtol=kw.get("rtol", 5e-3))

    # -- bounds and metadata ----------------------------------------------

    def a_bounds(self):
        return self.model.a_bounds()

    def v_bounds(self):
        """Conservative interval containing the normalized V."""
        fam = self.model.family
        p = self.model.params
        if fam == "constant":
            raw = (p["v"], p["v"])
        elif fam == "periodic-random-phase":
            amp = _modes_amp(p["v_modes"])
            raw = (-amp, amp)
        elif fam == "lattice-iid-smoothed":
            raw = (-abs(p["v_amp"]), abs(p["v_amp"]))
        else:
            raw = (-abs(p["v_dev"]), abs(p["v_dev"]))
        return raw[0] + self.v_shift, raw[1] + self.v_shift

    def c_bounds(self):
        """Bounds on the symmetrized kernel over all (x, z)."""
        return self._c0 - self._c_amp, self._c0 + self._c_amp

    @property
    def c_limit(self) -> float:
        """Large-|z| limit of the symmetrized kernel (modulations decay)."""
        return self._c0

    def to_json(self) -> str:
        return json.dumps({
            "family": self.model.family,
            "seed": self.seed,
            "params": self.model.params,
            "v_shift": self.v_shift,
        }, sort_keys=True)

    @staticmethod
    def from_json(blob: str) -> "MediumSample":
        data = json.loads(blob)
        model = EnvironmentModel(data["family"], _tupled(data["params"]))
        sample = MediumSample(model, data["seed"])
        if abs(sample.v_shift - data["v_shift"]) > 1e-12:
            raise InvalidParameterError("serialized normalization constant does not reproduce")
        return sample


def _as_modes(modes):
    return tuple((int(k), float(s), float(c)) for k, s, c in modes)


def _tupled(params: dict) -> dict:
    out = dict(params)
    for key in ("a_modes", "v_modes", "c_modes"):
        if key in out:
            out[key] = [tuple(m) for m in out[key]]
    return out


def _as_field(sample: MediumSample, f):
    if callable(f):
        return f
    shortcuts = {
        "a": sample.eval_a,
        "V": sample.eval_v,
        "e2v": sample.e2v,
        "em2v": sample.em2v,
        "b": sample.drift_b,
    }
    if f in shortcuts:
        return shortcuts[f]
    raise InvalidParameterError(f"unknown field expression {f!r}")


def draw_sample(model: EnvironmentModel, seed: int) -> MediumSample:
    """Materialize one realization; deterministic and immutable."""
    return MediumSample(model, seed)


# ---------------------------------------------------------------------------
# conductance medium for the random-walk example

class ConductanceMedium(MediumSample):
    """Medium derived from a smooth conductance field W: constant diffusion
    coefficient, potential V = -ln(W(x-1/2) + W(x+1/2))/2 (renormalized), and
    the two-atom jump-rate pair c(x, +-1) = W(x +- 1/2) (renormalized with V).
    """

    def __init__(self, w_sample: MediumSample, a_diffusion: float = 1.0):
        lo, hi = w_sample.a_bounds()
        if not (0 < lo <= hi):
            raise InvalidParameterError("conductances must be bounded away from 0")
        if a_diffusion <= 0:
            raise InvalidParameterError("diffusion coefficient must be positive")
        self.w_sample = w_sample
        self.model = w_sample.model
        self.seed = w_sample.seed
        self.period = w_sample.period
        self._a_const = float(a_diffusion)
        self._c0 = None
        self._c_amp = 0.0
        self._c_decay = None
        self.v_shift = 0.0
        z = self.medium_average(lambda x: self._s_sum(x))
        self.v_shift = 0.5 * math.log(z)
        self._mean_s = z

    def w(self, x, order: int = 0):
        return self.w_sample.eval_derivative("a", order, x)

    def _s_sum(self, x, order: int = 0):
        x = np.asarray(x, dtype=float)
        return self.w(x - 0.5, order) + self.w(x + 0.5, order)

    def eval_a(self, x):
        return np.full_like(np.asarray(x, dtype=float), self._a_const)

    def _v_raw(self, x):
        return -0.5 * np.log(self._s_sum(x))

    def _v_raw_deriv(self, x, order):
        s0 = self._s_sum(x)
        s1 = self._s_sum(x, 1)
        if order == 1:
            return -0.5 * s1 / s0
        if order == 2:
            s2 = self._s_sum(x, 2)
            return -0.5 * s2 / s0 + 0.5 * (s1 / s0) ** 2
        raise UnsupportedOrderError(f"conductance medium supports V orders 1..2, got {order}")

    def eval_derivative(self, field, order, x, z=None):
        x = np.asarray(x, dtype=float)
        if field == "a":
            return self.eval_a(x) if order == 0 else np.zeros_like(x)
        if field == "V":
            return self.eval_v(x) if order == 0 else self._v_raw_deriv(x, order)
        raise InvalidParameterError("conductance medium has fields 'a' and 'V' plus atoms")

    def eval_c_raw(self, x, z):
        return self.eval_c(x, z)

    def eval_c(self, x, z):
        """Atom values: c(x, +-1) = W(x +- 1/2)/mean(S); zero elsewhere."""
        x = np.asarray(x, dtype=float)
        z = np.asarray(z, dtype=float)
        out = np.zeros(np.broadcast_shapes(x.shape, z.shape), dtype=float)
        xb, zb = np.broadcast_arrays(x, z)
        for atom in (1.0, -1.0):
            m = zb == atom
            if np.any(m):
                out[m] = self.w(xb[m] + 0.5 * atom) / self._mean_s
        return out

    def p_plus(self, x):
        """Probability of a +1 jump: c(x, 1) e^{2V(x)}; the pair sums to 1."""
        return self.w(np.asarray(x, dtype=float) + 0.5) / self._s_sum(x)

    def c_bounds(self):
        lo, hi = self.w_sample.a_bounds()
        return lo / self._mean_s, hi / self._mean_s

    @property
    def c_limit(self):
        raise InvalidParameterError("atomic kernels have no density tail limit")

    def to_json(self) -> str:
        return json.dumps({
            "family": "conductance",
            "base": json.loads(self.w_sample.to_json()),
            "a_diffusion": self._a_const,
            "v_shift": self.v_shift,
        }, sort_keys=True)
