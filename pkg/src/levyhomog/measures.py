"""Symmetric Levy measure families for the jump rates.

Every density family chi is an even density on R \\ {0} exposed through one
positive side: ``density(z)``, the one-sided tail ``tail(z) = int_z^inf chi``,
its inverse, and truncated second moments.  Closed forms are used where they
exist (stable, tempered); the slowly-varying families fall back to monotone
log-log tables built once per instance.

The atomic pair (unit masses at +-1) is a separate class: it never goes
through the tail-inversion construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.special import gamma as gamma_fn
from scipy.special import gammainc, gammaincc

from .errors import InvalidParameterError
from .quadrature import gl_rule, integrate_log, panel_nodes

__all__ = [
    "StableMeasure",
    "TemperedStableMeasure",
    "LogModifiedMeasure",
    "MultiStableMeasure",
    "DiracPairMeasure",
    "make_measure",
    "upper_incomplete_gamma",
]


def upper_incomplete_gamma(s: float, x):
    """Gamma(s, x) for real s (possibly negative, non-integer) and x > 0.

    Negative s handled by the recurrence Gamma(s, x) = (Gamma(s+1, x)
    - x^s e^{-x}) / s.
    """
    x = np.asarray(x, dtype=float)
    if s > 0:
        return gammaincc(s, x) * gamma_fn(s)
    return (upper_incomplete_gamma(s + 1.0, x) - x ** s * np.exp(-x)) / s


class DensityMeasure:
    """Base for even Levy-measure densities; one-sided conventions throughout."""

    alpha_tail: float  # tail exponent: tail(z) ~ const * z^{-alpha_tail} (mod slow variation)
    pure_jump: bool

    def density(self, z):
        raise NotImplementedError

    def tail(self, z):
        raise NotImplementedError

    def inv_tail(self, y):
        raise NotImplementedError

    def mass2_inner(self, r):
        """int_{0<z<=r} z^2 chi(z) dz (one side)."""
        raise NotImplementedError

    def mass2_total(self) -> float:
        """int_0^inf z^2 chi(z) dz; inf in the pure-jump regime."""
        raise NotImplementedError

    # -- derived checks -------------------------------------------------

    def levy_integral(self) -> float:
        """int_R min(1, z^2) chi(dz), finite for every admissible family."""
        return 2.0 * (float(self.mass2_inner(1.0)) + float(self.tail(1.0)))

    def mprime_constant(self, n_grid: int = 256) -> float:
        """sup over z in (0, 1] of tail(z) / (z chi(z)), reported for the
        tail-domination hypothesis of the gamma construction."""
        z = np.geomspace(1e-10, 1.0, n_grid)
        ratio = self.tail(z) / (z * self.density(z))
        return float(np.max(ratio))

    def _newton_inv_tail(self, y, lo, hi):
        """Monotone Newton/bisection inverse of tail on a bracket."""
        y = np.asarray(y, dtype=float)
        lo = np.broadcast_to(np.asarray(lo, dtype=float), y.shape).copy()
        hi = np.broadcast_to(np.asarray(hi, dtype=float), y.shape).copy()
        z = np.sqrt(lo * hi)
        for _ in range(200):
            f = self.tail(z) - y
            z_new = z + f / self.density(z)  # tail' = -chi
            big = f > 0  # tail too large -> z too small
            lo = np.where(big, np.maximum(lo, z), lo)
            hi = np.where(~big, np.minimum(hi, z), hi)
            bad = ~((z_new > lo) & (z_new < hi) & np.isfinite(z_new))
            z_new = np.where(bad, np.sqrt(lo * hi), z_new)
            done = np.abs(self.tail(z_new) - y) <= 1e-13 * np.abs(y)
            z = z_new
            if np.all(done | (hi / lo - 1.0 < 1e-14)):
                break
        return z


@dataclass(frozen=True)
class StableMeasure(DensityMeasure):
    """chi(z) = scale * |z|^{-1-alpha}, 0 < alpha < 2."""

    alpha: float
    scale: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.alpha < 2.0):
            raise InvalidParameterError(f"stable index must lie in (0,2), got {self.alpha}")
        if self.scale <= 0:
            raise InvalidParameterError("stable scale must be positive")

    alpha_tail = property(lambda self: self.alpha)  # type: ignore[assignment]
    pure_jump = True

    def density(self, z):
        return self.scale * np.abs(z) ** (-1.0 - self.alpha)

    def tail(self, z):
        return self.scale / self.alpha * np.asarray(z, dtype=float) ** (-self.alpha)

    def inv_tail(self, y):
        return (self.scale / (self.alpha * np.asarray(y, dtype=float))) ** (1.0 / self.alpha)

    def mass2_inner(self, r):
        return self.scale * np.asarray(r, dtype=float) ** (2.0 - self.alpha) / (2.0 - self.alpha)

    def mass2_total(self) -> float:
        return np.inf


@dataclass(frozen=True)
class TemperedStableMeasure(DensityMeasure):
    """chi(z) = scale * e^{-|z|} |z|^{-1-alpha}; diffusive regime."""

    alpha: float
    scale: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.alpha < 2.0):
            raise InvalidParameterError(f"tempered index must lie in (0,2), got {self.alpha}")
        if self.scale <= 0:
            raise InvalidParameterError("tempered scale must be positive")

    alpha_tail = property(lambda self: self.alpha)  # type: ignore[assignment]
    pure_jump = False

    def density(self, z):
        za = np.abs(z)
        return self.scale * np.exp(-za) * za ** (-1.0 - self.alpha)

    def tail(self, z):
        return self.scale * upper_incomplete_gamma(-self.alpha, np.asarray(z, dtype=float))

    def inv_tail(self, y):
        y = np.asarray(y, dtype=float)
        # stable tail (no tempering) over-estimates mass: gives a lower z bracket
        guess_hi = (self.scale / (self.alpha * y)) ** (1.0 / self.alpha)
        lo = np.minimum(guess_hi * 1e-3, 1e-12)
        hi = np.maximum(guess_hi * 1.5, 80.0)
        return self._newton_inv_tail(y, lo, hi)

    def mass2_inner(self, r):
        # int_0^r z^{1-alpha} e^{-z} dz = gamma_lower(2-alpha, r)
        return self.scale * gammainc(2.0 - self.alpha, np.asarray(r, dtype=float)) \
            * gamma_fn(2.0 - self.alpha)

    def mass2_total(self) -> float:
        return self.scale * gamma_fn(2.0 - self.alpha)


@dataclass(frozen=True)
class MultiStableMeasure(DensityMeasure):
    """chi(z) = int_{a1}^{a2} |z|^{-1-a} da, scaled; pure jump."""

    alpha1: float
    alpha2: float
    scale: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.alpha1 < self.alpha2 < 2.0):
            raise InvalidParameterError(
                f"multi-stable needs 0 < alpha1 < alpha2 < 2, got [{self.alpha1}, {self.alpha2}]")
        if self.scale <= 0:
            raise InvalidParameterError("multi-stable scale must be positive")

    alpha_tail = property(lambda self: self.alpha1)  # type: ignore[assignment]
    pure_jump = True

    def density(self, z):
        # (|z|^{-1-a1} - |z|^{-1-a2}) / ln|z|, stabilized near |z| = 1
        za = np.abs(np.asarray(z, dtype=float))
        ell = np.log(za)
        d = self.alpha2 - self.alpha1
        with np.errstate(divide="ignore", invalid="ignore"):
            generic = -np.expm1(-d * ell) / ell
        small = np.abs(ell) < 1e-5
        series = d - ell * d * d / 2.0 + ell * ell * d ** 3 / 6.0
        frac = np.where(small, series, generic)
        return self.scale * za ** (-1.0 - self.alpha1) * frac

    def _alpha_quad(self, fn: Callable[[np.ndarray], np.ndarray]):
        x01, w01 = gl_rule(48)
        a = self.alpha1 + (self.alpha2 - self.alpha1) * x01
        w = w01 * (self.alpha2 - self.alpha1)
        return fn(a, w)

    def tail(self, z):
        z = np.asarray(z, dtype=float)

        def fn(a, w):
            return np.sum(z[..., None] ** (-a) / a * w, axis=-1)

        return self.scale * self._alpha_quad(fn)

    def inv_tail(self, y):
        y = np.asarray(y, dtype=float)
        lo = (self.scale / (self.alpha1 * y)) ** (1.0 / self.alpha1) * 1e-4
        hi = np.maximum((self.scale * (self.alpha2 - self.alpha1) / (self.alpha1 * y))
                        ** (1.0 / self.alpha1),
                        (self.scale * (self.alpha2 - self.alpha1) / (self.alpha2 * y))
                        ** (1.0 / self.alpha2)) * 10.0
        lo = np.minimum(lo, hi * 1e-8)
        return self._newton_inv_tail(y, lo, hi)

    def mass2_inner(self, r):
        r = np.asarray(r, dtype=float)

        def fn(a, w):
            return np.sum(r[..., None] ** (2.0 - a) / (2.0 - a) * w, axis=-1)

        return self.scale * self._alpha_quad(fn)

    def mass2_total(self) -> float:
        return np.inf


@dataclass(frozen=True)
class LogModifiedMeasure(DensityMeasure):
    """chi(z) = scale * ln(1+|z|)^beta |z|^{-1-alpha} (stable-attracted kernels).

    Tails are tabulated on a log-log grid with a two-term asymptotic closure at
    the top; inside [1e-12, 1e14] the table is monotone-interpolated (PCHIP).
    """

    alpha: float
    beta: float
    scale: float = 1.0
    _tables: dict = field(default_factory=dict, compare=False, repr=False)

    Z_LO = 1e-12
    Z_HI = 1e16

    def __post_init__(self):
        if not (0.0 < self.alpha < 2.0):
            raise InvalidParameterError(f"index must lie in (0,2), got {self.alpha}")
        if self.beta >= self.alpha:
            # keeps the tail-domination constant M' finite near z = 0
            raise InvalidParameterError(
                f"log exponent beta={self.beta} must be < alpha={self.alpha}")
        if self.scale <= 0:
            raise InvalidParameterError("scale must be positive")

    alpha_tail = property(lambda self: self.alpha)  # type: ignore[assignment]
    pure_jump = True

    def modifier(self, z):
        """Slowly varying factor h with chi = scale * h(|z|) |z|^{-1-alpha}."""
        return np.log1p(np.abs(z)) ** self.beta

    def density(self, z):
        za = np.abs(np.asarray(z, dtype=float))
        return self.scale * self.modifier(za) * za ** (-1.0 - self.alpha)

    def _tail_top_closure(self, z: float) -> float:
        # two IBP terms of int_z^inf ln(1+r)^beta r^{-1-alpha} dr
        l1 = np.log1p(z)
        lead = z ** (-self.alpha) * l1 ** self.beta / self.alpha
        c1 = self.beta / (self.alpha * l1) * z / (1.0 + z)
        return float(self.scale * lead * (1.0 + c1))

    def _build_tables(self):
        z_grid = np.geomspace(self.Z_LO, self.Z_HI, 2048)
        # cumulative panel integrals from the top closure downwards
        nodes, weights = panel_nodes(z_grid[None, :], 20)
        vals = (self.density(nodes) * weights).reshape(len(z_grid) - 1, -1).sum(axis=1)
        tails = np.empty_like(z_grid)
        tails[-1] = self._tail_top_closure(z_grid[-1])
        tails[:-1] = tails[-1] + np.cumsum(vals[::-1])[::-1]
        log_z, log_t = np.log(z_grid), np.log(tails)
        self._tables["tail"] = PchipInterpolator(log_z, log_t, extrapolate=True)
        self._tables["inv"] = PchipInterpolator(log_t[::-1], log_z[::-1], extrapolate=True)
        # truncated second moment, cumulative from the bottom
        m2_vals = (nodes ** 2 * self.density(nodes) * weights).reshape(len(z_grid) - 1, -1).sum(axis=1)
        m2 = np.concatenate([[0.0], np.cumsum(m2_vals)])
        # contribution below Z_LO: chi ~ scale z^{beta-1-alpha} there
        lo_corr = self.scale * self.Z_LO ** (2.0 + self.beta - self.alpha) \
            / (2.0 + self.beta - self.alpha)
        self._tables["m2"] = PchipInterpolator(log_z, np.log(m2 + lo_corr + 1e-300))

    def _table(self, name):
        if not self._tables:
            self._build_tables()
        return self._tables[name]

    def tail(self, z):
        z = np.asarray(z, dtype=float)
        return np.exp(self._table("tail")(np.log(z)))

    def inv_tail(self, y):
        y = np.asarray(y, dtype=float)
        z0 = np.exp(self._table("inv")(np.log(y)))
        # one Newton polish against the tabulated tail
        f = self.tail(z0) - y
        return z0 + f / self.density(z0)

    def mass2_inner(self, r):
        r = np.asarray(r, dtype=float)
        return np.exp(self._table("m2")(np.log(r)))

    def mass2_total(self) -> float:
        return np.inf

    # rate equation helper: h(1/delta) with h the slowly varying modifier
    def rate_modifier(self, z):
        return self.modifier(z)


@dataclass(frozen=True)
class DiracPairMeasure:
    """chi = mass * (delta_{+1} + delta_{-1}); finite activity, diffusive."""

    mass: float = 1.0

    def __post_init__(self):
        if self.mass <= 0:
            raise InvalidParameterError("atom mass must be positive")

    pure_jump = False
    atoms = (1.0, -1.0)

    def mass2_total(self) -> float:
        return self.mass  # one side

    def levy_integral(self) -> float:
        return 2.0 * self.mass


def make_measure(kind: str, **params):
    """Factory used by the config layer."""
    kinds = {
        "alpha-stable": StableMeasure,
        "tempered": TemperedStableMeasure,
        "multi-stable": MultiStableMeasure,
        "log-modified": LogModifiedMeasure,
        "dirac-pair": DiracPairMeasure,
    }
    if kind not in kinds:
        raise InvalidParameterError(f"unknown Levy measure kind: {kind!r}")
    return kinds[kind](**params)
