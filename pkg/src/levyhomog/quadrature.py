"""Shared quadrature kernels: composite Gauss-Legendre panels on linear and
logarithmic grids, plus the long-window averages used for ergodic media.

All routines are vectorized over the integrand evaluations; integrands must
accept ndarray arguments.
"""

from __future__ import annotations

import warnings
from functools import lru_cache

import numpy as np

from .errors import QuadratureError


@lru_cache(maxsize=32)
def gl_rule(n_nodes: int):
    """Gauss-Legendre nodes/weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    return (x + 1.0) / 2.0, w / 2.0


def panel_nodes(edges: np.ndarray, n_nodes: int = 16):
    """Nodes and weights for composite GL over consecutive panels.

    ``edges`` has shape (..., P+1); returns arrays of shape (..., P*n_nodes).
    """
    edges = np.asarray(edges, dtype=float)
    x01, w01 = gl_rule(n_nodes)
    lo = edges[..., :-1, None]
    width = np.diff(edges, axis=-1)[..., None]
    nodes = lo + width * x01
    weights = width * w01
    shape = edges.shape[:-1] + (-1,)
    return nodes.reshape(shape), weights.reshape(shape)


def integrate_panels(f, edges, n_nodes: int = 16) -> float:
    nodes, weights = panel_nodes(np.asarray(edges, dtype=float), n_nodes)
    return float(np.sum(f(nodes) * weights))


def integrate_linear(f, a: float, b: float, n_panels: int = 64, n_nodes: int = 16) -> float:
    """Composite GL on [a, b] with uniform panels."""
    return integrate_panels(f, np.linspace(a, b, n_panels + 1), n_nodes)


def log_edges(a: float, b: float, per_decade: float = 2.0) -> np.ndarray:
    """Geometric panel edges covering [a, b], roughly ``per_decade`` per decade."""
    if not (0.0 < a < b):
        raise QuadratureError(f"log_edges needs 0 < a < b, got [{a}, {b}]")
    n = max(1, int(np.ceil(np.log10(b / a) * per_decade)))
    return np.geomspace(a, b, n + 1)


def integrate_log(f, a: float, b: float, per_decade: float = 2.0, n_nodes: int = 16) -> float:
    """Composite GL on a geometric subdivision of [a, b] (0 < a < b)."""
    return integrate_panels(f, log_edges(a, b, per_decade), n_nodes)


def integrate_to_tolerance(f, a: float, b: float, rtol: float = 1e-10,
                           log_scale: bool = False, n_nodes: int = 16,
                           max_refine: int = 9) -> float:
    """Panel-doubling GL until two refinements agree to ``rtol`` (relative).

    Raises QuadratureError when the tolerance is unreachable.
    """
    panels = 8
    prev = None
    for _ in range(max_refine):
        if log_scale:
            edges = np.geomspace(a, b, panels + 1)
        else:
            edges = np.linspace(a, b, panels + 1)
        val = integrate_panels(f, edges, n_nodes)
        if prev is not None:
            scale = max(abs(val), abs(prev), 1e-300)
            if abs(val - prev) <= rtol * scale:
                return val
        prev = val
        panels *= 2
    raise QuadratureError(
        f"quadrature on [{a}, {b}] did not reach rtol={rtol} (last value {prev})")


def window_average(f, window: float = 256.0, max_doublings: int = 6,
                   rtol: float = 5e-3, n_nodes: int = 8, panels_per_unit: float = 4.0):
    """Long-window spatial average for ergodic, non-periodic media.

    Averages f over [0, W], doubling W until successive estimates agree to
    ``rtol``.  Returns (value, error_estimate, window_used); warns instead of
    raising when the tolerance is not met (the estimate is still usable).
    """
    prev = None
    val = None
    w = window
    for _ in range(max_doublings + 1):
        n_panels = int(w * panels_per_unit)
        val = integrate_linear(f, 0.0, w, n_panels, n_nodes) / w
        if prev is not None:
            err = abs(val - prev)
            if err <= rtol * max(1.0, abs(val)):
                return val, err, w
        prev = val
        w *= 2.0
    err = abs(val - prev)
    warnings.warn(
        f"window average did not converge: |delta|={err:.3e} after W={w / 2:.0f}",
        RuntimeWarning, stacklevel=2)
    return val, err, w / 2.0
