"""Semi-infinite quadrature for imaginary-frequency integrals.

Integrals over xi in (0, inf) are mapped to t in (0, 1) through
xi = xi_c * t / (1 - t) and evaluated with Gauss-Legendre rules of doubling
order until two successive estimates agree.  The open rule never samples
xi = 0 or xi = inf.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import QuadratureError


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-8
    initial_nodes: int = 64
    max_nodes: int = 4096
    xi_c: float | None = None

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError("rel_tol must lie in (0, 1)")
        if self.initial_nodes < 8:
            raise ValueError("initial_nodes must be >= 8")
        if self.max_nodes < self.initial_nodes:
            raise ValueError("max_nodes must be >= initial_nodes")
        if self.xi_c is not None and not self.xi_c > 0.0:
            raise ValueError("xi_c must be positive")

    def with_scale(self, xi_c) -> "QuadratureSpec":
        return self if self.xi_c is not None else replace(self, xi_c=float(xi_c))


class QuadResult(NamedTuple):
    value: np.ndarray | float
    error: float
    nodes: int


@lru_cache(maxsize=32)
def _unit_rule(n):
    """Gauss-Legendre nodes and weights on (0, 1)."""
    x, w = np.polynomial.legendre.leggauss(n)
    t = 0.5 * (x + 1.0)
    wt = 0.5 * w
    t.setflags(write=False)
    wt.setflags(write=False)
    return t, wt


def mapped_rule(n, xi_c):
    """Nodes and weights for int_0^inf with the rational map of scale xi_c."""
    t, wt = _unit_rule(n)
    one_minus = 1.0 - t
    xi = xi_c * t / one_minus
    w = wt * xi_c / (one_minus * one_minus)
    return xi, w


def _estimate(f, n, xi_c, vectorized):
    xi, w = mapped_rule(n, xi_c)
    if vectorized:
        vals = np.asarray(f(xi), dtype=float)
        if vals.ndim == 0:
            vals = np.full(n, float(vals))
    else:
        vals = np.array([f(x) for x in xi], dtype=float)
    if vals.shape[:1] != (n,):
        raise ValueError(f"integrand returned shape {vals.shape} for {n} nodes")
    bad = ~np.isfinite(vals)
    if np.any(bad):
        idx = np.nonzero(bad.reshape(n, -1).any(axis=1))[0][0]
        raise QuadratureError(f"integrand is not finite at xi = {xi[idx]!r}", xi=float(xi[idx]))
    wv = w.reshape((n,) + (1,) * (vals.ndim - 1)) * vals
    # np.sum uses deterministic pairwise summation along the node axis
    return np.sum(wv, axis=0)


def integrate_semi_infinite(f, spec: QuadratureSpec | None = None, xi_c=None,
                            vectorized=True) -> QuadResult:
    """Integrate ``f`` over (0, inf).

    Parameters
    ----------
    f : callable
        With ``vectorized=True`` (default) ``f`` receives a 1-D array of
        nodes and returns values with that leading dimension; trailing
        dimensions are integrated component-wise.  Otherwise ``f`` is called
        once per node with a float.
    spec : QuadratureSpec, optional
    xi_c : float, optional
        Map scale, used when ``spec.xi_c`` is unset.

    Returns
    -------
    QuadResult
        ``value``, the last successive difference as ``error``, and the node
        count of the accepted estimate.
    """
    spec = spec or QuadratureSpec()
    scale = spec.xi_c if spec.xi_c is not None else xi_c
    if scale is None or not scale > 0.0:
        raise ValueError("a positive map scale xi_c is required")
    n = spec.initial_nodes
    estimates = [_estimate(f, n, scale, vectorized)]
    while 2 * n <= spec.max_nodes:
        n *= 2
        cur = _estimate(f, n, scale, vectorized)
        err = float(np.max(np.abs(cur - estimates[-1])))
        if err <= spec.rel_tol * float(np.max(np.abs(cur))):
            value = cur if np.ndim(cur) else float(cur)
            return QuadResult(value, err, n)
        estimates.append(cur)
    raise QuadratureError(
        f"no convergence with {n} nodes (rel_tol={spec.rel_tol})",
        estimates=tuple(estimates[-2:]),
    )
