"""Chebyshev-Gauss-Lobatto collocation: nodes, differentiation, barycentric
interpolation, and Clenshaw-Curtis quadrature on shifted subintervals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class GridError(ValueError):
    """Invalid grid or quadrature parameters."""


def cgl_nodes(n: int) -> np.ndarray:
    """Ascending Chebyshev-Gauss-Lobatto nodes -cos(i*pi/n), i = 0..n."""
    if n < 1:
        raise GridError("node count parameter must be >= 1")
    return -np.cos(np.arange(n + 1) * np.pi / n)


def barycentric_weights(n: int) -> np.ndarray:
    """Barycentric weights for the CGL nodes (up to a common factor)."""
    w = np.ones(n + 1)
    w[1::2] = -1.0
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def differentiation_matrix(nodes: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Collocation derivative matrix D[i, j] = l_j'(x_i).

    Off-diagonal entries from the barycentric form, diagonal by the
    negative-sum trick so that D annihilates constants exactly.
    """
    dx = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(dx, 1.0)
    d = (weights[None, :] / weights[:, None]) / dx
    np.fill_diagonal(d, 0.0)
    np.fill_diagonal(d, -d.sum(axis=1))
    return d


@dataclass(frozen=True)
class SpectralGrid:
    """Order n collocation grid on [-1, 1] with n+1 nodes."""

    n: int
    nodes: np.ndarray
    weights: np.ndarray
    diff: np.ndarray


def build_grid(n: int) -> SpectralGrid:
    """Build the CGL grid of order n.

    n must be even (the filter support rule assumes a center node) and at
    least 4.
    """
    if not isinstance(n, int) or n < 4 or n % 2:
        raise GridError("grid order N must be an even integer >= 4")
    x = cgl_nodes(n)
    w = barycentric_weights(n)
    d = differentiation_matrix(x, w)
    for a in (x, w, d):
        a.setflags(write=False)
    return SpectralGrid(n, x, w, d)


def basis_matrix(grid: SpectralGrid, points) -> np.ndarray:
    """Lagrange basis values L[p, i] = l_i(points[p]) by barycentric evaluation.

    Points that coincide with a node bitwise get an exact one-hot row.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    dx = pts[:, None] - grid.nodes[None, :]
    hit = dx == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        c = grid.weights[None, :] / dx
        out = c / c.sum(axis=1, keepdims=True)
    rows = hit.any(axis=1)
    if rows.any():
        out[rows] = hit[rows].astype(float)
    return out


def interpolate(grid: SpectralGrid, values: np.ndarray, x):
    """Evaluate the interpolant of nodal values at x (scalar or array)."""
    pts = np.atleast_1d(np.asarray(x, dtype=float))
    res = basis_matrix(grid, pts) @ np.asarray(values, dtype=float)
    return float(res[0]) if np.isscalar(x) or np.ndim(x) == 0 else res


@dataclass(frozen=True)
class QuadratureRule:
    """Clenshaw-Curtis rule on [center - halfwidth, center + halfwidth]."""

    order: int
    center: float
    halfwidth: float
    nodes: np.ndarray
    weights: np.ndarray


def clenshaw_curtis(order: int, center: float = 0.0, halfwidth: float = 1.0) -> QuadratureRule:
    """Clenshaw-Curtis rule with nodes center - halfwidth*cos(pi*q/order).

    The order+1 point rule integrates polynomials of degree <= order
    exactly.  Weights are computed by direct cosine sums, O(order^2); the
    rules used here are small enough that an FFT buys nothing.
    """
    if not isinstance(order, int) or order < 1:
        raise GridError("quadrature order must be an integer >= 1")
    if halfwidth <= 0:
        raise GridError("quadrature halfwidth must be positive")
    q = order
    idx = np.arange(q + 1)
    w = np.ones(q + 1)
    if q >= 2:
        j = np.arange(1, q // 2 + 1)
        b = np.where(2 * j == q, 1.0, 2.0)
        w = 1.0 - np.cos(np.outer(idx, 2.0 * j) * np.pi / q) @ (b / (4.0 * j * j - 1.0))
    c = np.full(q + 1, 2.0)
    c[0] = c[-1] = 1.0
    w = w * c / q
    nodes = center - halfwidth * np.cos(idx * np.pi / q)
    return QuadratureRule(q, float(center), float(halfwidth), nodes, halfwidth * w)


def integrate(rule: QuadratureRule, f) -> float:
    """Apply the rule to a callable or an array of nodal values."""
    vals = f(rule.nodes) if callable(f) else np.asarray(f, dtype=float)
    if vals.shape != rule.nodes.shape:
        raise GridError("integrand values do not match the rule's nodes")
    return float(rule.weights @ vals)
