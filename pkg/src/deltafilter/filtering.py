"""Smoothing matrices: convolution of the collocation interpolant against a
scaled delta kernel, evaluated at the collocation nodes."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .kernels import DeltaKernel, KernelSpec, eval_scaled
from .spectral import SpectralGrid, basis_matrix, clenshaw_curtis


class FilterError(ValueError):
    """Invalid filter parameters."""


def scaling_parameter(n: int, n_d: float) -> float:
    """Support half-width eps = sin(pi*n_d / (2n)) spanning about n_d nodes.

    n_d counts grid nodes at the domain center and may be fractional;
    requires 0 < n_d < n.
    """
    if not 0 < n_d < n:
        raise FilterError("node span N_d must satisfy 0 < N_d < N")
    return float(np.sin(np.pi * n_d / (2.0 * n)))


def theoretical_scaling_parameter(n: int, m: int, k: int, prefactor: float = 1.0) -> float:
    """Conservative support rule eps = prefactor * n**(-k/(m+k+2)).

    Sufficient for O(eps^(m+1)) filtering accuracy with inexact quadrature;
    the grid-proportional rule above is the default because the convolution
    integrals here are evaluated by an exact-degree quadrature.  Exposed for
    configuration experiments only.
    """
    return float(prefactor * float(n) ** (-k / (m + k + 2)))


@dataclass(frozen=True)
class FilterMatrix:
    """Dense smoothing matrix S with identity rows near the boundary.

    Row j holds quadrature weights for int u_N(tau) delta_eps(x_j - tau)
    dtau, so filtered = S @ u.  interior marks rows whose kernel support
    stays inside [-1, 1]; the remaining rows (|x_j| > 1 - eps) are exact
    identity rows and leave nodal values untouched.
    """

    matrix: np.ndarray
    epsilon: float
    spec: KernelSpec
    interior: np.ndarray
    n_d: float | None = None

    @property
    def n(self) -> int:
        return self.matrix.shape[0] - 1


def build_filter_matrix(
    grid: SpectralGrid,
    kernel: DeltaKernel,
    epsilon: float,
    n_d: float | None = None,
) -> FilterMatrix:
    """Assemble the smoothing matrix for one grid/kernel/support combination.

    Each interior row integrates l_i(tau) * delta_eps(x_j - tau) over
    [x_j - eps, x_j + eps] with a Clenshaw-Curtis rule of order
    M + N + 2, exact for the degree M + N polynomial integrand.  The
    kernel factor is identical for every row because the quadrature nodes
    are a fixed offset pattern around x_j.
    """
    if not 0.0 < epsilon < 1.0:
        raise FilterError("support half-width eps must lie in (0, 1)")
    n = grid.n
    order = kernel.spec.degree + n + 2
    ref = clenshaw_curtis(order)
    offsets = epsilon * ref.nodes
    kernel_vals = eval_scaled(kernel, epsilon, offsets)
    wk = (epsilon * ref.weights) * kernel_vals

    s = np.eye(n + 1)
    interior = np.abs(grid.nodes) <= 1.0 - epsilon
    for j in np.nonzero(interior)[0]:
        pts = grid.nodes[j] + offsets
        assert pts[0] >= -1.0 - 1e-12 and pts[-1] <= 1.0 + 1e-12
        s[j, :] = wk @ basis_matrix(grid, pts)
    s.setflags(write=False)
    interior.setflags(write=False)
    return FilterMatrix(s, float(epsilon), kernel.spec, interior, n_d)


def apply_1d(fm: FilterMatrix, u: np.ndarray) -> np.ndarray:
    """Filter nodal values; u may be (n+1,) or stacked (ncomp, n+1)."""
    u = np.asarray(u, dtype=float)
    if u.ndim == 1:
        return fm.matrix @ u
    if u.ndim == 2:
        return u @ fm.matrix.T
    raise FilterError("apply_1d expects a vector or a stack of vectors")


def apply_2d(fm_x: FilterMatrix, fm_y: FilterMatrix, u: np.ndarray) -> np.ndarray:
    """Filter a tensor-grid field u[i, j] ~ (x_i, y_j) in both directions."""
    u = np.asarray(u, dtype=float)
    if u.shape != (fm_x.matrix.shape[0], fm_y.matrix.shape[0]):
        raise FilterError("field shape does not match the filter matrices")
    return fm_x.matrix @ u @ fm_y.matrix.T


def filter_error_indicator(fm: FilterMatrix, u: np.ndarray) -> np.ndarray:
    """Pointwise |u - S u|: small where u is smooth, O(1) at discontinuities.

    Exactly zero on the unfiltered boundary rows.
    """
    return np.abs(np.asarray(u, dtype=float) - apply_1d(fm, u))


def save_filter_matrix(fm: FilterMatrix, path) -> None:
    """Dump the matrix with its parameters as JSON (row-major values)."""
    payload = {
        "n": fm.n,
        "m": fm.spec.m,
        "k": fm.spec.k,
        "n_d": fm.n_d,
        "epsilon": fm.epsilon,
        "interior": [bool(b) for b in fm.interior],
        "matrix": [[float(v) for v in row] for row in fm.matrix],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)


def load_filter_matrix(path) -> FilterMatrix:
    """Inverse of save_filter_matrix."""
    with open(path) as fh:
        payload = json.load(fh)
    matrix = np.array(payload["matrix"], dtype=float)
    interior = np.array(payload["interior"], dtype=bool)
    matrix.setflags(write=False)
    interior.setflags(write=False)
    return FilterMatrix(
        matrix,
        float(payload["epsilon"]),
        KernelSpec(payload["m"], payload["k"]),
        interior,
        payload["n_d"],
    )
