"""Compactly supported polynomial approximations of the Dirac delta.

A kernel of moment order m and smoothness order k is the unique polynomial
P of degree at most M = m + 2(k+1) on the reference support [-1, 1] with

    P^(i)(+-1) = 0   for i = 0..k      (extension by zero is C^k),
    int P dxi  = 1                      (unit mass),
    int xi^i P dxi = 0   for i = 1..m   (vanishing moments).

Scaling the support to half-width eps gives delta_eps(x) = P(x/eps)/eps,
which mollifies a function to accuracy O(eps^(m+1)) in smooth regions.

Construction assembles the (M+1) x (M+1) monomial-coefficient system and
solves it by Gaussian elimination with partial pivoting in exact rational
arithmetic.  Double precision is not good enough here: the endpoint
conditions mix O(1) moment rows with factorial-sized derivative rows, and a
float64 solve leaves endpoint-derivative residuals around 1e-4 at (m,k) =
(3,8) where the verification gates demand 1e-10.  The exact coefficients
are kept on the kernel; float64 views are derived for numerical work.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np


class KernelError(ValueError):
    """Kernel parameters are invalid or construction failed verification."""


@dataclass(frozen=True)
class KernelSpec:
    """Number of vanishing moments m >= 1 and endpoint smoothness k >= 0."""

    m: int
    k: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise KernelError("moment order m must be an integer >= 1")
        if not isinstance(self.k, int) or self.k < 0:
            raise KernelError("smoothness order k must be an integer >= 0")

    @property
    def degree(self) -> int:
        """Degree bound M = m + 2(k+1) of the kernel polynomial."""
        return self.m + 2 * (self.k + 1)


@dataclass(frozen=True)
class DeltaKernel:
    """Reference-support kernel polynomial with exact and float coefficients.

    coeffs holds the full ascending monomial coefficient array of length
    degree+1 (not trimmed: for odd m the leading coefficient is exactly
    zero).  even_factor holds the coefficients of q(s), s = xi^2, in the
    factorization P(xi) = (1 - xi^2)^(k+1) q(xi^2), which is the numerically
    stable evaluation route: the monomial coefficients reach 1e3 and beyond
    for k >= 8 and cancel catastrophically when summed directly.
    """

    spec: KernelSpec
    coeffs: np.ndarray
    exact_coeffs: tuple[Fraction, ...] = field(repr=False)
    even_factor: np.ndarray = field(repr=False)


def _condition_rows(spec: KernelSpec):
    """Rows/rhs of the defining linear system in the monomial basis."""
    n = spec.degree + 1
    rows, rhs = [], []
    for sign in (1, -1):
        for i in range(spec.k + 1):
            row = [Fraction(0)] * n
            for j in range(i, n):
                row[j] = Fraction(factorial(j) // factorial(j - i)) * sign ** (j - i)
            rows.append(row)
            rhs.append(Fraction(0))
    for i in range(spec.m + 1):
        row = [
            Fraction(2, i + j + 1) if (i + j) % 2 == 0 else Fraction(0)
            for j in range(n)
        ]
        rows.append(row)
        rhs.append(Fraction(1) if i == 0 else Fraction(0))
    return rows, rhs


def _gauss_solve(rows, rhs):
    """Gaussian elimination with partial pivoting over the rationals."""
    a = [list(r) for r in rows]
    b = list(rhs)
    n = len(b)
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        if a[piv][col] == 0:
            raise KernelError("kernel condition system is singular")
        a[col], a[piv] = a[piv], a[col]
        b[col], b[piv] = b[piv], b[col]
        inv = a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / inv
            if f:
                arow, acol = a[r], a[col]
                for c in range(col, n):
                    arow[c] -= f * acol[c]
                b[r] -= f * b[col]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        acc = b[r]
        arow = a[r]
        for c in range(r + 1, n):
            acc -= arow[c] * x[c]
        x[r] = acc / arow[r]
    return x


def _verify(spec: KernelSpec, coeffs):
    """Check every defining condition exactly; raise on any violation."""
    rows, rhs = _condition_rows(spec)
    for row, want in zip(rows, rhs):
        got = sum(c * v for c, v in zip(row, coeffs))
        if got != want:
            raise KernelError("kernel failed exact verification of its defining conditions")
    if any(coeffs[1::2]):
        raise KernelError("kernel polynomial is not even")


def _even_divide(p):
    """Exact division of p(s) by (1 - s); remainder must vanish."""
    if len(p) < 2:
        raise KernelError("kernel polynomial does not vanish at the support ends")
    q = []
    acc = Fraction(0)
    for c in p[:-1]:
        acc = c + acc
        q.append(acc)
    if p[-1] + acc != 0:
        raise KernelError("kernel polynomial does not vanish at the support ends")
    return q


@lru_cache(maxsize=None)
def _build(m: int, k: int) -> DeltaKernel:
    spec = KernelSpec(m, k)
    rows, rhs = _condition_rows(spec)
    exact = _gauss_solve(rows, rhs)
    _verify(spec, exact)
    even = list(exact[0::2])
    for _ in range(k + 1):
        even = _even_divide(even)
    coeffs = np.array([float(c) for c in exact])
    coeffs.setflags(write=False)
    factor = np.array([float(c) for c in even])
    factor.setflags(write=False)
    return DeltaKernel(spec, coeffs, tuple(exact), factor)


def build_kernel(spec: KernelSpec) -> DeltaKernel:
    """Construct (and cache) the kernel polynomial for a given (m, k)."""
    return _build(spec.m, spec.k)


def eval_polynomial(kernel: DeltaKernel, xi):
    """Evaluate P(xi) on the reference support, stable nested form.

    Horner on the even factor q(s), s = xi^2, times (1 - s)^(k+1).
    """
    xi = np.asarray(xi, dtype=float)
    s = xi * xi
    q = kernel.even_factor
    acc = np.full_like(s, q[-1])
    for c in q[-2::-1]:
        acc = acc * s + c
    out = acc * (1.0 - s) ** (kernel.spec.k + 1)
    return out if out.ndim else float(out)


def eval_scaled(kernel: DeltaKernel, epsilon: float, x):
    """delta_eps(x) = P(x/eps)/eps for |x| <= eps, zero outside."""
    if epsilon <= 0:
        raise KernelError("scaling parameter eps must be positive")
    x = np.asarray(x, dtype=float)
    xi = x / epsilon
    out = np.zeros_like(xi)
    inside = np.abs(xi) <= 1.0
    if np.any(inside):
        out[inside] = eval_polynomial(kernel, xi[inside]) / epsilon
    return out if out.ndim else float(out)


def eval_scaled_2d(kernel: DeltaKernel, eps_x: float, eps_y: float, dx, dy):
    """Tensor-product kernel delta_ex(dx) * delta_ey(dy) (broadcasting)."""
    return eval_scaled(kernel, eps_x, dx) * eval_scaled(kernel, eps_y, dy)


@dataclass(frozen=True)
class ScaledKernel:
    """A kernel bound to a support half-width; callable as delta_eps(x)."""

    kernel: DeltaKernel
    epsilon: float

    def __post_init__(self):
        if self.epsilon <= 0:
            raise KernelError("scaling parameter eps must be positive")

    def __call__(self, x):
        return eval_scaled(self.kernel, self.epsilon, x)


def kernel_to_json(kernel: DeltaKernel) -> str:
    """Serialize m, k, degree and the float monomial coefficients."""
    return json.dumps(
        {
            "m": kernel.spec.m,
            "k": kernel.spec.k,
            "degree": kernel.spec.degree,
            "coeffs": [float(c) for c in kernel.coeffs],
        }
    )
