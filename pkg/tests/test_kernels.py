"""Kernel construction: golden coefficients, defining conditions, evaluation."""

from fractions import Fraction
from math import factorial

import json

import numpy as np
import pytest

from deltafilter.kernels import (
    DeltaKernel,
    KernelError,
    KernelSpec,
    ScaledKernel,
    build_kernel,
    eval_polynomial,
    eval_scaled,
    eval_scaled_2d,
    kernel_to_json,
)
from deltafilter.spectral import clenshaw_curtis


# low-order closed forms (ascending monomial coefficients)
GOLDEN = {
    (1, 0): [Fraction(3, 4), 0, Fraction(-3, 4), 0],
    (1, 1): [Fraction(15, 16), 0, Fraction(-30, 16), 0, Fraction(15, 16), 0],
    (1, 2): [
        Fraction(35, 32), 0, Fraction(-105, 32), 0,
        Fraction(105, 32), 0, Fraction(-35, 32), 0,
    ],
    (3, 0): [Fraction(45, 32), 0, Fraction(-150, 32), 0, Fraction(105, 32), 0],
    (3, 1): [
        Fraction(105, 64), 0, Fraction(-525, 64), 0,
        Fraction(735, 64), 0, Fraction(-315, 64), 0,
    ],
    (3, 2): [
        Fraction(945, 512), 0, Fraction(-6300, 512), 0, Fraction(13230, 512),
        0, Fraction(-11340, 512), 0, Fraction(3465, 512), 0,
    ],
}


def moment(coeffs, i: int) -> Fraction:
    """Exact int_{-1}^{1} xi^i P(xi) dxi from rational coefficients."""
    return sum(
        (Fraction(2, i + j + 1) * c if (i + j) % 2 == 0 else Fraction(0))
        for j, c in enumerate(coeffs)
    )


def endpoint_derivative(coeffs, i: int, sign: int) -> Fraction:
    """Exact P^(i)(sign) from rational coefficients."""
    return sum(
        Fraction(factorial(j) // factorial(j - i)) * sign ** (j - i) * coeffs[j]
        for j in range(i, len(coeffs))
    )


def test_spec_validation():
    with pytest.raises(KernelError):
        KernelSpec(0, 0)
    with pytest.raises(KernelError):
        KernelSpec(-1, 2)
    with pytest.raises(KernelError):
        KernelSpec(3, -1)
    with pytest.raises(KernelError):
        KernelSpec(1.5, 0)
    assert KernelSpec(3, 8).degree == 3 + 2 * 9
    assert KernelSpec(1, 0).degree == 3


@pytest.mark.parametrize("mk", sorted(GOLDEN))
def test_golden_coefficients_exact(mk):
    kernel = build_kernel(KernelSpec(*mk))
    want = [Fraction(c) for c in GOLDEN[mk]]
    assert list(kernel.exact_coeffs) == want
    np.testing.assert_allclose(kernel.coeffs, [float(c) for c in want], rtol=0, atol=1e-12)


@pytest.mark.parametrize("m", [1, 3, 5, 7])
@pytest.mark.parametrize("k", [0, 2, 5, 8, 10])
def test_defining_conditions_exact(m, k):
    kernel = build_kernel(KernelSpec(m, k))
    c = kernel.exact_coeffs
    assert len(c) == kernel.spec.degree + 1
    assert moment(c, 0) == 1
    for i in range(1, m + 1):
        assert moment(c, i) == 0
    for sign in (1, -1):
        for i in range(k + 1):
            assert endpoint_derivative(c, i, sign) == 0


def test_even_symmetry():
    for mk in [(1, 0), (3, 8), (5, 8), (2, 3)]:
        kernel = build_kernel(KernelSpec(*mk))
        assert not any(kernel.exact_coeffs[1::2])
        xs = np.linspace(0.0, 1.0, 17)
        np.testing.assert_array_equal(
            eval_polynomial(kernel, xs), eval_polynomial(kernel, -xs)
        )


def test_eval_matches_exact_horner():
    kernel = build_kernel(KernelSpec(3, 8))
    for num in range(-64, 65, 7):
        xi = Fraction(num, 64)
        exact = sum(c * xi**j for j, c in enumerate(kernel.exact_coeffs))
        got = eval_polynomial(kernel, float(xi))
        assert got == pytest.approx(float(exact), rel=1e-13, abs=1e-13)


def test_eval_polynomial_shapes():
    kernel = build_kernel(KernelSpec(1, 0))
    assert isinstance(eval_polynomial(kernel, 0.0), float)
    assert eval_polynomial(kernel, 0.0) == 0.75
    out = eval_polynomial(kernel, np.array([0.0, 1.0, -1.0]))
    np.testing.assert_allclose(out, [0.75, 0.0, 0.0], atol=0)


def test_scaled_unit_mass_and_support():
    kernel = build_kernel(KernelSpec(3, 8))
    eps = 0.2
    rule = clenshaw_curtis(kernel.spec.degree + 2, center=0.0, halfwidth=eps)
    mass = rule.weights @ eval_scaled(kernel, eps, rule.nodes)
    assert mass == pytest.approx(1.0, abs=1e-13)
    xs = np.array([-1.0, -0.2000000001, 0.2000000001, 0.5, 1.0])
    np.testing.assert_array_equal(eval_scaled(kernel, eps, xs), np.zeros(5))
    assert eval_scaled(kernel, eps, 0.0) == eval_polynomial(kernel, 0.0) / eps


def test_scaled_validation_and_callable():
    kernel = build_kernel(KernelSpec(1, 1))
    with pytest.raises(KernelError):
        eval_scaled(kernel, 0.0, 0.1)
    with pytest.raises(KernelError):
        ScaledKernel(kernel, -0.5)
    sk = ScaledKernel(kernel, 0.3)
    xs = np.linspace(-0.4, 0.4, 9)
    np.testing.assert_array_equal(sk(xs), eval_scaled(kernel, 0.3, xs))


def test_eval_scaled_2d_is_product():
    kernel = build_kernel(KernelSpec(1, 2))
    dx = np.array([-0.15, 0.0, 0.2])[:, None]
    dy = np.array([0.05, 0.3])[None, :]
    got = eval_scaled_2d(kernel, 0.25, 0.35, dx, dy)
    want = eval_scaled(kernel, 0.25, dx) * eval_scaled(kernel, 0.35, dy)
    assert got.shape == (3, 2)
    np.testing.assert_array_equal(got, want)


def test_json_serialization():
    kernel = build_kernel(KernelSpec(3, 2))
    payload = json.loads(kernel_to_json(kernel))
    assert payload["m"] == 3 and payload["k"] == 2
    assert payload["degree"] == 9
    np.testing.assert_array_equal(payload["coeffs"], kernel.coeffs)


def test_build_is_cached():
    a = build_kernel(KernelSpec(3, 4))
    b = build_kernel(KernelSpec(3, 4))
    assert a is b
    assert isinstance(a, DeltaKernel)
    assert not a.coeffs.flags.writeable
