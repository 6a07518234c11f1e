import math
from fractions import Fraction

import numpy as np
import pytest

from integrable2d.errors import DomainError
from integrable2d.jets import (Jet1, Jet2, deriv, fd_deriv, jet_arith,
                               partial_jet, pow_real, seed, seed1,
                               signed_cbrt, sqrt, value)


def test_seed_coordinate_jets():
    X, Y = seed(1.0, 2.0, 2)
    assert X.value == 1.0 and X.deriv(1, 0) == 1.0 and X.deriv(0, 1) == 0.0
    assert Y.value == 2.0 and Y.deriv(0, 1) == 1.0 and Y.deriv(1, 0) == 0.0
    assert X.deriv(2, 0) == 0.0 and X.deriv(1, 1) == 0.0


def test_seed_order_zero():
    X, Y = seed(0.0, 0.0, 0)
    assert X.coeffs == (0.0,) and Y.coeffs == (0.0,)


def test_seed_order_bounds():
    with pytest.raises(DomainError):
        seed(0.0, 0.0, 5)
    with pytest.raises(DomainError):
        seed(0.0, 0.0, -1)


def test_deriv_of_coordinate():
    X, _ = seed(3.0, 5.0, 4)
    assert deriv(X, 1, 0) == 1.0


def test_deriv_x_cubed():
    X, _ = seed(2.0, 0.0, 3)
    assert (X ** 3).deriv(3, 0) == 6.0


def test_deriv_constant():
    c = Jet2.constant(7.0, 2, (0.0, 0.0))
    assert c.deriv(0, 0) == 7.0
    assert c.deriv(1, 0) == 0.0


def test_deriv_beyond_order_raises():
    X, _ = seed(1.0, 1.0, 2)
    with pytest.raises(DomainError):
        X.deriv(2, 1)


def test_product_mixed_partial():
    X, Y = seed(1.0, 2.0, 2)
    assert (X * Y).deriv(1, 1) == 1.0


def test_x2y_derivatives():
    # d_xx (x^2 y) = 2y and d_x d_y (x^2 y) = 2x
    X, Y = seed(1.0, 2.0, 3)
    f = X * X * Y
    assert f.deriv(2, 0) == 4.0
    assert f.deriv(1, 1) == 2.0


def test_polynomial_jets_match_symbolic_derivatives():
    rng = np.random.default_rng(7)
    pts = [(1.5, -0.75), (0.5, 2.0), (-1.25, 0.25)]
    for _ in range(20):
        coeffs = {(i, j): int(rng.integers(-9, 10))
                  for i in range(5) for j in range(5 - i)}
        x0, y0 = pts[int(rng.integers(0, len(pts)))]
        X, Y = seed(x0, y0, 4)
        f = sum(c * X ** i * Y ** j for (i, j), c in coeffs.items())
        for i in range(5):
            for j in range(5 - i):
                expected = Fraction(0)
                for (a, b), c in coeffs.items():
                    if a >= i and b >= j:
                        factor = (math.perm(a, i) * math.perm(b, j))
                        expected += (c * factor * Fraction(x0) ** (a - i)
                                     * Fraction(y0) ** (b - j))
                got = f.deriv(i, j)
                assert got == pytest.approx(float(expected), rel=1e-12,
                                            abs=1e-12)


def test_division_inverts_product():
    X, Y = seed(1.2, 0.7, 4)
    f = 2.0 + X * Y + X ** 2
    g = 1.0 + Y ** 2
    h = (f / g) * g
    assert np.allclose(h.coeffs, f.coeffs, rtol=1e-14, atol=1e-14)


def test_division_by_zero_value_raises():
    X, _ = seed(0.0, 0.0, 2)
    with pytest.raises(DomainError):
        1.0 / X


def test_mixed_centers_raise():
    X1, _ = seed(0.0, 0.0, 2)
    X2, _ = seed(1.0, 0.0, 2)
    with pytest.raises(DomainError):
        X1 + X2


def test_sqrt_jet_against_calculus():
    X, _ = seed(4.0, 0.0, 3)
    r = sqrt(X)
    assert r.value == 2.0
    assert r.deriv(1, 0) == pytest.approx(0.25)
    assert r.deriv(2, 0) == pytest.approx(-1.0 / 32.0)


def test_sqrt_domain():
    with pytest.raises(DomainError):
        sqrt(-1.0)
    X, _ = seed(-2.0, 0.0, 1)
    with pytest.raises(DomainError):
        sqrt(X)


def test_signed_cbrt_constant():
    c = Jet2.constant(-8.0, 2, (0.0, 0.0))
    assert signed_cbrt(c).value == pytest.approx(-2.0)


def test_signed_cbrt_odd():
    for v in (0.3, 1.0, 17.5, 1e-6):
        assert signed_cbrt(-v) == -signed_cbrt(v)


def test_signed_cbrt_jet_negative_base():
    X, _ = seed(-8.0, 0.0, 2)
    r = signed_cbrt(X)
    assert r.value == pytest.approx(-2.0)
    # d/dx x^(1/3) = (1/3) x^(-2/3), positive on both branches
    assert r.deriv(1, 0) == pytest.approx(1.0 / 12.0)


def test_signed_cbrt_jet_at_zero_raises():
    X, _ = seed(0.0, 0.0, 1)
    with pytest.raises(DomainError):
        signed_cbrt(X)


def test_pow_real_jet():
    X, _ = seed(2.0, 0.0, 2)
    f = pow_real(X, 1.5)
    assert f.value == pytest.approx(2.0 ** 1.5)
    assert f.deriv(1, 0) == pytest.approx(1.5 * 2.0 ** 0.5)
    with pytest.raises(DomainError):
        pow_real(-1.0 * X, 0.5)


def test_jet_arith_dispatch():
    X, Y = seed(1.0, 2.0, 2)
    assert jet_arith("mul", X, Y).deriv(1, 1) == 1.0
    assert jet_arith("add", X, 1.0).value == 2.0
    assert jet_arith("sub", X, Y).value == -1.0
    assert jet_arith("div", X, Y).value == 0.5
    assert jet_arith("sqrt", 4.0) == 2.0
    assert jet_arith("signed_cbrt", -8.0) == pytest.approx(-2.0)
    assert jet_arith("pow_real", 2.0, 3.0) == 8.0
    with pytest.raises(DomainError):
        jet_arith("nope", X)


def test_fraction_coefficients_flow_through():
    X, Y = seed(Fraction(1, 3), Fraction(2), 2)
    f = (X * Y + 1) / (1 + X)
    assert isinstance(f.value, Fraction)
    assert f.value == Fraction(5, 4)


def test_composition_matches_fd():
    def f(x, y):
        return math.sqrt(1.0 + x * x + y * y) / (2.0 + x * y)

    X, Y = seed(0.7, -0.4, 3)
    jet = sqrt(1.0 + X * X + Y * Y) / (2.0 + X * Y)
    for (i, j) in ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2)):
        assert jet.deriv(i, j) == pytest.approx(
            fd_deriv(f, 0.7, -0.4, i, j), abs=1e-6)


def test_fd_x2y():
    assert fd_deriv(lambda x, y: x * x * y, 1.0, 2.0, 2, 0) \
        == pytest.approx(4.0, abs=1e-6)


def test_fd_constant():
    assert fd_deriv(lambda x, y: 3.5, 0.3, 0.4, 1, 0) \
        == pytest.approx(0.0, abs=1e-12)


def test_fd_richardson_sharper():
    f = lambda x, y: math.sin(x) * math.exp(y)
    plain = abs(fd_deriv(f, 0.5, 0.2, 2, 0, h=1e-3) + math.sin(0.5) * math.exp(0.2))
    rich = abs(fd_deriv(f, 0.5, 0.2, 2, 0, h=1e-3, richardson=True)
               + math.sin(0.5) * math.exp(0.2))
    assert rich < plain


def test_fd_nonfinite_sample_raises():
    def f(x, y):
        return math.inf if x == 0.0 else 1.0 / x

    with pytest.raises(DomainError):
        fd_deriv(f, 0.0, 0.0, 2, 0, h=1.0)


def test_fd_bad_step():
    with pytest.raises(DomainError):
        fd_deriv(lambda x, y: x, 0.0, 0.0, 1, 0, h=0.0)


def test_partial_jet():
    X, Y = seed(1.3, 0.4, 4)
    f = X ** 3 * Y + Y ** 2
    fx = partial_jet(f, 1, 0)
    assert fx.value == pytest.approx(f.deriv(1, 0))
    assert fx.deriv(1, 1) == pytest.approx(f.deriv(2, 1))
    with pytest.raises(DomainError):
        partial_jet(f, 3, 2)


def test_jet1_basics():
    s = seed1(2.0, 3)
    p = 1.0 / s
    assert p.derivs() == pytest.approx((0.5, -0.25, 0.25, -0.375))
    assert deriv(p, 2) == pytest.approx(0.25)
    assert value(p) == 0.5
    assert value(4.2) == 4.2


def test_jet1_sqrt_cbrt():
    s = seed1(4.0, 2)
    assert sqrt(s).derivs() == pytest.approx((2.0, 0.25, -1.0 / 32.0))
    s = seed1(8.0, 1)
    assert signed_cbrt(s).derivs() == pytest.approx((2.0, 1.0 / 12.0))
