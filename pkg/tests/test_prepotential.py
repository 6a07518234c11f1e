import math
from fractions import Fraction

import numpy as np
import pytest

from integrable2d.errors import DomainError
from integrable2d.prepotential import (AMPLITUDE, BETA0, BETA_PM,
                                       SIMULTANEOUS, PrepotentialParams,
                                       cubic_roots, f_taylor, g_eval, p_eval,
                                       p_jet, reduced_residual,
                                       reduced_residual_normalized,
                                       rescale_p, s_of_p)

PM = PrepotentialParams(BETA_PM, 1.0, 1.0, 1, 1)


# --- parameter validation ---------------------------------------------------

def test_params_validation():
    with pytest.raises(DomainError):
        PrepotentialParams("nope", 1.0)
    with pytest.raises(DomainError):
        PrepotentialParams(BETA0, 0.0)
    with pytest.raises(DomainError):
        PrepotentialParams(BETA0, 1.0, epsilon=2)
    with pytest.raises(DomainError):
        PrepotentialParams(BETA_PM, 1.0, mu=-1.0)
    with pytest.raises(DomainError):
        PrepotentialParams(BETA0, 1.0, C=0.5)


# --- power-law branches ------------------------------------------------------

def test_beta0_plus_value():
    assert p_eval(PrepotentialParams(BETA0, 2.0), 4.0) == 0.5


def test_beta0_minus_value():
    assert p_eval(PrepotentialParams(BETA0, 1.0, epsilon=-1), 8.0) \
        == pytest.approx(2.0)


def test_beta0_plus_jet_calculus():
    # p = 1/s at s = 1: (p, p', p'') = (1, -1, 2)
    pj = p_jet(PrepotentialParams(BETA0, 1.0), 1.0)
    assert pj.derivs()[:3] == pytest.approx((1.0, -1.0, 2.0))


def test_beta0_minus_jet_calculus():
    # p = s^(1/3) at s = 1: (p, p', p'') = (1, 1/3, -2/9)
    pj = p_jet(PrepotentialParams(BETA0, 1.0, epsilon=-1), 1.0)
    assert pj.derivs()[:3] == pytest.approx((1.0, 1.0 / 3.0, -2.0 / 9.0))


def test_beta0_domain():
    with pytest.raises(DomainError):
        p_eval(PrepotentialParams(BETA0, 1.0), 0.0)
    with pytest.raises(DomainError):
        p_jet(PrepotentialParams(BETA0, 1.0, epsilon=-1), 0.0)


def test_beta0_residual_exact_rational():
    # the inverse branch is rational, so exact arithmetic shows the
    # identity with zero rounding
    lam = Fraction(1)
    for s in (Fraction(1, 100), Fraction(3, 7), Fraction(50)):
        p = lam / s
        p1 = -p / s
        p2 = -2 * p1 / s
        assert reduced_residual((p, p1, p2), s) == 0


def test_beta0_float_residual_normalized():
    par = PrepotentialParams(BETA0, 1.0)
    for s in np.logspace(-2, 2, 25):
        r = reduced_residual_normalized(p_jet(par, float(s), 2), float(s))
        assert abs(r) < 1e-13


# --- closed-form family ------------------------------------------------------

def test_closed_form_zero_crossing():
    assert p_eval(PM, 2.0) == pytest.approx(0.0, abs=1e-14)
    assert p_eval(PM, -2.0) == pytest.approx(0.0, abs=1e-14)


def test_closed_form_frozen_value():
    # independent check: the value at s = 1 solves the branch cubic
    p = p_eval(PM, 1.0)
    assert p == pytest.approx(0.5407895304103689, rel=1e-12)
    assert 4.0 * p ** 3 - 3.0 * p ** 2 + 6.0 * p - 3.0 \
        == pytest.approx(0.0, abs=1e-12)


def test_closed_form_domain():
    with pytest.raises(DomainError):
        p_eval(PM, 0.0)
    sig = PrepotentialParams(BETA_PM, 1.0, 1.0, 1, -1)
    with pytest.raises(DomainError):
        p_eval(sig, 0.5)
    assert math.isfinite(p_eval(sig, 1.5))


def test_closed_form_residuals():
    for eps, sigma, grid in (
            (1, 1, np.logspace(-1, 1, 40)),
            (-1, 1, -np.logspace(-1, 1, 40)),
            (1, -1, np.linspace(1.05, 8.0, 40)),
    ):
        par = PrepotentialParams(BETA_PM, 1.0, 1.0, eps, sigma)
        for s in grid:
            r = reduced_residual_normalized(p_jet(par, float(s), 2), float(s))
            assert abs(r) < 1e-12, (eps, sigma, s, r)


def test_closed_form_regular_across_interior_zero():
    # the raw printed form has a 0 * inf shape at s = mu / (2 sqrt 2);
    # the implementation must stay finite and accurate there
    sstar = 1.0 / (2.0 * math.sqrt(2.0))
    for ds in (0.0, 1e-9, 1e-5, 1e-3):
        s = sstar + ds
        r = reduced_residual_normalized(p_jet(PM, s, 2), s)
        assert abs(r) < 1e-10


def test_p_jet_matches_fd():
    h = 1e-5
    d1 = (p_eval(PM, 2.0 + h) - p_eval(PM, 2.0 - h)) / (2.0 * h)
    assert p_jet(PM, 2.0).derivs()[1] == pytest.approx(d1, abs=1e-6)


def test_mu_lambda_scaling_identity():
    # p_{lam,mu}(s) = lam * p_{1,1}(s / mu)
    par = PrepotentialParams(BETA_PM, 2.5, 1.7, 1, 1)
    for s in (0.6, 1.9, -3.4):
        assert p_eval(par, s) == pytest.approx(
            2.5 * p_eval(PM, s / 1.7), rel=1e-13)


# --- implicit relation -------------------------------------------------------

def test_s_of_p_examples():
    assert s_of_p(0.0, 1, 1) == pytest.approx(2.0)
    assert s_of_p(0.0, -1, 1) == pytest.approx(-2.0)


def test_s_of_p_domain():
    with pytest.raises(DomainError):
        s_of_p(0.5, 1, -1)
    assert math.isfinite(s_of_p(1.5, 1, -1))


def test_round_trip_both_branches():
    for eps in (1, -1):
        par = PrepotentialParams(BETA_PM, 1.0, 1.0, eps, 1)
        for p in np.linspace(-2.0, 2.0, 17):
            s = s_of_p(float(p), eps, 1)
            assert p_eval(par, s) == pytest.approx(float(p), abs=1e-9)


def test_round_trip_sigma_minus():
    par = PrepotentialParams(BETA_PM, 1.0, 1.0, 1, -1)
    for p in (1.2, 1.8, 2.5, -1.3):
        s = s_of_p(p, 1, -1)
        if abs(s) < 1.0:
            continue
        assert p_eval(par, s) == pytest.approx(p, abs=1e-9)


# --- cubic roots -------------------------------------------------------------

def test_cubic_roots_contains_zero_at_s2():
    roots = cubic_roots(2.0, 1, 1)
    assert min(abs(roots)) < 1e-12


def test_cubic_roots_sign_flip_pairing():
    a = cubic_roots(2.0, 1, 1)
    b = cubic_roots(-2.0, -1, 1)
    assert len(a) == len(b)
    assert np.allclose(a, b, atol=1e-12)


def test_cubic_roots_defining_polynomial():
    rng = np.random.default_rng(5)
    for _ in range(120):
        s = float(rng.uniform(0.05, 10.0) * rng.choice([-1.0, 1.0]))
        eps = int(rng.choice([-1, 1]))
        sig = int(rng.choice([-1, 1]))
        for r in cubic_roots(s, eps, sig):
            val = (4.0 * eps * s * r ** 3 - 3.0 * r ** 2
                   + 6.0 * sig * eps * s * r + s * s - 4.0 * sig)
            assert abs(val) < 1e-9, (s, eps, sig, r, val)


def test_cubic_roots_degenerate_s0():
    assert cubic_roots(0.0, 1, 1).size == 0
    r = cubic_roots(0.0, 1, -1)
    assert r == pytest.approx([-2.0 / math.sqrt(3.0), 2.0 / math.sqrt(3.0)])


def test_cubic_roots_extra_solutions_sigma_minus():
    # inside |s| < 1 the lower-sign case has three real roots
    assert len(cubic_roots(0.5, 1, -1)) == 3
    assert len(cubic_roots(3.0, 1, 1)) == 1


def test_p_eval_agrees_with_roots():
    # the branch value appears among the roots of the polynomial taken at
    # the matched argument (the two labels differ by a sign flip of s)
    for eps in (1, -1):
        par = PrepotentialParams(BETA_PM, 1.0, 1.0, eps, 1)
        for s in np.logspace(-1, 1, 25):
            s = float(s) * (1 if eps == 1 else -1)
            p = p_eval(par, s)
            roots = cubic_roots(eps * s, eps, 1)
            assert min(abs(roots - p)) < 1e-9


# --- quadratic relation ------------------------------------------------------

def test_g_eval_values():
    assert g_eval(5.0, 0.0, 1) == pytest.approx(-5.0)
    assert g_eval(5.0, 0.0, -1) == pytest.approx(5.0 / 3.0)
    assert g_eval(0.0, 1.0, 1) == pytest.approx(-2.0 / 3.0)


def test_g_eval_factored_identity():
    for p in np.linspace(-3, 3, 25):
        for b2 in (0.0, 1.0, -1.0, 2.0):
            if p * p + b2 < 0:
                continue
            for eps in (1, -1):
                g = g_eval(float(p), b2, eps)
                assert (3.0 * g - p) * (g + p) \
                    == pytest.approx(4.0 * b2 / 3.0, abs=1e-12)


def test_g_eval_domain():
    with pytest.raises(DomainError):
        g_eval(0.5, -1.0, 1)


# --- residual functional -----------------------------------------------------

def test_reduced_residual_accepts_sequences():
    assert reduced_residual((1.0, -1.0, 2.0), 1.0) == 0.0
    assert reduced_residual((1.0, 0.0, 0.0), 1.0, C=2.0) == -2.0
    with pytest.raises(DomainError):
        reduced_residual((1.0, 2.0), 1.0)


def test_reduced_residual_nonzero_for_non_solution():
    # p = s^2 is not a solution: p p'' + 3 s p' p'' + 4 p'^2 = 2s^2+12s^2+16s^2
    s = seed_val = 1.5
    p, p1, p2 = seed_val ** 2, 2 * seed_val, 2.0
    assert reduced_residual((p, p1, p2), s) == pytest.approx(30.0 * s * s)


# --- rescalings --------------------------------------------------------------

def test_rescale_simultaneous_beta0_plus():
    par = rescale_p(PrepotentialParams(BETA0, 1.0), 2.0, SIMULTANEOUS)
    assert par.lam == pytest.approx(4.0)


def test_rescale_amplitude_keeps_zero_C():
    par = rescale_p(PM, 3.0, AMPLITUDE)
    assert par.C == 0.0
    assert par.lam == pytest.approx(3.0)


def test_rescale_realizes_transformed_solution():
    for base in (PM, PrepotentialParams(BETA0, 1.0),
                 PrepotentialParams(BETA0, 1.0, epsilon=-1)):
        for a in (0.5, 2.0, -1.5):
            par = rescale_p(base, a, SIMULTANEOUS)
            for s in (0.7, 3.1):
                assert p_eval(par, s) == pytest.approx(
                    a * p_eval(base, s / a), rel=1e-12, abs=1e-12)


def test_rescale_closure_of_residual():
    for mode in (SIMULTANEOUS, AMPLITUDE):
        for a in (0.5, 2.0):
            par = rescale_p(PM, a, mode)
            r = reduced_residual_normalized(p_jet(par, 3.0, 2), 3.0)
            assert abs(r) < 1e-10


def test_rescale_zero_factor():
    with pytest.raises(DomainError):
        rescale_p(PM, 0.0, AMPLITUDE)
    with pytest.raises(DomainError):
        rescale_p(PM, 1.0, "sideways")


# --- antiderivative coefficients ---------------------------------------------

def test_f_taylor_layout():
    cs = f_taylor(PrepotentialParams(BETA0, 1.0), 1.0, 3)
    # f' = p = 1/s: coefficients (0, p, p'/2, p''/6)
    assert cs == pytest.approx([0.0, 1.0, -0.5, 1.0 / 3.0])
    with pytest.raises(DomainError):
        f_taylor(PM, 1.0, 5)
