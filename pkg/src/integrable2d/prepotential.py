"""Solution families of the reduced integrability ODE.

The ODE in the invariant variable s reads

    p * p'' + 3 s * p' * p'' + 4 * p'^2 = C ,

and all families provided here solve it at C = 0: the two power-law
branches (p = lam / s and p = lam * s^(1/3)) and a two-parameter closed
form obtained from the quadratic relation

    (3 g - p) (g + p) = (4/3) beta^2 ,    p'(s) = g(p) / s ,

with beta^2 normalised to sigma = +1 or -1.  The closed form is stated
in the robust two-cube-root shape

    p(s) = lam * mu / (4 s) * [ 1 + (cbrt(G + H) + cbrt(G - H)) / mu^2 ]

    G = mu^6 + 20 sigma mu^4 s^2 - 8 mu^2 s^4
    H = 8 mu^2 s (s^2 + sigma mu^2)^(3/2)

which is algebraically identical to the one-root form
1 + (mu^2 - 8 sigma s^2) D^(-1/3) + D^(1/3) / mu^2 with D = G +/- H
(because G^2 - H^2 = mu^6 (mu^2 - 8 sigma s^2)^3), but stays finite and
well conditioned where D crosses zero (at |s| = mu / (2 sqrt 2) for
sigma = +1) by always extracting the larger-magnitude root directly and
the smaller one through the factorisation.

Branch bookkeeping: the implicit relation

    s = (p + 2 eps sqrt(p^2 + sigma)) (p + sqrt(p^2 + sigma))^(-2 eps)

covers, for sigma = +1, the half-lines s > 0 (eps = +1) and s < 0
(eps = -1) of one globally odd solution p(s); ``p_eval`` implements that
global function so that ``p_eval`` and ``s_of_p`` are mutual inverses on
each branch.  The eps parameter therefore selects the branch of the
implicit relation (where its zero crossing sits, s = 2 eps mu), not an
independent solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError
from .jets import Jet1, seed1, signed_cbrt, sqrt, value

BETA0 = "beta0"
BETA_PM = "beta-pm"

FAMILIES = (BETA0, BETA_PM)

SIMULTANEOUS = "simultaneous"
AMPLITUDE = "amplitude"


@dataclass(frozen=True)
class PrepotentialParams:
    """Parameters selecting one solution of the reduced ODE at C = 0.

    family   one of "beta0" (power-law branches) or "beta-pm" (closed form)
    lam      overall scale, nonzero
    mu       argument scale, positive (used by the closed form only)
    epsilon  +1 or -1, branch label
    sigma    +1 or -1, sign of the normalised beta^2 (closed form only)
    C        integration constant; every family here requires C = 0
    """

    family: str
    lam: float
    mu: float = 1.0
    epsilon: int = 1
    sigma: int = 1
    C: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}", value=self.family)
        if self.lam == 0:
            raise DomainError("lam must be nonzero", value=self.lam)
        if self.epsilon not in (-1, 1):
            raise DomainError("epsilon must be +1 or -1", value=self.epsilon)
        if self.sigma not in (-1, 1):
            raise DomainError("sigma must be +1 or -1", value=self.sigma)
        if self.family == BETA_PM and not self.mu > 0:
            raise DomainError("mu must be positive", value=self.mu)
        if self.C != 0.0:
            raise DomainError("no solution family is available for C != 0",
                              value=self.C)


def _closed_form(s, lam, mu, sigma):
    """The two-parameter solution, evaluable on numbers or Jet1."""
    s0 = value(s)
    if s0 == 0:
        raise DomainError("closed form is singular at s = 0", value=s0)
    mu2 = mu * mu
    s2 = s * s
    rad = s2 + sigma * mu2
    if value(rad) < 0:
        raise DomainError(
            f"closed form with sigma=-1 requires |s| >= mu, got s={s0}",
            value=s0)
    G = mu2 * (mu2 * mu2 + 20.0 * sigma * mu2 * s2 - 8.0 * s2 * s2)
    H = 8.0 * mu2 * s * rad * sqrt(rad)
    tau = 1.0 if value(H) >= 0 else -1.0
    w = signed_cbrt(G + tau * H)
    brace = 1.0 + w / mu2 + (mu2 - 8.0 * sigma * s2) / w
    return (lam * mu / 4.0) * brace / s


def _beta0(s, lam, epsilon):
    if epsilon == 1:
        if value(s) == 0:
            raise DomainError("p = lam / s is singular at s = 0", value=0.0)
        return lam / s
    return lam * signed_cbrt(s)


def p_eval(params: PrepotentialParams, s):
    """Value of the prepotential derivative p at s."""
    if params.family == BETA0:
        return value(_beta0(s, params.lam, params.epsilon))
    return value(_closed_form(s, params.lam, params.mu, params.sigma))


def p_jet(params: PrepotentialParams, s, order=3):
    """Jet of p at s: derivative values (p, p', p'', ...) up to ``order``."""
    if order < 0 or order > 3:
        raise DomainError("p_jet supports orders 0..3", value=order)
    js = seed1(s, order)
    if params.family == BETA0:
        return _as_jet(_beta0(js, params.lam, params.epsilon), js)
    return _as_jet(_closed_form(js, params.lam, params.mu, params.sigma), js)


def _as_jet(x, template):
    if isinstance(x, Jet1):
        return x
    return Jet1.constant(x, template.order, template.center)


def f_taylor(params: PrepotentialParams, s, order):
    """Taylor coefficients at s of an antiderivative f with f' = p.

    The constant term is gauge and set to zero; only derivatives of f
    enter any downstream formula.  ``order`` may be at most 4.
    """
    if order < 1 or order > 4:
        raise DomainError("antiderivative coefficients support orders 1..4",
                          value=order)
    pj = p_jet(params, s, order - 1)
    coeffs = [0.0]
    for k, d in enumerate(pj.derivs()):
        coeffs.append(d / math.factorial(k + 1))
    return coeffs


def reduced_residual(pjet, s, C=0.0):
    """Left side minus right side of the reduced ODE at one point.

    ``pjet`` may be a Jet1 of order >= 2 or any sequence of derivative
    values (p, p', p'', ...).
    """
    p, p1, p2 = _first_three(pjet)
    return p * p2 + 3 * s * p1 * p2 + 4 * p1 * p1 - C


def reduced_residual_normalized(pjet, s, C=0.0):
    """Reduced-ODE residual divided by max(1, largest term magnitude)."""
    p, p1, p2 = _first_three(pjet)
    terms = (p * p2, 3 * s * p1 * p2, 4 * p1 * p1, C)
    scale = max(1.0, *(abs(t) for t in terms))
    return (terms[0] + terms[1] + terms[2] - C) / scale


def _first_three(pjet):
    ds = pjet.derivs() if isinstance(pjet, Jet1) else tuple(pjet)
    if len(ds) < 3:
        raise DomainError("reduced residual needs p, p', p''",
                          value=len(ds))
    return ds[0], ds[1], ds[2]


def s_of_p(p, epsilon, sigma):
    """Invert the branch: the s paired with p on the implicit relation."""
    if epsilon not in (-1, 1) or sigma not in (-1, 1):
        raise DomainError("epsilon and sigma must be +1 or -1")
    disc = p * p + sigma
    if disc < 0:
        raise DomainError(f"p^2 + sigma < 0 at p={p}", value=p)
    q = math.sqrt(disc)
    base = p + q
    if base == 0:
        raise DomainError("implicit relation degenerates at p + sqrt = 0",
                          value=p)
    return (p + 2.0 * epsilon * q) * base ** (-2 * epsilon)


def cubic_roots(s, epsilon, sigma):
    """All real roots p of 4 eps s p^3 - 3 p^2 + 6 sigma eps s p + s^2 - 4 sigma.

    Roots are returned ascending.  At s = 0 the equation degenerates to a
    quadratic whose real roots (if any) are returned.
    """
    if not math.isfinite(s):
        raise DomainError("non-finite s", value=s)
    if epsilon not in (-1, 1) or sigma not in (-1, 1):
        raise DomainError("epsilon and sigma must be +1 or -1")
    a3 = 4.0 * epsilon * s
    a2 = -3.0
    a1 = 6.0 * sigma * epsilon * s
    a0 = s * s - 4.0 * sigma
    if s == 0.0:
        # -3 p^2 - 4 sigma = 0
        if sigma == 1:
            return np.array([])
        r = 2.0 / math.sqrt(3.0)
        return np.array([-r, r])
    roots = np.roots([a3, a2, a1, a0])
    real = []
    for z in roots:
        if abs(z.imag) < 1e-8 * max(1.0, abs(z)):
            real.append(float(z.real))
    # Newton polish on the exact cubic.
    polished = []
    for r in real:
        for _ in range(3):
            f = ((a3 * r + a2) * r + a1) * r + a0
            df = (3.0 * a3 * r + 2.0 * a2) * r + a1
            if df == 0:
                break
            r = r - f / df
        polished.append(r)
    polished.sort()
    out = []
    for r in polished:
        if not out or abs(r - out[-1]) > 1e-9 * max(1.0, abs(r)):
            out.append(r)
    return np.array(out)


def g_eval(p, beta2, epsilon):
    """Root g(p) of the quadratic relation (3g - p)(g + p) = (4/3) beta^2."""
    if epsilon not in (-1, 1):
        raise DomainError("epsilon must be +1 or -1", value=epsilon)
    disc = p * p + beta2
    if disc < 0:
        raise DomainError(f"p^2 + beta^2 < 0 at p={p}", value=p)
    return -(p + 2.0 * epsilon * math.sqrt(disc)) / 3.0


def rescale_p(params: PrepotentialParams, factor, mode):
    """Map a solution to a rescaled solution.

    ``simultaneous`` realises p~(s) = a p(s / a) (C unchanged);
    ``amplitude`` realises p~(s) = a p(s) (C -> a^2 C, vacuous at C = 0).
    Both return a new parameter record of the same family.
    """
    if factor == 0:
        raise DomainError("rescaling factor must be nonzero", value=factor)
    a = float(factor)
    if mode == AMPLITUDE:
        return replace(params, lam=params.lam * a, C=params.C * a * a)
    if mode != SIMULTANEOUS:
        raise DomainError(f"unknown rescale mode {mode!r}", value=mode)
    if params.family == BETA0:
        if params.epsilon == 1:
            # a * (lam / (s/a)) = a^2 lam / s
            return replace(params, lam=params.lam * a * a)
        # a * lam * (s/a)^(1/3) = cbrt(a)^2 lam * s^(1/3)
        c = signed_cbrt(a)
        return replace(params, lam=params.lam * c * c)
    # closed form: p_{lam,mu}(s) = lam * p_{1,1}(s / mu), so the rescale
    # shifts both scales; oddness of the solution absorbs a negative a.
    return replace(params, lam=params.lam * abs(a), mu=params.mu * abs(a))
