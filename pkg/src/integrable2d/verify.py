"""Residual functionals and grid-based verification reports.

Two levels of checks exist.  The structure equations couple a model's
invariant coefficients to its potential and are the direct integrability
test; their residuals are delegated to the model layer.  The master
equations constrain the generating scalar alone (third order for the
cubic kind, fourth for the quartic) and are evaluated here from a single
jet.  ``grid_report`` samples a region with a seeded low-discrepancy
sequence, skips singular hits, and aggregates residuals normalised by the
largest term magnitude at each point, so tolerances are scale-free.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np
from scipy.stats import qmc

from .errors import DomainError, SingularityError
from .jets import Jet2, seed
from .models import ModelFunctions, structure_residual_terms

STRUCTURE_CUBIC = "structure-cubic"
STRUCTURE_QUARTIC = "structure-quartic"
MASTER_CUBIC = "master-cubic"
MASTER_QUARTIC = "master-quartic"
REDUCED_ODE = "reduced-ode"


def residual_structure(model, x, y):
    """Structure-equation residual vector at one point (3 cubic, 4 quartic)."""
    res, _ = structure_residual_terms(model, x, y)
    return res


def residual_structure_fd(model, x, y, h=1e-4):
    """Structure residuals with every derivative from finite differences.

    Independent of the jet path; used to cross-check it.  Returns
    (residuals, scale) like the jet-based variant.
    """
    from .jets import fd_deriv

    if model.singular(x, y):
        raise DomainError(f"point ({x}, {y}) is on the singular set",
                          value=(x, y))
    Uv = model.U.value(x, y)
    Ux = fd_deriv(model.U.value, x, y, 1, 0, h)
    Uy = fd_deriv(model.U.value, x, y, 0, 1, h)
    if model.kind == "cubic":
        Jv = model.J.value(x, y)
        Kv = model.K.value(x, y)
        Jx = fd_deriv(model.J.value, x, y, 1, 0, h)
        Jy = fd_deriv(model.J.value, x, y, 0, 1, h)
        Kx = fd_deriv(model.K.value, x, y, 1, 0, h)
        Ky = fd_deriv(model.K.value, x, y, 0, 1, h)
        terms = [(Kx, Jy), (Jx, -Ky, 3.0 * Ux),
                 (Ux * Jv, Uy * Kv, 2.0 * Ky * Uv)]
    else:
        Pv = model.P.value(x, y)
        Qv = model.Q.value(x, y)
        Px = fd_deriv(model.P.value, x, y, 1, 0, h)
        Py = fd_deriv(model.P.value, x, y, 0, 1, h)
        Qx = fd_deriv(model.Q.value, x, y, 1, 0, h)
        Qy = fd_deriv(model.Q.value, x, y, 0, 1, h)
        Rx = fd_deriv(model.R.value, x, y, 1, 0, h)
        Ry = fd_deriv(model.R.value, x, y, 0, 1, h)
        terms = [(Qx, Py), (Px, -Qy, 4.0 * Ux), (Ry, Ux * Qv),
                 (Rx, Uy * Qv, 2.0 * Ux * Pv, 2.0 * Qy * Uv)]
    residuals = np.array([math.fsum(t) for t in terms])
    scale = max(1.0, max(abs(t) for eq in terms for t in eq))
    return residuals, scale


def master_terms(kind, jet):
    """The products entering the master equation, from one jet.

    Cubic kind needs a jet of order >= 3, quartic of order >= 4.
    """
    if kind == "cubic":
        if jet.order < 3:
            raise DomainError("cubic master residual needs an order-3 jet",
                              value=jet.order)
        Exx = jet.deriv(2, 0)
        Eyy = jet.deriv(0, 2)
        Exy = jet.deriv(1, 1)
        Exxx = jet.deriv(3, 0)
        Exxy = jet.deriv(2, 1)
        Exyy = jet.deriv(1, 2)
        Eyyy = jet.deriv(0, 3)
        return (Exx * (Exxx + Exyy), -Exy * (Exxy + Eyyy),
                -2.0 * Exyy * (Exx + Eyy))
    if kind == "quartic":
        if jet.order < 4:
            raise DomainError("quartic master residual needs an order-4 jet",
                              value=jet.order)
        Fxx = jet.deriv(2, 0)
        Fyy = jet.deriv(0, 2)
        Fxy = jet.deriv(1, 1)
        Fxxx = jet.deriv(3, 0)
        Fxxy = jet.deriv(2, 1)
        Fyyx = jet.deriv(1, 2)
        Fyyy = jet.deriv(0, 3)
        Fxxxx = jet.deriv(4, 0)
        Fxxxy = jet.deriv(3, 1)
        Fyyyx = jet.deriv(1, 3)
        Fyyyy = jet.deriv(0, 4)
        return (Fxxxx * Fxy, -Fyyyy * Fxy,
                3.0 * Fxxx * Fxxy, -3.0 * Fyyy * Fyyx,
                2.0 * Fxx * Fxxxy, -2.0 * Fyy * Fyyyx)
    raise DomainError(f"unknown kind {kind!r}", value=kind)


def residual_master(kind, genfun_jet):
    """Master-equation left-hand side for a generating-scalar jet."""
    return math.fsum(master_terms(kind, genfun_jet))


def residual_master_normalized(kind, genfun_jet):
    terms = master_terms(kind, genfun_jet)
    scale = max(1.0, max(abs(t) for t in terms))
    return math.fsum(terms) / scale


@dataclass
class VerificationReport:
    """Aggregated residual statistics over a sampled region."""

    model: str
    equation_set: str
    n_points: int
    n_skipped: int
    max_abs: float
    mean_abs: float
    worst_point: tuple
    normalization: float
    tolerance: float
    seed: int
    passed: bool

    def to_dict(self):
        d = asdict(self)
        d["pass"] = d.pop("passed")
        d["worst_point"] = list(self.worst_point)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _sample_points(region, n, seed_):
    x0, y0, x1, y1 = region
    if not (x1 > x0 and y1 > y0) or n < 1:
        raise DomainError("region must be a non-degenerate rectangle and "
                          "n >= 1", value=region)
    sampler = qmc.Halton(d=2, scramble=True, seed=seed_)
    pts = sampler.random(n)
    return [(x0 + (x1 - x0) * float(a), y0 + (y1 - y0) * float(b))
            for a, b in pts]


def grid_report(target, region, n, tolerance, seed_=0, kind=None,
                label=None, genfun_order=None):
    """Sample residuals of a model, generating scalar, or prepotential.

    ``target`` may be a ``ModelFunctions`` (structure equations), a
    jet-evaluable callable f(X, Y) with ``kind`` in {cubic, quartic}
    (master equation), or a ``PrepotentialParams`` (reduced ODE; the
    region's x-interval is then the s-interval).  Points whose evaluation
    hits the singular set or leaves a branch domain are skipped and
    counted.  Residuals are normalised per point by
    max(1, largest term magnitude).
    """
    from .prepotential import PrepotentialParams, p_jet, \
        reduced_residual_normalized

    if isinstance(target, ModelFunctions):
        equation_set = STRUCTURE_CUBIC if target.kind == "cubic" \
            else STRUCTURE_QUARTIC
        name = label or target.label or target.kind

        def residual_at(x, y):
            if target.singular(x, y):
                return None
            res, scale = structure_residual_terms(target, x, y)
            return float(np.max(np.abs(res))) / scale, scale

        pts = _sample_points(region, n, seed_)
    elif isinstance(target, PrepotentialParams):
        equation_set = REDUCED_ODE
        name = label or f"prepotential[{target.family}]"
        s0, s1 = (region[0], region[2]) if len(region) == 4 \
            else (region[0], region[1])

        def residual_at(s, _unused):
            try:
                pj = p_jet(target, s, 2)
            except DomainError:
                return None
            p, p1, p2 = pj.derivs()
            terms = (p * p2, 3.0 * s * p1 * p2, 4.0 * p1 * p1, target.C)
            scale = max(1.0, *(abs(t) for t in terms))
            return abs(reduced_residual_normalized(pj, s, target.C)), scale

        sampler = qmc.Halton(d=1, scramble=True, seed=seed_)
        pts = [(s0 + (s1 - s0) * float(a[0]), 0.0)
               for a in sampler.random(n)]
    elif callable(target):
        if kind not in ("cubic", "quartic"):
            raise DomainError("a generating-scalar target needs "
                              "kind='cubic' or 'quartic'", value=kind)
        equation_set = MASTER_CUBIC if kind == "cubic" else MASTER_QUARTIC
        name = label or f"genfun[{kind}]"
        order = genfun_order or (3 if kind == "cubic" else 4)

        def residual_at(x, y):
            X, Y = seed(x, y, order)
            try:
                jet = target(X, Y)
            except DomainError:
                return None
            if not isinstance(jet, Jet2):
                return 0.0, 1.0
            terms = master_terms(kind, jet)
            scale = max(1.0, max(abs(t) for t in terms))
            return abs(math.fsum(terms)) / scale, scale

        pts = _sample_points(region, n, seed_)
    else:
        raise DomainError(f"unsupported verification target {target!r}")

    worst = -1.0
    worst_point = (math.nan, math.nan)
    worst_scale = 1.0
    total = 0.0
    used = 0
    skipped = 0
    for (x, y) in pts:
        out = residual_at(x, y)
        if out is None or not math.isfinite(out[0]):
            skipped += 1
            continue
        r, scale = out
        used += 1
        total += r
        if r > worst:
            worst = r
            worst_point = (x, y)
            worst_scale = scale
    if used == 0:
        raise SingularityError("all sampled points were singular or outside "
                               "the branch domain")
    return VerificationReport(
        model=name, equation_set=equation_set, n_points=used,
        n_skipped=skipped, max_abs=worst, mean_abs=total / used,
        worst_point=worst_point, normalization=worst_scale,
        tolerance=tolerance, seed=seed_, passed=bool(worst < tolerance))
