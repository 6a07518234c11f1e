"""Evaluable integrable models: a potential plus invariant coefficients.

A model couples the planar dynamics  x'' = U_x, y'' = U_y  (on the zero
energy shell) to a second invariant that is cubic or quartic in the
velocities.  Models are built three ways:

* from a prepotential family, through the invariant-variable ansatz
  (``build_cubic``, ``build_quartic``),
* from two univariate polynomials solving the planar wave equation
  (``build_wave``), whose quartic invariant is reducible,
* from a small named catalog of hard-coded closed forms that serve as
  regression oracles for the builders (``catalog``).

Every scalar ingredient is a ``Field``: evaluable as a float or as a jet,
so structure-equation residuals and gradients come from the same code
path.  The quartic coefficient R, when no closed form exists, is defined
by an L-shaped line integral from the model's base point (``R_quadrature``)
and is then available as a value-only field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.integrate import quad

from .errors import ConstructionError, DomainError, PathError, QuadratureError
from .jets import Jet2, fd_deriv, partial_jet, seed, signed_cbrt, value
from .prepotential import BETA0, BETA_PM, PrepotentialParams, f_taylor, p_jet

DEFAULT_DELTA = 1e-8

CUBIC = "cubic"
QUARTIC = "quartic"
WAVE = "wave"


def invariant_vars(kind, x, y):
    """Symmetry-adapted invariant coordinates of a point.

    Cubic kind: (v, u) = (x^3 - 3 x y^2, 3 x^2 y - y^3).
    Quartic kind: (s, t) = (x y, (x^2 - y^2) / 2), the parabolic pair.
    """
    if kind == CUBIC:
        return x * x * x - 3.0 * x * y * y, 3.0 * x * x * y - y * y * y
    if kind == QUARTIC:
        return x * y, 0.5 * (x * x - y * y)
    raise DomainError(f"unknown kind {kind!r}", value=kind)


class Field:
    """Scalar field on the plane, evaluable as a value or a jet."""

    __slots__ = ("_value_fn", "_jet_fn", "max_jet_order")

    def __init__(self, value_fn, jet_fn=None, max_jet_order=3):
        self._value_fn = value_fn
        self._jet_fn = jet_fn
        self.max_jet_order = max_jet_order if jet_fn is not None else -1

    @classmethod
    def from_expr(cls, fn, max_jet_order=3):
        """Build both evaluation paths from one duck-typed expression."""
        def jet_fn(x, y, order):
            X, Y = seed(x, y, order)
            out = fn(X, Y)
            if not isinstance(out, Jet2):  # constant expression
                out = Jet2.constant(out, order, (x, y))
            return out
        return cls(lambda x, y: fn(x, y), jet_fn, max_jet_order)

    @property
    def has_jet(self):
        return self._jet_fn is not None

    def value(self, x, y):
        return self._value_fn(x, y)

    def jet(self, x, y, order):
        if self._jet_fn is None:
            raise DomainError("field supports value evaluation only")
        if order > self.max_jet_order:
            raise DomainError(
                f"field supports jets up to order {self.max_jet_order}",
                value=order)
        return self._jet_fn(x, y, order)


def _scaled(f, c):
    if not f.has_jet:
        return Field(lambda x, y: c * f.value(x, y))
    return Field(lambda x, y: c * f.value(x, y),
                 lambda x, y, n: f.jet(x, y, n) * c, f.max_jet_order)


@dataclass(frozen=True)
class ModelDescriptor:
    """Serializable recipe for a model; exactly one construction populated."""

    kind: str
    prepotential: PrepotentialParams | None = None
    wave_parts: tuple | None = None
    catalog_name: str | None = None
    catalog_lam: float | None = None
    basepoint: tuple = (1.5, 1.0)

    def __post_init__(self):
        if self.kind in (CUBIC, QUARTIC):
            ok = self.prepotential is not None and self.wave_parts is None \
                and self.catalog_name is None
        elif self.kind == WAVE:
            ok = self.wave_parts is not None and self.prepotential is None \
                and self.catalog_name is None
        elif self.kind == "catalog":
            ok = self.catalog_name is not None and self.prepotential is None \
                and self.wave_parts is None
        else:
            raise DomainError(f"unknown descriptor kind {self.kind!r}",
                              value=self.kind)
        if not ok:
            raise DomainError(
                f"descriptor fields do not match kind {self.kind!r}")


@dataclass
class ModelFunctions:
    """A constructed model: evaluable fields plus bookkeeping.

    ``kind`` is the dynamics kind (cubic, quartic or wave); wave models
    use the quartic invariant with the reducible closed form for R.
    """

    kind: str
    descriptor: ModelDescriptor
    U: Field
    J: Field | None = None
    K: Field | None = None
    P: Field | None = None
    Q: Field | None = None
    R: Field | None = None
    genfun: object = None
    singular_fn: object = None
    separable: bool = False
    reducible: bool = False
    label: str = ""
    delta: float = DEFAULT_DELTA

    def singular(self, x, y, delta=None):
        """True when (x, y) lies within delta of the excluded locus."""
        if self.singular_fn is None:
            return False
        return self.singular_fn(x, y, self.delta if delta is None else delta)

    def coeff_fields(self):
        if self.kind == CUBIC:
            return {"J": self.J, "K": self.K}
        return {"P": self.P, "Q": self.Q, "R": self.R}


def structure_residual_terms(model, x, y):
    """Structure-equation residuals and the local normalisation scale.

    Returns (residuals, scale) with scale = max(1, largest |term|).
    Derivatives come from order-1 jets; a value-only R falls back to
    central finite differences of the quadrature.
    """
    if model.singular(x, y):
        raise DomainError(f"point ({x}, {y}) is on the singular set",
                          value=(x, y))
    Uj = model.U.jet(x, y, 1)
    Uv, Ux, Uy = Uj.value, Uj.deriv(1, 0), Uj.deriv(0, 1)
    if model.kind == CUBIC:
        Jj = model.J.jet(x, y, 1)
        Kj = model.K.jet(x, y, 1)
        terms = [
            (Kj.deriv(1, 0), Jj.deriv(0, 1)),
            (Jj.deriv(1, 0), -Kj.deriv(0, 1), 3.0 * Ux),
            (Ux * Jj.value, Uy * Kj.value, 2.0 * Kj.deriv(0, 1) * Uv),
        ]
    else:
        Pj = model.P.jet(x, y, 1)
        Qj = model.Q.jet(x, y, 1)
        if model.R.has_jet:
            Rj = model.R.jet(x, y, 1)
            Rx, Ry = Rj.deriv(1, 0), Rj.deriv(0, 1)
        else:
            Rx = fd_deriv(model.R.value, x, y, 1, 0, h=1e-3)
            Ry = fd_deriv(model.R.value, x, y, 0, 1, h=1e-3)
        terms = [
            (Qj.deriv(1, 0), Pj.deriv(0, 1)),
            (Pj.deriv(1, 0), -Qj.deriv(0, 1), 4.0 * Ux),
            (Ry, Ux * Qj.value),
            (Rx, Uy * Qj.value, 2.0 * Ux * Pj.value,
             2.0 * Qj.deriv(0, 1) * Uv),
        ]
    residuals = np.array([math.fsum(t) for t in terms])
    scale = max(1.0, max(abs(t) for eq in terms for t in eq))
    return residuals, scale


# --- builders -------------------------------------------------------------


def _p_pair(params, u):
    """p(u) and p'(u), composed onto a jet-or-number argument."""
    k = u.order if isinstance(u, Jet2) else 0
    pj = p_jet(params, value(u), min(k + 1, 3))
    d = pj.derivs()
    p_coeffs = [d[m] / math.factorial(m) for m in range(k + 1)]
    dp_coeffs = [d[m + 1] / math.factorial(m)
                 for m in range(min(k + 1, len(d) - 1))]
    from .jets import compose_series
    return compose_series(p_coeffs, u), compose_series(dp_coeffs, u)


def _family_singular(params, kind):
    """Excluded locus in the plane for a prepotential-built model."""
    lower = 0.0
    if params.family == BETA_PM and params.sigma == -1:
        lower = params.mu

    def predicate(x, y, delta):
        s, _ = invariant_vars(kind, x, y)
        return abs(s) <= lower + delta

    return predicate


_PROBE_OFFSETS = ((0.0, 0.0), (0.11, -0.07), (-0.06, 0.13), (0.17, 0.19))


def _probe_points(model, basepoint):
    pts = []
    for dx, dy in _PROBE_OFFSETS:
        px, py = basepoint[0] + dx, basepoint[1] + dy
        if not model.singular(px, py, 1e-3):
            pts.append((px, py))
    return pts


def build_cubic(params, basepoint=(1.5, 1.0)):
    """Model with a velocity-cubed invariant from a prepotential.

    The potential is U = -3 (x^2+y^2)^2 p'(u) at u = 3 x^2 y - y^3.  The
    two invariant coefficients follow from differentiating the generating
    scalar; the sign convention is fixed at build time by probing the
    structure equations (the alternative printed-sign convention is tried
    second and a failure of both raises ``ConstructionError``).
    """
    def u_of(X, Y):
        return 3.0 * X * X * Y - Y ** 3

    def make_fields(sign):
        # sign +1: J = +6 y p + 36 x^2 y^2 p', K = -6 x p - 18 x y (x^2-y^2) p'
        # sign -1: the same with the p-terms flipped
        def U_fn(X, Y):
            u = u_of(X, Y)
            _, p1 = _p_pair(params, u)
            return -3.0 * (X * X + Y * Y) ** 2 * p1

        def J_fn(X, Y):
            u = u_of(X, Y)
            p0, p1 = _p_pair(params, u)
            return sign * 6.0 * Y * p0 + 36.0 * X * X * Y * Y * p1

        def K_fn(X, Y):
            u = u_of(X, Y)
            p0, p1 = _p_pair(params, u)
            return (-sign) * 6.0 * X * p0 \
                - 18.0 * X * Y * (X * X - Y * Y) * p1

        return (Field.from_expr(U_fn, 2), Field.from_expr(J_fn, 2),
                Field.from_expr(K_fn, 2))

    def genfun(X, Y):
        u = u_of(X, Y)
        k = u.order if isinstance(u, Jet2) else 0
        if k == 0:
            return 0.0
        from .jets import compose_series
        return compose_series(f_taylor(params, value(u), min(k, 4)), u)

    descriptor = ModelDescriptor(kind=CUBIC, prepotential=params,
                                 basepoint=tuple(basepoint))
    singular_fn = _family_singular(params, CUBIC)
    diagnostics = []
    for sign in (1.0, -1.0):
        U, J, K = make_fields(sign)
        model = ModelFunctions(kind=CUBIC, descriptor=descriptor, U=U, J=J,
                               K=K, genfun=genfun, singular_fn=singular_fn,
                               label=f"cubic[{params.family}]")
        if model.singular(*basepoint):
            raise ConstructionError(
                f"basepoint {basepoint} lies on the singular set")
        pts = _probe_points(model, basepoint)
        if len(pts) < 2:
            raise ConstructionError("not enough admissible probe points "
                                    f"near basepoint {basepoint}")
        worst = 0.0
        for (px, py) in pts:
            res, scale = structure_residual_terms(model, px, py)
            worst = max(worst, float(np.max(np.abs(res))) / scale)
        if worst < 1e-6:
            return model
        diagnostics.append((sign, worst))
    raise ConstructionError(
        "structure-equation probe failed for both sign conventions: "
        + ", ".join(f"sign={s:+.0f} residual={r:.3e}" for s, r in diagnostics))


def build_quartic(params, basepoint=(1.5, 1.0)):
    """Model with a velocity-quartic invariant from a prepotential.

    U = -(x^2+y^2) p'(s) / 4, P = y^2 p'(s), Q = -(p + s p') at s = x y;
    R is defined by quadrature from the base point.  The branch with
    p = lam / s separates into two uncoupled one-dimensional conformal
    particles and is tagged ``separable``.
    """
    def U_fn(X, Y):
        _, p1 = _p_pair(params, X * Y)
        return -0.25 * (X * X + Y * Y) * p1

    def P_fn(X, Y):
        _, p1 = _p_pair(params, X * Y)
        return Y * Y * p1

    def Q_fn(X, Y):
        s = X * Y
        p0, p1 = _p_pair(params, s)
        return -(p0 + s * p1)

    def genfun(X, Y):
        s = X * Y
        k = s.order if isinstance(s, Jet2) else 0
        if k == 0:
            return 0.0
        from .jets import compose_series
        return compose_series(f_taylor(params, value(s), min(k, 4)), s)

    descriptor = ModelDescriptor(kind=QUARTIC, prepotential=params,
                                 basepoint=tuple(basepoint))
    model = ModelFunctions(
        kind=QUARTIC, descriptor=descriptor,
        U=Field.from_expr(U_fn, 2), P=Field.from_expr(P_fn, 2),
        Q=Field.from_expr(Q_fn, 2), genfun=genfun,
        singular_fn=_family_singular(params, QUARTIC),
        separable=(params.family == BETA0 and params.epsilon == 1),
        label=f"quartic[{params.family}]")
    if model.singular(*basepoint):
        raise ConstructionError(f"basepoint {basepoint} lies on the "
                                "singular set")
    model.R = Field(lambda x, y: R_quadrature(model, x, y))
    pts = _probe_points(model, basepoint)
    if len(pts) < 2:
        raise ConstructionError("not enough admissible probe points near "
                                f"basepoint {basepoint}")
    worst = 0.0
    for (px, py) in pts:
        # probe the two R-free structure equations only (cheap)
        Uj = model.U.jet(px, py, 1)
        Pj = model.P.jet(px, py, 1)
        Qj = model.Q.jet(px, py, 1)
        t1 = (Qj.deriv(1, 0), Pj.deriv(0, 1))
        t2 = (Pj.deriv(1, 0), -Qj.deriv(0, 1), 4.0 * Uj.deriv(1, 0))
        scale = max(1.0, max(abs(t) for tt in (t1, t2) for t in tt))
        worst = max(worst, abs(math.fsum(t1)) / scale,
                    abs(math.fsum(t2)) / scale)
    if worst >= 1e-6:
        raise ConstructionError("structure-equation probe failed: "
                                f"normalized residual {worst:.3e}")
    return model


def _polyval(coeffs, t):
    """Horner evaluation; works on numbers and jets alike."""
    if len(coeffs) == 0:
        return 0.0
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * t + c
    return acc


def build_wave(F2_coeffs, F4_coeffs, basepoint=(0.0, 0.0)):
    """Reducible quartic model from a wave-equation generating scalar.

    F(x, y) = F2(x - y) + F4(x + y) satisfies F_xx = F_yy, which collapses
    the quartic invariant to minus the square of a quadratic one:
    P = -2 U and R = -Q^2 / 4 identically.  Polynomial degree is capped
    at 8 so order-4 jets stay exact.
    """
    F2 = tuple(float(c) for c in F2_coeffs)
    F4 = tuple(float(c) for c in F4_coeffs)
    if len(F2) > 9 or len(F4) > 9:
        raise DomainError("wave parts support degree <= 8",
                          value=(len(F2) - 1, len(F4) - 1))

    def F_fn(X, Y):
        return _polyval(F2, X - Y) + _polyval(F4, X + Y)

    def derived(combiner):
        def jet_fn(x, y, order):
            X, Y = seed(x, y, order + 2)
            return combiner(F_fn(X, Y))
        return Field(lambda x, y: jet_fn(x, y, 0).value, jet_fn,
                     max_jet_order=2)

    U = derived(lambda Fj: (partial_jet(Fj, 2, 0) + partial_jet(Fj, 0, 2))
                * -0.25)
    Q = derived(lambda Fj: -partial_jet(Fj, 1, 1))
    P = _scaled(U, -2.0)
    R = Field(lambda x, y: -0.25 * Q.value(x, y) ** 2,
              lambda x, y, n: Q.jet(x, y, n) ** 2 * -0.25, 2)
    descriptor = ModelDescriptor(kind=WAVE, wave_parts=(F2, F4),
                                 basepoint=tuple(basepoint))
    return ModelFunctions(kind=WAVE, descriptor=descriptor, U=U, P=P, Q=Q,
                          R=R, genfun=F_fn, reducible=True, label="wave")


# --- catalog ---------------------------------------------------------------

WAVE_AIZ_F2 = (0.0, 0.0, 0.0, 0.0, 1.0 / 24.0, -1.0 / 60.0)
WAVE_AIZ_F4 = (0.0, 0.0, 0.0, 0.0, 1.0 / 24.0, 1.0 / 60.0)

CATALOG_INFO = {
    "cubic-eps-plus": (CUBIC, 1.0,
                       "cubic invariant, inverse-square prepotential branch"),
    "cubic-eps-minus": (CUBIC, 1.0,
                        "cubic invariant, cube-root prepotential branch"),
    "quartic-ExQ": (QUARTIC, -12.0,
                    "quartic invariant from the cube-root branch in the "
                    "parabolic variable"),
    "wave-aiz": (WAVE, None,
                 "reducible quartic from a quintic wave-equation scalar"),
    "trivial-E1y": (CUBIC, None,
                    "y-only generating scalar, invariant reduces to vx^3"),
    "trivial-F-sum": (QUARTIC, None,
                      "separated x/y quartic scalar, invariant is a "
                      "perfect square"),
}


def catalog_names():
    return list(CATALOG_INFO)


def catalog(name, lam=None, basepoint=(1.0, 1.0)):
    """One of the named closed-form models (regression oracles).

    The closed forms are hard-coded, independent of the builders.  ``lam``
    overrides the entry's default overall scale where the entry has one.
    """
    if name not in CATALOG_INFO:
        raise DomainError(f"unknown catalog model {name!r}; choose from "
                          + ", ".join(CATALOG_INFO), value=name)
    kind, default_lam, _ = CATALOG_INFO[name]
    if lam is None:
        lam = default_lam
    descriptor = ModelDescriptor(kind="catalog", catalog_name=name,
                                 catalog_lam=lam, basepoint=tuple(basepoint))

    if name == "cubic-eps-plus":
        def U(X, Y):
            u = 3.0 * X * X * Y - Y ** 3
            return 3.0 * lam * (X * X + Y * Y) ** 2 / (u * u)

        def J(X, Y):
            d = 3.0 * X * X - Y * Y
            return -6.0 * lam * (3.0 * X * X + Y * Y) / (d * d)

        def K(X, Y):
            d = 3.0 * X * X - Y * Y
            return -12.0 * lam * X * Y / (d * d)

        params = PrepotentialParams(BETA0, lam, epsilon=1)

        def genfun(X, Y):
            return _compose_genfun(params, 3.0 * X * X * Y - Y ** 3)

        def singular_fn(x, y, delta):
            return (abs(3.0 * x * x * y - y ** 3) <= delta
                    or abs(3.0 * x * x - y * y) <= delta)

        return ModelFunctions(kind=CUBIC, descriptor=descriptor,
                              U=Field.from_expr(U, 2),
                              J=Field.from_expr(J, 2),
                              K=Field.from_expr(K, 2), genfun=genfun,
                              singular_fn=singular_fn, label=name)

    if name == "cubic-eps-minus":
        def U(X, Y):
            u = 3.0 * X * X * Y - Y ** 3
            return -lam * (X * X + Y * Y) ** 2 / signed_cbrt(u) ** 2

        def J(X, Y):
            u = 3.0 * X * X * Y - Y ** 3
            return 6.0 * lam * Y * Y * (5.0 * X * X - Y * Y) \
                / signed_cbrt(u) ** 2

        def K(X, Y):
            u = 3.0 * X * X * Y - Y ** 3
            return -12.0 * lam * X * Y * (2.0 * X * X - Y * Y) \
                / signed_cbrt(u) ** 2

        params = PrepotentialParams(BETA0, lam, epsilon=-1)

        def genfun(X, Y):
            return _compose_genfun(params, 3.0 * X * X * Y - Y ** 3)

        def singular_fn(x, y, delta):
            return abs(3.0 * x * x * y - y ** 3) <= delta

        return ModelFunctions(kind=CUBIC, descriptor=descriptor,
                              U=Field.from_expr(U, 2),
                              J=Field.from_expr(J, 2),
                              K=Field.from_expr(K, 2), genfun=genfun,
                              singular_fn=singular_fn, label=name)

    if name == "quartic-ExQ":
        def U(X, Y):
            return -(lam / 12.0) * (X * X + Y * Y) / signed_cbrt(X * Y) ** 2

        def P(X, Y):
            return (lam / 3.0) * signed_cbrt(X * Y) * Y / X

        def Q(X, Y):
            return -(4.0 * lam / 3.0) * signed_cbrt(X * Y)

        def R(X, Y):
            return -(lam * lam / 36.0) * signed_cbrt(X * Y) ** 2 \
                * (8.0 - Y * Y / (X * X))

        params = PrepotentialParams(BETA0, lam, epsilon=-1)

        def genfun(X, Y):
            return _compose_genfun(params, X * Y)

        def singular_fn(x, y, delta):
            return abs(x * y) <= delta

        return ModelFunctions(kind=QUARTIC, descriptor=descriptor,
                              U=Field.from_expr(U, 2),
                              P=Field.from_expr(P, 2),
                              Q=Field.from_expr(Q, 2),
                              R=Field.from_expr(R, 2), genfun=genfun,
                              singular_fn=singular_fn, label=name)

    if name == "wave-aiz":
        def U(X, Y):
            return -0.5 * (X * X + Y * Y) - X * X * Y - Y ** 3 / 3.0

        def Q(X, Y):
            return -2.0 * (X * Y + X ** 3 / 3.0 + X * Y * Y)

        def P(X, Y):
            return X * X + Y * Y + 2.0 * X * X * Y + 2.0 * Y ** 3 / 3.0

        def R(X, Y):
            w = X * Y + X ** 3 / 3.0 + X * Y * Y
            return -(w * w)

        def genfun(X, Y):
            return _polyval(WAVE_AIZ_F2, X - Y) + _polyval(WAVE_AIZ_F4, X + Y)

        return ModelFunctions(kind=WAVE, descriptor=descriptor,
                              U=Field.from_expr(U, 2),
                              P=Field.from_expr(P, 2),
                              Q=Field.from_expr(Q, 2),
                              R=Field.from_expr(R, 2), genfun=genfun,
                              reducible=True, label=name)

    if name == "trivial-E1y":
        return ModelFunctions(
            kind=CUBIC, descriptor=descriptor,
            U=Field.from_expr(lambda X, Y: -(20.0 / 3.0) * Y ** 3, 2),
            J=Field.from_expr(lambda X, Y: 0.0 * X, 2),
            K=Field.from_expr(lambda X, Y: 0.0 * X, 2),
            genfun=lambda X, Y: Y ** 5, label=name)

    # trivial-F-sum: F = x^4 + y^4
    return ModelFunctions(
        kind=QUARTIC, descriptor=descriptor,
        U=Field.from_expr(lambda X, Y: -3.0 * (X * X + Y * Y), 2),
        P=Field.from_expr(lambda X, Y: 12.0 * X * X, 2),
        Q=Field.from_expr(lambda X, Y: 0.0 * X, 2),
        R=Field.from_expr(lambda X, Y: 36.0 * X ** 4, 2),
        genfun=lambda X, Y: X ** 4 + Y ** 4, separable=True, label=name)


def _compose_genfun(params, u):
    k = u.order if isinstance(u, Jet2) else 0
    if k == 0:
        return 0.0
    from .jets import compose_series
    return compose_series(f_taylor(params, value(u), min(k, 4)), u)


# --- quadrature for R ------------------------------------------------------


def R_quadrature(model, x, y, epsabs=1e-10):
    """R(x, y) from the defining line integral along an L-shaped path.

    The path runs from the model's base point horizontally to (x, y0) and
    then vertically to (x, y); the gauge constant is fixed by R = 0 at the
    base point.  Raises ``PathError`` when the path touches the singular
    set and ``QuadratureError`` when the requested tolerance is not met.
    """
    x0, y0 = model.descriptor.basepoint
    for (ax, ay, bx, by) in ((x0, y0, x, y0), (x, y0, x, y)):
        for t in np.linspace(0.0, 1.0, 65):
            px, py = ax + t * (bx - ax), ay + t * (by - ay)
            if model.singular(px, py):
                raise PathError(
                    f"integration path touches the singular set near "
                    f"({px:.6g}, {py:.6g})")

    def vertical(yt):
        Uj = model.U.jet(x, yt, 1)
        return model.Q.value(x, yt) * Uj.deriv(1, 0)

    def horizontal(xt):
        Uj = model.U.jet(xt, y0, 1)
        Qj = model.Q.jet(xt, y0, 1)
        return (Qj.value * Uj.deriv(0, 1)
                + 2.0 * model.P.value(xt, y0) * Uj.deriv(1, 0)
                + 2.0 * Uj.value * Qj.deriv(0, 1))

    val_h, err_h = quad(horizontal, x0, x, epsabs=epsabs, epsrel=1e-12,
                        limit=200)
    val_v, err_v = quad(vertical, y0, y, epsabs=epsabs, epsrel=1e-12,
                        limit=200)
    if err_h + err_v > 1e-7:
        raise QuadratureError(
            f"line integrals did not converge: error estimate "
            f"{err_h + err_v:.3e}")
    return -val_v - val_h


# --- descriptor (de)serialisation ------------------------------------------


def descriptor_to_dict(md: ModelDescriptor):
    d = {"kind": md.kind, "basepoint": list(md.basepoint)}
    if md.kind == "catalog":
        d["name"] = md.catalog_name
        if md.catalog_lam is not None:
            d["lambda"] = md.catalog_lam
    elif md.kind == WAVE:
        d["wave_parts"] = [list(md.wave_parts[0]), list(md.wave_parts[1])]
    else:
        p = md.prepotential
        d["family"] = p.family
        d["params"] = {"lambda": p.lam, "mu": p.mu, "epsilon": p.epsilon,
                       "sigma": p.sigma}
    return d


def from_descriptor(d):
    """Build a model from a descriptor dictionary (see ``descriptor_to_dict``)."""
    try:
        kind = d["kind"]
    except (TypeError, KeyError):
        raise DomainError("descriptor must be an object with a 'kind' key")
    basepoint = tuple(d.get("basepoint", (1.5, 1.0)))
    if kind == "catalog":
        return catalog(d["name"], lam=d.get("lambda"), basepoint=basepoint)
    if kind == WAVE:
        parts = d.get("wave_parts")
        if parts is None or len(parts) != 2:
            raise DomainError("wave descriptor needs wave_parts=[F2, F4]")
        return build_wave(parts[0], parts[1], basepoint=basepoint)
    if kind in (CUBIC, QUARTIC):
        p = d.get("params", {})
        params = PrepotentialParams(
            family=d.get("family", BETA_PM), lam=float(p.get("lambda", 1.0)),
            mu=float(p.get("mu", 1.0)), epsilon=int(p.get("epsilon", 1)),
            sigma=int(p.get("sigma", 1)))
        builder = build_cubic if kind == CUBIC else build_quartic
        return builder(params, basepoint=basepoint)
    raise DomainError(f"unknown descriptor kind {kind!r}", value=kind)
