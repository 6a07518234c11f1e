"""Dihedral point symmetries of the master equations and the rescalings.

The cubic master equation is invariant under the 12-element symmetry group
of the hexagon, the quartic one under the 16-element group of the octagon:
rotations by pi/3 (respectively pi/4) composed with the reflection
x -> -x.  Elements are enumerated as (rotation index, reflection flag)
with the reflection applied after the rotation.  Acting on a generating
scalar by composition with a group element, or rescaling it by
lam * f(x / mu, y / mu), maps solutions of the master equations to
solutions; the verification layer checks this numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .models import invariant_vars

D6 = "D6"
D8 = "D8"

_ROTATIONS = {D6: 6, D8: 8}


@dataclass(frozen=True)
class DihedralElement:
    group: str
    k: int
    reflected: bool = False

    def __post_init__(self):
        if self.group not in _ROTATIONS:
            raise DomainError(f"unknown group {self.group!r}", value=self.group)
        if not 0 <= self.k < _ROTATIONS[self.group]:
            raise DomainError(
                f"rotation index {self.k} outside [0, {_ROTATIONS[self.group]})",
                value=self.k)

    def __str__(self):
        tag = f"r{self.k}"
        return tag + ("m" if self.reflected else "")


def elements(group):
    """All group elements: 12 for D6, 16 for D8."""
    n = _ROTATIONS.get(group)
    if n is None:
        raise DomainError(f"unknown group {group!r}", value=group)
    return [DihedralElement(group, k, refl)
            for refl in (False, True) for k in range(n)]


def matrix(e: DihedralElement):
    """2x2 matrix of the element (reflection applied after rotation)."""
    alpha = 2.0 * math.pi / _ROTATIONS[e.group] * e.k
    c, s = math.cos(alpha), math.sin(alpha)
    m = [[c, -s], [s, c]]
    if e.reflected:
        m = [[-m[0][0], -m[0][1]], m[1]]
    return m


def apply_point(e: DihedralElement, x, y):
    """Image of (x, y) under the element."""
    m = matrix(e)
    return m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y


def compose(a: DihedralElement, b: DihedralElement):
    """Group composition a o b; closure makes the result an element."""
    if a.group != b.group:
        raise DomainError("cannot compose elements of different groups")
    n = _ROTATIONS[a.group]
    # with elements m^f r^k, pulling r^ka through b's reflection inverts it
    if b.reflected:
        k = (b.k - a.k) % n
    else:
        k = (a.k + b.k) % n
    return DihedralElement(a.group, k, a.reflected != b.reflected)


@dataclass
class InvarianceCheck:
    """How the invariant-variable pair of one point transforms."""

    element: DihedralElement
    point: tuple
    pair_before: tuple
    pair_after: tuple
    mapping: str
    max_abs_error: float

    @property
    def matched(self):
        return math.isfinite(self.max_abs_error)


def check_invariant_vars(e: DihedralElement, x, y):
    """Match the transformed invariant pair against the dihedral images.

    D6 elements send (v, u) to (+-v, +-u); D8 elements send (s, t) to a
    signed permutation of (s, t) (the first generator realises
    (s, t) -> (t, -s)).  Returns the best-matching mapping and its error.
    """
    kind = "cubic" if e.group == D6 else "quartic"
    a, b = invariant_vars(kind, x, y)
    xi, yi = apply_point(e, x, y)
    ai, bi = invariant_vars(kind, xi, yi)

    names = ("v", "u") if e.group == D6 else ("s", "t")
    candidates = {}
    for sa in (1.0, -1.0):
        for sb in (1.0, -1.0):
            pa, pb = ("" if sa > 0 else "-"), ("" if sb > 0 else "-")
            candidates[f"({pa}{names[0]},{pb}{names[1]})"] = (sa * a, sb * b)
            if e.group == D8:
                candidates[f"({pa}{names[1]},{pb}{names[0]})"] = (sa * b, sb * a)

    scale = max(1.0, abs(a), abs(b))
    best_name, best_err = None, math.inf
    for name, (ca, cb) in candidates.items():
        err = max(abs(ai - ca), abs(bi - cb)) / scale
        if err < best_err:
            best_name, best_err = name, err
    return InvarianceCheck(element=e, point=(x, y), pair_before=(a, b),
                           pair_after=(ai, bi), mapping=best_name,
                           max_abs_error=best_err)


def transform_genfun(e: DihedralElement, genfun):
    """Pull back a generating scalar along the element: f o e."""
    m = matrix(e)

    def transformed(X, Y):
        return genfun(m[0][0] * X + m[0][1] * Y, m[1][0] * X + m[1][1] * Y)

    return transformed


def rescale_genfun(genfun, lam, mu):
    """The rescaled scalar lam * f(x / mu, y / mu)."""
    if mu == 0:
        raise DomainError("mu must be nonzero", value=mu)

    def rescaled(X, Y):
        return lam * genfun(X / mu, Y / mu)

    return rescaled


def distinct_images(group, fn, probes, tol=1e-10):
    """Number of distinct pullbacks of ``fn`` over the group.

    Images are compared through their order-2 jets at the probe points
    (insensitive to the gauge of the scalar's value); coincidences are
    counted, not interpreted.
    """
    from .jets import seed

    sigs = []
    for e in elements(group):
        g = transform_genfun(e, fn)
        sig = []
        for (x, y) in probes:
            X, Y = seed(x, y, 2)
            jet = g(X, Y)
            coeffs = jet.coeffs[1:] if hasattr(jet, "coeffs") else (jet,)
            sig.extend(coeffs)
        sigs.append(tuple(sig))
    distinct = []
    for s in sigs:
        scale = max(1.0, max(abs(v) for v in s))
        if not any(max(abs(a - b) for a, b in zip(s, d)) < tol * scale
                   for d in distinct):
            distinct.append(s)
    return len(distinct)
