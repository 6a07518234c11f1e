"""Truncated Taylor (jet) arithmetic, univariate and bivariate, up to order 4.

A jet stores the Taylor coefficients of a smooth function about a base
point; arithmetic on jets propagates those coefficients through sums,
products, quotients and real powers, so high-order derivatives of composite
expressions come out of ordinary-looking formulas.  ``fd_deriv`` gives an
independent finite-difference estimate of the same derivatives for
cross-checking.

Coefficients are Taylor-normalised: for ``Jet2``,
``coeffs[pos(i, j)] == d^i_x d^j_y f / (i! j!)``.  The arithmetic is plain
Python, so exact numeric types (``fractions.Fraction``) flow through the
rational operations unchanged; ``sqrt``/``signed_cbrt``/``pow_real``
evaluate their base point with ``math`` and therefore produce floats.
"""

from __future__ import annotations

import math

from .errors import DomainError

MAX_ORDER = 4

# Multi-indices (i, j) with i + j <= order, graded lexicographic.
_INDICES = {
    n: [(d - j, j) for d in range(n + 1) for j in range(d + 1)]
    for n in range(MAX_ORDER + 1)
}
_POS = {n: {ij: k for k, ij in enumerate(_INDICES[n])} for n in range(MAX_ORDER + 1)}

# Product tables: for each output slot the list of (slot_a, slot_b) pairs.
_MUL = {}
for _n in range(MAX_ORDER + 1):
    pos = _POS[_n]
    table = []
    for (i, j) in _INDICES[_n]:
        pairs = []
        for a in range(i + 1):
            for b in range(j + 1):
                pairs.append((pos[(a, b)], pos[(i - a, j - b)]))
        table.append(pairs)
    _MUL[_n] = table

_FACT = [math.factorial(k) for k in range(MAX_ORDER + 1)]


def _check_order(order):
    if not isinstance(order, int) or order < 0 or order > MAX_ORDER:
        raise DomainError(f"jet order must lie in [0, {MAX_ORDER}], got {order!r}",
                          value=order)


class Jet2:
    """Bivariate truncated Taylor expansion about a point."""

    __slots__ = ("order", "center", "coeffs")

    def __init__(self, order, center, coeffs):
        self.order = order
        self.center = center
        self.coeffs = tuple(coeffs)

    @classmethod
    def constant(cls, value, order, center=(0.0, 0.0)):
        n = len(_INDICES[order])
        return cls(order, center, (value,) + (0.0,) * (n - 1))

    @property
    def value(self):
        return self.coeffs[0]

    def deriv(self, i, j):
        """Partial derivative d^i_x d^j_y at the base point."""
        if i < 0 or j < 0 or i + j > self.order:
            raise DomainError(
                f"multi-index ({i}, {j}) beyond truncation order {self.order}",
                value=(i, j))
        return self.coeffs[_POS[self.order][(i, j)]] * (_FACT[i] * _FACT[j])

    def _coerce(self, other):
        if isinstance(other, Jet2):
            if other.order != self.order:
                raise DomainError("jet orders differ: "
                                  f"{self.order} vs {other.order}")
            if other.center != self.center:
                raise DomainError("jet base points differ: "
                                  f"{self.center} vs {other.center}")
            return other.coeffs
        if isinstance(other, Jet1):
            raise DomainError("cannot mix univariate and bivariate jets")
        return None  # scalar

    def __add__(self, other):
        oc = self._coerce(other)
        if oc is None:
            c = list(self.coeffs)
            c[0] = c[0] + other
            return Jet2(self.order, self.center, c)
        return Jet2(self.order, self.center,
                    [a + b for a, b in zip(self.coeffs, oc)])

    __radd__ = __add__

    def __neg__(self):
        return Jet2(self.order, self.center, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet2) else -1 * other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return Jet2(self.order, self.center,
                        [a * other for a in self.coeffs])
        sc = self.coeffs
        table = _MUL[self.order]
        return Jet2(self.order, self.center,
                    [sum(sc[a] * oc[b] for a, b in pairs) for pairs in table])

    __rmul__ = __mul__

    def __truediv__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return Jet2(self.order, self.center,
                        [a / other for a in self.coeffs])
        return _div2(self.coeffs, oc, self.order, self.center)

    def __rtruediv__(self, other):
        num = Jet2.constant(other, self.order, self.center)
        return num / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return pow_real(self, k)
        if k < 0:
            return 1.0 / (self ** (-k))
        out = Jet2.constant(1.0, self.order, self.center)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __repr__(self):
        return f"Jet2(order={self.order}, center={self.center}, coeffs={self.coeffs})"


def _div2(ac, bc, order, center):
    b0 = bc[0]
    if b0 == 0:
        raise DomainError("division by a jet with zero value", value=b0)
    idx = _INDICES[order]
    pos = _POS[order]
    out = [None] * len(idx)
    for k, (i, j) in enumerate(idx):
        acc = ac[k]
        for a in range(i + 1):
            for b in range(j + 1):
                if a == 0 and b == 0:
                    continue
                acc = acc - bc[pos[(a, b)]] * out[pos[(i - a, j - b)]]
        out[k] = acc / b0
    return Jet2(order, center, out)


def seed(x, y, order):
    """Coordinate jets of x and y at (x, y)."""
    _check_order(order)
    X = [x] + [0.0] * (len(_INDICES[order]) - 1)
    Y = list(X)
    Y[0] = y
    if order >= 1:
        X[_POS[order][(1, 0)]] = 1.0
        Y[_POS[order][(0, 1)]] = 1.0
    c = (x, y)
    return Jet2(order, c, X), Jet2(order, c, Y)


class Jet1:
    """Univariate truncated Taylor expansion about a point."""

    __slots__ = ("order", "center", "coeffs")

    def __init__(self, order, center, coeffs):
        self.order = order
        self.center = center
        self.coeffs = tuple(coeffs)

    @classmethod
    def constant(cls, value, order, center=0.0):
        return cls(order, center, (value,) + (0.0,) * order)

    @property
    def value(self):
        return self.coeffs[0]

    def deriv(self, k):
        if k < 0 or k > self.order:
            raise DomainError(f"derivative order {k} beyond truncation "
                              f"order {self.order}", value=k)
        return self.coeffs[k] * _FACT[k]

    def derivs(self):
        """All derivative values (f, f', f'', ...) up to the truncation order."""
        return tuple(c * _FACT[k] for k, c in enumerate(self.coeffs))

    def _coerce(self, other):
        if isinstance(other, Jet1):
            if other.order != self.order or other.center != self.center:
                raise DomainError("jet orders or base points differ")
            return other.coeffs
        if isinstance(other, Jet2):
            raise DomainError("cannot mix univariate and bivariate jets")
        return None

    def __add__(self, other):
        oc = self._coerce(other)
        if oc is None:
            c = list(self.coeffs)
            c[0] = c[0] + other
            return Jet1(self.order, self.center, c)
        return Jet1(self.order, self.center,
                    [a + b for a, b in zip(self.coeffs, oc)])

    __radd__ = __add__

    def __neg__(self):
        return Jet1(self.order, self.center, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet1) else -1 * other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return Jet1(self.order, self.center,
                        [a * other for a in self.coeffs])
        sc = self.coeffs
        n = self.order
        return Jet1(self.order, self.center,
                    [sum(sc[a] * oc[k - a] for a in range(k + 1))
                     for k in range(n + 1)])

    __rmul__ = __mul__

    def __truediv__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return Jet1(self.order, self.center,
                        [a / other for a in self.coeffs])
        b0 = oc[0]
        if b0 == 0:
            raise DomainError("division by a jet with zero value", value=b0)
        sc = self.coeffs
        out = []
        for k in range(self.order + 1):
            acc = sc[k]
            for m in range(1, k + 1):
                acc = acc - oc[m] * out[k - m]
            out.append(acc / b0)
        return Jet1(self.order, self.center, out)

    def __rtruediv__(self, other):
        return Jet1.constant(other, self.order, self.center) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return pow_real(self, k)
        if k < 0:
            return 1.0 / (self ** (-k))
        out = Jet1.constant(1.0, self.order, self.center)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __repr__(self):
        return f"Jet1(order={self.order}, center={self.center}, coeffs={self.coeffs})"


def seed1(s, order):
    """Coordinate jet of the single variable at s."""
    _check_order(order)
    c = [s] + [0.0] * order
    if order >= 1:
        c[1] = 1.0
    return Jet1(order, s, c)


def value(x):
    """Value part of a jet, or the number itself."""
    if isinstance(x, (Jet1, Jet2)):
        return x.value
    return x


def compose_series(coeffs, inner):
    """Evaluate sum_k coeffs[k] * (inner - inner.value)^k by Horner.

    ``coeffs`` are the Taylor coefficients of an outer univariate function
    at the inner jet's value; the result is the jet of the composition.
    """
    if not isinstance(inner, (Jet1, Jet2)):
        return coeffs[0]
    hat = inner - inner.value
    take = min(len(coeffs), inner.order + 1)
    acc = coeffs[take - 1]
    for k in range(take - 2, -1, -1):
        acc = acc * hat + coeffs[k]
    if not isinstance(acc, (Jet1, Jet2)):  # order-0 inner
        acc = type(inner).constant(acc, inner.order, inner.center)
    return acc


def _power_series(v, r, order, v_pow_r):
    """Taylor coefficients of t -> t^r at t = v, given the value v^r.

    Uses the recurrence c_k = c_{k-1} * (r - k + 1) / (k * v), which only
    divides by v itself, so a real branch of the root stays real.
    """
    cs = [v_pow_r]
    for k in range(1, order + 1):
        cs.append(cs[-1] * (r - k + 1) / (k * v))
    return cs


def sqrt(x):
    """Square root of a jet or number; base value must be positive."""
    if not isinstance(x, (Jet1, Jet2)):
        if x < 0:
            raise DomainError("sqrt of a negative value", value=x)
        return math.sqrt(x)
    v = x.value
    if v < 0 or (v == 0 and x.order > 0):
        raise DomainError("sqrt domain violation at jet value", value=v)
    if v == 0:
        return type(x).constant(0.0, x.order, x.center)
    return compose_series(_power_series(v, 0.5, x.order, math.sqrt(v)), x)


def signed_cbrt(x):
    """Real cube root with the odd branch: sign(v) * |v|^(1/3)."""
    if not isinstance(x, (Jet1, Jet2)):
        return math.copysign(abs(x) ** (1.0 / 3.0), x)
    v = x.value
    if v == 0:
        if x.order == 0:
            return type(x).constant(0.0, x.order, x.center)
        raise DomainError("cube-root jet at zero value has no finite "
                          "derivatives", value=v)
    w = math.copysign(abs(v) ** (1.0 / 3.0), v)
    return compose_series(_power_series(v, 1.0 / 3.0, x.order, w), x)


def pow_real(x, r):
    """x**r for real r; base value must be positive unless r is an integer."""
    if isinstance(r, int) or (isinstance(r, float) and r.is_integer()):
        k = int(r)
        if isinstance(x, (Jet1, Jet2)):
            return x ** k
        return x ** k
    if not isinstance(x, (Jet1, Jet2)):
        if x <= 0:
            raise DomainError("non-integer power of a non-positive value",
                              value=x)
        return x ** r
    v = x.value
    if v <= 0:
        raise DomainError("non-integer power of a jet with non-positive "
                          "value", value=v)
    return compose_series(_power_series(v, r, x.order, v ** r), x)


def jet_arith(op, a, b=None):
    """Named-operation front end over the jet arithmetic.

    ``op`` is one of add, sub, mul, div, pow_real, sqrt, signed_cbrt; the
    operator and function forms are interchangeable.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow_real":
        return pow_real(a, b)
    if op == "sqrt":
        return sqrt(a)
    if op == "signed_cbrt":
        return signed_cbrt(a)
    raise DomainError(f"unknown jet operation {op!r}", value=op)


def deriv(a, i, j=None):
    """Derivative extraction: deriv(jet2, i, j) or deriv(jet1, k)."""
    if isinstance(a, Jet2):
        return a.deriv(i, j if j is not None else 0)
    if isinstance(a, Jet1):
        return a.deriv(i)
    raise DomainError("deriv expects a jet", value=a)


def partial_jet(a, i, j):
    """Jet of the partial derivative d^i_x d^j_y f, truncated accordingly."""
    if i < 0 or j < 0 or i + j > a.order:
        raise DomainError(f"cannot take ({i}, {j}) derivative of an "
                          f"order-{a.order} jet", value=(i, j))
    new_order = a.order - i - j
    pos_old = _POS[a.order]
    out = []
    for (p, q) in _INDICES[new_order]:
        c = a.coeffs[pos_old[(p + i, q + j)]]
        out.append(c * (math.comb(p + i, i) * math.comb(q + j, j))
                   * (_FACT[i] * _FACT[j]))
    return Jet2(new_order, a.center, out)


# One-dimensional central-difference kernels, all O(h^2) accurate.
_KERNELS = {
    0: ((0, 1.0),),
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
    4: ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)),
}


def fd_deriv(f, x, y, i, j, h=1e-4, richardson=False):
    """Central finite-difference estimate of d^i_x d^j_y f at (x, y).

    Composes one-dimensional second-order stencils, so the truncation
    error is O(h^2); ``richardson=True`` combines steps h and h/2 for
    O(h^4).  Non-finite samples raise ``DomainError``.
    """
    if h <= 0:
        raise DomainError("finite-difference step must be positive", value=h)
    if i < 0 or j < 0 or i + j > MAX_ORDER:
        raise DomainError(f"unsupported derivative order ({i}, {j})",
                          value=(i, j))

    def estimate(step):
        total = 0.0
        for a, wa in _KERNELS[i]:
            for b, wb in _KERNELS[j]:
                sample = f(x + a * step, y + b * step)
                if not math.isfinite(sample):
                    raise DomainError(
                        f"non-finite sample at ({x + a * step}, {y + b * step})",
                        value=sample)
                total += wa * wb * sample
        return total / step ** (i + j)

    if richardson:
        return (4.0 * estimate(h / 2.0) - estimate(h)) / 3.0
    return estimate(h)
