"""Trajectory integration on the zero-energy shell with invariant monitoring.

The equations of motion are x'' = U_x, y'' = U_y.  The quadratic invariant
I1 = vx^2 + vy^2 - 2 U is conserved for any start; the higher invariant I2
(cubic or quartic in the velocities) is conserved on the shell I1 = 0,
which ``zero_energy_state`` constructs.  Off-shell starts are permitted
but flagged, and their I2 drift is informational only.

Integrators: classical fixed-step RK4 and an embedded adaptive 4(5) pair.
The integration loop works on plain floats; the potential gradient comes
from order-1 jets of the model's U field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

BLOWUP_LIMIT = 1e12

COMPLETED = "completed"
SINGULAR_APPROACH = "singular_approach"
NON_FINITE = "non_finite"


@dataclass
class PhaseState:
    """A phase-space point of the planar dynamics."""

    x: float
    y: float
    vx: float
    vy: float
    t: float = 0.0

    def __post_init__(self):
        for v in (self.x, self.y, self.vx, self.vy, self.t):
            if not math.isfinite(v):
                raise DomainError("phase-state entries must be finite",
                                  value=v)


@dataclass
class TrajectoryReport:
    """Sampled trajectory rows and invariant-drift statistics.

    ``rows`` has columns (t, x, y, vx, vy, I1, I2).  ``I2_drift`` is
    max |I2(t) - I2(0)| / max(1, |I2(0)|) over the samples.
    """

    rows: np.ndarray
    I1_max_abs: float
    I2_drift: float
    termination: str
    on_shell: bool

    def final_state(self):
        t, x, y, vx, vy = self.rows[-1][:5]
        return PhaseState(x, y, vx, vy, t)


def _grad_U(model, x, y):
    Uj = model.U.jet(x, y, 1)
    return Uj.value, Uj.deriv(1, 0), Uj.deriv(0, 1)


def rhs(model, state):
    """Right-hand side (vx, vy, U_x, U_y) of the first-order system."""
    if model.singular(state.x, state.y):
        raise DomainError(
            f"({state.x}, {state.y}) is on the singular set",
            value=(state.x, state.y))
    _, Ux, Uy = _grad_U(model, state.x, state.y)
    return np.array([state.vx, state.vy, Ux, Uy])


def zero_energy_state(model, x, y, theta):
    """State at (x, y) with speed sqrt(2U) in direction theta, so I1 = 0."""
    U = model.U.value(x, y)
    if not U > 0:
        raise DomainError(
            f"no real zero-energy motion at ({x}, {y}): U = {U}", value=U)
    v = math.sqrt(2.0 * U)
    return PhaseState(x, y, v * math.cos(theta), v * math.sin(theta))


def eval_I1(model, state):
    """Quadratic invariant vx^2 + vy^2 - 2 U; zero on the energy shell."""
    U = model.U.value(state.x, state.y)
    return state.vx ** 2 + state.vy ** 2 - 2.0 * U


def eval_I2(model, state):
    """The higher invariant: cubic or quartic in the velocities."""
    x, y, vx, vy = state.x, state.y, state.vx, state.vy
    if model.singular(x, y):
        raise DomainError(f"({x}, {y}) is on the singular set", value=(x, y))
    if model.kind == "cubic":
        return vx ** 3 + model.J.value(x, y) * vx + model.K.value(x, y) * vy
    return (vx ** 4 + model.P.value(x, y) * vx ** 2
            + model.Q.value(x, y) * vx * vy + model.R.value(x, y))


def eval_I2_reducible(model, state):
    """Wave-family alternative form -(vx vy - Q/2)^2; wave models only."""
    if not model.reducible:
        raise DomainError("reducible invariant form exists for wave models "
                          "only", value=model.kind)
    w = state.vx * state.vy - 0.5 * model.Q.value(state.x, state.y)
    return -(w * w)


def _guard(model, x, y, U, Ux, Uy):
    if not all(map(math.isfinite, (x, y, U, Ux, Uy))):
        return NON_FINITE
    if abs(U) > BLOWUP_LIMIT or abs(Ux) > BLOWUP_LIMIT \
            or abs(Uy) > BLOWUP_LIMIT:
        return SINGULAR_APPROACH
    if model.singular(x, y):
        return SINGULAR_APPROACH
    return None


# Default threshold for the invariant-consistency guard.  I1 is conserved
# exactly by the flow, so a growing I1 error means the step no longer
# resolves the dynamics; in these models that happens only on approach to
# the singular set, where magnitude thresholds alone are easy to jump over
# within one step.
I1_GUARD = 1e-9


def _rk4_step(model, x, y, vx, vy, h):
    def acc(px, py):
        _, Ux, Uy = _grad_U(model, px, py)
        return Ux, Uy

    ax1, ay1 = acc(x, y)
    k1 = (vx, vy, ax1, ay1)
    ax2, ay2 = acc(x + 0.5 * h * k1[0], y + 0.5 * h * k1[1])
    k2 = (vx + 0.5 * h * k1[2], vy + 0.5 * h * k1[3], ax2, ay2)
    ax3, ay3 = acc(x + 0.5 * h * k2[0], y + 0.5 * h * k2[1])
    k3 = (vx + 0.5 * h * k2[2], vy + 0.5 * h * k2[3], ax3, ay3)
    ax4, ay4 = acc(x + h * k3[0], y + h * k3[1])
    k4 = (vx + h * k3[2], vy + h * k3[3], ax4, ay4)
    x += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
    y += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
    vx += h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
    vy += h / 6.0 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])
    return x, y, vx, vy


# Fehlberg 4(5) tableau; the 4th-order solution propagates and the
# difference to the 5th-order one estimates the local error.
_RKF_A = (
    (),
    (1.0 / 4.0,),
    (3.0 / 32.0, 9.0 / 32.0),
    (1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0),
    (439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0),
    (-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0),
)
_RKF_B4 = (25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0, -1.0 / 5.0,
           0.0)
_RKF_ERR = (1.0 / 360.0, 0.0, -128.0 / 4275.0, -2197.0 / 75240.0, 1.0 / 50.0,
            2.0 / 55.0)


def _deriv4(model, u):
    _, Ux, Uy = _grad_U(model, u[0], u[1])
    return np.array([u[2], u[3], Ux, Uy])


def _rkf45_step(model, u, h):
    ks = [_deriv4(model, u)]
    for row in _RKF_A[1:]:
        uu = u + h * sum(a * k for a, k in zip(row, ks))
        ks.append(_deriv4(model, uu))
    u4 = u + h * sum(b * k for b, k in zip(_RKF_B4, ks))
    err = h * sum(e * k for e, k in zip(_RKF_ERR, ks))
    return u4, float(np.max(np.abs(err)))


def integrate(model, state0, dt, T, method="rk4", tol=1e-10, stride=None,
              i1_guard=I1_GUARD):
    """Integrate from ``state0`` for duration T and monitor both invariants.

    Fixed-step RK4 uses step dt; the adaptive 4(5) method starts from dt
    and controls the per-step error estimate against ``tol``.  Samples are
    recorded every ``stride`` accepted steps (default aims at ~1000 rows).
    Integration stops early, retaining the partial trajectory, when the
    state goes non-finite, approaches the singular set, or (with
    ``i1_guard``) the conserved I1 departs from its start value by more
    than the guard, which signals an unresolved close approach.
    """
    if dt <= 0 or T < 0:
        raise DomainError("need dt > 0 and T >= 0", value=(dt, T))
    if method not in ("rk4", "rk45"):
        raise DomainError(f"unknown method {method!r}", value=method)
    if method == "rk45" and tol <= 0:
        raise DomainError("rk45 needs a positive tolerance", value=tol)

    i1_0 = eval_I1(model, state0)
    on_shell = abs(i1_0) < 1e-10
    # the consistency guard only makes sense where a singular set exists
    armed = i1_guard is not None and model.singular_fn is not None
    i1_trip = abs(i1_guard) * max(1.0, abs(i1_0)) if armed else math.inf

    rows = []
    I2_0 = eval_I2(model, state0)
    I2_scale = max(1.0, abs(I2_0))
    I1_max = 0.0
    I2_dev = 0.0

    def record(t, x, y, vx, vy):
        nonlocal I1_max, I2_dev
        st = PhaseState(x, y, vx, vy, t)
        i1 = eval_I1(model, st)
        i2 = eval_I2(model, st)
        I1_max = max(I1_max, abs(i1))
        I2_dev = max(I2_dev, abs(i2 - I2_0))
        rows.append((t, x, y, vx, vy, i1, i2))

    x, y, vx, vy = state0.x, state0.y, state0.vx, state0.vy
    t0 = state0.t
    termination = COMPLETED
    record(t0, x, y, vx, vy)

    if T > 0 and method == "rk4":
        n_steps = max(1, round(T / dt))
        h = T / n_steps
        if stride is None:
            stride = max(1, n_steps // 1000)
        for k in range(1, n_steps + 1):
            try:
                x, y, vx, vy = _rk4_step(model, x, y, vx, vy, h)
                if not all(map(math.isfinite, (x, y, vx, vy))):
                    termination = NON_FINITE
                    break
                U, Ux, Uy = _grad_U(model, x, y)
            except (DomainError, ZeroDivisionError, OverflowError):
                termination = SINGULAR_APPROACH
                break
            bad = _guard(model, x, y, U, Ux, Uy)
            if bad is None and abs(vx * vx + vy * vy - 2.0 * U - i1_0) \
                    > i1_trip:
                bad = SINGULAR_APPROACH
            if bad is not None:
                termination = bad
                break
            if k % stride == 0 or k == n_steps:
                record(t0 + k * h, x, y, vx, vy)
    elif T > 0:
        u = np.array([x, y, vx, vy])
        t = 0.0
        h = dt
        t_record = T / 1000.0 if stride is None else dt * stride
        next_record = t_record
        while t < T:
            h = min(h, T - t)
            try:
                u_new, err = _rkf45_step(model, u, h)
            except (DomainError, ZeroDivisionError, OverflowError):
                termination = SINGULAR_APPROACH
                break
            if err > tol and h > 1e-14:
                h *= max(0.2, 0.9 * (tol / err) ** 0.25)
                continue
            u = u_new
            t += h
            if err > 0:
                h *= min(5.0, 0.9 * (tol / err) ** 0.2)
            if not np.all(np.isfinite(u)):
                termination = NON_FINITE
                break
            try:
                U, Ux, Uy = _grad_U(model, u[0], u[1])
            except (DomainError, ZeroDivisionError, OverflowError):
                termination = SINGULAR_APPROACH
                break
            bad = _guard(model, u[0], u[1], U, Ux, Uy)
            if bad is None and abs(u[2] ** 2 + u[3] ** 2 - 2.0 * U - i1_0) \
                    > i1_trip:
                bad = SINGULAR_APPROACH
            if bad is not None:
                termination = bad
                break
            if t >= next_record or t >= T:
                record(t0 + t, *u)
                next_record += t_record

    return TrajectoryReport(rows=np.array(rows), I1_max_abs=I1_max,
                            I2_drift=I2_dev / I2_scale,
                            termination=termination, on_shell=on_shell)


def time_reversed(state):
    """The velocity-reversed state, for reversibility checks."""
    return PhaseState(state.x, state.y, -state.vx, -state.vy, state.t)


def write_trajectory_csv(report, path):
    """Write sampled rows as CSV with 17-significant-digit floats."""
    with open(path, "w", newline="\n") as fh:
        fh.write("t,x,y,vx,vy,I1,I2\n")
        for row in report.rows:
            fh.write(",".join(format(v, ".17g") for v in row) + "\n")
