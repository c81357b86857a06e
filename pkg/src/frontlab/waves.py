"""Phase-plane shooting for traveling-front profiles.

The auxiliary equation V'' + c V' + g(V) = 0, V(0) = delta, V'(0) = 0 is
integrated with terminal event detection; a case-iii trajectory (V hits
zero with strictly negative slope) is mapped back to a compactly
supported profile through the mass-coordinate change x = int m V^(m-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline

from .errors import (DomainError, NonTermination, SearchExhausted,
                     TransformError)
from .model import ReactionFn

__all__ = [
    "CASE_I", "CASE_II", "CASE_III", "ShootControls", "ShootResult",
    "WaveProfile", "SpeedCertificate", "g_eval", "g_fn", "shoot",
    "engler_transform", "ignition_truncate", "find_compact_support_speed",
]

CASE_I = "case-i"       # converges to the origin without touching it
CASE_II = "case-ii"     # touches the origin with zero slope (degenerate)
CASE_III = "case-iii"   # hits V = 0 with strictly negative slope


@dataclass(frozen=True)
class ShootControls:
    """Integration controls for shoot(); y_max defaults to 1e6/max(c,1)."""

    rtol: float = 1e-8
    atol: float = 1e-11
    y_max: Optional[float] = None
    norm_tol: float = 1e-8
    slope_tol: float = 1e-8
    n_samples: int = 1500


@dataclass(frozen=True, eq=False)
class ShootResult:
    """Outcome of one shot: classification plus the sampled trajectory."""

    outcome: str
    c: float
    delta: float
    y_c: Optional[float]
    terminal_slope: Optional[float]
    y: np.ndarray
    V: np.ndarray
    Vp: np.ndarray


@dataclass(frozen=True, eq=False)
class WaveProfile:
    """Compactly supported front profile U on [0, x_c] after the transform."""

    c: float
    x_c: float
    x: np.ndarray
    U: np.ndarray
    u_of_x: Optional[Callable] = None


@dataclass(frozen=True)
class SpeedCertificate:
    """A speed c0 whose shot is case iii, for both truncated and full g."""

    c0: float
    delta: float
    ignition: "ShootResult"
    full: "ShootResult"


def g_eval(m: float, f, s):
    """m f(s) s^(m-1), extended by 0 at s = 0 when the product vanishes there."""
    if not m > 0.0:
        raise DomainError("m must be positive")
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError("s must lie in [0, 1]")
    if np.any(arr == 0.0):
        beta = f.upper[1] if isinstance(f, ReactionFn) else 1.0
        if not m + beta - 1.0 > 0.0:
            raise DomainError("g(s) = m f(s) s^(m-1) is singular at s = 0")
    a1 = np.atleast_1d(arr)
    out = np.zeros_like(a1)
    pos = a1 > 0.0
    if pos.any():
        fv = np.asarray(f(a1[pos]), dtype=float)
        out[pos] = m * fv * a1[pos] ** (m - 1.0)
    return float(out[0]) if arr.ndim == 0 else out


def g_fn(m: float, f) -> Callable:
    """Bind s -> m f(s) s^(m-1), extended by zero outside (0, 1)."""
    def g(s: float) -> float:
        if s <= 0.0 or s >= 1.0:
            return 0.0
        return m * float(f(s)) * s ** (m - 1.0)
    return g


def ignition_truncate(g: Callable, delta: float) -> Callable:
    """Multiply g by a ramp that vanishes on [0, delta/2] and is 1 past 3delta/4."""
    if not 0.0 < delta < 1.0:
        raise DomainError("delta must lie in (0, 1)")
    lo, hi = 0.5 * delta, 0.75 * delta

    def g_tilde(s: float) -> float:
        if s <= lo:
            return 0.0
        chi = 1.0 if s >= hi else (s - lo) / (hi - lo)
        return chi * g(s)
    return g_tilde


def shoot(c: float, delta: float, g: Callable,
          controls: Optional[ShootControls] = None) -> ShootResult:
    """Integrate V'' + cV' + g(V) = 0 from (delta, 0) and classify the outcome."""
    if controls is None:
        controls = ShootControls()
    if not 0.0 < delta < 1.0:
        raise DomainError("delta must lie in (0, 1)")
    if c < 0.0:
        raise DomainError("speed must be nonnegative")
    y_max = controls.y_max
    if y_max is None:
        y_max = 1e6 / max(c, 1.0)

    def rhs(_y, state):
        v, vp = state
        return (vp, -c * vp - (g(v) if v > 0.0 else 0.0))

    def ev_cross(_y, state):
        return state[0]
    ev_cross.terminal = True
    ev_cross.direction = -1.0

    norm_tol = controls.norm_tol

    def ev_origin(_y, state):
        return math.hypot(state[0], state[1]) - norm_tol
    ev_origin.terminal = True
    ev_origin.direction = -1.0

    # Radau: the system is stiff once V leaves the reaction zone (the
    # homogeneous mode decays like e^(-cy), capping explicit steps at ~1/c
    # forever); an implicit RK pair keeps long tails affordable.
    sol = solve_ivp(rhs, (0.0, y_max), [delta, 0.0], method="Radau",
                    rtol=controls.rtol, atol=controls.atol,
                    dense_output=True, events=[ev_cross, ev_origin])
    if sol.status != 1:
        raise NonTermination(
            f"no terminal event before y = {y_max:.3g} (c={c}, delta={delta})")

    ys = np.linspace(0.0, sol.t[-1], controls.n_samples)
    V, Vp = sol.sol(ys)
    if len(sol.t_events[0]):
        y_c = float(sol.t_events[0][0])
        slope = float(sol.y_events[0][0][1])
        outcome = CASE_III if slope < -controls.slope_tol else CASE_II
        return ShootResult(outcome=outcome, c=c, delta=delta, y_c=y_c,
                           terminal_slope=slope, y=ys, V=V, Vp=Vp)
    return ShootResult(outcome=CASE_I, c=c, delta=delta, y_c=None,
                       terminal_slope=None, y=ys, V=V, Vp=Vp)


def engler_transform(result: ShootResult, m: float) -> WaveProfile:
    """Map a case-iii trajectory to U on [0, x_c] via x = int_0^y m V^(m-1).

    For m < 1 the integrand blows up at y_c like (y_c - y)^(m-1); the last
    sliver is closed analytically with V ~ |V'(y_c)|(y_c - y), and the rest
    is integrated adaptively against a Hermite interpolant of the shot.
    """
    if not m > 0.0:
        raise TransformError("m must be positive")
    if result.outcome != CASE_III:
        raise DomainError("the mass-coordinate transform needs a case-iii shot")
    y_c = float(result.y_c)
    slope = abs(float(result.terminal_slope))
    spline = CubicHermiteSpline(result.y, result.V, result.Vp)
    y_end = y_c * (1.0 - 1e-6)

    def phi_rate(y: float) -> float:
        v = float(spline(y))
        if v <= 0.0:
            v = slope * max(y_c - y, 1e-300)
        return m * v ** (m - 1.0)

    phi_sol = solve_ivp(lambda y, _s: [phi_rate(y)], (0.0, y_end), [0.0],
                        method="RK45", rtol=1e-10, atol=1e-13,
                        dense_output=True)
    phi_end = float(phi_sol.y[0][-1])
    tail = slope ** (m - 1.0) * (y_c - y_end) ** m
    x_c = phi_end + tail

    keep = result.y <= y_end
    xs = np.append(phi_sol.sol(result.y[keep])[0], x_c)
    Us = np.append(result.V[keep], 0.0)

    def u_of_x(x):
        arr = np.asarray(x, dtype=float)
        flat = np.atleast_1d(arr).astype(float)
        out = np.empty_like(flat)
        for i, xv in enumerate(flat):
            if xv <= 0.0:
                out[i] = result.V[0]
            elif xv >= phi_end:
                out[i] = (slope * max(x_c - xv, 0.0)) ** (1.0 / m)
            else:
                y = float(np.interp(xv, xs, np.append(result.y[keep], y_c)))
                y = min(y, y_end)
                for _ in range(5):
                    y -= (float(phi_sol.sol(y)[0]) - xv) / phi_rate(y)
                    y = min(max(y, 0.0), y_end)
                out[i] = float(spline(y))
        return float(out[0]) if arr.ndim == 0 else out

    return WaveProfile(c=result.c, x_c=x_c, x=xs, U=Us, u_of_x=u_of_x)


def find_compact_support_speed(g: Callable, delta: float,
                               controls: Optional[ShootControls] = None
                               ) -> SpeedCertificate:
    """Halve c from 1 until the ignition-truncated shot is case iii.

    The returned certificate carries both the truncated-g shot and the
    full-g shot at c0 (the comparison argument makes both case iii).
    """
    g_tilde = ignition_truncate(g, delta)
    c = 1.0
    for _ in range(41):
        try:
            res = shoot(c, delta, g_tilde, controls)
        except NonTermination:
            res = None
        if res is not None and res.outcome == CASE_III:
            full = shoot(c, delta, g, controls)
            if full.outcome != CASE_III:
                raise SearchExhausted(
                    "full-g shot at the candidate speed is not case iii")
            return SpeedCertificate(c0=c, delta=delta, ignition=res,
                                    full=full)
        c *= 0.5
    raise SearchExhausted("no compact-support speed after 40 halvings")
