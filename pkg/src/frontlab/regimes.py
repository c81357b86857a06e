"""Propagation phase diagram over (m, alpha, beta) and level-set envelopes.

The classifier returns exactly one regime per parameter triple; equality
cases sit on the dividing curves and are reported as Boundary with a label
rather than silently bucketed. For fast diffusion (m < 1) everything runs
through the effective tail exponent gamma = min(alpha, 2/(1-m)), since the
equation fattens any lighter tail up to x^(-2/(1-m)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, RegimeMismatch
from .model import ModelParams, default_reaction


class Regime(Enum):
    NO_ACCELERATION = "NoAcceleration"
    EXPONENTIAL = "ExponentialAcceleration"
    POLYNOMIAL = "PolynomialAcceleration"
    INFINITE_SPEED = "InfiniteSpeedUnlocalized"
    POLY_LOWER_ONLY = "PolynomialLowerOnly"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class RegimeKind:
    """Classified regime; gamma is the exponential rate factor (beta = 1),
    exponent the polynomial time power, label the boundary curve hit."""

    regime: Regime
    gamma: Optional[float] = None
    exponent: Optional[float] = None
    label: Optional[str] = None


def gamma_effective(m: float, alpha: float) -> float:
    """Effective tail exponent min(alpha, 2/(1-m)); fast diffusion only."""
    if not 0 < m < 1:
        raise DomainError("gamma_effective requires 0 < m < 1")
    if not alpha > 0:
        raise DomainError("alpha must lie in (0, inf]")
    return min(alpha, 2.0 / (1.0 - m))


def classify(m: float, alpha: float, beta: float) -> RegimeKind:
    """Locate (m, alpha, beta) in the phase diagram.

    m >= 1: the only acceleration mechanism is the heavy tail itself, and
    the no-acceleration threshold max(1+1/alpha, 2-m) collapses to 1+1/alpha
    since 2-m <= 1 <= beta. m < 1: the diagram is richer; with
    b1 = 1+1/gamma, b2 = m+2/gamma and b3 = 2-m the regions are
    polynomial (beta < min(b1, b2)), lower-envelope-only (b2 < beta < b1),
    infinite speed without localization (b1 < beta < b3), and none
    (beta >= max(b1, b3)); beta = 1 accelerates exponentially except at the
    critical alpha = 2/(1-m).
    """
    if not m > 0:
        raise DomainError(f"m must be positive, got {m}")
    if not beta >= 1:
        raise DomainError(f"beta must be >= 1, got {beta}")
    if not alpha > 0:
        raise DomainError(f"alpha must lie in (0, inf], got {alpha}")

    if m >= 1:
        if beta == 1.0:
            if math.isinf(alpha):
                return RegimeKind(Regime.NO_ACCELERATION)
            return RegimeKind(Regime.EXPONENTIAL, gamma=1.0 / alpha)
        if math.isinf(alpha):
            return RegimeKind(Regime.NO_ACCELERATION)
        b1 = 1.0 + 1.0 / alpha
        if beta == b1:
            return RegimeKind(Regime.BOUNDARY, label="beta=1+1/alpha")
        if beta < b1:
            return RegimeKind(Regime.POLYNOMIAL,
                              exponent=1.0 / (alpha * (beta - 1.0)))
        return RegimeKind(Regime.NO_ACCELERATION)

    gamma = gamma_effective(m, alpha)
    saturation = 2.0 / (1.0 - m)
    if beta == 1.0:
        if alpha == saturation:
            return RegimeKind(Regime.BOUNDARY, label="alpha=2/(1-m)")
        return RegimeKind(Regime.EXPONENTIAL,
                          gamma=max((1.0 - m) / 2.0, 1.0 / alpha))

    b1 = 1.0 + 1.0 / gamma
    b2 = m + 2.0 / gamma
    b3 = 2.0 - m
    pinch = 1.0 / (1.0 - m)  # gamma at which b1 = b2 = b3
    if beta == b3 and gamma >= pinch:
        return RegimeKind(Regime.BOUNDARY, label="beta=2-m")
    if beta == b1:
        return RegimeKind(Regime.BOUNDARY, label="beta=1+1/gamma")
    if beta == b2 and gamma > pinch:
        return RegimeKind(Regime.BOUNDARY, label="beta=m+2/gamma")
    if beta < min(b1, b2):
        return RegimeKind(Regime.POLYNOMIAL,
                          exponent=1.0 / (gamma * (beta - 1.0)))
    if b2 < beta < b1:
        return RegimeKind(Regime.POLY_LOWER_ONLY,
                          exponent=1.0 / (gamma * (beta - 1.0)))
    if b1 < beta < b3:
        return RegimeKind(Regime.INFINITE_SPEED)
    return RegimeKind(Regime.NO_ACCELERATION)


@dataclass(frozen=True)
class Envelope:
    """Level-set envelopes: x_lambda(t) in (lower(t), upper(t)) for t >= T."""

    lower: Callable[[np.ndarray], np.ndarray]
    upper: Optional[Callable[[np.ndarray], np.ndarray]]
    T: float
    epsilon: float
    lower_desc: dict
    upper_desc: Optional[dict]


def _desc_fn(desc: dict) -> Callable[[np.ndarray], np.ndarray]:
    kind = desc["kind"]
    if kind == "exp":
        rate = desc["rate"]
        return lambda t: np.exp(rate * np.asarray(t, dtype=float))
    if kind == "pow":
        a, p = desc["prefactor"], desc["exponent"]
        return lambda t: (a * np.asarray(t, dtype=float)) ** p
    if kind == "linear":
        c = desc["speed"]
        return lambda t: c * np.asarray(t, dtype=float)
    raise DomainError(f"unknown envelope descriptor kind {kind!r}")


def envelopes(params: ModelParams, epsilon: Optional[float] = None,
              c0: Optional[float] = None) -> Envelope:
    """Build x-(t), x+(t) for the classified regime of ``params``.

    Exponential regime: exp((r-eps)*Gamma*t) and exp((r_bar+eps)*Gamma*t).
    Polynomial regime: ((r-eps) C^(b-1) (b-1) t)^(1/(a_eff (b-1))) and the
    same with (r_bar+eps, C_bar). Lower-only regime: polynomial lower bound
    plus the monomial upper bound of exponent (beta-m+eps)/(2(beta-1)).
    Infinite-speed regime: only the linear floor c0*t (c0 found by the
    compact-support wave search when not supplied). T is 1 except in the
    lower-only regime, where the mismatched exponents cross later.
    """
    eps = 0.1 * params.r if epsilon is None else float(epsilon)
    if not 0 < eps < params.r:
        raise DomainError("need 0 < epsilon < r")
    kind = classify(params.m, params.alpha, params.beta)
    if kind.regime is Regime.NO_ACCELERATION:
        raise RegimeMismatch("no envelopes in the no-acceleration regime")
    if kind.regime is Regime.BOUNDARY:
        raise RegimeMismatch(f"no envelopes on the boundary curve {kind.label}")

    m, beta = params.m, params.beta
    if kind.regime is Regime.EXPONENTIAL:
        lo = {"kind": "exp", "rate": (params.r - eps) * kind.gamma}
        hi = {"kind": "exp", "rate": (params.r_bar + eps) * kind.gamma}
    elif kind.regime in (Regime.POLYNOMIAL, Regime.POLY_LOWER_ONLY):
        a_eff = params.alpha if m >= 1 else gamma_effective(m, params.alpha)
        lo = {"kind": "pow",
              "prefactor": (params.r - eps) * params.C ** (beta - 1.0) * (beta - 1.0),
              "exponent": 1.0 / (a_eff * (beta - 1.0))}
        if kind.regime is Regime.POLYNOMIAL:
            p_hi = 1.0 / (a_eff * (beta - 1.0))
        else:
            p_hi = (beta - m + eps) / (2.0 * (beta - 1.0))
        hi = {"kind": "pow",
              "prefactor": (params.r_bar + eps) * params.C_bar ** (beta - 1.0) * (beta - 1.0),
              "exponent": p_hi}
    else:  # infinite speed: no localization, only the linear floor
        if c0 is None:
            from . import waves
            g = waves.g_fn(m, default_reaction(params))
            c0 = waves.find_compact_support_speed(g, 0.5).c0
        lo = {"kind": "linear", "speed": float(c0)}
        hi = None

    T = 1.0
    if kind.regime is Regime.POLY_LOWER_ONLY:
        # the coarser monomial upper bound starts below the lower one and
        # overtakes it where (A t)^p = (B t)^q; order only holds past that
        p, q = lo["exponent"], hi["exponent"]
        A, B = lo["prefactor"], hi["prefactor"]
        t_cross = math.exp((p * math.log(A) - q * math.log(B)) / (q - p))
        T = max(1.0, t_cross * (1.0 + 1e-9))

    return Envelope(lower=_desc_fn(lo),
                    upper=None if hi is None else _desc_fn(hi),
                    T=T, epsilon=eps, lower_desc=lo, upper_desc=hi)


def linear_speed_bound(params: ModelParams) -> float:
    """A certified speed bounding the front from above (no-acceleration only)."""
    kind = classify(params.m, params.alpha, params.beta)
    if kind.regime is not Regime.NO_ACCELERATION:
        raise RegimeMismatch(
            "linear speed bound applies to the no-acceleration regime only")
    from . import closedform
    return closedform.constant_speed_super(params).constants["c"]
