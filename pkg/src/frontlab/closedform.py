"""Explicit growth solutions, level curves, and certified sub/supersolutions.

Every constructor here resolves the free constants of one analytic
comparison function (bump, plateau-cut, clamped growth, traveling power
profile, right-tail exponential), re-verifies the full inequality ledger
that makes it a sub- or supersolution, and packages the result with a
sampler of its smooth validity region so the discrete residual check can
stay away from the kinks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (BlowUp, DomainError, InfeasibleSelection, RegimeMismatch)
from .model import InitialData, ModelParams, initial_data_build
from .regimes import Regime, classify, gamma_effective

__all__ = [
    "GrowthSolution", "SubsolutionSpec", "Check",
    "growth_eval", "blowup_time", "blowup_time_tail", "level_curve",
    "tau_of_t", "pme_bump_params", "pme_bump_eval", "fde_sub_params",
    "fde_sub_eval", "appendix_sub_params", "growth_super",
    "growth_super_eval", "constant_speed_super", "right_tail_super",
    "right_tail_spec", "describe",
]


@dataclass(frozen=True)
class GrowthSolution:
    """Pointwise-in-x solution of dw/dt = rho*w^beta, w(0,.) = u0."""

    rho: float
    beta: float
    u0: Callable


@dataclass(frozen=True)
class Check:
    """One verified inequality: margin >= 0 (or > 0 when strict)."""

    name: str
    margin: float
    strict: bool = False

    @property
    def ok(self) -> bool:
        return self.margin > 0.0 if self.strict else self.margin >= 0.0


@dataclass(frozen=True)
class SubsolutionSpec:
    """A resolved comparison function plus its inequality ledger.

    ``sign`` is -1 for subsolutions (residual must be <= 0) and +1 for
    supersolutions; ``reaction_free`` marks candidates certified against
    the pure diffusion equation (f = 0). ``sampler()`` returns (t, x)
    arrays inside the smooth validity region, with margins around kinks.
    """

    kind: str
    constants: dict
    checks: tuple
    evaluate: Callable
    sampler: Callable
    sign: int = -1
    reaction_free: bool = False

    def __call__(self, t, x):
        return self.evaluate(t, x)


def _enforce(kind: str, checks) -> tuple:
    checks = tuple(checks)
    for ch in checks:
        if not ch.ok:
            raise InfeasibleSelection(
                f"{kind}: {ch.name} fails (margin {ch.margin:.6g})")
    return checks


def _grow_until(pred, start: float, label: str) -> float:
    # doubling search, then log-bisection down to ~3 significant digits
    x = float(start)
    if pred(x):
        return x
    for _ in range(70):
        hi = 2.0 * x
        if pred(hi):
            lo = x
            while hi / lo > 1.002:
                mid = math.sqrt(lo * hi)
                if pred(mid):
                    hi = mid
                else:
                    lo = mid
            return hi
        x = hi
    raise InfeasibleSelection(f"no finite choice satisfies {label}")


def _shrink_until(pred, start: float, label: str) -> float:
    x = float(start)
    for _ in range(90):
        if pred(x):
            return x
        x *= 0.5
    raise InfeasibleSelection(f"no positive choice satisfies {label}")


def _rho_midpoint(r: float, eps: float, beta: float, eta: float) -> float:
    lo = max(r * beta / (1.0 + eta), r - eps)
    if not lo < r:
        raise InfeasibleSelection("empty rho interval")
    return 0.5 * (lo + r)


# ---------------------------------------------------------------------------
# growth solutions and level curves

def growth_eval(g: GrowthSolution, t: float, x):
    """w(t,x): exponential growth (beta=1) or finite-time blow-up (beta>1)."""
    u = np.asarray(g.u0(x), dtype=float)
    t = float(t)
    if g.beta == 1.0:
        out = u * math.exp(g.rho * t)
    else:
        bm1 = g.beta - 1.0
        base = u ** (-bm1) - g.rho * bm1 * t
        if np.any(base <= 0.0):
            t_min = float(np.min(u ** (-bm1))) / (g.rho * bm1)
            raise BlowUp(f"growth solution past blow-up (T={t_min:.6g})",
                         t_blow=t_min)
        out = base ** (-1.0 / bm1)
    out = np.asarray(out)
    return float(out) if out.ndim == 0 else out


def blowup_time(u0_val: float, rho: float, beta: float) -> float:
    """T = 1/(rho (beta-1) u0^(beta-1)); finite only for beta > 1."""
    if not beta > 1.0:
        raise DomainError("blow-up time requires beta > 1")
    if not 0.0 < u0_val <= 1.0:
        raise DomainError("u0 value must lie in (0, 1]")
    if not rho > 0.0:
        raise DomainError("rho must be positive")
    return 1.0 / (rho * (beta - 1.0) * u0_val ** (beta - 1.0))


def blowup_time_tail(x: float, C: float, alpha: float, beta: float,
                     rho: float) -> float:
    """Blow-up time of the tail datum C/x^alpha: x^(a(b-1))/(rho(b-1)C^(b-1))."""
    if not beta > 1.0:
        raise DomainError("blow-up time requires beta > 1")
    return x ** (alpha * (beta - 1.0)) / (rho * (beta - 1.0) * C ** (beta - 1.0))


def level_curve(theta: float, t, C: float, alpha: float, beta: float,
                rho: float):
    """The abscissa y_theta(t) where the tail-datum growth solution equals theta."""
    if not 0.0 < theta < C:
        raise DomainError("need 0 < theta < C")
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError("level curve needs a finite positive alpha")
    if not rho > 0:
        raise DomainError("rho must be positive")
    ta = np.asarray(t, dtype=float)
    if np.any(ta < 0.0):
        raise DomainError("t must be nonnegative")
    if beta == 1.0:
        out = (C / theta) ** (1.0 / alpha) * np.exp(rho * ta / alpha)
    else:
        bm1 = beta - 1.0
        out = ((C / theta) ** bm1
               + rho * C ** bm1 * bm1 * ta) ** (1.0 / (alpha * bm1))
    out = np.asarray(out)
    return float(out) if out.ndim == 0 else out


def tau_of_t(m: float, r_bar: float, t):
    """Rescaled time: saturating for m<1, identity at m=1, growing for m>1."""
    if not (m > 0 and r_bar > 0):
        raise DomainError("need m > 0 and r_bar > 0")
    ta = np.asarray(t, dtype=float)
    if np.any(ta < 0.0):
        raise DomainError("t must be nonnegative")
    if m == 1.0:
        out = ta.copy()
    elif m < 1.0:
        k = (1.0 - m) * r_bar
        out = -np.expm1(-k * ta) / k
    else:
        k = (m - 1.0) * r_bar
        out = np.expm1(k * ta) / k
    out = np.asarray(out)
    return float(out) if out.ndim == 0 else out


def _time_to_reach(u_from: float, w_to: float, rho: float, beta: float) -> float:
    if w_to <= u_from:
        return 0.0
    if beta == 1.0:
        return math.log(w_to / u_from) / rho
    bm1 = beta - 1.0
    return (u_from ** (-bm1) - w_to ** (-bm1)) / (rho * bm1)


# ---------------------------------------------------------------------------
# accelerating bump subsolution (slow diffusion, m > 1)

def pme_bump_params(params: ModelParams, epsilon: float,
                    u0: Optional[InitialData] = None,
                    eta: Optional[float] = None, rho: Optional[float] = None,
                    x1: Optional[float] = None,
                    A: Optional[float] = None) -> SubsolutionSpec:
    """Resolve the bump subsolution max(0, w - A w^(1+eta)) for m > 1.

    Free constants are selected deterministically (eta = 1.5*max(beta-1,1),
    rho at its interval midpoint, x1 by doubling-and-bisection on the two
    tail estimates, A at twice its lower bound) unless supplied; all
    defining inequalities are re-verified either way.
    """
    m, alpha, beta = params.m, params.alpha, params.beta
    r = params.r
    if not (m > 1.0 and math.isfinite(alpha)):
        raise RegimeMismatch("bump subsolution needs m > 1 and a finite tail")
    if beta > 1.0 and not beta < 1.0 + 1.0 / alpha:
        raise RegimeMismatch("bump subsolution needs beta < 1 + 1/alpha")
    eps = float(epsilon)
    if not 0.0 < eps < r:
        raise InfeasibleSelection(
            "bump subsolution: need 0 < epsilon < r (empty rho interval)")
    if u0 is None:
        u0 = initial_data_build(params.C, alpha, params.x0, plateau=1.0)
    C = u0.C
    if eta is None:
        eta = 1.5 * max(beta - 1.0, 1.0)
    eta = float(eta)
    if rho is None:
        rho = _rho_midpoint(r, eps, beta, eta)
    rho = float(rho)

    ab1 = alpha * (beta - 1.0)  # < 1 in this regime

    def slope_term(x):
        return m * alpha * (1.0 - ab1) / (C ** (beta - 1.0) * x ** (2.0 - ab1))

    def curv_term(x):
        phi2 = (alpha / (C ** (beta - 1.0) * x ** (1.0 - ab1))) ** 2
        return slope_term(x) + m * (2.0 * m + beta + eta - 1.0) * phi2

    rhs_slope = r - rho
    rhs_curv = rho - r * beta / (1.0 + eta)
    if x1 is None:
        if min(rhs_slope, rhs_curv) <= 0.0:
            raise InfeasibleSelection("bump subsolution: rho interval violated")
        x1 = _grow_until(
            lambda x: slope_term(x) <= rhs_slope and curv_term(x) <= rhs_curv,
            start=2.0 * u0.x0, label="the tail slope/curvature estimates")
    x1 = float(x1)
    kappa = min(u0.plateau, float(u0(x1)))
    if A is None:
        A = 2.0 * max(kappa ** (-eta),
                      (eta / (params.s0 * (1.0 + eta))) ** eta / (1.0 + eta))
    A = float(A)
    bump_max = (eta / (1.0 + eta)) * (A * (1.0 + eta)) ** (-1.0 / eta)

    checks = _enforce("bump subsolution", (
        Check("epsilon < r", r - eps, strict=True),
        Check("beta < 1 + eta", 1.0 + eta - beta, strict=True),
        Check("rho above max(r beta/(1+eta), r-eps)",
              rho - max(r * beta / (1.0 + eta), r - eps), strict=True),
        Check("rho < r", r - rho, strict=True),
        Check("x1 beyond the tail onset", x1 - u0.x0, strict=True),
        Check("m|phi'| <= r - rho on [x1, inf)", rhs_slope - slope_term(x1)),
        Check("m|phi'| + m(2m+beta+eta-1)phi^2 <= rho - r beta/(1+eta)",
              rhs_curv - curv_term(x1)),
        Check("A kappa^eta > 1", A * kappa ** eta - 1.0, strict=True),
        Check("bump maximum <= s0", params.s0 - bump_max),
    ))

    growth = GrowthSolution(rho=rho, beta=beta, u0=u0)
    cut = A ** (-1.0 / eta)

    def evaluate(t, x):
        w = np.asarray(growth_eval(growth, t, x), dtype=float)
        out = np.maximum(0.0, w - A * w ** (1.0 + eta))
        out = np.asarray(out)
        return float(out) if out.ndim == 0 else out

    def sampler(n_t: int = 8, n_x: int = 32):
        x_lo = max((C / (0.45 * cut)) ** (1.0 / alpha), 1.1 * x1)
        ts, xs = [], []
        for x in np.geomspace(x_lo, 3.0 * x_lo, n_x):
            u_here = C / x ** alpha
            t_hi = _time_to_reach(u_here, 0.9 * cut, rho, beta)
            tt = np.linspace(0.01, max(t_hi, 0.02), n_t)
            ts.append(tt)
            xs.append(np.full_like(tt, x))
        return np.concatenate(ts), np.concatenate(xs)

    constants = {"eta": eta, "rho": rho, "x1": x1, "kappa": kappa, "A": A,
                 "cut": cut, "bump_max": bump_max, "epsilon": eps,
                 "C": C, "tail_exponent": alpha}
    return SubsolutionSpec(kind="pme-bump", constants=constants,
                           checks=checks, evaluate=evaluate, sampler=sampler,
                           sign=-1)


def pme_bump_eval(spec: SubsolutionSpec, t: float, x):
    """Evaluate a bump subsolution spec at (t, x)."""
    if spec.kind != "pme-bump":
        raise DomainError(f"expected a pme-bump spec, got {spec.kind!r}")
    return spec.evaluate(t, x)


# ---------------------------------------------------------------------------
# accelerating plateau-cut subsolution (fast diffusion)

def _plateau_cut_spec(kind: str, datum: InitialData, tail_C: float,
                      tail_exp: float, beta: float, rho: float, eta: float,
                      A: float, t_floor: float) -> tuple:
    # shared machinery for the two plateau-cut constructions: the junction
    # X(t) sits at the maximizer of w -> w(1 - A w^eta)
    theta_star = (A * (1.0 + eta)) ** (-1.0 / eta)
    plateau_val = theta_star * eta / (1.0 + eta)
    growth = GrowthSolution(rho=rho, beta=beta, u0=datum)

    def X_of_t(t):
        return level_curve(theta_star, max(float(t), 0.0), tail_C, tail_exp,
                           beta, rho)

    def evaluate(t, x):
        arr = np.asarray(x, dtype=float)
        xa = np.atleast_1d(arr).astype(float)
        Xt = X_of_t(t)
        out = np.full(xa.shape, plateau_val)
        mask = xa > Xt
        if mask.any():
            w = np.atleast_1d(np.asarray(growth_eval(growth, t, xa[mask])))
            out[mask] = w * (1.0 - A * w ** eta)
        return float(out[0]) if arr.ndim == 0 else out

    def sampler(n_t: int = 6, n_x: int = 32):
        ts, xs = [], []
        for t in np.linspace(t_floor + 0.5, t_floor + 4.0, n_t):
            Xt = X_of_t(t)
            x_flat = np.linspace(0.4 * Xt, 0.93 * Xt, max(4, n_x // 4))
            x_tail = np.geomspace(1.07 * Xt, 6.0 * Xt, n_x)
            both = np.concatenate([x_flat, x_tail])
            ts.append(np.full_like(both, t))
            xs.append(both)
        return np.concatenate(ts), np.concatenate(xs)

    return theta_star, plateau_val, X_of_t, evaluate, sampler


def fde_sub_params(params: ModelParams, epsilon: float,
                   eta: Optional[float] = None, rho: Optional[float] = None,
                   A: Optional[float] = None, x0: Optional[float] = None,
                   C: Optional[float] = None) -> SubsolutionSpec:
    """Resolve the plateau-cut subsolution for fast diffusion.

    The datum has the effective tail exponent gamma = min(alpha, 2/(1-m));
    x0 is enlarged by doubling until the three tail estimates hold. In the
    critical combination beta = 1, gamma = 2/(1-m) the x0-exponents vanish,
    so the tail constant C is doubled along with x0 instead.
    """
    m, beta, r = params.m, params.beta, params.r
    if not 0.0 < m < 1.0:
        raise RegimeMismatch("plateau-cut subsolution needs 0 < m < 1")
    gamma = gamma_effective(m, params.alpha)
    sat = 2.0 / (1.0 - m)
    critical = (beta == 1.0 and gamma == sat)
    if not (beta < min(1.0 + 1.0 / gamma, m + 2.0 / gamma) or critical):
        raise RegimeMismatch(
            "plateau-cut subsolution needs beta < min(1+1/gamma, m+2/gamma)")
    eps = float(epsilon)
    if not 0.0 < eps < r:
        raise InfeasibleSelection(
            "plateau-cut subsolution: need 0 < epsilon < r")
    if eta is None:
        eta = max(beta - 1.0, 1.0) + 0.5
    eta = float(eta)
    if rho is None:
        rho = _rho_midpoint(r, eps, beta, eta)
    rho = float(rho)

    theta_coef = 2.0 * m + beta + eta - 1.0 + (1.0 - m) * 2.0 * eta / (1.0 + eta)
    pow_x = 2.0 + (m - beta) * gamma          # >= 0 in this regime
    pow_x3 = 2.0 + 2.0 * gamma * (1.0 - beta)  # > 0 in this regime

    def lhs1(Cv, xv):
        return (m * gamma * Cv ** (m - beta) * (gamma + 1.0 - gamma * beta)
                / xv ** pow_x)

    def lhs2(Cv, xv):
        return (2.0 ** (1.0 - m) * m * eta
                * (gamma * Cv ** (m - beta) / xv ** pow_x)
                * (2.0 * m * gamma + 1.0 + gamma * eta
                   + 2.0 * (1.0 - m) * (eta / (1.0 + eta)) * gamma))

    def lhs3(Cv, xv):
        return (2.0 ** (1.0 - m) * m * eta
                * ((gamma * Cv ** (m - beta) / xv ** pow_x)
                   * (gamma + 1.0 - gamma * beta)
                   + theta_coef * gamma ** 2 * Cv ** (2.0 - 2.0 * beta)
                   / xv ** pow_x3))

    rhs1 = r - rho
    rhs23 = rho * (1.0 + eta) - r * beta
    if min(rhs1, rhs23) <= 0.0:
        raise InfeasibleSelection("plateau-cut subsolution: rho interval violated")

    def tails_ok(Cv, xv):
        return (lhs1(Cv, xv) <= rhs1 and lhs2(Cv, xv) <= rhs23
                and lhs3(Cv, xv) <= rhs23)

    C_eff = params.C if C is None else float(C)
    x0_eff = params.x0 if x0 is None else float(x0)
    if x0 is None:
        # keep the datum onset below 1, then enlarge
        if C_eff ** (1.0 / gamma) >= x0_eff:
            x0_eff = 2.0 * C_eff ** (1.0 / gamma)
        for _ in range(200):
            if tails_ok(C_eff, x0_eff):
                break
            x0_eff *= 2.0
            if critical:
                C_eff *= 2.0
        else:
            raise InfeasibleSelection(
                "plateau-cut subsolution: tail estimates never satisfied")

    datum = initial_data_build(C_eff, gamma, x0_eff, plateau=1.0)
    kappa = min(datum.plateau, float(datum(x0_eff)))
    if A is None:
        A = 2.0 * max(1.0, 1.0 / (kappa ** eta * (1.0 + eta)),
                      (eta / (params.s0 * (1.0 + eta))) ** eta / (1.0 + eta))
    A = float(A)
    theta_star, plateau_val, X_of_t, evaluate, sampler = _plateau_cut_spec(
        "fde-plateau", datum, C_eff, gamma, beta, rho, eta, A, t_floor=0.0)

    checks = _enforce("plateau-cut subsolution", (
        Check("epsilon < r", r - eps, strict=True),
        Check("eta > beta - 1", eta - (beta - 1.0), strict=True),
        Check("eta > 1", eta - 1.0, strict=True),
        Check("rho above max(r beta/(1+eta), r-eps)",
              rho - max(r * beta / (1.0 + eta), r - eps), strict=True),
        Check("rho < r", r - rho, strict=True),
        Check("first tail estimate at x0", rhs1 - lhs1(C_eff, x0_eff)),
        Check("second tail estimate at x0", rhs23 - lhs2(C_eff, x0_eff)),
        Check("third tail estimate at x0", rhs23 - lhs3(C_eff, x0_eff)),
        Check("A > 1", A - 1.0, strict=True),
        Check("A kappa^eta (1+eta) > 1",
              A * kappa ** eta * (1.0 + eta) - 1.0, strict=True),
        Check("plateau value <= s0", params.s0 - plateau_val),
        Check("datum onset <= 1", 1.0 - kappa),
    ))

    constants = {"eta": eta, "rho": rho, "A": A, "x0": x0_eff, "C": C_eff,
                 "gamma": gamma, "kappa": kappa, "theta_star": theta_star,
                 "plateau_value": plateau_val, "epsilon": eps,
                 "critical_kpp": critical}
    return SubsolutionSpec(kind="fde-plateau", constants=constants,
                           checks=checks, evaluate=evaluate, sampler=sampler,
                           sign=-1)


def fde_sub_eval(spec: SubsolutionSpec, t: float, x):
    """Evaluate a plateau-cut subsolution spec at (t, x)."""
    if spec.kind != "fde-plateau":
        raise DomainError(f"expected an fde-plateau spec, got {spec.kind!r}")
    return spec.evaluate(t, x)


# ---------------------------------------------------------------------------
# generalized plateau-cut subsolution (fast diffusion, strong Allee effect)

def appendix_sub_params(params: ModelParams, epsilon: float,
                        eta: Optional[float] = None,
                        rho: Optional[float] = None,
                        A: Optional[float] = None,
                        delta: Optional[float] = None,
                        T: Optional[float] = None,
                        X: Optional[float] = None) -> SubsolutionSpec:
    """Resolve the generalized plateau-cut subsolution (eta > beta+2 regime).

    Built on the scaled datum ((C-eps)/C)*u0; valid for t >= T. The shift X
    makes u0(.-X) dominate v(T,.), which is verified on a dense grid.
    """
    m, alpha, beta, r, C = params.m, params.alpha, params.beta, params.r, params.C
    if not 0.0 < m < 1.0:
        raise RegimeMismatch("generalized subsolution needs 0 < m < 1")
    if not (1.0 / (1.0 - m) < alpha <= 2.0 / (1.0 - m)):
        raise RegimeMismatch(
            "generalized subsolution needs 1/(1-m) < alpha <= 2/(1-m)")
    if not (beta > 1.0 and m + 2.0 / alpha <= beta < 1.0 + 1.0 / alpha):
        raise RegimeMismatch(
            "generalized subsolution needs m+2/alpha <= beta < 1+1/alpha")
    eps = float(epsilon)
    if not 0.0 < eps < r:
        raise InfeasibleSelection("generalized subsolution: need 0 < epsilon < r")
    if not eps < C:
        raise InfeasibleSelection(
            "generalized subsolution: need epsilon < C (scaled datum)")
    if eta is None:
        eta = beta + 2.5
    eta = float(eta)
    if rho is None:
        rho = _rho_midpoint(r, eps, beta, eta)
    rho = float(rho)

    Ce = C - eps
    x0 = params.x0
    # scaled datum tail Ce/x^alpha; onset below 1 since C/x0^alpha <= 1
    datum = initial_data_build(Ce, alpha, x0, plateau=1.0)
    base_u0 = initial_data_build(C, alpha, x0, plateau=1.0)
    kappa = min(datum.plateau, float(datum(x0)))
    if A is None:
        A = 2.0 * max(1.0, 1.0 / (kappa ** eta * (1.0 + eta)),
                      (eta / (params.s0 * (1.0 + eta))) ** eta / (1.0 + eta))
    A = float(A)
    theta_star = (A * (1.0 + eta)) ** (-1.0 / eta)

    def delta2_lhs(d):
        q = A * d ** eta / (1.0 - A * d ** eta)
        return q * (2.0 * m * eta + eta * (beta + eta - 1.0)
                    + (1.0 - m) * A * eta ** 2 * d ** eta
                    / (1.0 - A * d ** eta))

    if delta is None:
        delta = _shrink_until(
            lambda d: delta2_lhs(d) < m + beta - 1.0,
            start=0.5 * theta_star, label="the small-w curvature condition")
    delta = float(delta)

    # time threshold: the tail-slope estimate must hold for all x >= X(T)
    phi_pow2 = 2.0 * (alpha + 1.0 - alpha * beta)   # > 0 here
    phi_pow1 = alpha + 2.0 - alpha * beta           # > 0 here

    def phi2(x):
        return alpha ** 2 / (Ce ** (2.0 * beta - 2.0) * x ** phi_pow2)

    def phip(x):
        return (alpha * (alpha + 1.0 - alpha * beta)
                / (Ce ** (beta - 1.0) * x ** phi_pow1))

    def slope_lhs(x):
        return (phi2(x) * A ** (-(m + beta - 2.0) / eta)
                * (2.0 * m + beta + eta - 1.0 + 2.0 * (1.0 - m) * eta)
                + phip(x) * A ** (-(m - 1.0) / eta))

    rhs_T = (r - rho) / (2.0 ** (1.0 - m) * m * eta)

    def X_level(t):
        return level_curve(theta_star, t, Ce, alpha, beta, rho)

    if T is None:
        T = _grow_until(lambda t: slope_lhs(X_level(t)) <= rhs_T,
                        start=1.0, label="the tail-slope time threshold")
    T = float(T)

    _, plateau_val, X_of_t, evaluate, sampler = _plateau_cut_spec(
        "appendix", datum, Ce, alpha, beta, rho, eta, A, t_floor=T)

    # spatial shift: u0(. - X) >= v(T, .)
    if X is None:
        def tail_dominated(xp):
            grid = np.geomspace(xp, 100.0 * xp, 160)
            v_vals = np.asarray(evaluate(T, grid))
            return bool(np.all(v_vals * grid ** alpha <= C))
        X_prime = _grow_until(tail_dominated,
                              start=max(2.0 * x0, X_level(T)),
                              label="the tail domination abscissa")
        X = X_prime - x0
    else:
        X = float(X)
        X_prime = X + x0
    order_grid = np.linspace(-X, 10.0 * X_prime, 3000)
    order_margin = float(np.min(np.asarray(base_u0(order_grid - X))
                                - np.asarray(evaluate(T, order_grid))))

    checks = _enforce("generalized subsolution", (
        Check("epsilon < r", r - eps, strict=True),
        Check("epsilon < C", C - eps, strict=True),
        Check("eta > beta + 2", eta - (beta + 2.0), strict=True),
        Check("rho above max(r beta/(1+eta), r-eps)",
              rho - max(r * beta / (1.0 + eta), r - eps), strict=True),
        Check("rho < r", r - rho, strict=True),
        Check("A > 1", A - 1.0, strict=True),
        Check("A kappa^eta (1+eta) > 1",
              A * kappa ** eta * (1.0 + eta) - 1.0, strict=True),
        Check("plateau value <= s0", params.s0 - plateau_val),
        Check("delta below the junction level", theta_star - delta,
              strict=True),
        Check("small-w curvature condition",
              (m + beta - 1.0) - delta2_lhs(delta), strict=True),
        Check("tail-slope estimate at X(T)", rhs_T - slope_lhs(X_level(T))),
        Check("initial ordering u0(.-X) >= v(T,.)", order_margin + 1e-12),
    ))

    constants = {"eta": eta, "rho": rho, "A": A, "delta": delta, "T": T,
                 "X": X, "X_prime": X_prime, "kappa": kappa,
                 "theta_star": theta_star, "plateau_value": plateau_val,
                 "epsilon": eps, "C_scaled": Ce, "tail_exponent": alpha}
    return SubsolutionSpec(kind="appendix", constants=constants,
                           checks=checks, evaluate=evaluate, sampler=sampler,
                           sign=-1)


# ---------------------------------------------------------------------------
# clamped growth supersolution

def growth_super(params: ModelParams, epsilon: float,
                 x0: Optional[float] = None,
                 C: Optional[float] = None) -> SubsolutionSpec:
    """Resolve the supersolution min(1, w) with rho = r_bar + eps/2.

    w grows pointwise from the dominating datum 1 for x <= x0 and
    C_bar/x^a beyond, with a = alpha (m >= 1), a = min(alpha, 2/(1-m))
    (m < 1), or a = 2/(beta-m+eps) in the lower-only regime, so the clamp
    sits above every admissible datum from t = 0 on. x0 is enlarged until
    the tail curvature terms fall below eps/2 (m >= 1) or eps/4 (m < 1);
    in the critical combination beta = 1, gamma = 2/(1-m) the constant
    C_bar grows too.
    """
    m, alpha, beta = params.m, params.alpha, params.beta
    eps = float(epsilon)
    if not 0.0 < eps < params.r:
        raise InfeasibleSelection("clamped growth: need 0 < epsilon < r")
    kind = classify(m, alpha, beta)
    if kind.regime not in (Regime.EXPONENTIAL, Regime.POLYNOMIAL,
                           Regime.POLY_LOWER_ONLY):
        raise RegimeMismatch(
            "clamped growth supersolution needs a regime with an upper envelope")
    rho = params.r_bar + 0.5 * eps

    critical = False
    if m >= 1.0:
        a_eff = alpha
    elif kind.regime is Regime.POLY_LOWER_ONLY:
        a_eff = 2.0 / (beta - m + eps)
    else:
        a_eff = gamma_effective(m, alpha)
        critical = (beta == 1.0 and alpha > 2.0 / (1.0 - m))

    C_eff = params.C_bar if C is None else float(C)
    x0_eff = params.x0 if x0 is None else float(x0)

    if m >= 1.0:
        ab1 = alpha * (beta - 1.0)

        def tail_lhs(Cv, xv):
            phi_p = m * alpha * (1.0 - ab1) / (Cv ** (beta - 1.0)
                                               * xv ** (2.0 - ab1))
            phi_2 = (alpha / (Cv ** (beta - 1.0) * xv ** (1.0 - ab1))) ** 2
            return phi_p + m * (m + beta - 1.0) * phi_2

        rhs = 0.5 * eps
    else:
        g = a_eff
        pow_a = 2.0 + (m - beta) * g
        pow_c = 2.0 * g * (1.0 - beta) + 2.0

        def tail_lhs(Cv, xv):
            t1 = (m * g * Cv ** (m - beta) * (g + 1.0 - g * beta)
                  / xv ** pow_a)
            t2 = (m * (m + beta - 1.0) * g ** 2 * Cv ** (m - beta)
                  / xv ** pow_a)
            t3 = (m * (m + beta - 1.0) * g ** 2 * Cv ** (2.0 - 2.0 * beta)
                  / xv ** pow_c)
            return max(t1, t2) if beta <= 2.0 - m else max(t1, t3)

        rhs = 0.25 * eps

    if x0 is None:
        if C_eff ** (1.0 / a_eff) >= 0.99 * x0_eff:
            x0_eff = 2.0 * C_eff ** (1.0 / a_eff)
        for _ in range(200):
            if tail_lhs(C_eff, x0_eff) <= rhs:
                break
            x0_eff *= 2.0
            if critical:
                C_eff *= 2.0
        else:
            raise InfeasibleSelection(
                "clamped growth: tail curvature bound never satisfied")

    onset = C_eff / x0_eff ** a_eff

    checks = _enforce("clamped growth supersolution", (
        Check("epsilon < r", params.r - eps, strict=True),
        Check("tail curvature bound at x0", rhs - tail_lhs(C_eff, x0_eff)),
        Check("datum onset < 1", 1.0 - onset, strict=True),
    ))

    bm1 = beta - 1.0

    def evaluate(t, x):
        arr = np.asarray(x, dtype=float)
        xa = np.atleast_1d(arr).astype(float)
        tail = C_eff * np.maximum(xa, 1.0) ** (-a_eff)
        u = np.where(xa <= x0_eff, 1.0, tail)
        if beta == 1.0:
            w = u * math.exp(rho * float(t))
        else:
            base = u ** (-bm1) - rho * bm1 * float(t)
            w = np.where(base > 0.0, base, 1.0) ** (-1.0 / bm1)
            w = np.where(base > 0.0, w, 2.0)  # past blow-up: clamp wins
        out = np.minimum(1.0, w)
        return float(out[0]) if arr.ndim == 0 else out

    def sampler(n_t: int = 6, n_x: int = 32):
        ts, xs = [], []
        theta = min(0.9, 0.9 * onset)
        for t in np.linspace(0.5, 5.0, n_t):
            lead = level_curve(theta, t, C_eff, a_eff, beta, rho)
            x_here = np.geomspace(max(1.05 * x0_eff, lead),
                                  6.0 * max(1.05 * x0_eff, lead), n_x)
            ts.append(np.full_like(x_here, t))
            xs.append(x_here)
        # the clamped plateau behind the onset stays pinned at 1
        x_flat = np.linspace(0.2 * x0_eff, 0.9 * x0_eff, max(4, n_x // 4))
        ts.append(np.full_like(x_flat, 0.5))
        xs.append(x_flat)
        return np.concatenate(ts), np.concatenate(xs)

    constants = {"rho": rho, "x0": x0_eff, "C": C_eff,
                 "tail_exponent": a_eff, "epsilon": eps,
                 "critical_kpp": critical}
    return SubsolutionSpec(kind="growth-super", constants=constants,
                           checks=checks, evaluate=evaluate, sampler=sampler,
                           sign=+1)


def growth_super_eval(params: ModelParams, epsilon: float, t: float, x):
    """Evaluate the clamped growth supersolution min(1, w) at (t, x)."""
    return growth_super(params, epsilon).evaluate(t, x)


# ---------------------------------------------------------------------------
# constant-speed power-tail supersolution (no-acceleration regime)

def constant_speed_super(params: ModelParams,
                         c: Optional[float] = None) -> SubsolutionSpec:
    """Resolve the traveling supersolution min(1, K/z^p), z = x - shift - c t.

    p = 1/(beta-1), K = max(1, C_bar). The speed c is doubled from twice
    the base bound r_bar (beta-1) K^(beta-1) until both the far-field and
    the compact-region residual bounds hold.
    """
    m, alpha, beta = params.m, params.alpha, params.beta
    kind = classify(m, alpha, beta)
    if kind.regime is not Regime.NO_ACCELERATION:
        raise RegimeMismatch(
            "constant-speed supersolution needs the no-acceleration regime")
    if not beta > 1.0:
        raise RegimeMismatch("constant-speed supersolution needs beta > 1")
    r_bar = params.r_bar
    p = 1.0 / (beta - 1.0)
    K = max(1.0, params.C_bar)
    z0 = K ** (1.0 / p)
    z1 = (K / params.s0) ** (1.0 / p)
    mp = m * p
    gap = mp + 1.0 - p  # >= 0 off the beta = 2-m boundary
    sup_f = r_bar      # f <= r_bar s^beta <= r_bar on [0,1]
    num = K ** m * mp * (mp + 1.0)
    base = r_bar * (beta - 1.0) * K ** (beta - 1.0)

    def z_far(cv):
        den = cv * K * p - r_bar * K ** beta
        if den <= 0.0:
            return None
        if gap > 0.0:
            return max(z1, (num / den) ** (1.0 / gap))
        return z1 if num <= den else None

    def compact_ok(cv, z2v):
        return (num / z0 ** (mp + 2.0) - cv * K * p / z2v ** (p + 1.0)
                + sup_f <= 0.0)

    if c is None:
        c = 2.0 * base
        for _ in range(80):
            z2 = z_far(c)
            if z2 is not None and compact_ok(c, z2):
                break
            c *= 2.0
        else:
            raise InfeasibleSelection(
                "constant-speed supersolution: no speed satisfies both bounds")
    else:
        c = float(c)
        z2 = z_far(c)
        if z2 is None:
            raise InfeasibleSelection(
                "constant-speed supersolution: speed below the base bound")
    z2 = z_far(c)

    # true residual (w^m)'' + c w' + f(w) on the advertised z-grid
    zg = np.geomspace(z0, 10.0 * z2, 2000)
    w = K / zg ** p
    f_w = params.r * w ** beta * (1.0 - w)
    resid = num / zg ** (mp + 2.0) - c * K * p / zg ** (p + 1.0) + f_w
    resid_max = float(resid.max())

    checks = _enforce("constant-speed supersolution", (
        Check("c above base bound r_bar (beta-1) K^(beta-1)", c - base,
              strict=True),
        Check("exponent ordering p+1 <= mp+2", gap),
        Check("far-field threshold finite", z2 - z1),
        Check("compact-region bound",
              -(num / z0 ** (mp + 2.0) - c * K * p / z2 ** (p + 1.0) + sup_f)),
        Check("residual sign on [z0, 10 z2]", 1e-12 - resid_max),
    ))

    shift = params.x0 - 1.0

    def evaluate(t, x):
        arr = np.asarray(x, dtype=float)
        z = np.atleast_1d(arr).astype(float) - shift - c * float(t)
        out = np.where(z <= z0, 1.0, K / np.maximum(z, z0) ** p)
        return float(out[0]) if arr.ndim == 0 else out

    def sampler(n_t: int = 6, n_x: int = 40):
        ts, xs = [], []
        for t in np.linspace(0.5, 5.0, n_t):
            z = np.geomspace(1.1 * z0, 10.0 * z2, n_x)
            ts.append(np.full_like(z, t))
            xs.append(z + shift + c * t)
        return np.concatenate(ts), np.concatenate(xs)

    constants = {"K": K, "p": p, "c": c, "z0": z0, "z1": z1, "z2": z2,
                 "shift": shift, "residual_max": resid_max}
    return SubsolutionSpec(kind="const-super", constants=constants,
                           checks=checks, evaluate=evaluate, sampler=sampler,
                           sign=+1)


# ---------------------------------------------------------------------------
# right-tail decay supersolution (pure diffusion)

def _right_tail_positivity(eps: float, mu: float, m: float) -> float:
    w = np.linspace(eps, 1.0, 4096, endpoint=False)
    h = (1.0 - mu * m * w ** (m - 1.0)
         - mu * m * (m - 1.0) * (w - eps) * w ** (m - 2.0))
    return float(h.min())


def right_tail_super(eps: float, mu: float, x0: float, tau: float, x,
                     m: float):
    """min(1, eps + exp(-mu (x - x0 - tau))): a right-tail decay supersolution.

    The rate mu must satisfy the positivity condition tied to the diffusion
    exponent m (checked here, since the certificate depends on m).
    """
    if not 0.0 < eps < 1.0:
        raise DomainError("eps must lie in (0,1)")
    if not mu > 0.0:
        raise DomainError("mu must be positive")
    if _right_tail_positivity(eps, mu, m) < 0.0:
        raise InfeasibleSelection(
            "right-tail supersolution: mu fails the positivity condition")
    arr = np.asarray(x, dtype=float)
    out = np.minimum(1.0, eps + np.exp(-mu * (arr - x0 - tau)))
    out = np.asarray(out)
    return float(out) if out.ndim == 0 else out


def right_tail_spec(params: ModelParams, eps: float = 0.1,
                    mu: Optional[float] = None) -> SubsolutionSpec:
    """Package the right-tail supersolution with a certified rate mu."""
    m = params.m
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise DomainError("eps must lie in (0,1)")
    if mu is None:
        mu = _shrink_until(
            lambda v: _right_tail_positivity(eps, v, m) >= 1e-9,
            start=1.0, label="the right-tail positivity condition")
    mu = float(mu)
    margin = _right_tail_positivity(eps, mu, m)
    checks = _enforce("right-tail supersolution", (
        Check("eps in (0,1)", min(eps, 1.0 - eps), strict=True),
        Check("positivity factor on [eps, 1)", margin),
    ))
    x0 = params.x0

    def evaluate(t, x):
        arr = np.asarray(x, dtype=float)
        out = np.minimum(1.0, eps + np.exp(-mu * (arr - x0 - float(t))))
        out = np.asarray(out)
        return float(out) if out.ndim == 0 else out

    def sampler(n_t: int = 6, n_x: int = 40):
        xi_min = -math.log(1.0 - eps) / mu
        ts, xs = [], []
        for t in np.linspace(0.5, 3.0, n_t):
            xi = np.linspace(1.5 * xi_min + 0.5, xi_min + 20.0 / mu, n_x)
            ts.append(np.full_like(xi, t))
            xs.append(x0 + t + xi)
        return np.concatenate(ts), np.concatenate(xs)

    constants = {"eps": eps, "mu": mu, "x0": x0, "positivity_min": margin}
    return SubsolutionSpec(kind="right-tail", constants=constants,
                           checks=checks, evaluate=evaluate, sampler=sampler,
                           sign=+1, reaction_free=True)


def describe(spec: SubsolutionSpec) -> dict:
    """JSON-ready summary of a spec: kind, constants, inequality ledger."""
    return {
        "kind": spec.kind,
        "sign": spec.sign,
        "reaction_free": spec.reaction_free,
        "constants": dict(spec.constants),
        "checks": [{"name": ch.name, "margin": ch.margin, "strict": ch.strict}
                   for ch in spec.checks],
    }
