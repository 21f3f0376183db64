"""Existence gating and fixed-point solving for the equilibrium loadings.

The 2-D fixed point (t1, t2) = (phi1(t2), phi2(t1)) is collapsed to the scalar
root of g(t1) = phi1(phi2(t1)) - t1, which is bracketed by construction:
g > 0 near zero whenever lambda1*lambda2 < 1, and g < 0 beyond the asymptote
delta1 + delta0/2 of phi1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy.optimize import brentq

from . import valuation
from .bestresponse import insurer_response, phi, reinsurer_side
from .model import Equilibrium, ModelParams, PremiumPair


class NoEquilibrium(RuntimeError):
    """Raised when lambda1*lambda2 >= 1 (no equilibrium exists)."""


class SolverFailure(RuntimeError):
    """The bracket unexpectedly contained no sign change."""


@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = 1e-12
    max_iterations: int = 200
    bracket_floor: float = 1e-12

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.bracket_floor <= 0:
            raise ValueError("bracket_floor must be positive")


class ExistenceVerdict(enum.Enum):
    EXISTS = "exists"
    NOT_EXISTS = "not-exists"


def existence(lambda1: float, lambda2: float) -> ExistenceVerdict:
    """An equilibrium exists if and only if lambda1*lambda2 < 1."""
    if lambda1 < 0 or lambda2 < 0:
        raise ValueError("competition degrees must be nonnegative")
    if lambda1 * lambda2 < 1.0:
        return ExistenceVerdict.EXISTS
    return ExistenceVerdict.NOT_EXISTS


def _closed_form_zero_lambda(params: ModelParams) -> PremiumPair:
    """Exact equilibrium loadings when both competition degrees vanish."""
    d0, d1, d2 = params.delta0, params.delta1, params.delta2
    s = d0 * d1 + d0 * d2 + d1 * d2
    t1 = 0.5 * d1 + 0.5 * math.sqrt((d0 + d1) / (d0 + d2) * s)
    t2 = 0.5 * d2 + 0.5 * math.sqrt((d0 + d2) / (d0 + d1) * s)
    return PremiumPair(theta1=t1, theta2=t2)


def residual(params: ModelParams, theta: PremiumPair) -> float:
    """Fixed-point defect |t1 - phi1(t2)| + |t2 - phi2(t1)|."""
    side1 = reinsurer_side(params, 1)
    side2 = reinsurer_side(params, 2)
    return abs(theta.theta1 - phi(side1, theta.theta2)) \
        + abs(theta.theta2 - phi(side2, theta.theta1))


def solve(params: ModelParams, config: SolverConfig = SolverConfig()) -> Equilibrium:
    """Solve for the unique equilibrium of the two-layer game.

    Raises NoEquilibrium when lambda1*lambda2 >= 1 and SolverFailure if the
    bracket carries no sign change (unreachable for valid parameters; surfaced
    rather than masked). The loadings depend only on the five behavioral
    parameters; mu, sigma, c, horizon and initial surpluses enter the value
    rates only.
    """
    if existence(params.lambda1, params.lambda2) is not ExistenceVerdict.EXISTS:
        raise NoEquilibrium("no equilibrium: lambda1*lambda2 >= 1")

    if params.lambda1 == 0.0 and params.lambda2 == 0.0:
        theta = _closed_form_zero_lambda(params)
        iterations = 0
    else:
        side1 = reinsurer_side(params, 1)
        side2 = reinsurer_side(params, 2)

        def gap(t1: float) -> float:
            return phi(side1, phi(side2, t1)) - t1

        lo = config.bracket_floor
        hi = params.delta1 + params.delta0 / 2.0 + 1.0
        if gap(lo) <= 0.0 or gap(hi) >= 0.0:
            raise SolverFailure(
                f"no sign change of the fixed-point gap on [{lo}, {hi}]")
        t1, info = brentq(gap, lo, hi, xtol=1e-15, rtol=8.881784197001252e-16,
                          maxiter=config.max_iterations, full_output=True)
        theta = PremiumPair(theta1=t1, theta2=phi(side2, t1))
        iterations = info.iterations

    defect = residual(params, theta)
    if defect > config.tolerance:
        raise SolverFailure(
            f"fixed-point residual {defect:.3e} exceeds tolerance {config.tolerance:.3e}")

    p_star = insurer_response(params.delta0, theta)
    return Equilibrium(
        theta_star=theta,
        p_star=p_star,
        residual=defect,
        f0_rate=valuation.f0_rate(params, theta),
        f1_rate=valuation.reinsurer_rate(params, theta, 1),
        f2_rate=valuation.reinsurer_rate(params, theta, 2),
        iterations=iterations,
    )


def limit_profile(params: ModelParams, epsilons: list[float],
                  config: SolverConfig = SolverConfig()) -> list[tuple[float, float, float, float]]:
    """Equilibria along the existence boundary: lambda2 = (1 - eps) / lambda1.

    Returns rows (eps, theta1*, theta2*, p1* + p2*). As eps decreases toward 0
    both loadings shrink to zero and total coverage approaches full insurance.
    """
    if params.lambda1 <= 0:
        raise ValueError("limit_profile requires lambda1 > 0")
    from dataclasses import replace

    rows = []
    for eps in epsilons:
        if not 0.0 < eps < 1.0:
            raise ValueError(f"epsilon must lie in (0,1), got {eps}")
        eq = solve(replace(params, lambda2=(1.0 - eps) / params.lambda1), config)
        rows.append((eps, eq.theta_star.theta1, eq.theta_star.theta2,
                     eq.p_star.p1 + eq.p_star.p2))
    return rows
