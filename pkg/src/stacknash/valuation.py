"""Closed-form value-function coefficients and equilibrium value functions.

For constant strategies every exponent coefficient is affine in time to
maturity, so a single per-unit-time rate characterizes it: f(t) = rate*(T-t).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .bestresponse import NonpositivePremium, insurer_response
from .model import Equilibrium, ModelParams, PremiumPair


class Player(enum.Enum):
    INSURER = 0
    REINSURER1 = 1
    REINSURER2 = 2


@dataclass(frozen=True)
class ValueCoefficient:
    rate: float
    player: Player


def _premium_denominator(delta0: float, theta: PremiumPair) -> float:
    t1, t2 = theta.theta1, theta.theta2
    return delta0 * t1 + delta0 * t2 + 2.0 * t1 * t2


def f0_rate(params: ModelParams, theta: PremiumPair) -> float:
    """Time slope of the insurer's value exponent under best-response cession.

    rate = d0 * (mu - c + d0 * sigma^2 * t1 * t2 / D).
    """
    t1, t2 = theta.theta1, theta.theta2
    if t1 <= 0 or t2 <= 0:
        raise NonpositivePremium(f"premium loadings must be positive: {theta}")
    d0 = params.delta0
    ratio = d0 * params.sigma ** 2 * t1 * t2 / _premium_denominator(d0, theta)
    return d0 * (params.mu - params.c + ratio)


def reinsurer_rate(params: ModelParams, theta: PremiumPair, i: int) -> float:
    """Time slope of reinsurer i's value exponent at equilibrium loadings.

    Equals -d_i*m + d_i^2*s^2/2 for the drift m and diffusion s of the
    relative performance under the insurer's responsive cession, which in
    closed form is

        sigma^2*d0^2*d_i*(t_j - l_j*t_i)/D^2 * [-t_i*t_j + d_i*(t_j - l_j*t_i)/2].
    """
    d0 = params.delta0
    if i == 1:
        di, lj, ti, tj = params.delta1, params.lambda2, theta.theta1, theta.theta2
    elif i == 2:
        di, lj, ti, tj = params.delta2, params.lambda1, theta.theta2, theta.theta1
    else:
        raise ValueError(f"reinsurer index must be 1 or 2, got {i}")
    gap = tj - lj * ti
    d_sq = _premium_denominator(d0, theta) ** 2
    return params.sigma ** 2 * d0 * d0 * di * gap / d_sq \
        * (-ti * tj + 0.5 * di * gap)


def fi_rate(params: ModelParams, eq: Equilibrium, i: int) -> float:
    """Reinsurer i's equilibrium value-exponent rate."""
    return reinsurer_rate(params, eq.theta_star, i)


def value_insurer(params: ModelParams, eq: Equilibrium, t: float, x: float) -> float:
    """Insurer's equilibrium value -(1/d0)*exp(-d0*x + f0*(T-t)); negative,
    equal to -1/d0 at (t, x) = (T, 0)."""
    tau = params.horizon - t
    return -math.exp(-params.delta0 * x + eq.f0_rate * tau) / params.delta0


def value_reinsurer(params: ModelParams, eq: Equilibrium, i: int,
                    t: float, y: float) -> float:
    """Reinsurer i's equilibrium value as a function of its relative
    performance y."""
    if i == 1:
        di, rate = params.delta1, eq.f1_rate
    elif i == 2:
        di, rate = params.delta2, eq.f2_rate
    else:
        raise ValueError(f"reinsurer index must be 1 or 2, got {i}")
    tau = params.horizon - t
    return -math.exp(-di * y + rate * tau) / di


def welfare_index(params: ModelParams, eq: Equilibrium, i: int) -> float:
    """Dimensionless welfare proxy for reinsurer i.

    Defined as the value rate stripped of the positive factor
    sigma^2*d0*d_i, so a larger index means lower reinsurer welfare.
    """
    di = params.delta1 if i == 1 else params.delta2
    return fi_rate(params, eq, i) / (params.sigma ** 2 * params.delta0 * di)


def premium_identity_gap(params: ModelParams, theta: PremiumPair) -> float:
    """Defect of the algebraic identity behind the insurer's value rate:

        sigma^2*(t1*p1^2 + t2*p2^2) + d0*sigma^2*(1-p1-p2)^2/2
            = d0*sigma^2*t1*t2/D

    with (p1, p2) the insurer's best response. Zero up to rounding.
    """
    p = insurer_response(params.delta0, theta)
    s2, d0 = params.sigma ** 2, params.delta0
    lhs = s2 * (theta.theta1 * p.p1 ** 2 + theta.theta2 * p.p2 ** 2) \
        + 0.5 * d0 * s2 * (1.0 - p.p1 - p.p2) ** 2
    rhs = d0 * s2 * theta.theta1 * theta.theta2 \
        / _premium_denominator(d0, theta)
    return lhs - rhs
