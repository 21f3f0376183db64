"""Closed-form best responses of all three players and their exact derivatives.

All functions are pure and accept either floats or numpy arrays for the
premium argument ``x``.

Index convention: the weight appearing inside reinsurer i's best-response map
is the competitor's competition degree (lambda_j), because reinsurer i's
objective is its performance relative to lambda_j times the rival's.
:func:`reinsurer_side` encodes that mapping once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import CessionPair, ModelParams, PremiumPair


class NonpositivePremium(ValueError):
    """A variance loading was not strictly positive."""


class NonpositiveInput(ValueError):
    """The best-response map was evaluated outside its domain."""


@dataclass(frozen=True)
class ReinsurerSide:
    """One reinsurer's view of the game: own risk aversion, the rival weight
    inside its best-response map, and the insurer's risk aversion."""

    own_delta: float
    rival_weight: float
    delta0: float

    def __post_init__(self):
        if self.own_delta <= 0 or self.delta0 <= 0:
            raise ValueError("risk aversions must be positive")
        if self.rival_weight < 0:
            raise ValueError("rival_weight must be nonnegative")


def reinsurer_side(params: ModelParams, i: int) -> ReinsurerSide:
    """Side of reinsurer ``i`` (1 or 2); the rival weight is the *other*
    reinsurer's competition degree."""
    if i == 1:
        return ReinsurerSide(params.delta1, params.lambda2, params.delta0)
    if i == 2:
        return ReinsurerSide(params.delta2, params.lambda1, params.delta0)
    raise ValueError(f"reinsurer index must be 1 or 2, got {i}")


def insurer_response(delta0: float, theta: PremiumPair) -> CessionPair:
    """The insurer's optimal ceded proportions for given loadings.

    p1 = d0*t2/D, p2 = d0*t1/D with D = d0*t1 + d0*t2 + 2*t1*t2; the pair is
    strictly interior (p1, p2 > 0 and p1 + p2 < 1).
    """
    t1, t2 = theta.theta1, theta.theta2
    if t1 <= 0 or t2 <= 0:
        raise NonpositivePremium(f"premium loadings must be positive: {theta}")
    denom = delta0 * t1 + delta0 * t2 + 2.0 * t1 * t2
    return CessionPair(p1=delta0 * t2 / denom, p2=delta0 * t1 / denom)


def _check_domain(side: ReinsurerSide, x) -> None:
    if side.rival_weight > 0.0:
        if np.any(np.asarray(x) <= 0.0):
            raise NonpositiveInput("premium argument must be positive")
    elif np.any(np.asarray(x) < 0.0):
        raise NonpositiveInput("premium argument must be nonnegative")


def _denominator(side: ReinsurerSide, x):
    d0, di, w = side.delta0, side.own_delta, side.rival_weight
    return 2.0 * x * x + ((1.0 + 2.0 * w) * d0 + 2.0 * w * di) * x \
        + w * (1.0 + w) * d0 * di


def phi(side: ReinsurerSide, x):
    """Reinsurer's best-response loading given the rival's loading ``x``.

    Strictly increasing and strictly concave, with horizontal asymptote
    own_delta + delta0/2. A zero rival weight uses the algebraically reduced
    form, which is also defined at x = 0 (value own_delta).
    """
    _check_domain(side, x)
    d0, di, w = side.delta0, side.own_delta, side.rival_weight
    if w == 0.0:
        return ((d0 + 2.0 * di) * x + d0 * di) / (2.0 * x + d0)
    num = (d0 + 2.0 * di) * x * x + (1.0 + w) * d0 * di * x
    return num / _denominator(side, x)


def phi_prime(side: ReinsurerSide, x):
    """Exact derivative of :func:`phi`; strictly positive."""
    _check_domain(side, x)
    d0, di, w = side.delta0, side.own_delta, side.rival_weight
    if w == 0.0:
        return d0 * d0 / (2.0 * x + d0) ** 2
    num = ((4.0 * d0 * di * w + 4.0 * di * di * w
            + 2.0 * w * d0 * d0 + d0 * d0) * x * x
           + 2.0 * d0 * di * (d0 + 2.0 * di) * w * (1.0 + w) * x
           + d0 * d0 * di * di * w * (1.0 + w) ** 2)
    return num / _denominator(side, x) ** 2


@dataclass(frozen=True)
class PartialSet:
    """Partial derivatives of phi in the five behavioral parameters.

    ``d_delta_rival`` and ``d_lambda_own`` are identically zero: phi does not
    contain the rival's risk aversion or the player's own competition degree.
    """

    d_delta0: float
    d_delta_own: float
    d_delta_rival: float
    d_lambda_own: float
    d_lambda_rival: float


def phi_partials(side: ReinsurerSide, x) -> PartialSet:
    """Closed-form parameter partials of :func:`phi` at fixed ``x``.

    Signs: d_delta0 > 0, d_delta_own > 0, d_lambda_rival < 0.
    """
    _check_domain(side, x)
    d0, di, w = side.delta0, side.own_delta, side.rival_weight
    den2 = _denominator(side, x) ** 2
    d_d0 = 2.0 * x ** 4 / den2
    d_own = x * x * (d0 * (1.0 + w) + 2.0 * x) ** 2 / den2
    d_w = -(2.0 * (d0 * d0 + 2.0 * d0 * di + 2.0 * di * di) * x ** 3
            + 2.0 * d0 * di * (d0 + 2.0 * di) * (1.0 + w) * x * x
            + d0 * d0 * di * di * (1.0 + w) ** 2 * x) / den2
    zero = 0.0 * x  # broadcasts for array inputs
    return PartialSet(d_delta0=d_d0, d_delta_own=d_own, d_delta_rival=zero,
                      d_lambda_own=zero, d_lambda_rival=d_w)


@dataclass(frozen=True)
class CessionPartialSet:
    """Partials of the insurer's response (p1, p2) in (delta0, theta1, theta2)."""

    dp1_delta0: float
    dp1_theta1: float
    dp1_theta2: float
    dp2_delta0: float
    dp2_theta1: float
    dp2_theta2: float


def cession_partials(delta0: float, theta: PremiumPair) -> CessionPartialSet:
    """Closed-form partials of the insurer response.

    For each i: d p_i / d delta0 > 0, d p_i / d theta_i < 0,
    d p_i / d theta_j > 0.
    """
    t1, t2 = theta.theta1, theta.theta2
    if t1 <= 0 or t2 <= 0:
        raise NonpositivePremium(f"premium loadings must be positive: {theta}")
    den2 = (2.0 * t1 * t2 + delta0 * (t1 + t2)) ** 2
    return CessionPartialSet(
        dp1_delta0=2.0 * t1 * t2 * t2 / den2,
        dp1_theta1=-delta0 * t2 * (delta0 + 2.0 * t2) / den2,
        dp1_theta2=delta0 * delta0 * t1 / den2,
        dp2_delta0=2.0 * t2 * t1 * t1 / den2,
        dp2_theta1=delta0 * delta0 * t2 / den2,
        dp2_theta2=-delta0 * t1 * (delta0 + 2.0 * t1) / den2,
    )
