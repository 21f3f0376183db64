"""Comparative statics of the equilibrium in the five behavioral parameters.

Analytic derivatives come from implicit differentiation of the fixed point;
finite-difference variants re-solve the equilibrium at perturbed parameters
and serve as an independent cross-check.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .bestresponse import (cession_partials, phi_partials, phi_prime,
                           reinsurer_side)
from .equilibrium import SolverConfig, solve
from .model import Equilibrium, ModelParams

PARAMETERS = ("delta0", "delta1", "delta2", "lambda1", "lambda2")

#: Central-difference step; balances truncation error against solver noise
#: at the default solver tolerance of 1e-12.
DEFAULT_STEP = 1e-5


class DegenerateDenominator(ArithmeticError):
    """The implicit-function denominator 1 - phi1'*phi2' is numerically zero,
    i.e. the parameters sit too close to the existence boundary."""


class Method(enum.Enum):
    ANALYTIC = "analytic"
    FINITE_DIFFERENCE = "finite-difference"


@dataclass(frozen=True)
class SensitivityReport:
    parameter: str
    d_theta1: float
    d_theta2: float
    d_p1: float
    d_p2: float
    method: Method


def _phi_parameter_partial(params: ModelParams, i: int, parameter: str, x: float) -> float:
    """Partial of reinsurer i's best-response map in one behavioral parameter,
    at fixed argument x. Two of the five partials vanish identically."""
    ps = phi_partials(reinsurer_side(params, i), x)
    own_delta = f"delta{i}"
    rival_lambda = "lambda2" if i == 1 else "lambda1"
    if parameter == "delta0":
        return ps.d_delta0
    if parameter == own_delta:
        return ps.d_delta_own
    if parameter == rival_lambda:
        return ps.d_lambda_rival
    return 0.0


def theta_sensitivity(params: ModelParams, eq: Equilibrium,
                      parameter: str) -> tuple[float, float]:
    """Analytic (d theta1*/dq, d theta2*/dq) via the implicit-function quotient.

    The shared denominator 1 - phi1'(t2*)*phi2'(t1*) is strictly positive at
    the fixed point whenever lambda1*lambda2 < 1.
    """
    if parameter not in PARAMETERS:
        raise ValueError(f"unknown parameter {parameter!r}")
    t1, t2 = eq.theta_star.theta1, eq.theta_star.theta2
    g1 = phi_prime(reinsurer_side(params, 1), t2)
    g2 = phi_prime(reinsurer_side(params, 2), t1)
    denom = 1.0 - g1 * g2
    if denom <= 1e-10:
        raise DegenerateDenominator(
            f"1 - phi1'*phi2' = {denom:.3e}; too close to the existence boundary")
    dphi1 = _phi_parameter_partial(params, 1, parameter, t2)
    dphi2 = _phi_parameter_partial(params, 2, parameter, t1)
    d_t1 = (g1 * dphi2 + dphi1) / denom
    d_t2 = (g2 * dphi1 + dphi2) / denom
    return d_t1, d_t2


def cession_sensitivity(params: ModelParams, eq: Equilibrium,
                        parameter: str) -> tuple[float, float]:
    """Total derivatives of the equilibrium ceded proportions (chain rule).

    No global sign holds for these; the direct delta0 effect and the induced
    loading effects can pull in opposite directions.
    """
    d_t1, d_t2 = theta_sensitivity(params, eq, parameter)
    cp = cession_partials(params.delta0, eq.theta_star)
    direct1 = cp.dp1_delta0 if parameter == "delta0" else 0.0
    direct2 = cp.dp2_delta0 if parameter == "delta0" else 0.0
    d_p1 = direct1 + cp.dp1_theta1 * d_t1 + cp.dp1_theta2 * d_t2
    d_p2 = direct2 + cp.dp2_theta1 * d_t1 + cp.dp2_theta2 * d_t2
    return d_p1, d_p2


def analytic_report(params: ModelParams, eq: Equilibrium,
                    parameter: str) -> SensitivityReport:
    d_t1, d_t2 = theta_sensitivity(params, eq, parameter)
    d_p1, d_p2 = cession_sensitivity(params, eq, parameter)
    return SensitivityReport(parameter, d_t1, d_t2, d_p1, d_p2, Method.ANALYTIC)


def finite_difference_report(params: ModelParams, parameter: str,
                             step: float = DEFAULT_STEP,
                             config: SolverConfig = SolverConfig()) -> SensitivityReport:
    """Central differences of the re-solved equilibrium at parameter +/- step."""
    if parameter not in PARAMETERS:
        raise ValueError(f"unknown parameter {parameter!r}")
    base = getattr(params, parameter)
    hi = solve(replace(params, **{parameter: base + step}), config)
    lo = solve(replace(params, **{parameter: base - step}), config)
    scale = 1.0 / (2.0 * step)
    return SensitivityReport(
        parameter,
        (hi.theta_star.theta1 - lo.theta_star.theta1) * scale,
        (hi.theta_star.theta2 - lo.theta_star.theta2) * scale,
        (hi.p_star.p1 - lo.p_star.p1) * scale,
        (hi.p_star.p2 - lo.p_star.p2) * scale,
        Method.FINITE_DIFFERENCE,
    )
