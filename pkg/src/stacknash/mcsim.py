"""Independent verification layer: exact Gaussian utilities for constant
strategies, seeded Monte Carlo simulation of the surplus dynamics, and
unilateral-deviation testing of a solved equilibrium.

All three surpluses are driven by the single shared Brownian shock, so joint
path simulation and direct relative-performance simulation agree pathwise.
The Monte Carlo driver uses the counter-based Philox generator; draws sit at
fixed counter offsets per path, so path k is reproducible for a given seed
regardless of how the batch is evaluated.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .bestresponse import insurer_response
from .model import CessionPair, Equilibrium, ModelParams, PremiumPair


class Scheme(enum.Enum):
    EXACT_TERMINAL = "exact-terminal"
    EULER_MARUYAMA = "euler-maruyama"


@dataclass(frozen=True)
class SimConfig:
    paths: int = 100_000
    steps: int = 1
    seed: int = 0
    scheme: Scheme = Scheme.EXACT_TERMINAL

    def __post_init__(self):
        if self.paths < 1 or self.steps < 1:
            raise ValueError("paths and steps must be at least 1")


@dataclass(frozen=True)
class SimReport:
    estimate: float
    std_error: float
    paths: int
    seed: int


def _utility(delta: float, mean, variance):
    """Expected exponential utility of a normal terminal law."""
    return -np.exp(-delta * mean + 0.5 * delta * delta * variance) / delta


def insurer_terminal_moments(params: ModelParams, theta: PremiumPair,
                             p1, p2, t: float = 0.0, x: float | None = None):
    """Mean and variance of the insurer's terminal surplus under constant
    strategies. Accepts scalar or array cession arguments."""
    tau = params.horizon - t
    x = params.x0 if x is None else x
    s2 = params.sigma ** 2
    drift = params.c - params.mu \
        - s2 * (theta.theta1 * p1 * p1 + theta.theta2 * p2 * p2)
    retained = 1.0 - p1 - p2
    return x + drift * tau, s2 * retained * retained * tau


def gaussian_utility_insurer(params: ModelParams, theta: PremiumPair,
                             p: CessionPair, t: float = 0.0,
                             x: float | None = None) -> float:
    """Exact expected utility of the insurer's terminal surplus; an oracle
    independent of the dynamic-programming derivation."""
    mean, var = insurer_terminal_moments(params, theta, p.p1, p.p2, t, x)
    return float(_utility(params.delta0, mean, var))


def _reinsurer_constants(params: ModelParams, i: int):
    if i == 1:
        return params.delta1, params.lambda2, params.x1, params.x2
    if i == 2:
        return params.delta2, params.lambda1, params.x2, params.x1
    raise ValueError(f"reinsurer index must be 1 or 2, got {i}")


def reinsurer_terminal_moments(params: ModelParams, theta_i, theta_j,
                               i: int, t: float = 0.0, y: float | None = None):
    """Mean and variance of reinsurer i's terminal relative performance when
    the insurer best-responds to the loadings (theta_i, theta_j)."""
    di, lj, xi, xj = _reinsurer_constants(params, i)
    tau = params.horizon - t
    if y is None:
        y = xi - lj * xj
    d0 = params.delta0
    denom = d0 * theta_i + d0 * theta_j + 2.0 * theta_i * theta_j
    p_i = d0 * theta_j / denom
    p_j = d0 * theta_i / denom
    s2 = params.sigma ** 2
    drift = s2 * (theta_i * p_i * p_i - lj * theta_j * p_j * p_j)
    diffusion = params.sigma * (p_i - lj * p_j)
    return y + drift * tau, diffusion * diffusion * tau


def gaussian_utility_reinsurer(params: ModelParams, theta: PremiumPair,
                               i: int, t: float = 0.0,
                               y: float | None = None) -> float:
    """Exact expected utility of reinsurer i's terminal relative performance,
    with the insurer playing its best response to ``theta``."""
    theta_i = theta.theta1 if i == 1 else theta.theta2
    theta_j = theta.theta2 if i == 1 else theta.theta1
    di = params.delta1 if i == 1 else params.delta2
    mean, var = reinsurer_terminal_moments(params, theta_i, theta_j, i, t, y)
    return float(_utility(di, mean, var))


def brownian_total_increments(params: ModelParams, config: SimConfig) -> np.ndarray:
    """Terminal Brownian increments W(T), one per path, shared by all players.

    Under the Euler-Maruyama scheme the per-step increments are drawn on a
    (paths, steps) grid and summed; the exact scheme draws the terminal value
    directly.
    """
    rng = np.random.Generator(np.random.Philox(key=config.seed))
    tau = params.horizon
    if config.scheme is Scheme.EXACT_TERMINAL:
        return math.sqrt(tau) * rng.standard_normal(config.paths)
    dt = tau / config.steps
    increments = math.sqrt(dt) * rng.standard_normal((config.paths, config.steps))
    return increments.sum(axis=1)


def terminal_surplus_samples(params: ModelParams, theta: PremiumPair,
                             p: CessionPair, config: SimConfig):
    """Jointly simulated terminal surpluses (X0(T), X1(T), X2(T))."""
    w = brownian_total_increments(params, config)
    tau = params.horizon
    s2 = params.sigma ** 2
    drift0 = params.c - params.mu \
        - s2 * (theta.theta1 * p.p1 ** 2 + theta.theta2 * p.p2 ** 2)
    x0 = params.x0 + drift0 * tau - params.sigma * (1.0 - p.p1 - p.p2) * w
    x1 = params.x1 + theta.theta1 * s2 * p.p1 ** 2 * tau - params.sigma * p.p1 * w
    x2 = params.x2 + theta.theta2 * s2 * p.p2 ** 2 * tau - params.sigma * p.p2 * w
    return x0, x1, x2


def relative_performance_samples(params: ModelParams, theta: PremiumPair,
                                 i: int, config: SimConfig) -> np.ndarray:
    """Terminal relative performance of reinsurer i simulated directly from
    its own dynamics, with the insurer best-responding to ``theta``. Pathwise
    identical (same seed) to forming X_i - w_i X_j from the joint simulation."""
    di, lj, xi, xj = _reinsurer_constants(params, i)
    p = insurer_response(params.delta0, theta)
    p_i, p_j = (p.p1, p.p2) if i == 1 else (p.p2, p.p1)
    t_i = theta.theta1 if i == 1 else theta.theta2
    t_j = theta.theta2 if i == 1 else theta.theta1
    w = brownian_total_increments(params, config)
    tau = params.horizon
    s2 = params.sigma ** 2
    drift = s2 * (t_i * p_i * p_i - lj * t_j * p_j * p_j)
    return (xi - lj * xj) + drift * tau - params.sigma * (p_i - lj * p_j) * w


def _report(samples: np.ndarray, config: SimConfig) -> SimReport:
    estimate = float(samples.mean())
    spread = float(samples.std(ddof=1)) if len(samples) > 1 else 0.0
    return SimReport(estimate=estimate,
                     std_error=spread / math.sqrt(len(samples)),
                     paths=config.paths, seed=config.seed)


def simulate_utilities(params: ModelParams, theta: PremiumPair,
                       p: CessionPair, config: SimConfig) -> dict[str, SimReport]:
    """Seeded Monte Carlo estimates of each player's expected utility under
    constant strategies; keys 'insurer', 'reinsurer1', 'reinsurer2'."""
    x0, x1, x2 = terminal_surplus_samples(params, theta, p, config)
    y1 = x1 - params.lambda2 * x2
    y2 = x2 - params.lambda1 * x1
    d0, d1, d2 = params.delta0, params.delta1, params.delta2
    return {
        "insurer": _report(-np.exp(-d0 * x0) / d0, config),
        "reinsurer1": _report(-np.exp(-d1 * y1) / d1, config),
        "reinsurer2": _report(-np.exp(-d2 * y2) / d2, config),
    }


@dataclass(frozen=True)
class DeviationReport:
    """Worst utility improvements found by grid search over unilateral
    deviations; all margins are <= 0 at a true equilibrium."""

    insurer_margin: float
    reinsurer1_margin: float
    reinsurer2_margin: float
    improving_deviations: int
    grid_step: float

    @property
    def worst_margin(self) -> float:
        return max(self.insurer_margin, self.reinsurer1_margin,
                   self.reinsurer2_margin)


def _insurer_margin(params: ModelParams, theta: PremiumPair,
                    p: CessionPair, step: float) -> float:
    grid = np.arange(0.0, 1.0 + 0.5 * step, step)
    p1, p2 = np.meshgrid(grid, grid, indexing="ij")
    mask = p1 + p2 <= 1.0
    p1, p2 = p1[mask], p2[mask]
    mean, var = insurer_terminal_moments(params, theta, p1, p2)
    candidates = _utility(params.delta0, mean, var)
    return float(candidates.max()) - gaussian_utility_insurer(params, theta, p)


def _reinsurer_margin(params: ModelParams, theta: PremiumPair,
                      i: int, step: float) -> float:
    di = params.delta1 if i == 1 else params.delta2
    t_i = theta.theta1 if i == 1 else theta.theta2
    t_j = theta.theta2 if i == 1 else theta.theta1
    grid = np.arange(step, di + params.delta0 / 2.0 + 0.5 * step, step)
    mean, var = reinsurer_terminal_moments(params, grid, t_j, i)
    candidates = _utility(di, mean, var)
    return float(candidates.max()) - gaussian_utility_reinsurer(params, theta, i)


def deviation_test(params: ModelParams, eq: Equilibrium,
                   grid_step: float = 1e-3) -> DeviationReport:
    """Grid search for profitable unilateral deviations at a candidate
    equilibrium: the insurer over the cession simplex given theta*, each
    reinsurer over its loading range given the rival's loading and the
    insurer's responsive cession."""
    theta = eq.theta_star
    margins = (
        _insurer_margin(params, theta, eq.p_star, grid_step),
        _reinsurer_margin(params, theta, 1, grid_step),
        _reinsurer_margin(params, theta, 2, grid_step),
    )
    return DeviationReport(
        insurer_margin=margins[0],
        reinsurer1_margin=margins[1],
        reinsurer2_margin=margins[2],
        improving_deviations=sum(1 for m in margins if m > 0.0),
        grid_step=grid_step,
    )
