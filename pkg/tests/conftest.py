"""Shared test helpers: random parameter draws and grid-search oracles."""

import sys
from dataclasses import replace

import numpy as np
import pytest

from stacknash import DEFAULT_PARAMS, ModelParams


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance-criterion verdict lines past output capture."""
    acceptance = sys.modules.get("test_acceptance")
    for line in getattr(acceptance, "VERDICTS", []):
        terminalreporter.write_line(line)


def random_params(rng: np.random.Generator, max_product: float = 0.99,
                  delta_range=(0.5, 10.0), lambda_range=(0.01, 2.0)) -> ModelParams:
    """A random draw of behavioral parameters with lambda1*lambda2 below the
    requested bound."""
    while True:
        d0, d1, d2 = rng.uniform(*delta_range, 3)
        l1, l2 = rng.uniform(*lambda_range, 2)
        if l1 * l2 < max_product:
            return replace(DEFAULT_PARAMS, delta0=d0, delta1=d1, delta2=d2,
                           lambda1=l1, lambda2=l2)


def simplex_grid(step: float):
    """All (p1, p2) grid points with p1, p2 >= 0 and p1 + p2 <= 1."""
    axis = np.arange(0.0, 1.0 + 0.5 * step, step)
    p1, p2 = np.meshgrid(axis, axis, indexing="ij")
    mask = p1 + p2 <= 1.0
    return p1[mask], p2[mask]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
