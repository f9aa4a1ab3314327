"""Constraint-aware expected improvement.

The improvement integral under a Gaussian predictive marginal has the usual
closed form, so the quadrature lives only in the test suite as an oracle.
Constraint factors multiply the result: indicator (0/1) for hard constraints,
beta in [0, 1) for violated soft ones.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import ndtr

from .objectives import ConstraintSpec, soft_factor
from .space import Candidate, SearchSpace, encode
from .surrogate import GpModel, gp_posterior

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def expected_improvement(mu: float, sigma: float, y_best: float) -> float:
    """EI for minimization: E[max(y_best - Y, 0)] with Y ~ N(mu, sigma^2)."""
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    gap = y_best - mu
    if sigma == 0.0:
        return max(gap, 0.0)
    z = gap / sigma
    ei = gap * float(ndtr(z)) + sigma * _INV_SQRT_2PI * math.exp(-0.5 * z * z)
    return max(ei, 0.0)


@dataclass(frozen=True)
class AcquisitionContext:
    """Everything one objective's acquisition needs.

    y_best is the incumbent for this objective: the best (minimum) observed
    target among feasible observations when any exist, else the global best.
    """

    model: GpModel
    y_best: float
    constraints: tuple[ConstraintSpec, ...]
    space: SearchSpace


def ca_ei(ctx: AcquisitionContext, x: Candidate) -> float:
    """Expected improvement at x scaled by the product of constraint factors."""
    factor = 1.0
    for c in ctx.constraints:
        factor *= soft_factor(c, x)
        if factor == 0.0:
            return 0.0
    mu, sigma = gp_posterior(ctx.model, encode(ctx.space, x))
    return expected_improvement(mu, sigma, ctx.y_best) * factor
