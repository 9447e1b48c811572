import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def observed_order(errors, ratios=2.0, floor=1e-12):
    """Least informative convergence order across successive levels.

    Levels whose errors sit at the numerical floor are treated as converged
    and skipped; returns None when every pair is at the floor.
    """
    orders = []
    for e0, e1 in zip(errors[:-1], errors[1:]):
        if max(e0, e1) <= floor:
            continue
        orders.append(np.log(e0 / max(e1, 1e-300)) / np.log(ratios))
    return min(orders) if orders else None
