import numpy as np
import pytest

import pnspace as pn


def random_piecewise(rng, support=1.0, max_knots=6, max_slope=1.0):
    """Random piecewise-linear d.d.f. with jumps: coarse knots, gentle ramps.

    Continuous-segment slopes stay below ``max_slope`` so dense-grid oracles
    with 1e4 splits resolve the functions to ~1e-4; steepness is expressed
    through jumps instead, which both evaluation paths treat exactly.
    """
    n = rng.integers(2, max_knots + 1)
    xs = np.sort(rng.choice(np.arange(1, 20), size=n, replace=False)) * (support / 20.0)
    xs = np.concatenate([[0.0], xs])
    levels = np.sort(rng.uniform(0.0, 1.0, size=2 * len(xs) - 1))
    yl = np.empty(len(xs))
    yr = np.empty(len(xs))
    yl[0] = 0.0
    yr[0] = levels[0] if rng.random() < 0.5 else 0.0
    for i in range(1, len(xs)):
        lo = yr[i - 1]
        gap = xs[i] - xs[i - 1]
        hi = min(1.0, lo + max_slope * gap)
        yl[i] = rng.uniform(lo, hi)
        yr[i] = yl[i] if rng.random() < 0.5 else rng.uniform(yl[i], 1.0)
    return pn.PiecewiseDistFn(np.column_stack([xs, yl, yr]))


def random_step(rng, support=3.0, max_jumps=5):
    """Random step function: piecewise constant with jumps on a coarse lattice."""
    n = rng.integers(1, max_jumps + 1)
    xs = np.sort(rng.choice(np.arange(1, 60), size=n, replace=False)) * (support / 60.0)
    ys = np.sort(rng.uniform(0.0, 1.0, size=n))
    knots = [[0.0, 0.0, 0.0]]
    prev = 0.0
    for x, y in zip(xs, ys):
        knots.append([float(x), prev, float(y)])
        prev = float(y)
    return pn.PiecewiseDistFn(knots)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
