import numpy as np
import pytest

import pnspace as pn
from pnspace.tnorms import TriangleFn

from conftest import random_piecewise, random_step


def brute_convolution(T, F, G, x, mode, n_splits=10_000):
    """Dense-grid brute-force oracle over uniform splits of [0, x]."""
    T = pn.tnorm(T)
    s = np.linspace(0.0, x, n_splits + 1)
    t = x - s
    fs, gs = F(s), G(t)
    fr, gr = F.right_limit(s), G.right_limit(t)
    if mode == "sup":
        vals = np.maximum(T(fs, gs), np.maximum(T(fr, gs), T(fs, gr)))
        return float(vals.max())
    conorm = lambda a, b: 1.0 - T(1.0 - a, 1.0 - b)
    vals = np.minimum(conorm(fs, gs), np.minimum(conorm(fr, gs), conorm(fs, gr)))
    return float(vals.min())


# ---------------------------------------------------------------------------
# t-norms and duals
# ---------------------------------------------------------------------------


def test_tnorm_values():
    assert pn.tnorm_eval("M", 0.3, 0.7) == 0.3
    assert pn.tnorm_eval("Pi", 0.5, 0.5) == 0.25
    assert pn.tnorm_eval("W", 0.3, 0.6) == 0.0


def test_dual_values():
    assert pn.dual_tnorm_eval("M", 0.3, 0.7) == pytest.approx(0.7)
    assert pn.dual_tnorm_eval("W", 0.3, 0.6) == pytest.approx(0.9)
    assert pn.dual_tnorm_eval("Pi", 0.5, 0.5) == pytest.approx(0.75)


def test_tnorm_domain():
    with pytest.raises(pn.DomainError):
        pn.tnorm_eval("M", -0.1, 0.5)
    with pytest.raises(pn.DomainError):
        pn.dual_tnorm_eval("Pi", 0.5, 1.2)


@pytest.mark.parametrize("tag", ["M", "Pi", "W"])
def test_tnorm_grid_laws(tag):
    T = pn.tnorm(tag)
    g = np.linspace(0.0, 1.0, 100)
    X, Y = np.meshgrid(g, g)
    vals = T(X, Y)
    # commutativity, boundary conditions, monotonicity in each variable
    assert np.array_equal(vals, T(Y, X))
    assert np.allclose(T(g, np.ones_like(g)), g, atol=1e-15)
    assert np.allclose(T(g, np.zeros_like(g)), 0.0, atol=1e-15)
    assert np.all(np.diff(vals, axis=0) >= -1e-15)
    assert np.all(np.diff(vals, axis=1) >= -1e-15)


# ---------------------------------------------------------------------------
# convolutions: worked values
# ---------------------------------------------------------------------------


def test_identity_at_unit_step():
    G = pn.AnalyticDistFn("ratio")
    for tag in ("M", "Pi", "W"):
        for x in (0.2, 1.0, 9.0):
            assert pn.sup_convolution(tag, pn.unit_step(0.0), G, x) == pytest.approx(
                G(x), abs=1e-12)
            assert pn.inf_convolution(tag, pn.unit_step(0.0), G, x) == pytest.approx(
                G(x), abs=1e-12)


def test_step_translation():
    e1, e2 = pn.unit_step(1.0), pn.unit_step(2.0)
    assert pn.sup_convolution("M", e1, e2, 3.0) == 0.0
    assert pn.sup_convolution("M", e1, e2, 3.01) == 1.0


def test_ramp_pair_values():
    F = pn.PiecewiseDistFn([[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]])  # min(x, 1)
    assert brute_convolution("Pi", F, F, 1.0, "sup") == pytest.approx(0.25, abs=1e-8)
    assert pn.sup_convolution("Pi", F, F, 1.0) == pytest.approx(0.25, abs=1e-9)
    assert brute_convolution("M", F, F, 1.0, "inf") == pytest.approx(0.5, abs=1e-8)
    assert pn.inf_convolution("M", F, F, 1.0) == pytest.approx(0.5, abs=1e-9)


def test_inf_convolution_at_unit_steps():
    for tag in ("M", "Pi", "W"):
        assert pn.inf_convolution(tag, pn.unit_step(0.0), pn.unit_step(0.0), 1.0) == 1.0


def test_plateau_pair_inf_convolution_endpoint():
    # for plateaus the infimum is attained at an endpoint split, where one
    # argument vanishes: the value is the smaller plateau level, not the
    # interior conorm value
    c = pn.plateau(0.5)
    assert pn.inf_convolution("Pi", c, c, 2.0) == pytest.approx(0.5, abs=1e-12)
    assert brute_convolution("Pi", c, c, 2.0, "inf") == pytest.approx(0.5, abs=1e-12)
    c2 = pn.plateau(0.7)
    assert pn.inf_convolution("Pi", c, c2, 1.0) == pytest.approx(0.5, abs=1e-12)


def test_plateau_pair_sup_convolution():
    a, b = pn.plateau(0.6), pn.plateau(0.5)
    for tag in ("M", "Pi", "W"):
        expected = float(pn.tnorm_eval(tag, 0.6, 0.5))
        assert pn.sup_convolution(tag, a, b, 3.0) == pytest.approx(expected, abs=1e-12)


def test_pointwise_min():
    G = pn.AnalyticDistFn("ratio")
    assert pn.pointwise_min(pn.unit_step(0.0), G, 1.0) == G(1.0)
    assert pn.pointwise_min(pn.plateau(0.4), pn.plateau(0.7), 5.0) == pytest.approx(0.4)
    assert pn.pointwise_min(G, G, 2.0) == G(2.0)


# ---------------------------------------------------------------------------
# oracle equivalence
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("tag", ["M", "Pi", "W"])
def test_oracle_equivalence_piecewise(rng, tag):
    for _ in range(100):
        F, G = random_piecewise(rng), random_piecewise(rng)
        x = float(rng.uniform(0.2, 1.4))
        for mode, ours in (("sup", pn.sup_convolution), ("inf", pn.inf_convolution)):
            got = ours(tag, F, G, x)
            want = brute_convolution(tag, F, G, x, mode)
            assert abs(got - want) <= 1e-4, (tag, mode, x)


@pytest.mark.parametrize("tag", ["M", "Pi", "W"])
def test_oracle_equivalence_steps_exact(rng, tag):
    for _ in range(40):
        F, G = random_step(rng), random_step(rng)
        x = float(rng.uniform(0.3, 5.0))
        for mode, ours in (("sup", pn.sup_convolution), ("inf", pn.inf_convolution)):
            got = ours(tag, F, G, x)
            want = brute_convolution(tag, F, G, x, mode)
            assert abs(got - want) <= 1e-9, (tag, mode, x)


def test_min_crossing_matches_oracle(rng):
    # for the min kernel the sup sits at a crossing or jump of the two sides;
    # the oracle needs 2e6 splits to itself resolve the crossing to 1e-6
    for _ in range(30):
        F, G = random_piecewise(rng), random_piecewise(rng)
        x = float(rng.uniform(0.2, 1.4))
        got = pn.sup_convolution("M", F, G, x)
        want = brute_convolution("M", F, G, x, "sup", n_splits=2_000_000)
        assert abs(got - want) <= 1e-6


def test_sup_below_inf_convolution(rng):
    for tag in ("M", "Pi", "W"):
        for _ in range(20):
            F, G = random_piecewise(rng), random_piecewise(rng)
            x = float(rng.uniform(0.2, 1.4))
            assert pn.sup_convolution(tag, F, G, x) <= pn.inf_convolution(
                tag, F, G, x) + 1e-12


# ---------------------------------------------------------------------------
# triangle-function law checks
# ---------------------------------------------------------------------------


def law_samples():
    return [pn.unit_step(0.0), pn.unit_step(1.0),
            pn.PiecewiseDistFn([[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]]),
            pn.plateau(0.6)]


def test_properties_sup_conv_min():
    grid = np.linspace(0.1, 4.0, 23)
    v = pn.triangle_properties_check(pn.sup_conv("M"), law_samples(), grid)
    assert v.passed, v.details


def test_properties_pointwise_min():
    grid = np.linspace(0.1, 4.0, 23)
    v = pn.triangle_properties_check(pn.MIN_TRIANGLE, law_samples(), grid)
    assert v.passed
    assert v.details["worst"]["identity"] == 0.0


def test_properties_broken_evaluator_fails_identity():
    class Broken(TriangleFn):
        def eval_grid(self, F, G, xs):
            return np.clip(super().eval_grid(F, G, xs) - 0.1, 0.0, 1.0)

    v = pn.triangle_properties_check(Broken("sup_conv", pn.MIN), law_samples(),
                                     np.linspace(0.1, 4.0, 23))
    assert not v.passed
    assert "identity" in v.witness["failed"]


def test_materialized_convolution():
    e1, e2 = pn.unit_step(1.0), pn.unit_step(2.0)
    out = pn.convolve(pn.sup_conv("M"), e1, e2)
    assert out.approximate
    assert out(3.0) == pytest.approx(0.0, abs=1e-9)
    assert out(3.5) == pytest.approx(1.0, abs=1e-9)


def test_custom_tnorm_requires_continuity():
    with pytest.raises(pn.ConstructionError):
        pn.custom_tnorm("drastic", lambda x, y: np.where(np.maximum(x, y) == 1.0,
                                                         np.minimum(x, y), 0.0),
                        continuous=False)
    T = pn.custom_tnorm("pi2", lambda x, y: (np.asarray(x) * y) ** 1.0, continuous=True)
    assert pn.sup_convolution(T, pn.plateau(0.5), pn.plateau(0.5), 1.0) == pytest.approx(0.25)
