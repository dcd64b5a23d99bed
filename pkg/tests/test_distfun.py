import math

import numpy as np
import pytest

import pnspace as pn
from pnspace.distfun import _bisect, _one_sided_ok

from conftest import random_piecewise

TOL = 1e-9


# ---------------------------------------------------------------------------
# evaluation conventions
# ---------------------------------------------------------------------------


def test_unit_step_left_continuity():
    eps2 = pn.unit_step(2.0)
    assert pn.ddf_eval(eps2, 2.0) == 0.0
    assert pn.ddf_eval(eps2, 2.01) == 1.0


def test_single_jump_left_value():
    F = pn.PiecewiseDistFn([[0.0, 0.0, 0.0], [1.0, 0.0, 1.0]])
    assert F(1.0) == 0.0
    assert F.right_limit(1.0) == 1.0


def test_analytic_eval():
    F = pn.AnalyticDistFn("ratio")
    assert F(1.0) == pytest.approx(0.5, abs=1e-15)


def test_eval_at_infinity_is_one_but_tail_reported():
    for F in (pn.unit_step(np.inf), pn.plateau(0.8), pn.AnalyticDistFn("ratio", {"c": 0.7})):
        assert pn.ddf_eval(F, np.inf) == 1.0
    assert pn.unit_step(np.inf).tail == 0.0
    assert pn.plateau(0.8).tail == 0.8


def test_negative_argument_rejected():
    with pytest.raises(pn.DomainError):
        pn.ddf_eval(pn.unit_step(1.0), -0.5)


def test_unit_step_cases():
    assert pn.unit_step(0.0)(123.0) == 1.0
    assert pn.unit_step(np.inf)(1e6) == 0.0
    assert pn.unit_step(1.5).tail == 1.0


def test_is_proper():
    assert pn.is_proper(pn.unit_step(0.0))
    assert not pn.is_proper(pn.plateau(0.8))
    assert not pn.is_proper(pn.unit_step(np.inf))


def test_monotone_and_range_sampled(rng):
    fns = [random_piecewise(rng) for _ in range(6)]
    fns += [pn.AnalyticDistFn("ratio"), pn.AnalyticDistFn("exponential", {"c": 0.9}),
            pn.AnalyticDistFn("jump_ratio", {"a": 0.3})]
    for F in fns:
        xs = np.sort(rng.uniform(0.0, 3.0, size=1000))
        vals = F(xs)
        assert np.all(np.diff(vals) >= -1e-15)
        assert np.all((vals >= 0.0) & (vals <= 1.0))
        assert F.tail >= vals.max() - 1e-15


def test_piecewise_validation():
    with pytest.raises(pn.ConstructionError):
        pn.PiecewiseDistFn([[0.5, 0.0, 1.0]])  # first knot not at 0
    with pytest.raises(pn.ConstructionError):
        pn.PiecewiseDistFn([[0.0, 0.1, 1.0]])  # F(0) != 0
    with pytest.raises(pn.ConstructionError):
        pn.PiecewiseDistFn([[0.0, 0.0, 0.8], [1.0, 0.5, 0.6]])  # decreasing across knots


def test_serialization_round_trip_exact(rng):
    for _ in range(20):
        F = random_piecewise(rng)
        back = pn.distfn_from_dict(F.to_dict())
        assert back == F
    G = pn.AnalyticDistFn("exponential", {"c": 0.75}, x_scale=2.5)
    assert pn.distfn_from_dict(G.to_dict()) == G


def test_scale_x():
    G = pn.AnalyticDistFn("ratio")
    H = G.scale_x(2.0)
    assert H(1.0) == pytest.approx(G(0.5), abs=1e-15)
    S = pn.unit_step(1.0).scale_x(3.0)
    assert S(3.0) == 0.0 and S(3.01) == 1.0


# ---------------------------------------------------------------------------
# Sibley metric
# ---------------------------------------------------------------------------


def sibley_origin_scan_oracle(F, n=100_000):
    """Direct scan of inf{h : F(h+) > 1 - h} on a uniform h-grid."""
    hs = np.linspace(0.0, 1.0, n)[1:]
    ok = F.right_limit(hs) > 1.0 - hs
    return float(hs[np.argmax(ok)]) if ok.any() else 1.0


def test_sibley_identity(rng):
    for F in [pn.unit_step(0.7), pn.plateau(0.4), random_piecewise(rng),
              pn.AnalyticDistFn("ratio")]:
        assert pn.sibley_distance(F, F) <= TOL


def test_sibley_constant_vs_origin():
    # plateau level c sits at distance 1 - c from the unit step at 0
    assert pn.sibley_distance(pn.plateau(0.5), pn.unit_step(0.0)) == pytest.approx(0.5, abs=TOL)
    assert pn.sibley_distance(pn.plateau(0.9), pn.unit_step(0.0)) == pytest.approx(0.1, abs=TOL)


@pytest.mark.parametrize("a", [0.1, 0.25, 0.5, 0.99, 1.0, 2.0, 5.0])
def test_sibley_step_vs_origin(a):
    expected = min(a, 1.0)
    oracle = sibley_origin_scan_oracle(pn.unit_step(a))
    assert abs(oracle - expected) <= 2e-5  # grid resolution of the scan
    assert pn.sibley_distance(pn.unit_step(a), pn.unit_step(0.0)) == pytest.approx(
        expected, abs=TOL)


def test_sibley_symmetry_exact(rng):
    for _ in range(15):
        F, G = random_piecewise(rng), random_piecewise(rng)
        assert pn.sibley_distance(F, G) == pn.sibley_distance(G, F)


def test_sibley_triangle_inequality(rng):
    for _ in range(15):
        F, G, H = (random_piecewise(rng) for _ in range(3))
        dfh = pn.sibley_distance(F, H)
        assert dfh <= pn.sibley_distance(F, G) + pn.sibley_distance(G, H) + 2 * TOL


def test_sibley_general_path_reduces_to_origin_formula(rng):
    # two-sided bisection with the unit step as second argument must agree
    # with the one-sided formula, bypassing the structural special case
    eps0 = pn.unit_step(0.0)
    for _ in range(20):
        F = random_piecewise(rng)

        def pred(h):
            return _one_sided_ok(F, eps0, h) and _one_sided_ok(eps0, F, h)

        general = _bisect(pred, 0.0, 1.0, 60) if pred(1.0) else 1.0
        assert general == pytest.approx(pn.sibley_to_origin(F), abs=1e-8)


def test_sibley_origin_matches_scan_oracle(rng):
    for _ in range(100):
        F = random_piecewise(rng)
        assert pn.sibley_to_origin(F) == pytest.approx(
            sibley_origin_scan_oracle(F), abs=2e-5)


def test_weak_convergence_step_sequence():
    v = pn.converges_weakly(lambda n: pn.unit_step(1.0 / n), pn.unit_step(0.0),
                            n_max=10_000, tol=1e-3)
    assert v.passed
    assert v.details["located_index"] is not None


def test_weak_convergence_constant_floor():
    v = pn.converges_weakly(lambda n: pn.plateau(0.5), pn.unit_step(0.0),
                            n_max=1000, tol=1e-3)
    assert not v.passed
    assert v.details["floor"] == pytest.approx(0.5, abs=1e-9)


def test_weak_convergence_constant_target():
    F = pn.AnalyticDistFn("ratio")
    v = pn.converges_weakly(lambda n: F, F, n_max=100, tol=1e-3)
    assert v.passed
    assert v.details["located_index"] == 1


# ---------------------------------------------------------------------------
# quasi-inverse and the monotone-inverse
# ---------------------------------------------------------------------------


def qinv_grid_oracle(f, y, x_max=1e3, step=1e-4):
    """Grid sup of {x : f(x) > y}; detects an unbounded sup at the grid end."""
    best = 0.0
    for lo in np.arange(0.0, x_max, 100.0):
        xs = np.arange(lo, min(lo + 100.0, x_max), step)
        mask = f(xs) > y
        if mask.any():
            best = float(xs[mask].max())
    if f(x_max) > y:
        return math.inf
    return best


def test_quasi_inverse_at_one_is_zero():
    for fam, a, b in [("rational", 1, 1), ("stretched_exp", 0.5, 1), ("linear_ramp", 1, 0.5)]:
        assert pn.quasi_inverse(pn.profile_family(fam, a, b), 1.0) == 0.0


def test_quasi_inverse_rational_against_grid_oracle():
    f = pn.profile_family("rational", 1.0, 1.0)  # f(x) = 1/(1+x)
    assert qinv_grid_oracle(f, 0.5) == pytest.approx(1.0, abs=2e-4)
    assert pn.quasi_inverse(f, 0.5) == pytest.approx(1.0, abs=1e-12)
    assert qinv_grid_oracle(f, 0.0) == math.inf
    assert pn.quasi_inverse(f, 0.0) == math.inf


def test_quasi_inverse_domain():
    f = pn.profile_family("rational", 1.0, 1.0)
    with pytest.raises(pn.DomainError):
        pn.quasi_inverse(f, 1.5)
    with pytest.raises(pn.DomainError):
        pn.quasi_inverse(f, -0.1)


def test_quasi_inverse_opaque_matches_closed_form():
    closed = pn.profile_family("rational", 2.0, 1.5)
    opaque = pn.Profile.from_callable(lambda x: 1.0 - 1.5 / 2.0 + 1.5 / (x + 2.0),
                                      tail=0.25)
    for y in (0.3, 0.6, 0.9, 0.99):
        assert pn.quasi_inverse(opaque, y) == pytest.approx(
            pn.quasi_inverse(closed, y), rel=1e-6)
    assert pn.quasi_inverse(opaque, 0.1) == math.inf  # below the tail


LEMMA_SETTINGS = {
    "rational": [(1.0, 1.0), (1.0, 0.5), (2.0, 1.5), (3.0, 3.0), (2.0, 0.0)],
    "stretched_exp": [(1.0, 1.0), (0.5, 1.0), (0.25, 2.0), (1.0, 0.5), (0.8, 3.0)],
    "linear_ramp": [(1.0, 1.0), (1.0, 0.5), (2.0, 0.25), (0.5, 2.0), (4.0, 0.25)],
}


@pytest.mark.parametrize("family", sorted(LEMMA_SETTINGS))
def test_lemma_equivalence_biconditional(family):
    # f(x0) > y0  <=>  x0 < quasi_inverse(f, y0), exactly, on a 100x100 grid
    xs = np.linspace(0.0, 50.0, 100)
    ys = np.linspace(0.0, 1.0, 100)
    for a, b in LEMMA_SETTINGS[family]:
        f = pn.profile_family(family, a, b)
        fx = f(xs)
        for y in ys:
            qi = pn.quasi_inverse(f, float(y))
            lhs = fx > y
            rhs = xs < qi
            assert np.array_equal(lhs, rhs), (family, a, b, float(y))


def test_increasing_inverse_examples():
    G = pn.AnalyticDistFn("ratio")
    assert pn.increasing_inverse(G, 0.5) == pytest.approx(1.0, abs=TOL)
    assert pn.increasing_inverse(G, 0.75) == pytest.approx(3.0, abs=TOL)
    lin = pn.PiecewiseDistFn([[0.0, 0.0, 0.0], [2.0, 1.0, 1.0]])
    assert pn.increasing_inverse(lin, 0.5) == pytest.approx(1.0, abs=1e-8)


def test_increasing_inverse_round_trip(rng):
    for G in (pn.AnalyticDistFn("exponential"),
              pn.PiecewiseDistFn([[0.0, 0.0, 0.0], [1.0, 0.3, 0.3], [4.0, 1.0, 1.0]])):
        for y in rng.uniform(0.01, 0.99, size=100):
            x = pn.increasing_inverse(G, float(y))
            assert abs(float(G(x)) - y) <= TOL


def test_increasing_inverse_preconditions():
    jumpy = pn.PiecewiseDistFn([[0.0, 0.0, 0.0], [1.0, 0.2, 0.8], [2.0, 1.0, 1.0]])
    with pytest.raises(pn.PreconditionError):
        pn.increasing_inverse(jumpy, 0.5)
    with pytest.raises(pn.DomainError):
        pn.increasing_inverse(pn.AnalyticDistFn("ratio", {"c": 0.8}), 0.9)
