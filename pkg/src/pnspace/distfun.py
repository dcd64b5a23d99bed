"""Distance distribution functions and their metric geometry.

A distance distribution function (d.d.f.) is a nondecreasing function
``F: [0, inf] -> [0, 1]`` with ``F(0) = 0`` and ``F(+inf) = 1``, evaluated
under the left-continuous convention: at a jump knot the function takes its
left value.  The ``tail`` attribute reports ``lim_{x->inf} F(x)``, which is
strictly smaller than 1 for improper d.d.f.s even though evaluation at
``+inf`` returns 1 by convention.

Two backends are provided:

* :class:`PiecewiseDistFn` — ordered knots ``(x, y_left, y_right)`` with
  linear interpolation between ``(x_i, y_right_i)`` and ``(x_{i+1},
  y_left_{i+1})`` and a constant continuation after the last knot.
* :class:`AnalyticDistFn` — a named family from a registry (``ratio``,
  ``exponential``, ``jump_ratio``) with parameters, an evaluation x-scale,
  and an exact inverse where the family admits one.

The module also provides the Sibley (modified Levy) metric, weak-convergence
checking, quasi-inverses of nonincreasing profiles, and the bisection
inverse of strictly increasing d.d.f.s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConstructionError, DomainError, PreconditionError
from .verdicts import Verdict

INF = math.inf

#: Bisection tolerance for root-finding (Sibley distances, inverses).
TOL_ROOT = 1e-9
#: Tolerance on ``tail == 1`` for membership in the proper d.d.f. class.
TOL_TAIL = 1e-9

_QINV_PROBE = 1e9  # unboundedness probe for quasi-inverses of opaque profiles


def _bisect(pred, lo=0.0, hi=1.0, iters=60):
    """Threshold of a monotone predicate (False below, True above)."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def bisect_array(pred, lo, hi, iters=60):
    """Vectorized threshold search: ``pred`` maps an array of h to booleans."""
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        take = pred(mid)
        hi = np.where(take, mid, hi)
        lo = np.where(take, lo, mid)
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Distribution functions
# ---------------------------------------------------------------------------


class DistFn:
    """Common surface of both d.d.f. backends."""

    tail: float
    continuous: bool
    strictly_increasing: bool
    approximate: bool = False

    # -- evaluation ---------------------------------------------------------

    def _eval_pos(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _right_pos(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x):
        """Left-continuous evaluation; ``F(+inf) = 1`` by convention."""
        arr = np.asarray(x, dtype=float)
        if np.any(arr < 0.0):
            raise DomainError("distribution functions are defined on [0, inf]")
        finite = np.isfinite(arr)
        out = np.ones_like(arr)
        if np.any(finite):
            vals = self._eval_pos(np.atleast_1d(arr)[np.atleast_1d(finite)])
            if arr.ndim == 0:
                return float(vals[0]) if finite else 1.0
            out[finite] = vals
        return out if arr.ndim else float(out)

    def right_limit(self, x):
        """Right limit ``F(x+)``; equals ``tail`` beyond the support."""
        arr = np.asarray(x, dtype=float)
        if np.any(arr < 0.0):
            raise DomainError("distribution functions are defined on [0, inf]")
        finite = np.isfinite(arr)
        out = np.ones_like(arr)
        if np.any(finite):
            vals = self._right_pos(np.atleast_1d(arr)[np.atleast_1d(finite)])
            if arr.ndim == 0:
                return float(vals[0]) if finite else 1.0
            out[finite] = vals
        return out if arr.ndim else float(out)

    # -- structure ----------------------------------------------------------

    def knots(self) -> np.ndarray:
        """Breakpoints of the representation (always contains 0)."""
        raise NotImplementedError

    def support_end(self) -> float:
        """Point after which the function is constant, if known; else a scale."""
        raise NotImplementedError

    def scale_x(self, s: float) -> "DistFn":
        """The function ``x -> F(x / s)`` for ``s > 0``."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    @property
    def is_unit_step_at_zero(self) -> bool:
        """True when this function equals 1 on all of (0, inf)."""
        return self.right_limit(0.0) >= 1.0

    def __repr__(self):
        return f"{type(self).__name__}({self.to_dict()})"


class PiecewiseDistFn(DistFn):
    """Piecewise-linear d.d.f. with explicit jumps at knots."""

    def __init__(self, knots, approximate: bool = False):
        arr = np.asarray(knots, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] < 1:
            raise ConstructionError("knots must be a nonempty (n, 3) array of (x, y_left, y_right)")
        xs, yl, yr = arr[:, 0], arr[:, 1], arr[:, 2]
        if xs[0] != 0.0:
            raise ConstructionError("first knot must sit at x = 0")
        if np.any(np.diff(xs) <= 0.0):
            raise ConstructionError("knot abscissae must be strictly increasing")
        if yl[0] != 0.0:
            raise ConstructionError("F(0) must be 0")
        if np.any(yl > yr):
            raise ConstructionError("y_left must not exceed y_right at any knot")
        if np.any(yr[:-1] > yl[1:]):
            raise ConstructionError("values must be nondecreasing across knots")
        if np.any(yl < 0.0) or np.any(yr > 1.0):
            raise ConstructionError("values must lie in [0, 1]")
        self._xs = xs
        self._yl = yl
        self._yr = yr
        self.tail = float(yr[-1])
        self.continuous = bool(np.all(yl == yr))
        self.strictly_increasing = self.continuous and bool(np.all(np.diff(yl) > 0.0))
        self.approximate = approximate

    def _locate(self, x):
        return np.searchsorted(self._xs, x, side="left")

    def _eval_pos(self, x):
        xs, yl, yr = self._xs, self._yl, self._yr
        n = len(xs)
        j = self._locate(x)
        out = np.empty_like(x)
        beyond = j >= n
        out[beyond] = yr[-1]
        inside = ~beyond
        ji = j[inside]
        xi = x[inside]
        at_knot = xs[ji] == xi
        vals = np.empty_like(xi)
        vals[at_knot] = yl[ji[at_knot]]
        seg = ~at_knot  # xs[ji-1] < xi < xs[ji], ji >= 1 since xs[0] = 0 <= x
        if np.any(seg):
            k = ji[seg]
            x0, x1 = xs[k - 1], xs[k]
            y0, y1 = yr[k - 1], yl[k]
            t = (xi[seg] - x0) / (x1 - x0)
            vals[seg] = y0 + t * (y1 - y0)
        out[inside] = vals
        return out

    def _right_pos(self, x):
        xs, yr = self._xs, self._yr
        n = len(xs)
        j = self._locate(x)
        out = self._eval_pos(x)
        inside = j < n
        ji = j[inside]
        at_knot = np.zeros_like(inside)
        at_knot[inside] = xs[ji] == x[inside]
        out[at_knot] = yr[self._locate(x[at_knot])]
        return out

    def knots(self):
        return self._xs.copy()

    def support_end(self):
        return float(self._xs[-1])

    def scale_x(self, s):
        if not (s > 0.0) or not math.isfinite(s):
            raise DomainError("x-scale must be a positive finite number")
        return PiecewiseDistFn(
            np.column_stack([self._xs * s, self._yl, self._yr]), approximate=self.approximate
        )

    def scale_y(self, c):
        """The pointwise scaled function ``c * F``; leaves Delta+ for c in (0, 1]."""
        if not (0.0 < c <= 1.0):
            raise DomainError("y-scale must be in (0, 1]")
        return PiecewiseDistFn(np.column_stack([self._xs, self._yl * c, self._yr * c]))

    def to_dict(self):
        return {
            "backend": "piecewise",
            "knots": [[float(a), float(b), float(c)] for a, b, c in
                      zip(self._xs, self._yl, self._yr)],
            "tail": self.tail,
        }

    def __eq__(self, other):
        return (
            isinstance(other, PiecewiseDistFn)
            and self._xs.shape == other._xs.shape
            and bool(np.all(self._xs == other._xs))
            and bool(np.all(self._yl == other._yl))
            and bool(np.all(self._yr == other._yr))
        )

    def __hash__(self):
        return hash((tuple(self._xs), tuple(self._yl), tuple(self._yr)))


@dataclass(frozen=True)
class _AnalyticFamily:
    name: str
    eval_fn: Callable  # (params, x>=0 finite array) -> values
    tail_fn: Callable  # (params) -> float
    right0_fn: Callable  # (params) -> right limit at 0
    inverse_fn: Callable | None  # (params, y) -> x, exact where available
    continuous: bool
    strictly_increasing: bool
    defaults: dict


def _ratio_eval(p, x):
    return p["c"] * x / (x + 1.0)


def _exp_eval(p, x):
    return p["c"] * (-np.expm1(-x))


def _jump_ratio_eval(p, x):
    a = p["a"]
    return np.where(x > 0.0, a + (1.0 - a) * x / (x + 1.0), 0.0)


ANALYTIC_FAMILIES = {
    "ratio": _AnalyticFamily(
        name="ratio",
        eval_fn=_ratio_eval,
        tail_fn=lambda p: p["c"],
        right0_fn=lambda p: 0.0,
        inverse_fn=lambda p, y: y / (p["c"] - y),
        continuous=True,
        strictly_increasing=True,
        defaults={"c": 1.0},
    ),
    "exponential": _AnalyticFamily(
        name="exponential",
        eval_fn=_exp_eval,
        tail_fn=lambda p: p["c"],
        right0_fn=lambda p: 0.0,
        inverse_fn=lambda p, y: -math.log1p(-y / p["c"]),
        continuous=True,
        strictly_increasing=True,
        defaults={"c": 1.0},
    ),
    "jump_ratio": _AnalyticFamily(
        name="jump_ratio",
        eval_fn=_jump_ratio_eval,
        tail_fn=lambda p: 1.0,
        right0_fn=lambda p: p["a"],
        inverse_fn=lambda p, y: (y - p["a"]) / (1.0 - y),
        continuous=False,
        strictly_increasing=True,
        defaults={"a": 0.5},
    ),
}


class AnalyticDistFn(DistFn):
    """D.d.f. from the analytic family registry, with an evaluation x-scale."""

    def __init__(self, family: str, params: dict | None = None, x_scale: float = 1.0):
        if family not in ANALYTIC_FAMILIES:
            raise ConstructionError(f"unknown analytic family {family!r}")
        fam = ANALYTIC_FAMILIES[family]
        merged = dict(fam.defaults)
        merged.update(params or {})
        if not (x_scale > 0.0 and math.isfinite(x_scale)):
            raise DomainError("x_scale must be positive and finite")
        self.family = family
        self.params = merged
        self.x_scale = float(x_scale)
        self._fam = fam
        self.tail = float(fam.tail_fn(merged))
        if not (0.0 <= self.tail <= 1.0):
            raise ConstructionError("family parameters give a tail outside [0, 1]")
        self.continuous = fam.continuous
        self.strictly_increasing = fam.strictly_increasing

    def _eval_pos(self, x):
        return self._fam.eval_fn(self.params, x / self.x_scale)

    def _right_pos(self, x):
        vals = self._eval_pos(x)
        r0 = self._fam.right0_fn(self.params)
        return np.where(x == 0.0, r0, vals)

    def knots(self):
        return np.array([0.0])

    def support_end(self):
        # No finite support; report the scale so grids cover the active range.
        return 4.0 * self.x_scale

    def scale_x(self, s):
        if not (s > 0.0) or not math.isfinite(s):
            raise DomainError("x-scale must be a positive finite number")
        return AnalyticDistFn(self.family, self.params, self.x_scale * s)

    def exact_inverse(self, y: float) -> float | None:
        """Exact solution of ``F(x) = y`` when the family provides one."""
        if self._fam.inverse_fn is None:
            return None
        return self.x_scale * self._fam.inverse_fn(self.params, y)

    def to_dict(self):
        return {
            "backend": "analytic",
            "family": self.family,
            "params": dict(self.params),
            "x_scale": self.x_scale,
            "tail": self.tail,
        }

    def __eq__(self, other):
        return (
            isinstance(other, AnalyticDistFn)
            and self.family == other.family
            and self.params == other.params
            and self.x_scale == other.x_scale
        )

    def __hash__(self):
        return hash((self.family, tuple(sorted(self.params.items())), self.x_scale))


def distfn_from_dict(doc: dict) -> DistFn:
    """Rebuild a d.d.f. from its serialized record."""
    backend = doc.get("backend")
    if backend == "piecewise":
        fn = PiecewiseDistFn(doc["knots"])
    elif backend == "analytic":
        fn = AnalyticDistFn(doc["family"], doc.get("params"), doc.get("x_scale", 1.0))
    else:
        raise ConstructionError(f"unknown distfn backend {backend!r}")
    if "tail" in doc and abs(fn.tail - doc["tail"]) > 1e-12:
        raise ConstructionError("stored tail disagrees with the reconstructed function")
    return fn


def unit_step(a) -> PiecewiseDistFn:
    """The step d.d.f. jumping from 0 to 1 at ``a`` (0 for x <= a, 1 after).

    ``unit_step(0)`` is the identity of every triangle function;
    ``unit_step(inf)`` is identically 0 with tail 0.
    """
    a = float(a)
    if a < 0.0:
        raise DomainError("step location must be nonnegative or +inf")
    if a == 0.0:
        return PiecewiseDistFn([[0.0, 0.0, 1.0]])
    if math.isinf(a):
        return PiecewiseDistFn([[0.0, 0.0, 0.0]])
    return PiecewiseDistFn([[0.0, 0.0, 0.0], [a, 0.0, 1.0]])


def plateau(c: float) -> PiecewiseDistFn:
    """The d.d.f. that is 0 at 0 and the constant ``c`` on (0, inf)."""
    if not (0.0 <= c <= 1.0):
        raise DomainError("plateau level must lie in [0, 1]")
    return PiecewiseDistFn([[0.0, 0.0, c]])


def ddf_eval(F: DistFn, x):
    """Evaluate ``F`` under the left-continuous convention (+inf maps to 1)."""
    return F(x)


def is_proper(F: DistFn, tol: float = TOL_TAIL) -> bool:
    """Whether ``lim_{x->inf} F(x) = 1`` within ``tol``."""
    return F.tail >= 1.0 - tol


# ---------------------------------------------------------------------------
# Sibley (modified Levy) metric
# ---------------------------------------------------------------------------


def sibley_to_origin(F: DistFn, iters: int = 60) -> float:
    """``d_S(F, unit_step(0)) = inf{h : F(h+) > 1 - h}`` by bisection."""

    def pred(h):
        return F.right_limit(h) >= 1.0 - h

    if not pred(1.0):
        return 1.0
    return _bisect(pred, 0.0, 1.0, iters)


def sibley_to_origin_norms(base: DistFn, scales: np.ndarray, iters: int = 60) -> np.ndarray:
    """Vectorized ``d_S(F_s, unit_step(0))`` for the family ``F_s(x) = base(x/s)``.

    ``scales`` may contain zeros, meaning the function is ``unit_step(0)``
    itself (distance 0).
    """
    s = np.asarray(scales, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0.0
    if not np.any(pos):
        return out
    sp = s[pos]

    def pred(h):
        return base.right_limit(h / sp) >= 1.0 - h

    feasible = pred(np.ones_like(sp))
    res = np.ones_like(sp)
    if np.any(feasible):
        sub = sp[feasible]

        def pred_sub(h):
            return base.right_limit(h / sub) >= 1.0 - h

        res[feasible] = bisect_array(pred_sub, np.zeros_like(sub), np.ones_like(sub), iters)
    out[pos] = res
    return out


def _one_sided_ok(F: DistFn, G: DistFn, h: float) -> bool:
    """Check ``G(x) <= F(x + h) + h`` for all x in (0, 1/h].

    Candidates are carried as pairs ``(x, x + h)`` so that breakpoints
    coming from the knots of ``F`` land on their knot exactly; recomputing
    ``(k - h) + h`` can drift an ulp off ``k`` and miss a jump value.
    """
    x_hi = 1.0 / h
    end = max(F.support_end(), G.support_end(), 1.0)
    hi = min(x_hi, end + h)
    grid = np.unique(np.concatenate([
        np.linspace(0.0, hi, 65),
        np.geomspace(max(hi * 1e-9, 1e-12), hi, 33),
        G.knots(),
        np.array([x_hi]),
    ]))
    grid = grid[(grid >= 0.0) & (grid <= x_hi)]
    xs = [grid]
    xfs = [grid + h]
    kf = F.knots()
    keep = (kf - h >= 0.0) & (kf - h <= x_hi)
    xs.append(kf[keep] - h)
    xfs.append(kf[keep])
    x = np.concatenate(xs)
    xf = np.concatenate(xfs)
    # Same-side limits: approach each candidate from the left (plain values)
    # and from the right (right limits); both must satisfy the inequality.
    pos = x > 0.0
    plain = G(x[pos]) - F(xf[pos])
    right = G.right_limit(x) - F.right_limit(xf)
    worst = max(plain.max(initial=-1.0), right.max(initial=-1.0))
    return worst <= h


def sibley_distance(F: DistFn, G: DistFn, iters: int = 60) -> float:
    """The Sibley (modified Levy) distance between two d.d.f.s.

    Bisection on ``h`` over the two-sided condition ``G(x) <= F(x+h) + h``
    and ``F(x) <= G(x+h) + h`` for ``x`` in ``(0, 1/h]``.  When one argument
    is the unit step at 0 the computation reduces to the one-sided formula
    ``inf{h : F(h+) > 1 - h}``.
    """
    if F.is_unit_step_at_zero:
        return sibley_to_origin(G, iters)
    if G.is_unit_step_at_zero:
        return sibley_to_origin(F, iters)

    def pred(h):
        return _one_sided_ok(F, G, h) and _one_sided_ok(G, F, h)

    if not pred(1.0):
        return 1.0
    return _bisect(pred, 0.0, 1.0, iters)


def converges_weakly(seq, target: DistFn, n_max: int = 10_000, tol: float = 1e-3,
                     traj_points: int = 64) -> Verdict:
    """Whether ``d_S(F_n, target) -> 0``-style convergence holds below ``tol``.

    ``seq`` is either a callable ``n -> DistFn`` (1-based) or a sequence.
    The trajectory is sampled on a geometric index grid up to ``n_max``;
    the check passes when the distance stays below ``tol`` from some located
    index onward (reported, along with the floor over the sampled tail).
    """
    if callable(seq):
        fetch = seq
    else:
        items = list(seq)
        n_max = min(n_max, len(items))
        fetch = lambda n: items[n - 1]
    idx = np.unique(np.geomspace(1.0, float(n_max), traj_points).astype(np.int64))
    dists = np.array([sibley_distance(fetch(int(n)), target) for n in idx])
    below = dists < tol
    # located index: first sampled n from which every later sample stays below
    located = None
    suffix_ok = np.logical_and.accumulate(below[::-1])[::-1]
    if np.any(suffix_ok):
        located = int(idx[int(np.argmax(suffix_ok))])
    tail_mask = idx >= max(1, (3 * n_max) // 4)
    floor = float(dists[tail_mask].min()) if np.any(tail_mask) else float(dists.min())
    passed = located is not None
    return Verdict(
        name="weak_convergence",
        passed=passed,
        tol=tol,
        n_samples=len(idx),
        witness=None if passed else {"floor": floor, "n_last": int(idx[-1])},
        details={
            "located_index": located,
            "floor": floor,
            "trajectory": [[int(n), float(d)] for n, d in zip(idx, dists)],
        },
    )


# ---------------------------------------------------------------------------
# Nonincreasing profiles and quasi-inverses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _ProfileFamily:
    name: str
    eval_fn: Callable  # (params, x finite >= 0) -> values
    tail_fn: Callable
    qinv_fn: Callable  # (params, y in [0,1)) -> x or inf, exact
    validate: Callable  # (params) -> None or raise
    one_only_at_zero: Callable  # (params) -> bool


def _rational_eval(p, x):
    a, b = p["alpha"], p["beta"]
    return 1.0 - b / a + b / (x + a)


def _rational_qinv(p, y):
    a, b = p["alpha"], p["beta"]
    tail = 1.0 - b / a
    if b == 0.0:
        return INF  # f is identically 1, f(x) > y for every x when y < 1
    if y <= tail:
        return INF
    return b / (y - tail) - a


def _rational_validate(p):
    if not (p["alpha"] > 0.0 and 0.0 <= p["beta"] <= p["alpha"]):
        raise ConstructionError("rational profile requires 0 <= beta <= alpha, alpha > 0")


def _stretched_exp_eval(p, x):
    a, b = p["alpha"], p["beta"]
    return 1.0 - a + a * np.exp(-(x ** b))


def _stretched_exp_qinv(p, y):
    a, b = p["alpha"], p["beta"]
    tail = 1.0 - a
    if y <= tail:
        return INF
    return (-math.log((y - tail) / a)) ** (1.0 / b)


def _stretched_exp_validate(p):
    if not (0.0 < p["alpha"] <= 1.0 and p["beta"] > 0.0):
        raise ConstructionError("stretched-exp profile requires 0 < alpha <= 1 and beta > 0")


def _linear_ramp_eval(p, x):
    a, b = p["alpha"], p["beta"]
    return np.where(x <= b, 1.0 - a * x, 1.0 - a * b)


def _linear_ramp_qinv(p, y):
    a, b = p["alpha"], p["beta"]
    tail = 1.0 - a * b
    if y < tail:
        return INF
    if y == tail:
        return b  # {x : f(x) > tail} = [0, beta)
    return (1.0 - y) / a


def _linear_ramp_validate(p):
    if not (p["alpha"] > 0.0 and 0.0 < p["beta"] <= 1.0 / p["alpha"]):
        raise ConstructionError("linear-ramp profile requires alpha > 0 and 0 < beta <= 1/alpha")


PROFILE_FAMILIES = {
    "rational": _ProfileFamily(
        name="rational",
        eval_fn=_rational_eval,
        tail_fn=lambda p: 1.0 - p["beta"] / p["alpha"],
        qinv_fn=_rational_qinv,
        validate=_rational_validate,
        one_only_at_zero=lambda p: p["beta"] > 0.0,
    ),
    "stretched_exp": _ProfileFamily(
        name="stretched_exp",
        eval_fn=_stretched_exp_eval,
        tail_fn=lambda p: 1.0 - p["alpha"],
        qinv_fn=_stretched_exp_qinv,
        validate=_stretched_exp_validate,
        one_only_at_zero=lambda p: True,
    ),
    "linear_ramp": _ProfileFamily(
        name="linear_ramp",
        eval_fn=_linear_ramp_eval,
        tail_fn=lambda p: 1.0 - p["alpha"] * p["beta"],
        qinv_fn=_linear_ramp_qinv,
        validate=_linear_ramp_validate,
        one_only_at_zero=lambda p: True,
    ),
}


class Profile:
    """Right-continuous nonincreasing function ``[0, inf) -> [0, 1]``.

    Built-in families carry exact quasi-inverses; opaque callables fall back
    to a bracketed bisection with an unboundedness probe at ``x = 1e9``.
    """

    def __init__(self, family: str | None, params: dict | None = None,
                 fn: Callable | None = None, tail: float | None = None,
                 one_only_at_zero: bool | None = None):
        if family is not None:
            if family not in PROFILE_FAMILIES:
                raise ConstructionError(f"unknown profile family {family!r}")
            fam = PROFILE_FAMILIES[family]
            params = dict(params or {})
            fam.validate(params)
            self.family = family
            self.params = params
            self._fam = fam
            self.tail = float(fam.tail_fn(params))
            self.one_only_at_zero = bool(fam.one_only_at_zero(params))
        else:
            if fn is None or tail is None:
                raise ConstructionError("opaque profiles need a callable and a tail value")
            self.family = None
            self.params = None
            self._fam = None
            self._fn = fn
            self.tail = float(tail)
            self.one_only_at_zero = one_only_at_zero
        self.right_continuous = True

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        if np.any(arr < 0.0):
            raise DomainError("profiles are defined on [0, inf)")
        finite = np.isfinite(arr)
        out = np.full_like(arr, self.tail)
        vals_src = self._fam.eval_fn if self._fam else None
        xf = np.atleast_1d(arr)[np.atleast_1d(finite)]
        if xf.size:
            if vals_src is not None:
                vals = vals_src(self.params, xf)
            else:
                vals = np.array([float(self._fn(v)) for v in xf])
            if arr.ndim == 0:
                return float(vals[0]) if finite else self.tail
            out[finite] = vals
        return out if arr.ndim else float(out)

    def quasi_inverse(self, y: float) -> float:
        """``sup{x : f(x) > y}`` with the convention that the value at 1 is 0."""
        return quasi_inverse(self, y)

    def to_dict(self):
        if self.family is None:
            raise ConstructionError("opaque profiles cannot be serialized")
        return {"family": self.family, "params": dict(self.params)}

    @staticmethod
    def from_dict(doc):
        return Profile(doc["family"], doc.get("params"))

    @staticmethod
    def from_callable(fn, tail, one_only_at_zero=None):
        return Profile(None, fn=fn, tail=tail, one_only_at_zero=one_only_at_zero)

    def __repr__(self):
        if self.family:
            return f"Profile({self.family}, {self.params})"
        return f"Profile(<callable>, tail={self.tail})"


def profile_family(name: str, alpha: float, beta: float) -> Profile:
    """Built-in profile constructor; validates the parameter domain."""
    return Profile(name, {"alpha": float(alpha), "beta": float(beta)})


def _tighten_sup(f: Profile, x: float, y: float) -> float:
    """Nudge a closed-form quasi-inverse by ulps so the Lemma equivalence
    ``f(x0) > y  <=>  x0 < result`` holds exactly against the computed f."""
    if not math.isfinite(x) or x <= 0.0:
        return x
    for _ in range(8):
        if f(x) <= y:
            break
        x = math.nextafter(x, INF)
    for _ in range(8):
        prev = math.nextafter(x, -INF)
        if prev < 0.0 or f(prev) > y:
            break
        x = prev
    return x


def quasi_inverse(f: Profile, y: float) -> float:
    """Quasi-inverse ``f^{(-1)}(y) = sup{x : f(x) > y}`` of a nonincreasing
    right-continuous profile, with value 0 at ``y = 1``.  May be ``+inf``.

    Satisfies, exactly on computed values: ``f(x0) > y0  <=>  x0 <
    quasi_inverse(f, y0)``.
    """
    y = float(y)
    if not (0.0 <= y <= 1.0):
        raise DomainError("quasi-inverse argument must lie in [0, 1]")
    if y == 1.0:
        return 0.0
    if f._fam is not None:
        x = float(f._fam.qinv_fn(f.params, y))
        return _tighten_sup(f, x, y)
    # Opaque profile: probe for unboundedness, then bisect the boundary of
    # {x : f(x) > y}, which is an interval [0, s) by monotonicity.
    if float(f(0.0)) <= y:
        return 0.0
    if float(f(_QINV_PROBE)) > y:
        return INF
    lo, hi = 0.0, 1.0
    while float(f(hi)) > y:
        hi *= 2.0
        if hi > _QINV_PROBE:
            return INF
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if f(mid) > y:
            lo = mid
        else:
            hi = mid
    return _tighten_sup(f, 0.5 * (lo + hi), y)


def increasing_inverse(G: DistFn, y: float, tol: float = TOL_ROOT) -> float:
    """Solve ``G(x) = y`` for continuous strictly increasing proper ``G``.

    Uses the family's exact inverse when available, otherwise bracketed
    bisection until ``|G(x) - y| <= tol``.
    """
    if not (G.continuous and G.strictly_increasing):
        raise PreconditionError(
            "increasing_inverse",
            "increasing_inverse requires a continuous strictly increasing function",
        )
    lo_val = float(G.right_limit(0.0))
    if not (lo_val < y < G.tail):
        raise DomainError(f"target {y} outside the open range ({lo_val}, {G.tail})")
    if isinstance(G, AnalyticDistFn):
        exact = G.exact_inverse(y)
        if exact is not None:
            return float(exact)
    hi = max(G.support_end(), 1.0)
    while float(G(hi)) < y:
        hi *= 2.0
        if hi > 1e308:
            raise DomainError("failed to bracket the inverse")
    lo = 0.0
    x = 0.5 * hi
    for _ in range(200):
        gx = float(G(x))
        if abs(gx - y) <= tol:
            return x
        if gx < y:
            lo = x
        else:
            hi = x
        x = 0.5 * (lo + hi)
    return x
