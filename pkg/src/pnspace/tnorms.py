"""t-norms, their duals, and triangle functions on distance d.d.f.s.

Triangle functions are computed pointwise: the sup-convolution
``sup_{s+t=x} T(F(s), G(t))`` and the inf-convolution
``inf_{s+t=x} T*(F(s), G(t))`` over the closed split set ``s in [0, x]``,
plus the pointwise minimum.  Split candidates combine the knots of both
arguments, a uniform grid, one-sided-limit combinations at jumps, a crossing
solve for the min/max kernels, and local refinement around the best splits;
on pairs of step functions the candidate set is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .distfun import DistFn, PiecewiseDistFn, bisect_array, unit_step
from .errors import ConstructionError, DomainError
from .verdicts import Verdict

CONV_GRID = 256          # uniform split candidates per evaluation
REFINE_ROUNDS = 2
REFINE_POINTS = 33
REFINE_TOP = 4

TOL_ASSOC = 1e-3         # associativity under grid-approximate evaluation


@dataclass(frozen=True)
class TNorm:
    """Continuous t-norm on the unit square."""

    tag: str
    fn: Callable
    continuous: bool = True

    def __call__(self, x, y):
        return self.fn(x, y)


MIN = TNorm("M", np.minimum)
PRODUCT = TNorm("Pi", np.multiply)
LUKASIEWICZ = TNorm("W", lambda x, y: np.maximum(np.asarray(x) + y - 1.0, 0.0))

TNORMS = {"M": MIN, "Pi": PRODUCT, "W": LUKASIEWICZ}


def tnorm(tag) -> TNorm:
    if isinstance(tag, TNorm):
        return tag
    try:
        return TNORMS[tag]
    except KeyError:
        raise ConstructionError(f"unknown t-norm {tag!r}; known: {sorted(TNORMS)}") from None


def custom_tnorm(tag: str, fn: Callable, continuous: bool) -> TNorm:
    """Wrap a user evaluator; continuity is declared, not verified."""
    if not continuous:
        raise ConstructionError("triangle-function convolutions require a continuous t-norm")
    return TNorm(tag, fn, continuous=True)


def _check_unit(*vals):
    for v in vals:
        a = np.asarray(v, dtype=float)
        if np.any(a < 0.0) or np.any(a > 1.0):
            raise DomainError("t-norm arguments must lie in [0, 1]")


def tnorm_eval(T, x, y):
    """``T(x, y)`` with domain validation."""
    T = tnorm(T)
    _check_unit(x, y)
    return T(x, y)


def dual_tnorm_eval(T, x, y):
    """The dual t-conorm ``T*(x, y) = 1 - T(1 - x, 1 - y)``."""
    T = tnorm(T)
    _check_unit(x, y)
    return 1.0 - T(1.0 - np.asarray(x, dtype=float), 1.0 - np.asarray(y, dtype=float))


def _conorm(T: TNorm):
    return lambda x, y: 1.0 - T.fn(1.0 - x, 1.0 - y)


def _split_candidates(F: DistFn, G: DistFn, xs: np.ndarray, n_grid: int):
    """Candidate split pairs ``(s, t)`` with ``s + t = x``, shape (m, C).

    The two halves are carried separately so that knot candidates land on
    their knot exactly: recomputing ``t = x - (x - k)`` can drift one ulp
    off ``k`` and miss the jump value there.
    """
    u = np.linspace(0.0, 1.0, n_grid + 1)
    s_cols = [xs[:, None] * u[None, :]]
    t_cols = [xs[:, None] * u[None, ::-1]]
    for k in F.knots():
        s = np.minimum(k, xs)[:, None]
        s_cols.append(s)
        t_cols.append(xs[:, None] - s)
    for k in G.knots():
        t = np.minimum(k, xs)[:, None]
        t_cols.append(t)
        s_cols.append(xs[:, None] - t)
    S = np.concatenate(s_cols, axis=1)
    T = np.concatenate(t_cols, axis=1)
    np.clip(S, 0.0, None, out=S)
    np.clip(T, 0.0, None, out=T)
    return S, T


def _combo_values(op, F, G, S, T, mode):
    """Aggregate op(F, G) over split candidates with one-sided-limit combos.

    The sup/inf over s of ``op(F(s), G(x-s))`` may only be approached at a
    jump: moving right of a split raises F to its right limit while G stays
    at its (left-continuous) value, and symmetrically moving left.  Both
    one-sided combinations are therefore evaluated alongside the plain one.
    """
    f_plain, g_plain = F._eval_pos(S), G._eval_pos(T)
    f_right, g_right = F._right_pos(S), G._right_pos(T)
    v = op(f_plain, g_plain)
    v1 = op(f_right, g_plain)
    v2 = op(f_plain, g_right)
    if mode == "sup":
        return np.maximum(v, np.maximum(v1, v2))
    return np.minimum(v, np.minimum(v1, v2))


def _crossing_splits(F, G, xs, iters=50):
    """Where ``F(s) = G(x - s)``: the sup of min and inf of max both live here."""
    lo = np.zeros_like(xs)

    def pred(s):
        return F._eval_pos(s) - G._eval_pos(np.clip(xs - s, 0.0, None)) >= 0.0

    return bisect_array(pred, lo, xs, iters)


def _convolve_grid(T: TNorm, F: DistFn, G: DistFn, xs: np.ndarray, mode: str,
                   n_grid: int = CONV_GRID) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    if np.any(xs <= 0.0) or not np.all(np.isfinite(xs)):
        raise DomainError("convolutions are evaluated at finite x > 0")
    op = T.fn if mode == "sup" else _conorm(T)
    agg = np.max if mode == "sup" else np.min
    S, Ts = _split_candidates(F, G, xs, n_grid)
    if T.tag == "M":
        cross = _crossing_splits(F, G, xs)[:, None]
        S = np.concatenate([S, cross], axis=1)
        Ts = np.concatenate([Ts, np.clip(xs[:, None] - cross, 0.0, None)], axis=1)
    vals = _combo_values(op, F, G, S, Ts, mode)
    best = agg(vals, axis=1)
    # Local refinement around the best few splits; jump combinations are
    # already exact at knots, so refinement targets smooth interior optima.
    order = np.argsort(vals, axis=1)
    top = order[:, -REFINE_TOP:] if mode == "sup" else order[:, :REFINE_TOP]
    centers = np.take_along_axis(S, top, axis=1)
    width = xs / n_grid
    offsets = np.linspace(-1.0, 1.0, REFINE_POINTS)
    for _ in range(REFINE_ROUNDS):
        local = centers[:, :, None] + width[:, None, None] * offsets[None, None, :]
        local = local.reshape(len(xs), -1)
        np.clip(local, 0.0, xs[:, None], out=local)
        local_t = np.clip(xs[:, None] - local, 0.0, None)
        lv = _combo_values(op, F, G, local, local_t, mode)
        if mode == "sup":
            best = np.maximum(best, lv.max(axis=1))
            pick = np.argsort(lv, axis=1)[:, -REFINE_TOP:]
        else:
            best = np.minimum(best, lv.min(axis=1))
            pick = np.argsort(lv, axis=1)[:, :REFINE_TOP]
        centers = np.take_along_axis(local, pick, axis=1)
        width = width / (REFINE_POINTS - 1) * 2.0
    return np.clip(best, 0.0, 1.0)


def sup_convolution(T, F: DistFn, G: DistFn, x) -> float:
    """``sup_{s+t=x} T(F(s), G(t))`` at a single ``x > 0``."""
    return float(_convolve_grid(tnorm(T), F, G, np.array([float(x)]), "sup")[0])


def inf_convolution(T, F: DistFn, G: DistFn, x) -> float:
    """``inf_{s+t=x} T*(F(s), G(t))`` at a single ``x > 0``."""
    return float(_convolve_grid(tnorm(T), F, G, np.array([float(x)]), "inf")[0])


def pointwise_min(F: DistFn, G: DistFn, x):
    """The triangle function that takes the pointwise minimum."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("evaluated at x > 0")
    return np.minimum(F(x), G(x))


@dataclass(frozen=True)
class TriangleFn:
    """A triangle function: sup-convolution, inf-convolution, or pointwise min."""

    kind: str                  # "sup_conv" | "inf_conv" | "pointwise_min"
    tnorm: TNorm | None = None

    def __post_init__(self):
        if self.kind not in ("sup_conv", "inf_conv", "pointwise_min"):
            raise ConstructionError(f"unknown triangle-function kind {self.kind!r}")
        if self.kind != "pointwise_min" and self.tnorm is None:
            raise ConstructionError("convolution triangle functions need a t-norm")

    @property
    def label(self) -> str:
        if self.kind == "pointwise_min":
            return "pointwise_min"
        return f"{self.kind}[{self.tnorm.tag}]"

    @property
    def label_config(self) -> str:
        if self.kind == "pointwise_min":
            return "pointwise_min"
        return f"{self.kind}:{self.tnorm.tag}"

    def eval_grid(self, F: DistFn, G: DistFn, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self.kind == "pointwise_min":
            return pointwise_min(F, G, xs)
        mode = "sup" if self.kind == "sup_conv" else "inf"
        return _convolve_grid(self.tnorm, F, G, xs, mode)

    def __call__(self, F: DistFn, G: DistFn, x) -> float:
        return float(self.eval_grid(F, G, np.array([float(x)]))[0])


def sup_conv(T) -> TriangleFn:
    return TriangleFn("sup_conv", tnorm(T))


def inf_conv(T) -> TriangleFn:
    return TriangleFn("inf_conv", tnorm(T))


MIN_TRIANGLE = TriangleFn("pointwise_min")


def triangle_from_config(doc) -> TriangleFn:
    if doc == "pointwise_min":
        return MIN_TRIANGLE
    kind, _, tag = str(doc).partition(":")
    if kind in ("sup_conv", "inf_conv") and tag:
        return TriangleFn(kind, tnorm(tag))
    raise ConstructionError(f"unknown triangle function spec {doc!r}")


def convolve(triangle: TriangleFn, F: DistFn, G: DistFn, x_max: float | None = None,
             n_points: int = 257) -> PiecewiseDistFn:
    """Materialize ``triangle(F, G)`` as an approximate piecewise d.d.f.

    Samples the union of knots, pairwise knot sums and a uniform grid, and
    detects jumps by comparing against evaluation immediately to the right.
    The result is tagged ``approximate``: the class of d.d.f.s is not closed
    under piecewise-linear representation.
    """
    kf, kg = F.knots(), G.knots()
    sums = (kf[:, None] + kg[None, :]).ravel()
    hi = x_max if x_max is not None else max(
        F.support_end() + G.support_end(), 1.0
    ) * 1.5 + 1.0
    xs = np.unique(np.concatenate([
        kf, kg, sums, np.linspace(0.0, hi, n_points)
    ]))
    xs = xs[(xs > 0.0) & (xs <= hi)]
    vals = triangle.eval_grid(F, G, xs)
    right_probe = np.nextafter(xs, np.inf) * (1.0 + 1e-12) + 1e-300
    vals_r = triangle.eval_grid(F, G, right_probe)
    # enforce monotonicity against refinement noise
    vals = np.maximum.accumulate(np.clip(vals, 0.0, 1.0))
    vals_r = np.maximum(vals, np.clip(vals_r, 0.0, 1.0))
    knots = [[0.0, 0.0, float(triangle.eval_grid(F, G, np.array([xs[0] * 0.5]))[0])
              if xs[0] > 0 else 0.0]]
    jump_tol = 1e-7
    for x, v, vr in zip(xs, vals, vals_r):
        y_right = vr if vr - v > jump_tol else v
        knots.append([float(x), float(v), float(y_right)])
    arr = np.asarray(knots)
    arr[:, 1] = np.maximum.accumulate(arr[:, 1])
    arr[:, 2] = np.maximum(arr[:, 1], np.maximum.accumulate(arr[:, 2]))
    arr[1:, 1] = np.maximum(arr[1:, 1], arr[:-1, 2])
    arr[:, 2] = np.maximum(arr[:, 1], arr[:, 2])
    return PiecewiseDistFn(arr, approximate=True)


def triangle_properties_check(triangle: TriangleFn, samples, grid, tol: float = 1e-6,
                              tol_assoc: float = TOL_ASSOC) -> Verdict:
    """Sampled check of the triangle-function laws.

    Commutativity is required exactly (the evaluator is symmetric by
    construction); the unit-step-at-0 identity within ``tol``; monotonicity
    against the identity envelope; associativity within ``tol_assoc`` via
    materialized intermediates.
    """
    samples = list(samples)
    if not samples:
        raise DomainError("property check needs a nonempty sample list")
    grid = np.asarray(grid, dtype=float)
    eps0 = unit_step(0.0)
    worst = {"commutativity": 0.0, "identity": 0.0, "monotonicity": 0.0, "associativity": 0.0}
    witness = None

    for i, F in enumerate(samples):
        for G in samples[i:]:
            d = float(np.max(np.abs(triangle.eval_grid(F, G, grid)
                                    - triangle.eval_grid(G, F, grid))))
            worst["commutativity"] = max(worst["commutativity"], d)
        d = float(np.max(np.abs(triangle.eval_grid(eps0, F, grid) - F(grid))))
        worst["identity"] = max(worst["identity"], d)
        for G in samples:
            # F <= unit_step(0) pointwise, so tau(F, G) <= tau(eps0, G) = G.
            d = float(np.max(triangle.eval_grid(F, G, grid) - G(grid)))
            worst["monotonicity"] = max(worst["monotonicity"], d)

    for F, G, H in zip(samples, samples[1:] + samples[:1], samples[2:] + samples[:2]):
        left = convolve(triangle, F, G)
        right = convolve(triangle, G, H)
        d = float(np.max(np.abs(triangle.eval_grid(left, H, grid)
                                - triangle.eval_grid(F, right, grid))))
        worst["associativity"] = max(worst["associativity"], d)

    failed = []
    if worst["commutativity"] > 1e-12:
        failed.append("commutativity")
    if worst["identity"] > tol:
        failed.append("identity")
    if worst["monotonicity"] > tol:
        failed.append("monotonicity")
    if worst["associativity"] > tol_assoc:
        failed.append("associativity")
    if failed:
        witness = {"failed": failed, "violations": dict(worst)}
    return Verdict(
        name=f"triangle_properties[{triangle.label}]",
        passed=not failed,
        tol=tol,
        n_samples=len(samples),
        witness=witness,
        details={"worst": worst, "tol_assoc": tol_assoc},
    )
