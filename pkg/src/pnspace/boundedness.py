"""Probabilistic radius, distributional and topological boundedness.

The radius of a set ``A`` is built from the sampled-or-closed-form infimum
``Phi_A(u) = inf{nu_p(u) : p in A}``; the radius itself takes the left limit
``R_A(x) = Phi_A(x-)``.  ``A`` is distributionally bounded exactly when the
radius is proper (tail 1), and topologically bounded when ``(1/n) p_n -> 0``
strongly for the adversarial choice of ``p_n`` in ``A`` (largest norms when
the closed form is available, probe-argmin over samples otherwise, norms
``n^2`` for unbounded sets, mirroring the classical witness construction).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .distfun import sibley_to_origin
from .errors import ConstructionError, DomainError, PreconditionError
from .spaces import PNSpace, check_serstnev, is_characteristic
from .verdicts import SamplePlan, Verdict, _jsonable

DEFAULT_TOL_TAIL_EXACT = 1e-9
DEFAULT_TOL_TAIL_SAMPLED = 1e-6


@dataclass(frozen=True)
class SetSpec:
    """A subset of the carrier: ball, finite sample, whole space, or generator.

    Generators produce seeded points whose norms grow like ``scale * n **
    power`` (``power = 0`` keeps them bounded), which is how unbounded
    sampled sets are modeled.
    """

    kind: str
    center: tuple | None = None
    radius: float | None = None
    closed: bool = False
    points: tuple | None = None
    scale: float = 1.0
    power: float = 0.0
    count: int = 64
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("ball", "finite", "whole_space", "generator"):
            raise ConstructionError(f"unknown set kind {self.kind!r}")
        if self.kind == "ball":
            if self.center is None or self.radius is None or not (self.radius > 0.0):
                raise ConstructionError("balls need a center and a positive radius")
        if self.kind == "finite" and not self.points:
            raise ConstructionError("finite sets must be nonempty")
        if self.kind == "generator" and self.count < 1:
            raise ConstructionError("generators need a positive count")

    def to_dict(self):
        doc = {"kind": self.kind}
        if self.kind == "ball":
            doc.update(center=list(self.center), radius=self.radius, closed=self.closed)
        elif self.kind == "finite":
            doc["points"] = [list(p) for p in self.points]
        elif self.kind == "generator":
            doc.update(scale=self.scale, power=self.power, count=self.count, seed=self.seed)
        return _jsonable(doc)

    @staticmethod
    def from_dict(doc):
        doc = dict(doc)
        kind = doc.pop("kind")
        if kind == "ball":
            return ball(doc["center"], doc["radius"], closed=doc.get("closed", False))
        if kind == "finite":
            return finite(doc["points"])
        if kind == "whole_space":
            return whole_space()
        if kind == "generator":
            return generator(scale=doc.get("scale", 1.0), power=doc.get("power", 0.0),
                             count=doc.get("count", 64), seed=doc.get("seed", 0))
        raise ConstructionError(f"unknown set kind {kind!r}")


def ball(center, radius, closed=False) -> SetSpec:
    return SetSpec("ball", center=tuple(float(c) for c in center), radius=float(radius),
                   closed=closed)


def finite(points) -> SetSpec:
    return SetSpec("finite", points=tuple(tuple(float(c) for c in p) for p in points))


def whole_space() -> SetSpec:
    return SetSpec("whole_space")


def generator(scale=1.0, power=0.0, count=64, seed=0) -> SetSpec:
    return SetSpec("generator", scale=float(scale), power=float(power),
                   count=int(count), seed=int(seed))


def _generator_points(A: SetSpec, dim: int) -> np.ndarray:
    rng = np.random.default_rng(A.seed)
    dirs = rng.standard_normal((A.count, dim))
    norms = np.linalg.norm(dirs, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    n = np.arange(1, A.count + 1, dtype=float)
    radii = A.scale * n ** A.power
    return dirs / norms * radii[:, None]


def _set_points(space: PNSpace, A: SetSpec) -> np.ndarray:
    if A.kind == "finite":
        return np.asarray(A.points, dtype=float)
    if A.kind == "generator":
        return _generator_points(A, space.carrier.dim)
    raise DomainError(f"{A.kind} sets have no explicit point sample")


def _ball_sup_norm(space: PNSpace, A: SetSpec) -> float:
    return float(space.carrier.norm_of(np.asarray(A.center))) + A.radius


def set_infimum(space: PNSpace, A: SetSpec, u: float) -> float:
    """``Phi_A(u) = inf{nu_p(u) : p in A}`` at a single ``u > 0``.

    Closed form for balls and the whole space in norm-structured variants
    (``nu_p(u)`` is nonincreasing in the norm, so the infimum sits at the
    largest norm the set reaches); otherwise the minimum over the set's
    sampled points.
    """
    if not (u > 0.0):
        raise DomainError("the infimum profile is evaluated at u > 0")
    if A.kind == "generator" and A.power > 0.0 and space.norm_structured:
        # unbounded norm schedule: the infimum is its limit along the norms
        return _limit_at_unbounded_norms(space, u)
    if A.kind in ("finite", "generator"):
        pts = _set_points(space, A)
        return float(min(space.nu(p)(u) for p in pts))
    if not space.norm_structured:
        if A.kind == "whole_space":
            raise PreconditionError(
                "closed_form_infimum",
                "whole-space sets are symbolic; they need a norm-structured space",
            )
        # sampled ball in an unstructured space, biased toward the boundary
        rng = np.random.default_rng(A.seed)
        dirs = rng.standard_normal((256, space.carrier.dim))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        radii = A.radius * (1.0 - np.geomspace(1e-9, 1.0, 256))
        pts = np.asarray(A.center) + dirs * radii[:, None]
        return float(min(space.nu(p)(u) for p in pts))
    if A.kind == "ball":
        return float(space.nu_at_norm(_ball_sup_norm(space, A))(u))
    # whole space: norms are unbounded, take the limit value
    return _limit_at_unbounded_norms(space, u)


def _limit_at_unbounded_norms(space: PNSpace, u: float) -> float:
    """``lim_{|p| -> inf} nu_p(u)``, the infimum value over unbounded norms."""
    if space.variant in ("simple", "alpha_simple"):
        return float(space.G.right_limit(0.0))
    if space.variant == "equilateral":
        return float(space.F(u))
    if space.variant == "profile":
        return float(space.profile.tail)
    raise DomainError(f"unsupported variant {space.variant}")


def prob_radius(space: PNSpace, A: SetSpec, x: float) -> float:
    """``R_A(x) = Phi_A(x-)``, the left limit of the infimum profile.

    Evaluated by refining ``x (1 - 2^-k)`` until the values settle; every
    implemented infimum backend is built from left-continuous evaluations or
    finite minima, so the refinement converges immediately in practice.
    """
    if not (x > 0.0):
        raise DomainError("the probabilistic radius is evaluated at x > 0")
    prev = None
    for k in range(1, 41):
        val = set_infimum(space, A, x * (1.0 - 2.0 ** (-k)))
        if prev is not None and abs(val - prev) <= 1e-12:
            return val
        prev = val
    return prev


def prob_radius_tail(space: PNSpace, A: SetSpec) -> float:
    """``lim_{x->inf} R_A(x)``, the properness indicator of the radius."""
    if A.kind == "generator" and A.power > 0.0 and space.norm_structured:
        if space.variant in ("simple", "alpha_simple"):
            return float(space.G.right_limit(0.0))
        if space.variant == "equilateral":
            return float(space.F.tail)
        return float(space.profile.tail)
    if A.kind in ("finite", "generator"):
        pts = _set_points(space, A)
        return float(min(space.nu(p).tail for p in pts))
    if not space.norm_structured:
        if A.kind == "whole_space":
            raise PreconditionError(
                "closed_form_infimum",
                "whole-space sets are symbolic; they need a norm-structured space",
            )
        rng = np.random.default_rng(A.seed)
        dirs = rng.standard_normal((256, space.carrier.dim))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        radii = A.radius * (1.0 - np.geomspace(1e-9, 1.0, 256))
        pts = np.asarray(A.center) + dirs * radii[:, None]
        return float(min(space.nu(p).tail for p in pts))
    if A.kind == "ball":
        return float(space.nu_at_norm(_ball_sup_norm(space, A)).tail)
    if space.variant in ("simple", "alpha_simple"):
        return float(space.G.right_limit(0.0))
    if space.variant == "equilateral":
        return float(space.F.tail)
    if space.variant == "profile":
        return float(space.profile.tail)
    raise DomainError(f"unsupported variant {space.variant}")


def _radius_tail_sampled(space: PNSpace, A: SetSpec) -> bool:
    return (A.kind == "generator" and not (A.power > 0.0 and space.norm_structured)) or (
        A.kind == "ball" and not space.norm_structured
    )


def is_d_bounded(space: PNSpace, A: SetSpec, tol_tail: float | None = None) -> Verdict:
    """Distributional boundedness: the probabilistic radius is proper.

    Equivalent to the existence of a proper lower envelope for ``nu`` on
    ``A`` (the radius itself is the canonical choice).
    """
    sampled = _radius_tail_sampled(space, A)
    if tol_tail is None:
        tol_tail = DEFAULT_TOL_TAIL_SAMPLED if sampled else DEFAULT_TOL_TAIL_EXACT
    tail = prob_radius_tail(space, A)
    passed = tail >= 1.0 - tol_tail
    return Verdict(
        name="d_bounded", passed=passed, tol=tol_tail,
        witness=None if passed else {"radius_tail": tail, "set": A.to_dict()},
        details={"radius_tail": tail, "sampled": sampled},
    )


def _adversarial_norms(space: PNSpace, A: SetSpec, idx: np.ndarray):
    """Norm schedule of the adversarial ``p_n`` choice for each index."""
    n = idx.astype(float)
    if A.kind == "ball":
        return np.full_like(n, _ball_sup_norm(space, A))
    if A.kind == "whole_space":
        return n ** 2
    if A.kind == "generator" and A.power > 0.0:
        return A.scale * n ** A.power
    pts = _set_points(space, A)
    if space.norm_structured:
        # argmin of nu_p at the probe n^2 is the largest norm in the sample
        r = float(np.max(space.carrier.norm_of(pts)))
        return np.full_like(n, r)
    return None


def is_topologically_bounded(space: PNSpace, A: SetSpec,
                             plan: SamplePlan | None = None) -> Verdict:
    """Topological boundedness via the scaled adversarial sequence.

    Checks ``d_S(nu_{p_n / n}, unit_step(0)) -> 0`` where ``p_n`` maximizes
    norms within ``A`` (closed form) or minimizes ``nu_p(n^2)`` over the
    sample, matching the classical unboundedness witness.
    """
    plan = plan or SamplePlan()
    idx = plan.index_grid()
    norms = _adversarial_norms(space, A, idx)
    if norms is not None and space.norm_structured:
        dists = space.dist0_norms(norms / idx.astype(float))
    else:
        pts = _set_points(space, A)
        dists = np.empty(len(idx))
        for k, n in enumerate(idx):
            probe = float(n) ** 2
            vals = [float(space.nu(p)(probe)) for p in pts]
            p_sel = pts[int(np.argmin(vals))]
            dists[k] = sibley_to_origin(space.nu(p_sel / float(n)))
    tail_mask = idx >= max(1, (3 * plan.n_max) // 4)
    passed = bool(np.all(dists[tail_mask] < plan.traj_tol)) if np.any(tail_mask) else False
    floor = float(dists[tail_mask].min()) if np.any(tail_mask) else float(dists.min())
    step = max(1, len(idx) // 64)
    return Verdict(
        name="topologically_bounded", passed=passed, tol=plan.traj_tol, seed=plan.seed,
        n_samples=len(idx),
        witness=None if passed else {"floor": floor, "set": A.to_dict()},
        details={"floor": floor,
                 "trajectory": [[int(n), float(d)] for n, d in
                                zip(idx[::step], dists[::step])]},
    )


@dataclass
class BoundednessReport:
    """Paired boundedness verdicts for a panel of sets."""

    entries: list = field(default_factory=list)

    @property
    def all_agree(self) -> bool:
        return all(e["agree"] for e in self.entries)

    def to_dict(self):
        return _jsonable({"all_agree": self.all_agree, "entries": self.entries})


def boundedness_equivalence_harness(space: PNSpace, panel,
                                    plan: SamplePlan | None = None) -> BoundednessReport:
    """Compare distributional vs topological boundedness on a set panel.

    Only valid on spaces satisfying the scaling identity with proper norms
    (both hypotheses are verified first; a failure raises a precondition
    error naming the failed hypothesis).  Disagreements are reported with
    full witnesses; on conforming spaces the two notions must agree.
    """
    plan = plan or SamplePlan()
    serst = check_serstnev(space, plan)
    if not serst.passed:
        raise PreconditionError("serstnev", "space does not satisfy the scaling identity",
                                details=serst.to_dict())
    char = is_characteristic(space, plan)
    if not char.passed:
        raise PreconditionError("characteristic", "space has improper norm values",
                                details=char.to_dict())
    report = BoundednessReport()
    for A in panel:
        dv = is_d_bounded(space, A)
        tv = is_topologically_bounded(space, A, plan)
        report.entries.append({
            "set": A.to_dict(),
            "d_bounded": dv.to_dict(),
            "topologically_bounded": tv.to_dict(),
            "agree": dv.passed == tv.passed,
        })
    return report
