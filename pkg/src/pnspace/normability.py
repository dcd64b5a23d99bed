"""Numerical normability certificates.

Kolmogorov's criterion reduces normability of a T1 topological vector space
to finding one convex, topologically bounded neighborhood of the origin.
The certificate scans a grid of neighborhood parameters ``t``, checks
convexity by sampled convex combinations and boundedness through the branch
the space's structure licenses: the distributional branch when the space
satisfies the scaling identity with proper norms (where the two boundedness
notions are equivalent), otherwise the direct topological branch.

Certificates are evidence, never proof: the mandatory caveat string records
this, ``evidence-not-normable`` is reserved for structural facts, and
sampling failures only ever yield ``inconclusive``.
"""

from __future__ import annotations

import math

import numpy as np

from .boundedness import ball, is_d_bounded, is_topologically_bounded
from .distfun import DistFn, increasing_inverse
from .errors import DomainError, PreconditionError
from .spaces import PNSpace, check_serstnev, is_characteristic
from .topology import neighborhood_contains, tv_continuity_check
from .verdicts import CAVEAT, NormabilityCertificate, SamplePlan, Verdict

DEFAULT_T_GRID = tuple(round(0.05 * k, 2) for k in range(1, 18))  # 0.05 .. 0.85


def alpha_simple_radius(G: DistFn, alpha: float, t: float) -> float:
    """Closed-form radius ``h(t) = (t / G^{-1}(1 - t)) ** (1/alpha)`` of the
    origin neighborhood ``N_theta(t)`` in an alpha-simple space."""
    if not (0.0 < t < 1.0):
        raise DomainError("t must lie in (0, 1)")
    if not (alpha > 0.0):
        raise DomainError("alpha must be positive")
    x = increasing_inverse(G, 1.0 - t)
    return (t / x) ** (1.0 / alpha)


def alpha_simple_radius_limits(G: DistFn, alpha: float) -> Verdict:
    """Endpoint behavior of the radius map: ``h(t) -> 0`` as ``t -> 0+`` and
    ``h(t) -> inf`` as ``t -> 1-``, sampled near both endpoints."""
    small = [alpha_simple_radius(G, alpha, t) for t in (1e-4, 1e-5)]
    large = [alpha_simple_radius(G, alpha, t) for t in (1.0 - 1e-6, 1.0 - 1e-8)]
    mono_grid = np.linspace(0.05, 0.95, 19)
    hs = [alpha_simple_radius(G, alpha, t) for t in mono_grid]
    nondecreasing = bool(np.all(np.diff(hs) >= 0.0))
    passed = (
        small[1] < small[0] < 1e-3 ** (1.0 / alpha)
        and large[1] > large[0] > 1e3 ** (1.0 / alpha)
        and nondecreasing
    )
    return Verdict(
        name="alpha_simple_radius_limits", passed=passed, tol=0.0,
        witness=None if passed else {"h_near_0": small, "h_near_1": large,
                                     "monotone": nondecreasing},
        details={"h_near_0": small, "h_near_1": large, "monotone": nondecreasing},
    )


def neighborhood_radius(space: PNSpace, t: float) -> float:
    """Radius of the norm ball that ``N_theta(t)`` equals, per variant.

    ``simple``/``alpha_simple`` use the closed-form radius through the
    inverse of ``G``; ``profile`` spaces use the quasi-inverse of the
    profile.  May be ``inf`` when the neighborhood is the whole space.
    """
    if not (0.0 < t < 1.0):
        raise DomainError("t must lie in (0, 1)")
    if space.variant in ("simple", "alpha_simple"):
        return alpha_simple_radius(space.G, space.alpha, t)
    if space.variant == "profile":
        return float(space.profile.quasi_inverse(1.0 - t))
    if space.variant == "equilateral":
        # N_theta(t) is the whole space once F(t) > 1 - t, else just the origin.
        return math.inf if float(space.F(t)) > 1.0 - t else 0.0
    raise DomainError(f"no closed-form neighborhood radius for variant {space.variant}")


def _sample_members(space: PNSpace, t: float, plan: SamplePlan, n: int):
    """Points of N_theta(t), by direct ball sampling when the radius is known."""
    rng = np.random.default_rng(plan.seed + 17)
    dim = space.carrier.dim
    if space.norm_structured:
        radius = neighborhood_radius(space, t)
        if radius == 0.0:
            return np.zeros((0, dim))
        dirs = rng.standard_normal((n, dim))
        nrm = np.linalg.norm(dirs, axis=1, keepdims=True)
        nrm[nrm == 0.0] = 1.0
        dirs /= nrm
        cap = min(radius, 1e6)
        radii = rng.uniform(0.0, cap * (1.0 - 1e-9), size=(n, 1))
        scale = radii / np.maximum(space.carrier.norm_of(dirs), 1e-300)[:, None]
        return dirs * scale
    # rejection sampling for unstructured spaces
    out = []
    for _ in range(50 * n):
        p = rng.standard_normal(dim) * rng.uniform(0.05, 2.0)
        if neighborhood_contains(space, np.zeros(dim), t, p):
            out.append(p)
            if len(out) == n:
                break
    return np.asarray(out) if out else np.zeros((0, dim))


def _membership_mask(space: PNSpace, pts: np.ndarray, t: float) -> np.ndarray:
    """Vectorized N_theta(t) membership through the metric form of the
    neighborhood (equivalent to the norm-inequality form; the agreement of
    the two forms is asserted separately in neighborhood_contains)."""
    if space.norm_structured:
        norms = np.asarray(space.carrier.norm_of(pts), dtype=float)
        return space.dist0_norms(norms.ravel()).reshape(norms.shape) < t
    theta = space.carrier.origin()
    flat = pts.reshape(-1, pts.shape[-1])
    out = np.array([neighborhood_contains(space, theta, t, z) for z in flat])
    return out.reshape(pts.shape[:-1])


def convexity_check(space: PNSpace, t: float, plan: SamplePlan | None = None) -> Verdict:
    """Sampled convexity of ``N_theta(t)``: every convex combination of
    sampled member pairs stays inside.  An empty or origin-only membership
    sample passes trivially (a singleton is convex)."""
    if not (0.0 < t < 1.0):
        raise DomainError("t must lie in (0, 1)")
    plan = plan or SamplePlan()
    pairs = plan.n_pairs
    members = _sample_members(space, t, plan, 2 * pairs)
    if len(members) < 2:
        return Verdict(name="convexity", passed=True, tol=plan.tol, seed=plan.seed,
                       n_samples=0, details={"trivial": True, "t": t})
    ps, qs = members[: len(members) // 2], members[len(members) // 2:]
    alphas = np.linspace(0.0, 1.0, 11)
    combos = alphas[None, :, None] * ps[:, None, :] + \
        (1.0 - alphas)[None, :, None] * qs[:, None, :]
    inside = _membership_mask(space, combos, t)
    witness = None
    if not np.all(inside):
        i, j = np.unravel_index(int(np.argmin(inside)), inside.shape)
        witness = {"p": ps[i].tolist(), "q": qs[i].tolist(), "alpha": float(alphas[j])}
    return Verdict(
        name="convexity", passed=witness is None, tol=plan.tol, seed=plan.seed,
        n_samples=int(inside.size), witness=witness, details={"t": t, "pairs": len(ps)},
    )


def ball_equivalence_check(space: PNSpace, p, t: float,
                           plan: SamplePlan | None = None) -> Verdict:
    """Strong neighborhoods against norm balls, both directions.

    For profile and alpha-simple spaces: membership ``q in N_p(t)`` must
    coincide with ``|q - p| < radius`` on every sample outside a boundary
    shell of width 1e-6, and the converse nesting ``N_p(1 - f(r))`` inside
    the norm ball of radius ``r`` must hold for sampled ``r``.
    """
    if space.variant not in ("profile", "alpha_simple", "simple"):
        raise PreconditionError("ball_equivalence",
                                "requires a profile or (alpha-)simple space")
    if space.variant == "profile":
        bound = 1.0 - space.profile.tail
        if not (0.0 < t < bound):
            raise PreconditionError(
                "ball_equivalence",
                f"t must lie in (0, 1 - tail(f)) = (0, {bound}); got {t}",
            )
    elif not (0.0 < t < 1.0):
        raise DomainError("t must lie in (0, 1)")
    plan = plan or SamplePlan()
    p = np.asarray(p, dtype=float)
    radius = neighborhood_radius(space, t)
    rng = np.random.default_rng(plan.seed + 23)
    n = plan.n_pairs
    dirs = rng.standard_normal((n, space.carrier.dim))
    nrm = space.carrier.norm_of(dirs)
    dirs /= np.where(nrm == 0.0, 1.0, nrm)[:, None]
    span = radius if np.isfinite(radius) else 10.0
    radii = rng.uniform(0.0, 2.0 * span, size=n)
    shell = 1e-6
    mism, skipped, checked = None, 0, 0
    for d, r in zip(dirs, radii):
        if abs(r - radius) < shell:
            skipped += 1
            continue
        q = p + r * d
        checked += 1
        member = neighborhood_contains(space, p, t, q)
        inside = float(space.carrier.norm_of(q - p)) < radius
        if member != inside:
            mism = {"q": q.tolist(), "norm": float(space.carrier.norm_of(q - p)),
                    "radius": float(radius), "member": member}
            break
    nest_wit = None
    if space.variant == "profile":
        for r in rng.uniform(0.05, 5.0, size=32):
            inner = space.profile.quasi_inverse(float(space.profile(r)))
            if inner > r + 1e-12:
                nest_wit = {"r": float(r), "inner_radius": float(inner)}
                break
    passed = mism is None and nest_wit is None
    witness = mism or ({"nesting": nest_wit} if nest_wit else None)
    return Verdict(
        name="ball_equivalence", passed=passed, tol=shell, seed=plan.seed,
        n_samples=checked, witness=witness,
        details={"radius": float(radius), "skipped_shell": skipped,
                 "converse_nesting_checked": space.variant == "profile"},
    )


def kolmogorov_certificate(space: PNSpace, t_grid=None,
                           plan: SamplePlan | None = None) -> NormabilityCertificate:
    """Scan origin neighborhoods for a convex, bounded witness.

    Requires the space to be a topological vector space (the scalar
    continuity check); a failure raises a precondition error naming that
    check.  On spaces with the scaling identity and proper norms the
    boundedness sub-verdict is distributional (the two notions coincide
    there); otherwise topological boundedness is tested directly.  Both
    sub-verdicts are recorded per ``t`` regardless of the branch used.
    """
    plan = plan or SamplePlan()
    if not space.norm_structured:
        raise PreconditionError(
            "closed_form_neighborhood",
            "certificates need the closed-form origin neighborhoods of a "
            "norm-structured space",
        )
    tv = tv_continuity_check(space, plan)
    if not tv.passed:
        raise PreconditionError(
            "tv_continuity_check",
            "normability requires a topological vector space; "
            "the scalar continuity check failed",
            details=tv.to_dict(),
        )
    serst = check_serstnev(space, plan)
    char = is_characteristic(space, plan)
    use_d_branch = serst.passed and char.passed
    if space.variant == "simple" or (space.variant == "alpha_simple" and space.alpha == 1.0):
        method = "serstnev-d-bounded" if use_d_branch else "direct-topological"
    elif space.variant == "alpha_simple":
        method = "alpha-simple-radius"
    elif space.variant == "profile":
        method = "profile-radius"
    else:
        method = "serstnev-d-bounded" if use_d_branch else "direct-topological"

    grid = [float(t) for t in (DEFAULT_T_GRID if t_grid is None else t_grid)]
    if space.variant == "profile":
        bound = 1.0 - space.profile.tail
        grid = [t for t in grid if t < bound]
    theta = space.carrier.origin()

    per_t = []
    witness_t = None
    for t in grid:
        conv = convexity_check(space, t, plan)
        radius = neighborhood_radius(space, t)
        if not np.isfinite(radius):
            # N_theta(t) is the whole space: never a boundedness witness.
            entry_bounded = Verdict(name="bounded", passed=False, tol=plan.traj_tol,
                                    witness={"reason": "neighborhood is the whole space"})
            d_verdict = top_verdict = None
        elif radius == 0.0:
            entry_bounded = Verdict(name="bounded", passed=False, tol=plan.traj_tol,
                                    witness={"reason": "neighborhood reduces to the origin"})
            d_verdict = top_verdict = None
        else:
            nb = ball(theta, radius)
            d_verdict = is_d_bounded(space, nb)
            top_verdict = is_topologically_bounded(space, nb, plan)
            entry_bounded = d_verdict if use_d_branch else top_verdict
        entry = {
            "t": t,
            "radius": float(radius),
            "convexity": conv.to_dict(),
            "bounded": entry_bounded.to_dict(),
            "d_bounded": d_verdict.to_dict() if d_verdict is not None else None,
            "topologically_bounded": top_verdict.to_dict() if top_verdict is not None else None,
        }
        per_t.append(entry)
        if witness_t is None and conv.passed and entry_bounded.passed:
            witness_t = t

    verdict = "evidence-normable" if witness_t is not None else "inconclusive"
    return NormabilityCertificate(
        verdict=verdict, method=method, witness_t=witness_t, per_t=per_t, caveat=CAVEAT,
    )
