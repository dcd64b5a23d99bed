"""Probabilistic normed spaces: carriers, concrete constructions, checkers.

A space pairs a finite-dimensional normed carrier with a probabilistic norm
``nu`` mapping vectors to d.d.f.s and two triangle functions ``tau <=
tau_star``.  Concrete variants:

* ``simple``        — ``nu_p(x) = G(x / |p|)`` with the min convolutions,
* ``alpha_simple``  — ``nu_p(x) = G(x / |p|^alpha)``,
* ``equilateral``   — constant ``nu_p = F`` off the origin, pointwise min,
* ``profile``       — the plateau norm ``nu_p = f(|p|)`` on (0, inf) built
  from a nonincreasing profile compatible with a t-norm,
* ``custom``        — a user-supplied ``nu`` (callable or finite table).

The axiom, scaling-identity and properness checkers sample per a
:class:`~pnspace.verdicts.SamplePlan` and return structured verdicts; they
report failures rather than assuming any structure holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distfun import (
    DistFn,
    Profile,
    plateau,
    sibley_to_origin,
    sibley_to_origin_norms,
    unit_step,
    distfn_from_dict,
)
from .errors import ConstructionError, DomainError
from .tnorms import (
    MIN,
    MIN_TRIANGLE,
    TriangleFn,
    inf_conv,
    sup_conv,
    tnorm,
)
from .verdicts import AxiomReport, SamplePlan, Verdict

NORM_ORDERS = {"euclidean": 2, "sup": np.inf, "one": 1}


@dataclass(frozen=True)
class Carrier:
    """Finite-dimensional real carrier with one of three classical norms."""

    dim: int
    norm: str = "euclidean"

    def __post_init__(self):
        if self.dim < 1:
            raise ConstructionError("carrier dimension must be at least 1")
        if self.norm not in NORM_ORDERS:
            raise ConstructionError(f"unknown norm {self.norm!r}; known: {sorted(NORM_ORDERS)}")

    def norm_of(self, p) -> float | np.ndarray:
        arr = np.asarray(p, dtype=float)
        if arr.shape[-1] != self.dim:
            raise DomainError(f"point dimension {arr.shape[-1]} != carrier dimension {self.dim}")
        return np.linalg.norm(arr, ord=NORM_ORDERS[self.norm], axis=-1)

    def origin(self) -> np.ndarray:
        return np.zeros(self.dim)

    def to_dict(self):
        return {"dim": self.dim, "norm": self.norm}


def _reject_degenerate(G: DistFn, role: str):
    if G.is_unit_step_at_zero:
        raise ConstructionError(f"{role} must differ from the unit step at 0")
    if G.tail <= 0.0:
        raise ConstructionError(f"{role} must differ from the identically-zero d.d.f.")


class PNSpace:
    """A probabilistic normed space with evaluable norm and triangle functions."""

    def __init__(self, carrier: Carrier, variant: str, tau: TriangleFn,
                 tau_star: TriangleFn, *, G=None, F=None, profile=None,
                 tnorm_=None, alpha=None, nu_fn=None, table=None,
                 tau_star_mode=None):
        self.carrier = carrier
        self.variant = variant
        self.tau = tau
        self.tau_star = tau_star
        self.G = G
        self.F = F
        self.profile = profile
        self.tnorm = tnorm_
        self.alpha = alpha
        self._nu_fn = nu_fn
        self.table = table
        self.tau_star_mode = tau_star_mode
        self._eps0 = unit_step(0.0)
        if variant == "equilateral":
            self._f_dist0 = sibley_to_origin(F)

    # -- probabilistic norm ---------------------------------------------

    def nu(self, p) -> DistFn:
        """The d.d.f. assigned to the vector ``p``."""
        p = np.asarray(p, dtype=float)
        r = float(self.carrier.norm_of(p))
        if self.variant in ("simple", "alpha_simple", "equilateral", "profile"):
            return self.nu_at_norm(r)
        if self.table is not None:
            hit = np.where(np.all(np.abs(self.table_points - p) <= 1e-12, axis=1))[0]
            if hit.size == 0:
                raise DomainError("vector not present in the custom nu table")
            return self.table_distfns[int(hit[0])]
        return self._nu_fn(p)

    def nu_at_norm(self, r: float) -> DistFn:
        """``nu`` of any vector with norm ``r`` (all built-ins depend on the norm only)."""
        if r < 0.0:
            raise DomainError("norms are nonnegative")
        if r == 0.0:
            return self._eps0
        if self.variant == "simple":
            return self.G.scale_x(r)
        if self.variant == "alpha_simple":
            return self.G.scale_x(r ** self.alpha) if self.alpha != 0.0 else self.G
        if self.variant == "equilateral":
            return self.F
        if self.variant == "profile":
            return plateau(float(self.profile(r)))
        raise DomainError(f"variant {self.variant} is not norm-structured")

    @property
    def norm_structured(self) -> bool:
        return self.variant in ("simple", "alpha_simple", "equilateral", "profile")

    @property
    def exact_convolutions(self) -> bool:
        """Whether tau/tau_star evaluate exactly on this space's norm values."""
        return self.variant in ("equilateral", "profile")

    @property
    def sample_points(self) -> np.ndarray | None:
        if self.table is not None:
            return self.table_points
        return None

    def dist0_norms(self, r) -> np.ndarray:
        """Vectorized Sibley distance ``d_S(nu_p, unit_step(0))`` by norm of p."""
        r = np.asarray(r, dtype=float)
        if self.variant == "simple":
            return sibley_to_origin_norms(self.G, r)
        if self.variant == "alpha_simple":
            scale = np.where(r > 0.0, r, 1.0) ** self.alpha if self.alpha != 0.0 else np.ones_like(r)
            return sibley_to_origin_norms(self.G, np.where(r > 0.0, scale, 0.0))
        if self.variant == "equilateral":
            return np.where(r > 0.0, self._f_dist0, 0.0)
        if self.variant == "profile":
            out = np.zeros_like(r)
            pos = r > 0.0
            out[pos] = 1.0 - self.profile(r[pos])
            return out
        raise DomainError(f"variant {self.variant} has no norm-indexed distance")

    def dist0_of(self, p) -> float:
        """Sibley distance of ``nu_p`` to the unit step at 0."""
        if self.norm_structured:
            return float(self.dist0_norms(np.array([self.carrier.norm_of(p)]))[0])
        return sibley_to_origin(self.nu(p))

    # -- serialization ----------------------------------------------------

    @property
    def label(self) -> str:
        bits = [self.variant]
        if self.alpha is not None:
            bits.append(f"alpha={self.alpha}")
        if self.tnorm is not None:
            bits.append(f"T={self.tnorm.tag}")
        return "/".join(bits)

    def to_config(self) -> dict:
        doc = {"variant": self.variant, "carrier": self.carrier.to_dict(), "params": {}}
        if self.variant == "simple":
            doc["params"]["G"] = self.G.to_dict()
        elif self.variant == "alpha_simple":
            doc["params"]["G"] = self.G.to_dict()
            doc["params"]["alpha"] = self.alpha
        elif self.variant == "equilateral":
            doc["params"]["F"] = self.F.to_dict()
        elif self.variant == "profile":
            doc["params"]["f"] = self.profile.to_dict()
            doc["params"]["T"] = self.tnorm.tag
            doc["params"]["tau_star"] = self.tau_star_mode
        elif self.table is not None:
            doc["variant"] = "custom_table"
            doc["params"]["points"] = [list(map(float, p)) for p in self.table_points]
            doc["params"]["distfns"] = [d.to_dict() for d in self.table_distfns]
            doc["params"]["tau"] = self.tau.label_config
            doc["params"]["tau_star"] = self.tau_star.label_config
        else:
            raise ConstructionError("callable-backed custom spaces cannot be serialized")
        return doc


def make_simple(carrier: Carrier, G: DistFn) -> PNSpace:
    """Menger space with ``nu_p(x) = G(x / |p|)`` under the min convolutions."""
    _reject_degenerate(G, "G")
    return PNSpace(carrier, "simple", sup_conv(MIN), inf_conv(MIN), G=G, alpha=1.0)


def make_alpha_simple(carrier: Carrier, G: DistFn, alpha: float) -> PNSpace:
    """Space with ``nu_p(x) = G(x / |p|^alpha)``.

    Triangle functions depend on the exponent: the min convolutions for
    ``alpha = 1`` (the simple case); for other exponents the scaling
    identity fails and the min convolutions provably break an axiom (the
    upper bound for ``alpha < 1``, subadditivity for ``alpha > 1``), so the
    attachment pairs a workable sup-convolution with the pointwise minimum,
    and `check_axioms` remains the arbiter for any particular ``G``.
    """
    alpha = float(alpha)
    if alpha < 0.0 or not math.isfinite(alpha):
        raise DomainError("alpha must be a finite nonnegative number")
    _reject_degenerate(G, "G")
    if alpha == 1.0:
        return PNSpace(carrier, "alpha_simple", sup_conv(MIN), inf_conv(MIN), G=G, alpha=alpha)
    tau = sup_conv(MIN) if alpha < 1.0 else sup_conv("W")
    return PNSpace(carrier, "alpha_simple", tau, MIN_TRIANGLE, G=G, alpha=alpha)


def make_equilateral(carrier: Carrier, F: DistFn) -> PNSpace:
    """Constant probabilistic norm ``F`` off the origin, pointwise-min triangles."""
    _reject_degenerate(F, "F")
    return PNSpace(carrier, "equilateral", MIN_TRIANGLE, MIN_TRIANGLE, F=F)


def make_profile_space(carrier: Carrier, f: Profile, T, tau_star: str = "dual",
                       condition_grid=None) -> PNSpace:
    """Menger space whose norm is the plateau ``f(|p|)`` on (0, inf).

    Requires ``f(x) = 1`` exactly when ``x = 0`` and the compatibility
    ``f(a + b) >= T(f(a), f(b))``; both are validated (the latter via
    :func:`profile_condition_check`) and a violation aborts construction
    with a witness.  ``tau_star`` may be ``"dual"`` (the inf-convolution of
    the dual t-conorm) or ``"min_conv"`` (the min sup-convolution, which the
    upper-bound axiom tolerates for any t-norm).
    """
    T = tnorm(T)
    if f.one_only_at_zero is False:
        raise ConstructionError("profile must satisfy f(x) = 1 exactly at x = 0")
    probe = np.linspace(0.0, 64.0, 257)
    vals = f(probe)
    if vals[0] != 1.0:
        raise ConstructionError("profile must have f(0) = 1", witness={"x": 0.0, "f": vals[0]})
    if f.one_only_at_zero is None and np.any(vals[1:] >= 1.0):
        i = int(np.argmax(vals[1:] >= 1.0)) + 1
        raise ConstructionError(
            "profile attains 1 away from 0", witness={"x": float(probe[i]), "f": float(vals[i])}
        )
    cond = profile_condition_check(f, T, grid=condition_grid)
    if not cond.passed:
        raise ConstructionError(
            f"profile is not compatible with t-norm {T.tag}", witness=cond.witness
        )
    if tau_star == "dual":
        star = inf_conv(T)
    elif tau_star == "min_conv":
        star = sup_conv(MIN)
    else:
        raise ConstructionError("tau_star must be 'dual' or 'min_conv'")
    return PNSpace(carrier, "profile", sup_conv(T), star, profile=f, tnorm_=T,
                   tau_star_mode=tau_star)


def make_custom(carrier: Carrier, nu_fn, tau: TriangleFn, tau_star: TriangleFn) -> PNSpace:
    """Space with a user-supplied ``nu`` callable (in-process, not serializable)."""
    return PNSpace(carrier, "custom", tau, tau_star, nu_fn=nu_fn)


def make_custom_table(carrier: Carrier, points, distfns, tau: TriangleFn,
                      tau_star: TriangleFn) -> PNSpace:
    """Exploratory space defined by a finite table ``vector -> DistFn``.

    The table must contain the origin; checkers sample from the table rows
    instead of drawing random vectors.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != carrier.dim or len(pts) != len(distfns):
        raise ConstructionError("table needs matching (n, dim) points and n distfns")
    if not np.any(np.all(pts == 0.0, axis=1)):
        raise ConstructionError("custom tables must include the origin")
    space = PNSpace(carrier, "custom", tau, tau_star, table=True)
    space.table_points = pts
    space.table_distfns = list(distfns)
    return space


def pn_eval(space: PNSpace, p) -> DistFn:
    """The d.d.f. ``nu_p``; validates the carrier dimension."""
    return space.nu(p)


# ---------------------------------------------------------------------------
# Checkers
# ---------------------------------------------------------------------------


def _sample_points(space: PNSpace, plan: SamplePlan, n=None):
    if space.sample_points is not None:
        pts = space.sample_points
        return pts[np.any(pts != 0.0, axis=1)]
    return plan.vectors(space.carrier.dim, n=n)


def _conv_tol(space: PNSpace, plan: SamplePlan) -> float:
    if plan.conv_tol is not None:
        return plan.conv_tol
    return 1e-9 if space.exact_convolutions else 1e-4


def check_axioms(space: PNSpace, plan: SamplePlan | None = None) -> AxiomReport:
    """Sampled verification of the four probabilistic-norm axioms.

    N1 requires ``nu`` at the origin to be the unit step exactly and sampled
    off-origin norms to keep a positive Sibley distance from it; N2 compares
    ``nu_{-p}`` with ``nu_p`` on the x-grid; N3 and N4 compare against the
    triangle-function convolutions with a tolerance matched to the
    evaluation mode (exact plateau forms vs. grid approximation).
    """
    plan = plan or SamplePlan()
    xg = plan.x_grid
    ctol = _conv_tol(space, plan)
    pts = _sample_points(space, plan)

    # N1: identity at the origin, separation away from it.
    theta = space.carrier.origin()
    nu0 = space.nu(theta)
    probes = np.array([1e-6, 1e-2, 1.0, 1e3])
    exact0 = (
        float(nu0(0.0)) == 0.0
        and float(nu0.right_limit(0.0)) == 1.0
        and bool(np.all(nu0(probes) == 1.0))
    )
    seps = np.array([space.dist0_of(p) for p in pts])
    sep_ok = bool(np.all(seps > plan.tol))
    n1_witness = None
    if not exact0:
        n1_witness = {"at": "origin", "nu0_right_limit_at_0": float(nu0.right_limit(0.0))}
    elif not sep_ok:
        i = int(np.argmin(seps))
        n1_witness = {"p": pts[i].tolist(), "sibley_to_origin": float(seps[i])}
    n1 = Verdict(
        name="N1", passed=exact0 and sep_ok, tol=plan.tol, seed=plan.seed,
        n_samples=len(pts), witness=n1_witness,
        details={"worst_violation": 0.0 if exact0 and sep_ok else 1.0,
                 "min_separation": float(seps.min(initial=1.0))},
    )

    # N2: nu_{-p} = nu_p on the grid.
    worst2, wit2 = 0.0, None
    for p in pts:
        diff = float(np.max(np.abs(space.nu(-p)(xg) - space.nu(p)(xg))))
        if diff > worst2:
            worst2, wit2 = diff, {"p": p.tolist(), "diff": diff}
    n2 = Verdict(
        name="N2", passed=worst2 <= plan.tol, tol=plan.tol, seed=plan.seed,
        n_samples=len(pts), witness=None if worst2 <= plan.tol else wit2,
        details={"worst_violation": worst2},
    )

    # N3: nu_{p+q} >= tau(nu_p, nu_q) - tol.
    worst3, wit3, pairs_checked = 0.0, None, 0
    for p, q in _n3_pairs(space, plan, pts):
        lhs = space.nu(p + q)(xg)
        rhs = space.tau.eval_grid(space.nu(p), space.nu(q), xg)
        viol = float(np.max(rhs - lhs))
        pairs_checked += 1
        if viol > worst3:
            worst3 = viol
            wit3 = {"p": p.tolist(), "q": q.tolist(),
                    "x": float(xg[int(np.argmax(rhs - lhs))]), "violation": viol}
    n3 = Verdict(
        name="N3", passed=worst3 <= ctol, tol=ctol, seed=plan.seed,
        n_samples=pairs_checked, witness=None if worst3 <= ctol else wit3,
        details={"worst_violation": worst3},
    )

    # N4: nu_p <= tau_star(nu_{lam p}, nu_{(1-lam) p}) + tol.
    worst4, wit4, combos = 0.0, None, 0
    for p in pts:
        base = space.nu(p)(xg)
        for lam in plan.lambda_grid:
            rhs = space.tau_star.eval_grid(space.nu(lam * p), space.nu((1.0 - lam) * p), xg)
            viol = float(np.max(base - rhs))
            combos += 1
            if viol > worst4:
                worst4 = viol
                wit4 = {"p": p.tolist(), "lambda": float(lam),
                        "x": float(xg[int(np.argmax(base - rhs))]), "violation": viol}
    n4 = Verdict(
        name="N4", passed=worst4 <= ctol, tol=ctol, seed=plan.seed,
        n_samples=combos, witness=None if worst4 <= ctol else wit4,
        details={"worst_violation": worst4},
    )
    return AxiomReport(n1=n1, n2=n2, n3=n3, n4=n4)


def _n3_pairs(space, plan, pts):
    if space.sample_points is not None:
        table = space.table_points
        pairs = []
        for i in range(len(table)):
            for j in range(i, len(table)):
                s = table[i] + table[j]
                if np.any(np.all(np.abs(table - s) <= 1e-12, axis=1)):
                    pairs.append((table[i], table[j]))
        return pairs
    qs = plan.vectors(space.carrier.dim, n=len(pts),
                      rng=np.random.default_rng(plan.seed + 1))
    return list(zip(pts, qs))


def check_serstnev(space: PNSpace, plan: SamplePlan | None = None) -> Verdict:
    """The scaling identity ``nu_{a p}(x) = nu_p(x / |a|)`` on sampled grids."""
    plan = plan or SamplePlan()
    xg = plan.x_grid
    pts = _sample_points(space, plan)
    worst, wit = 0.0, None
    for p in pts:
        base = space.nu(p)
        for a in plan.scalar_grid:
            if a == 0.0:
                continue
            if space.sample_points is not None:
                hit = np.all(np.abs(space.table_points - a * np.asarray(p)) <= 1e-12, axis=1)
                if not np.any(hit):
                    continue
            lhs = space.nu(a * np.asarray(p))(xg)
            rhs = base(xg / abs(a))
            diff = float(np.max(np.abs(lhs - rhs)))
            if diff > worst:
                worst = diff
                wit = {"p": np.asarray(p).tolist(), "alpha": float(a),
                       "x": float(xg[int(np.argmax(np.abs(lhs - rhs)))]), "diff": diff}
    return Verdict(
        name="serstnev", passed=worst <= plan.tol, tol=plan.tol, seed=plan.seed,
        n_samples=len(pts) * len(plan.scalar_grid),
        witness=None if worst <= plan.tol else wit,
        details={"worst_violation": worst},
    )


def is_characteristic(space: PNSpace, plan: SamplePlan | None = None) -> Verdict:
    """Whether every sampled ``nu_p`` is proper (tail 1 within tolerance)."""
    plan = plan or SamplePlan()
    pts = _sample_points(space, plan)
    tails = np.array([space.nu(p).tail for p in pts])
    i = int(np.argmin(tails)) if len(tails) else 0
    passed = bool(np.all(tails >= 1.0 - plan.tol_tail))
    return Verdict(
        name="characteristic", passed=passed, tol=plan.tol_tail, seed=plan.seed,
        n_samples=len(pts),
        witness=None if passed else {"p": pts[i].tolist(), "tail": float(tails[i])},
        details={"min_tail": float(tails.min(initial=1.0))},
    )


def profile_condition_check(f: Profile, T, grid=None, tol: float = 1e-12) -> Verdict:
    """Compatibility ``f(x + y) >= T(f(x), f(y))`` on a grid of (x, y) pairs.

    For the product t-norm this is the multiplicative bound
    ``f(x+y) >= f(x) f(y)``; for the Lukasiewicz t-norm it is equivalent to
    ``1 + f(x+y) >= f(x) + f(y)``; both are instances of the same grid
    comparison, which also covers arbitrary continuous t-norms (any pair of
    norms ``(|p|, |q|)`` with ``|p+q|`` up to their sum is realized by
    collinear vectors, and the worst case is the sum).
    """
    T = tnorm(T)
    grid = np.linspace(0.0, 8.0, 81) if grid is None else np.asarray(grid, dtype=float)
    X, Y = np.meshgrid(grid, grid)
    lhs = f(X + Y)
    rhs = T(f(X), f(Y))
    viol = rhs - lhs
    worst = float(viol.max())
    passed = worst <= tol
    wit = None
    if not passed:
        i, j = np.unravel_index(int(np.argmax(viol)), viol.shape)
        wit = {"x": float(X[i, j]), "y": float(Y[i, j]),
               "f(x+y)": float(lhs[i, j]), "T(f(x),f(y))": float(rhs[i, j])}
    return Verdict(
        name=f"profile_condition[{T.tag}]", passed=passed, tol=tol,
        n_samples=int(viol.size), witness=wit, details={"worst_violation": max(worst, 0.0)},
    )


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


def space_from_config(doc: dict) -> PNSpace:
    """Deterministic construction from the documented config mapping."""
    from .errors import ConfigError

    try:
        carrier = Carrier(**doc["carrier"])
        variant = doc["variant"]
        params = doc.get("params", {})
        if variant == "simple":
            return make_simple(carrier, distfn_from_dict(params["G"]))
        if variant == "alpha_simple":
            return make_alpha_simple(carrier, distfn_from_dict(params["G"]), params["alpha"])
        if variant == "equilateral":
            return make_equilateral(carrier, distfn_from_dict(params["F"]))
        if variant == "profile":
            f = Profile.from_dict(params["f"])
            return make_profile_space(carrier, f, params["T"],
                                      tau_star=params.get("tau_star", "dual"))
        if variant == "custom_table":
            from .tnorms import triangle_from_config

            return make_custom_table(
                carrier,
                params["points"],
                [distfn_from_dict(d) for d in params["distfns"]],
                triangle_from_config(params["tau"]),
                triangle_from_config(params["tau_star"]),
            )
        raise ConfigError(f"unknown space variant {variant!r}")
    except ConfigError:
        raise
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed space config: missing or bad field ({exc})") from exc
