"""Structured outcomes of numerical checks, plus the sampling plan they share.

Every check in this package returns a :class:`Verdict` (or a small aggregate
of them) rather than a bare boolean: a verdict records pass/fail, the
tolerance it was judged at, the seed that generated its samples, and a
witness when it fails.  Verdicts serialize to plain dicts for the report
files written by the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from typing import Any

import numpy as np

from .errors import DomainError

#: Wording required on every normability certificate: these checks sample
#: finitely many points and certify nothing beyond that evidence.
CAVEAT = "numerical evidence, not proof"


def _jsonable(value):
    """Recursively convert numpy scalars/arrays so json.dumps accepts them."""
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, float) and (value != value):  # NaN
        return None
    return value


@dataclass
class Verdict:
    """Outcome of one numerical check.

    A failing verdict must carry a witness describing the violation; the
    constructor enforces this so downstream reports are never witness-free.
    """

    name: str
    passed: bool
    tol: float
    seed: int | None = None
    n_samples: int | None = None
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError(f"failing verdict {self.name!r} requires a witness")

    def to_dict(self) -> dict[str, Any]:
        return _jsonable(asdict(self))

    def __bool__(self):
        return self.passed


@dataclass
class AxiomReport:
    """Per-axiom verdicts for the four probabilistic-norm axioms."""

    n1: Verdict
    n2: Verdict
    n3: Verdict
    n4: Verdict

    @property
    def passed(self) -> bool:
        return all(v.passed for v in (self.n1, self.n2, self.n3, self.n4))

    @property
    def worst_violation(self) -> float:
        return max(
            v.details.get("worst_violation", 0.0) for v in (self.n1, self.n2, self.n3, self.n4)
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "worst_violation": _jsonable(self.worst_violation),
            "n1": self.n1.to_dict(),
            "n2": self.n2.to_dict(),
            "n3": self.n3.to_dict(),
            "n4": self.n4.to_dict(),
        }


@dataclass
class NormabilityCertificate:
    """Result of scanning neighborhoods of the origin for Kolmogorov's test.

    ``verdict`` is one of ``evidence-normable``, ``evidence-not-normable``,
    ``inconclusive``.  ``evidence-normable`` always names a witness ``t``
    whose convexity and boundedness sub-verdicts both passed.  The ``caveat``
    field is mandatory in serialized output.
    """

    verdict: str
    method: str
    witness_t: float | None
    per_t: list[dict]
    caveat: str = CAVEAT

    def __post_init__(self):
        if self.verdict not in ("evidence-normable", "evidence-not-normable", "inconclusive"):
            raise ValueError(f"unknown certificate verdict {self.verdict!r}")
        if self.verdict == "evidence-normable":
            if self.witness_t is None:
                raise ValueError("evidence-normable certificate requires a witness t")
            entry = next(e for e in self.per_t if e["t"] == self.witness_t)
            if not (entry["convexity"]["passed"] and entry["bounded"]["passed"]):
                raise ValueError("witness t does not have passing sub-verdicts")
        if not self.caveat:
            raise ValueError("certificate caveat must be present")

    def to_dict(self) -> dict[str, Any]:
        return _jsonable(
            {
                "verdict": self.verdict,
                "method": self.method,
                "witness_t": self.witness_t,
                "caveat": self.caveat,
                "per_t": self.per_t,
            }
        )


def _default_x_grid() -> np.ndarray:
    return np.logspace(-3.0, 3.0, 64)


def _default_lambda_grid() -> np.ndarray:
    return np.linspace(0.0, 1.0, 17)


@dataclass
class SamplePlan:
    """Sampling plan shared by the axiom, topology and boundedness checks.

    Fields cover: the RNG seed (recorded in every verdict), how many vectors
    to draw, the evaluation grids, base tolerance ``tol`` for exact
    comparisons, optional override ``conv_tol`` for convolution-backed
    comparisons (auto-selected per space when ``None``), and the trajectory
    controls for convergence checks (``n_max`` sequence horizon on a
    geometric index grid of ``traj_points`` entries, acceptance threshold
    ``traj_tol``, trajectories judged on the last quarter ``[3·n_max/4,
    n_max]``).  The horizon default is large because trajectory cost is
    independent of it while Sibley distances of fractional-exponent spaces
    decay like ``n ** (-alpha/2)``.
    """

    seed: int = 0
    n_vectors: int = 32
    x_grid: np.ndarray = field(default_factory=_default_x_grid)
    lambda_grid: np.ndarray = field(default_factory=_default_lambda_grid)
    scalar_grid: tuple = (0.25, 0.5, 2.0, 3.0, -1.5, -3.0)
    tol: float = 1e-6
    conv_tol: float | None = None
    tol_tail: float = 1e-9
    n_max: int = 10**14
    traj_tol: float = 1e-3
    traj_points: int = 1024
    n_pairs: int = 1000
    n_set_samples: int = 512
    max_vector_norm: float = 4.0

    def __post_init__(self):
        if self.n_max < 10:
            raise DomainError("plan.n_max must be at least 10")
        if self.tol <= 0 or self.traj_tol <= 0:
            raise DomainError("plan tolerances must be positive")
        self.x_grid = np.asarray(self.x_grid, dtype=float)
        self.lambda_grid = np.asarray(self.lambda_grid, dtype=float)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def vectors(self, dim: int, n: int | None = None, rng=None) -> np.ndarray:
        """Draw ``n`` nonzero sample vectors with norms capped for stable floors."""
        n = self.n_vectors if n is None else n
        rng = self.rng() if rng is None else rng
        pts = rng.standard_normal((n, dim)) * rng.uniform(0.25, 2.0, size=(n, 1))
        norms = np.linalg.norm(pts, axis=1, keepdims=True)
        norms = np.where(norms == 0.0, 1.0, norms)
        scale = np.minimum(1.0, self.max_vector_norm / norms)
        pts = pts * scale
        return pts

    def index_grid(self, n_max: int | None = None) -> np.ndarray:
        """Geometric grid of sequence indices 1..n_max plus a dense last quarter."""
        n_max = self.n_max if n_max is None else n_max
        geo = np.unique(
            np.geomspace(1.0, float(n_max), self.traj_points).astype(np.int64)
        )
        tail = np.unique(
            np.linspace(max(1, (3 * n_max) // 4), n_max, 17).astype(np.int64)
        )
        return np.union1d(geo, tail)

    def to_dict(self) -> dict[str, Any]:
        return _jsonable(
            {
                "seed": self.seed,
                "n_vectors": self.n_vectors,
                "x_grid": [float(self.x_grid[0]), float(self.x_grid[-1]), len(self.x_grid)],
                "lambda_grid_points": len(self.lambda_grid),
                "tol": self.tol,
                "conv_tol": self.conv_tol,
                "tol_tail": self.tol_tail,
                "n_max": self.n_max,
                "traj_tol": self.traj_tol,
                "traj_points": self.traj_points,
                "n_pairs": self.n_pairs,
                "n_set_samples": self.n_set_samples,
            }
        )
