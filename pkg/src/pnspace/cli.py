"""Command-line front end.

Subcommands construct a space (or distribution functions) from a JSON config
and write one deterministic JSON report per run; trajectory and profile
curves go to CSV files when ``--plot`` is given.  Exit codes: 0 when the
run produced verdicts (passing or failing), 2 for config errors, 3 for
theorem-precondition failures (the report names the failed hypothesis).
Timestamps live in a separate ``run_meta.json`` side file so reports from
identical configs and seeds are byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .boundedness import (
    SetSpec,
    ball,
    boundedness_equivalence_harness,
    finite,
    whole_space,
)
from .distfun import distfn_from_dict, sibley_distance
from .errors import ConfigError, PNSpaceError, PreconditionError
from .normability import kolmogorov_certificate
from .spaces import check_axioms, check_serstnev, is_characteristic, space_from_config
from .tnorms import triangle_from_config
from .topology import tv_continuity_check
from .verdicts import SamplePlan, _jsonable

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PRECONDITION = 3


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    return doc


def _config_hash(doc: dict) -> str:
    canon = json.dumps(_jsonable(doc), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _build_plan(doc: dict, args) -> SamplePlan:
    overrides = dict(doc.get("plan", {}))
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.n_max is not None:
        overrides["n_max"] = args.n_max
    if args.tol is not None:
        overrides["tol"] = args.tol
    try:
        return SamplePlan(**overrides)
    except TypeError as exc:
        raise ConfigError(f"bad plan override: {exc}")


def _space_from(doc: dict):
    if "space" not in doc:
        raise ConfigError("config must contain a 'space' object")
    return space_from_config(doc["space"])


def _write_report(out_dir: Path, command: str, config: dict, plan: SamplePlan | None,
                  results: dict, artifacts: dict | None = None) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    report = {
        "command": command,
        "config": _jsonable(config),
        "config_sha256": _config_hash(config),
        "seed": plan.seed if plan else None,
        "tolerances": plan.to_dict() if plan else None,
        "version": __version__,
        "results": _jsonable(results),
        "artifacts": _jsonable(artifacts or {}),
    }
    path = out_dir / "report.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
        fh.write("\n")
    meta = {"written_at_unix": time.time()}
    with open(out_dir / "run_meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    return path


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.12g}" if isinstance(v, float) else str(v)
                              for v in row) + "\n")


def _trajectory_csvs(out_dir: Path, results: dict) -> dict:
    artifacts = {}
    for key, doc in results.items():
        traj = None
        if isinstance(doc, dict):
            traj = doc.get("details", {}).get("trajectory") or \
                doc.get("details", {}).get("worst_trajectory")
        if traj:
            name = f"{key}_trajectory.csv"
            _write_csv(out_dir / name, ["n", "sibley_distance"],
                       [(int(n), float(d)) for n, d in traj])
            artifacts[key] = name
    return artifacts


def _cmd_axioms(doc, plan, out_dir, plot):
    space = _space_from(doc)
    report = check_axioms(space, plan)
    results = {
        "space": space.label,
        "axioms": report.to_dict(),
        "serstnev": check_serstnev(space, plan).to_dict(),
        "characteristic": is_characteristic(space, plan).to_dict(),
    }
    return results, {}


def _cmd_tv(doc, plan, out_dir, plot):
    space = _space_from(doc)
    verdict = tv_continuity_check(space, plan)
    results = {"space": space.label, "tv_continuity": verdict.to_dict()}
    artifacts = _trajectory_csvs(out_dir, results) if plot else {}
    return results, artifacts


def _default_panel(dim: int) -> list[SetSpec]:
    theta = [0.0] * dim
    e0 = [1.0] + [0.0] * (dim - 1)
    return [
        ball(theta, 1.0),
        ball(theta, 100.0),
        finite([theta]),
        finite([e0, [-v for v in e0], theta]),
        whole_space(),
        SetSpec("generator", scale=1.0, power=2.0, count=64, seed=7),
    ]


def _cmd_bounded(doc, plan, out_dir, plot):
    space = _space_from(doc)
    if "panel" in doc:
        panel = [SetSpec.from_dict(d) for d in doc["panel"]]
    else:
        panel = _default_panel(space.carrier.dim)
    report = boundedness_equivalence_harness(space, panel, plan)
    results = {"space": space.label, "boundedness_equivalence": report.to_dict()}
    return results, {}


def _cmd_normability(doc, plan, out_dir, plot):
    space = _space_from(doc)
    t_grid = doc.get("t_grid")
    cert = kolmogorov_certificate(space, t_grid, plan)
    results = {"space": space.label, "certificate": cert.to_dict()}
    return results, {}


def _cmd_convolve(doc, plan, out_dir, plot):
    spec = doc.get("convolve")
    if not isinstance(spec, dict):
        raise ConfigError("convolve runs need a 'convolve' object in the config")
    try:
        tri = triangle_from_config(spec["triangle"])
        F = distfn_from_dict(spec["F"])
        G = distfn_from_dict(spec["G"])
        xs = np.asarray(spec["x"], dtype=float)
    except KeyError as exc:
        raise ConfigError(f"convolve config misses field {exc}")
    vals = tri.eval_grid(F, G, xs)
    table = [[float(x), float(v)] for x, v in zip(xs, vals)]
    results = {"triangle": tri.label, "table": table}
    artifacts = {}
    if plot:
        _write_csv(out_dir / "convolution.csv", ["x", "value"], table)
        artifacts["convolution"] = "convolution.csv"
    return results, artifacts


def _cmd_distance(doc, plan, out_dir, plot):
    spec = doc.get("distance")
    if not isinstance(spec, dict):
        raise ConfigError("distance runs need a 'distance' object in the config")
    try:
        F = distfn_from_dict(spec["F"])
        G = distfn_from_dict(spec["G"])
    except KeyError as exc:
        raise ConfigError(f"distance config misses field {exc}")
    results = {"sibley_distance": sibley_distance(F, G)}
    return results, {}


COMMANDS = {
    "axioms": _cmd_axioms,
    "tv": _cmd_tv,
    "bounded": _cmd_bounded,
    "normability": _cmd_normability,
    "convolve": _cmd_convolve,
    "distance": _cmd_distance,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pnspace",
        description="Numerical checks and certificates for probabilistic normed spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to the JSON run config")
        p.add_argument("--seed", type=int, default=None, help="override the plan seed")
        p.add_argument("--out", default="out", help="output directory for reports")
        p.add_argument("--n-max", type=int, default=None, help="override trajectory horizon")
        p.add_argument("--tol", type=float, default=None, help="override the base tolerance")
        p.add_argument("--plot", action="store_true", help="emit CSV plot data")
    args = parser.parse_args(argv)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        doc = _load_config(args.config)
        plan = _build_plan(doc, args)
        results, artifacts = COMMANDS[args.command](doc, plan, out_dir, args.plot)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PreconditionError as exc:
        print(f"precondition failed: {exc.hypothesis}: {exc}", file=sys.stderr)
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "precondition.json", "w", encoding="utf-8") as fh:
            json.dump(_jsonable({"hypothesis": exc.hypothesis, "message": str(exc),
                                 "details": exc.details}), fh, sort_keys=True, indent=2)
            fh.write("\n")
        return EXIT_PRECONDITION
    except PNSpaceError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    path = _write_report(out_dir, args.command, doc, plan, results, artifacts)
    print(f"report written to {path}")
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
