"""The ``qwalk`` command: configure runs, execute walks and sweeps, verify
the two-walker/2D equivalence, and emit distributions and summaries.

Subcommands
-----------
``qwalk run --config cfg.json [--steps N --phi PHI --defect KIND --out DIR]``
    Run one walk; write the final distribution (CSV), optional per-step
    distributions, and a JSON summary.
``qwalk sweep --config cfg.json [--out DIR ...]``
    Run the walk once per grid point (phase values and/or defect kinds);
    write one table row per point.
``qwalk isocheck [--halfwidth L --trials N --seed S --out DIR]``
    Verify the step-operator equivalence on random shared coins and probe
    the coin-decomposition parameter claims; write a JSON report.

Angles anywhere in a config may be plain radians or strings like
``"pi:0.75"`` (multiples of pi, avoiding decimal-pi drift).  Exit codes:
0 success, 1 validation error, 2 runtime error.  Outputs are byte-stable
for a fixed config and seed, except the ``timing_seconds`` field of run
summaries.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any

import numpy as np

from .analysis import Distribution, distribution, l1_distance, summarize
from .coins import fractional_swap, hadamard, su2_from_angles, tensor
from .evolution import MAX_MATRIX_DIM, DefectMap, WalkSpec, evolve
from .statespace import state_dimension
from .isomorphism import (
    check_decomposition_claims,
    check_translation_equivalence,
    random_shared_coin,
    verify_isomorphism,
)

__all__ = ["main"]

ISO_TOL = 1e-12
DEFAULT_SEED = 7
DEFAULT_STEP_CAP = 2000


class ConfigError(ValueError):
    """Invalid configuration; message names the offending key."""


def parse_angle(value: Any, key: str) -> float:
    """Radians from a number or a 'pi:<multiplier>' string."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        if not math.isfinite(value):
            raise ConfigError(f"{key}: angle must be finite, got {value!r}")
        return float(value)
    if isinstance(value, str) and value.startswith("pi:"):
        try:
            mult = float(value[3:])
        except ValueError:
            raise ConfigError(f"{key}: bad pi-multiple {value!r}") from None
        if not math.isfinite(mult):
            raise ConfigError(f"{key}: angle must be finite, got {value!r}")
        return mult * math.pi
    raise ConfigError(f"{key}: expected a number or 'pi:<x>', got {value!r}")


def _parse_coin(cfg: Any, dimensionality: int):
    key = "coin"
    if cfg is None or cfg == "hadamard":
        h = hadamard()
        return h if dimensionality == 1 else tensor(h, h)
    if cfg == "identity":
        return np.eye(2 if dimensionality == 1 else 4, dtype=np.complex128)
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise ConfigError(f"{key}: expected 'hadamard', 'identity', or an object with 'kind'")
    kind = cfg["kind"]
    if kind == "hadamard" or kind == "identity":
        return _parse_coin(kind, dimensionality)
    if kind == "su2":
        if dimensionality != 1:
            raise ConfigError(f"{key}: 'su2' is a 1D coin")
        return su2_from_angles(
            parse_angle(cfg.get("theta", 0.0), "coin.theta"),
            parse_angle(cfg.get("psi", 0.0), "coin.psi"),
            parse_angle(cfg.get("phi", 0.0), "coin.phi"),
        )
    if kind == "tensor":
        if dimensionality != 2:
            raise ConfigError(f"{key}: 'tensor' is a 2D coin")
        return tensor(
            _parse_coin(cfg.get("first", "hadamard"), 1),
            _parse_coin(cfg.get("second", "hadamard"), 1),
        )
    if kind == "fractional_swap":
        if dimensionality != 2:
            raise ConfigError(f"{key}: 'fractional_swap' is a 2D coin")
        tau = cfg.get("tau")
        if not isinstance(tau, (int, float)) or isinstance(tau, bool):
            raise ConfigError(f"{key}.tau: expected a number, got {tau!r}")
        return fractional_swap(float(tau))
    raise ConfigError(f"{key}.kind: unknown coin kind {kind!r}")


def _parse_defect(cfg: Any) -> DefectMap:
    key = "defect"
    if cfg is None or cfg == "none":
        return DefectMap.none()
    if isinstance(cfg, str):
        cfg = {"kind": cfg}
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise ConfigError(f"{key}: expected a kind string or an object with 'kind'")
    kind = cfg["kind"]
    if kind == "none":
        return DefectMap.none()
    if kind in ("line_y", "cross_xy", "point"):
        phi = parse_angle(cfg.get("phi", 0.0), f"{key}.phi")
        return DefectMap(kind, phi)
    if kind == "custom":
        table_cfg = cfg.get("table")
        if not isinstance(table_cfg, dict):
            raise ConfigError(f"{key}.table: expected an object of site -> phase")
        table: dict = {}
        for site, phase in table_cfg.items():
            parts = site.split(",")
            try:
                coords = [int(p) for p in parts]
            except ValueError:
                raise ConfigError(f"{key}.table: bad site key {site!r}") from None
            k = coords[0] if len(coords) == 1 else tuple(coords)
            table[k] = parse_angle(phase, f"{key}.table[{site}]")
        return DefectMap.custom(table)
    raise ConfigError(f"{key}.kind: unknown defect kind {kind!r}")


def _parse_initial(cfg: Any, dimensionality: int):
    if cfg is None:
        cfg = {}
    if not isinstance(cfg, dict):
        raise ConfigError("initial: expected an object")
    position = cfg.get("position")
    if position is not None:
        if dimensionality == 1:
            if not isinstance(position, (int, float)):
                raise ConfigError("initial.position: expected an integer for 1D")
            position = int(position)
        else:
            if not isinstance(position, (list, tuple)) or len(position) != 2:
                raise ConfigError("initial.position: expected [x, y] for 2D")
            position = (int(position[0]), int(position[1]))
    coin = cfg.get("coin", "symmetric")
    if coin == "symmetric":
        coin_vec = None  # WalkSpec default
    elif isinstance(coin, list):
        try:
            coin_vec = [complex(c[0], c[1]) for c in coin]
        except (TypeError, IndexError):
            raise ConfigError(
                "initial.coin: expected 'symmetric' or a list of [re, im] pairs"
            ) from None
    else:
        raise ConfigError("initial.coin: expected 'symmetric' or a list of [re, im] pairs")
    return position, coin_vec


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as f:
            cfg = json.load(f)
    except OSError as e:
        raise ConfigError(f"config: cannot read {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"config: invalid JSON in {path}: {e}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config: top level must be a JSON object")
    return cfg


def _resolve_threads(cfg: dict, args: argparse.Namespace) -> int:
    if getattr(args, "threads", None) is not None:
        raw: Any = args.threads
    elif "threads" in cfg:
        raw = cfg["threads"]
    elif os.environ.get("QWALK_THREADS"):
        raw = os.environ["QWALK_THREADS"]
    else:
        raw = 1
    try:
        threads = int(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"threads: expected an integer, got {raw!r}") from None
    if threads < 1:
        raise ConfigError(f"threads: must be >= 1, got {threads}")
    return threads


def _build_walk_spec(cfg: dict, *, defect: DefectMap | None = None) -> WalkSpec:
    dimensionality = cfg.get("dimensionality", 2)
    if dimensionality not in (1, 2):
        raise ConfigError(f"dimensionality: must be 1 or 2, got {dimensionality!r}")
    steps = cfg.get("steps", 10)
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 0:
        raise ConfigError(f"steps: must be a nonnegative integer, got {steps!r}")
    cap = cfg.get("max_steps", DEFAULT_STEP_CAP)
    if steps > cap:
        raise ConfigError(f"steps: {steps} exceeds the hard cap {cap}")
    halfwidth = cfg.get("halfwidth")
    if halfwidth is not None and (not isinstance(halfwidth, int) or halfwidth < 1):
        raise ConfigError(f"halfwidth: must be a positive integer, got {halfwidth!r}")
    boundary = cfg.get("boundary", "open")
    if boundary not in ("open", "periodic"):
        raise ConfigError(f"boundary: must be 'open' or 'periodic', got {boundary!r}")
    coin = _parse_coin(cfg.get("coin"), dimensionality)
    if defect is None:
        defect = _parse_defect(cfg.get("defect"))
    position, coin_vec = _parse_initial(cfg.get("initial"), dimensionality)
    try:
        return WalkSpec(
            dimensionality=dimensionality,
            steps=steps,
            coin=coin,
            defect=defect,
            initial_position=position,
            initial_coin=coin_vec,
            boundary=boundary,
            halfwidth=halfwidth,
        )
    except (ValueError, IndexError) as e:
        raise ConfigError(f"config: {e}") from None


def _format_prob(p: float) -> str:
    # Output-side clamp only; internal values are never touched.
    if p < 1e-15:
        p = 0.0
    return f"{p:.12g}"


def write_distribution_csv(path: Path, dist: Distribution) -> None:
    sites = dist.positions()
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        if dist.dimensionality == 1:
            w.writerow(["x", "p"])
            for i, x in enumerate(sites):
                w.writerow([x, _format_prob(float(dist.probs[i]))])
        else:
            w.writerow(["x", "y", "p"])
            for i, x in enumerate(sites):
                for j, y in enumerate(sites):
                    w.writerow([x, y, _format_prob(float(dist.probs[i, j]))])


def read_distribution_csv(path: str) -> Distribution:
    """Parse a distribution CSV with header ``x,p`` or ``x,y,p``."""
    try:
        with open(path, newline="", encoding="utf-8") as f:
            rows = list(csv.reader(f))
    except OSError as e:
        raise ConfigError(f"reference: cannot read {path}: {e}") from None
    if not rows or rows[0] not in (["x", "p"], ["x", "y", "p"]):
        raise ConfigError(f"reference: {path} must have header 'x,p' or 'x,y,p'")
    dim = len(rows[0]) - 1
    entries = []
    for row in rows[1:]:
        if not row:
            continue
        coords = [int(v) for v in row[:dim]]
        entries.append((coords, float(row[dim])))
    if not entries:
        raise ConfigError(f"reference: {path} contains no data rows")
    halfwidth = max(max(abs(c) for c in coords) for coords, _ in entries)
    n = 2 * halfwidth + 1
    probs = np.zeros((n,) if dim == 1 else (n, n))
    for coords, p in entries:
        idx = tuple(c + halfwidth for c in coords)
        probs[idx] = p
    try:
        return Distribution(probs, halfwidth)
    except ValueError as e:
        raise ConfigError(f"reference: {path}: {e}") from None


def _echo_config(cfg: dict, spec: WalkSpec, threads: int) -> dict:
    return {
        "dimensionality": spec.dimensionality,
        "steps": spec.steps,
        "halfwidth": spec.halfwidth,
        "boundary": spec.boundary,
        "coin": cfg.get("coin", "hadamard"),
        "defect": {"kind": spec.defect.kind, "phi": spec.defect.phi},
        "initial": cfg.get("initial", {"position": None, "coin": "symmetric"}),
        "threads": threads,
    }


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _load_config_file(args.config)
    _apply_overrides(cfg, args)
    threads = _resolve_threads(cfg, args)
    spec = _build_walk_spec(cfg)
    out_dir = Path(cfg.get("out_dir", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    formats = cfg.get("formats", ["csv", "json"])
    emit_per_step = bool(cfg.get("emit_per_step", False))
    reference = None
    if getattr(args, "reference", None) or cfg.get("reference"):
        reference = read_distribution_csv(args.reference or cfg["reference"])

    t0 = time.perf_counter()
    per_step: list[dict] = []
    final_state = spec.initial_state()
    for report in evolve(spec):
        final_state = report.state
        s = summarize(report.step, report.state)
        per_step.append(
            {
                "step": s.step,
                "recurrence": s.recurrence,
                "variance_x": s.variance_x,
                "variance_y": s.variance_y,
                "norm_residual": report.norm_residual,
            }
        )
        if emit_per_step and "csv" in formats:
            write_distribution_csv(
                out_dir / f"step_{report.step:04d}.csv", distribution(report.state)
            )
    elapsed = time.perf_counter() - t0

    final_dist = distribution(final_state)
    if "csv" in formats:
        write_distribution_csv(out_dir / "distribution.csv", final_dist)
    final = per_step[-1] if per_step else None
    s_t = None if reference is None else l1_distance(final_dist, reference)
    if "json" in formats:
        _write_json(
            out_dir / "summary.json",
            {
                "config": _echo_config(cfg, spec, threads),
                "per_step": per_step,
                "final": {
                    "recurrence": final["recurrence"] if final else None,
                    "variance_x": final["variance_x"] if final else None,
                    "variance_y": final["variance_y"] if final else None,
                    "s_t": s_t,
                },
                "timing_seconds": elapsed,
            },
        )
    if final is not None:
        print(f"steps={spec.steps} P(origin)={final['recurrence']:.6f} out={out_dir}")
    else:
        print(f"steps=0 (initial state only) out={out_dir}")
    return 0


def _apply_overrides(cfg: dict, args: argparse.Namespace) -> None:
    if getattr(args, "steps", None) is not None:
        cfg["steps"] = args.steps
    if getattr(args, "defect", None) is not None:
        base = cfg.get("defect")
        phi = base.get("phi", 0.0) if isinstance(base, dict) else 0.0
        cfg["defect"] = {"kind": args.defect, "phi": phi}
    if getattr(args, "phi", None) is not None:
        base = cfg.get("defect", "none")
        if isinstance(base, str):
            base = {"kind": base}
        if base.get("kind", "none") == "none":
            raise ConfigError("--phi: set a defect kind first (config or --defect)")
        base["phi"] = args.phi
        cfg["defect"] = base
    if getattr(args, "out", None) is not None:
        cfg["out_dir"] = args.out


def _sweep_point(cfg: dict, kind: str, phi_token: Any) -> dict:
    phi = parse_angle(phi_token, "sweep.phi")
    defect = DefectMap.none() if kind == "none" else DefectMap(kind, phi)  # type: ignore[arg-type]
    spec = _build_walk_spec(cfg, defect=defect)
    final = spec.initial_state()
    for report in evolve(spec):
        final = report.state
    s = summarize(spec.steps, final)
    return {
        "defect": kind,
        "phi": phi_token,
        "recurrence": s.recurrence,
        "variance_x": s.variance_x,
        "variance_y": s.variance_y,
    }


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _load_config_file(args.config)
    _apply_overrides(cfg, args)
    threads = _resolve_threads(cfg, args)
    sweep = cfg.get("sweep")
    if not isinstance(sweep, dict):
        raise ConfigError("sweep: config must contain a 'sweep' object")
    phis = sweep.get("phi")
    if getattr(args, "phi", None) is not None:
        phis = [args.phi]
    if not isinstance(phis, list) or not phis:
        raise ConfigError("sweep.phi: expected a nonempty list of angles")
    kinds = sweep.get("defect")
    if kinds is None:
        base = cfg.get("defect", "cross_xy")
        kinds = [base["kind"] if isinstance(base, dict) else base]
    if not isinstance(kinds, list) or not kinds:
        raise ConfigError("sweep.defect: expected a nonempty list of defect kinds")
    for kind in kinds:
        if kind not in ("line_y", "cross_xy", "point", "none"):
            raise ConfigError(f"sweep.defect: unknown defect kind {kind!r}")

    out_dir = Path(cfg.get("out_dir", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    points = [(kind, phi) for kind in kinds for phi in phis]
    # Points are independent; output order follows the grid regardless of
    # scheduling.
    with ThreadPoolExecutor(max_workers=threads) as pool:
        rows = list(pool.map(lambda kp: _sweep_point(cfg, *kp), points))

    path = out_dir / "sweep.csv"
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["defect", "phi", "recurrence", "variance_x", "variance_y"])
        for row in rows:
            w.writerow(
                [
                    row["defect"],
                    row["phi"],
                    _format_prob(row["recurrence"]),
                    f"{row['variance_x']:.12g}",
                    "" if row["variance_y"] is None else f"{row['variance_y']:.12g}",
                ]
            )
    print(f"sweep points={len(rows)} out={path}")
    return 0


def cmd_isocheck(args: argparse.Namespace) -> int:
    cfg = _load_config_file(args.config)
    halfwidth = args.halfwidth if args.halfwidth is not None else cfg.get("halfwidth", 2)
    trials = args.trials if args.trials is not None else cfg.get("trials", 50)
    seed = args.seed if args.seed is not None else cfg.get("seed", DEFAULT_SEED)
    if not isinstance(halfwidth, int) or halfwidth < 1:
        raise ConfigError(f"halfwidth: must be a positive integer, got {halfwidth!r}")
    if not isinstance(trials, int) or trials < 1:
        raise ConfigError(f"trials: must be a positive integer, got {trials!r}")
    if state_dimension(2, halfwidth) > MAX_MATRIX_DIM:
        raise ConfigError(
            f"halfwidth: matrix dimension {state_dimension(2, halfwidth)} "
            f"exceeds cap {MAX_MATRIX_DIM}"
        )
    out_dir = Path(args.out if args.out is not None else cfg.get("out_dir", "."))
    out_dir.mkdir(parents=True, exist_ok=True)

    rng = np.random.default_rng(seed)
    h2 = tensor(hadamard(), hadamard())
    named = {
        "hadamard_pair": verify_isomorphism(halfwidth, h2),
        "fractional_swap_half": verify_isomorphism(halfwidth, fractional_swap(0.5)),
    }
    trial_devs = [
        verify_isomorphism(halfwidth, random_shared_coin(rng)) for _ in range(trials)
    ]
    translation = check_translation_equivalence(halfwidth)
    claims = check_decomposition_claims(seed=seed)
    max_dev = max(max(named.values()), max(trial_devs), translation)
    passed = max_dev < ISO_TOL

    _write_json(
        out_dir / "isocheck.json",
        {
            "halfwidth": halfwidth,
            "trials": trials,
            "seed": seed,
            "tolerance": ISO_TOL,
            "translation_deviation": translation,
            "named_coin_deviations": named,
            "max_trial_deviation": max(trial_devs),
            "max_deviation": max_dev,
            "passed": passed,
            "decomposition_claims": claims,
        },
    )
    print(
        f"isocheck halfwidth={halfwidth} trials={trials} "
        f"max_deviation={max_dev:.3e} passed={passed}"
    )
    return 0 if passed else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwalk",
        description="Coined quantum walks on 1D/2D lattices with phase defects.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one walk and write its outputs")
    sweep = sub.add_parser("sweep", help="run a grid of walks, one table row each")
    iso = sub.add_parser("isocheck", help="verify the two-walker/2D equivalence")

    for p in (run, sweep):
        p.add_argument("--config", help="JSON config path")
        p.add_argument("--steps", type=int, help="override step count")
        p.add_argument(
            "--phi",
            type=lambda s: s if s.startswith("pi:") else float(s),
            help="override defect phase (radians or pi:<x>)",
        )
        p.add_argument("--defect", help="override defect kind")
        p.add_argument("--out", help="override output directory")
        p.add_argument("--threads", type=int, help="parallelism cap (or QWALK_THREADS)")
    run.add_argument("--reference", help="distribution CSV for the 1-norm discrepancy")

    iso.add_argument("--config", help="JSON config path")
    iso.add_argument("--halfwidth", "-L", type=int, help="lattice halfwidth (default 2)")
    iso.add_argument("--trials", type=int, help="random shared coins (default 50)")
    iso.add_argument("--seed", type=int, help=f"RNG seed (default {DEFAULT_SEED})")
    iso.add_argument("--out", help="output directory")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 1
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        return cmd_isocheck(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # simulation/runtime failures
        print(f"runtime error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
