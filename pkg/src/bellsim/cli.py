"""Command-line interface.

Subcommands: spin-correlation, mc-run, ball-protocol, common-cause,
chsh.  Configuration precedence is flags over config-file values over
defaults; the resolved configuration is embedded in every report's
manifest and can be fed back via --config to reproduce the run.

Exit codes: 0 when all embedded checks pass, 1 when a check fails or
the run hits a data-level error (such as an empty registered set), 2
for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import ballprotocol as bp
from . import commoncause as cc
from . import montecarlo as mc
from .errors import (
    BellsimError,
    ConditioningUndefinedError,
    EmptyReportError,
    ValidationError,
)
from .report import Check, build_report, render_json, render_text
from .spinmodel import (
    Description,
    Direction,
    HiddenVariable,
    angle_between,
    quantum_correlation,
    subquantum_correlation,
)


class UsageError(Exception):
    """Bad flags or configuration; maps to exit code 2."""


def parse_angle(text: str) -> float:
    """An angle with an explicit unit suffix, e.g. '60deg' or '1.047rad'."""
    t = str(text).strip().lower()
    for suffix, factor in (("deg", math.pi / 180.0), ("rad", 1.0)):
        if t.endswith(suffix):
            try:
                return float(t[: -len(suffix)]) * factor
            except ValueError as exc:
                raise UsageError(f"malformed angle {text!r}") from exc
    raise UsageError(f"angle {text!r} needs an explicit 'deg' or 'rad' suffix")


def parse_sweep(text: str) -> dict:
    """A 'start:stop:step' angle sweep with one unit suffix, e.g. '0:180:5deg'."""
    t = str(text).strip().lower()
    unit = next((s for s in ("deg", "rad") if t.endswith(s)), None)
    if unit is None:
        raise UsageError(f"sweep {text!r} needs an explicit 'deg' or 'rad' suffix")
    parts = t[: -len(unit)].split(":")
    if len(parts) != 3:
        raise UsageError(f"sweep {text!r} must be start:stop:step with a unit suffix")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"malformed sweep {text!r}") from exc
    if unit == "deg":
        start, stop, step = (math.radians(v) for v in (start, stop, step))
    if step <= 0.0 or stop < start:
        raise UsageError("sweep needs step > 0 and stop >= start")
    return {"start": start, "stop": stop, "step": step}


def sweep_values(sweep: dict) -> list[float]:
    start, stop, step = sweep["start"], sweep["stop"], sweep["step"]
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must contain a JSON object")
    return data


def _resolve(defaults: dict, file_cfg: dict, cli_cfg: dict) -> dict:
    unknown = set(file_cfg) - set(defaults)
    if unknown:
        raise UsageError(f"unknown config fields: {sorted(unknown)}")
    resolved = dict(defaults)
    resolved.update(file_cfg)
    resolved.update({k: v for k, v in cli_cfg.items() if v is not None})
    return resolved


def _require_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise UsageError(f"{name} must be a positive integer, got {value!r}")
    return value


def _emit(report: dict, ns: argparse.Namespace) -> int:
    text = render_json(report) if ns.format == "json" else render_text(report)
    if ns.out:
        Path(ns.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0 if report["passed"] else 1


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (64-bit)")
    parser.add_argument("--trials", type=int, default=None, help="number of trials")
    parser.add_argument("--workers", type=int, default=None,
                        help="worker count; results are identical for any value")
    parser.add_argument("--config", default=None, metavar="FILE",
                        help="JSON config file (flags override it)")
    parser.add_argument("--out", default=None, metavar="PATH",
                        help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "text"), default="text",
                        help="report format (default: text)")
    parser.add_argument("--no-timestamp", action="store_true",
                        help="omit the manifest timestamp (byte-stable output)")


# ---------------------------------------------------------------------------
# spin-correlation


SPIN_DEFAULTS = {"phi": None, "sweep": None}


def cmd_spin_correlation(ns: argparse.Namespace) -> int:
    cli_cfg = {
        "phi": [parse_angle(p) for p in ns.phi] if ns.phi else None,
        "sweep": parse_sweep(ns.sweep) if ns.sweep else None,
    }
    cfg = _resolve(SPIN_DEFAULTS, _load_config_file(ns.config), cli_cfg)
    if cfg["phi"] is None and cfg["sweep"] is None:
        raise UsageError("spin-correlation needs --phi or --sweep")

    def evaluate(phi: float) -> dict:
        axis1, axis2 = Direction(0.0), Direction(phi)
        return {
            "phi": phi,
            "phi_degrees": math.degrees(phi),
            "quantum_correlation": quantum_correlation(axis1, axis2),
            "subquantum_correlation": {
                "plus": subquantum_correlation(HiddenVariable(axis1, 1), axis1, axis2),
                "minus": subquantum_correlation(HiddenVariable(axis1, -1), axis1, axis2),
            },
        }

    results: dict = {}
    outputs: dict = {}
    if cfg["phi"] is not None:
        results["angles"] = [evaluate(float(p)) for p in cfg["phi"]]
    if cfg["sweep"] is not None:
        values = sweep_values(cfg["sweep"])
        rows = [(phi, quantum_correlation(Direction(0.0), Direction(phi))) for phi in values]
        results["sweep"] = {
            "rows": [[phi, corr] for phi, corr in rows],
            "row_count": len(rows),
        }
        if ns.sweep_out:
            with open(ns.sweep_out, "w", encoding="utf-8") as fh:
                for phi, corr in rows:
                    fh.write(f"{phi!r} {corr!r}\n")
            outputs["sweep_data"] = ns.sweep_out

    report = build_report(
        "spin-correlation", cfg, results, checks=[], seed=None,
        outputs=outputs, timestamp=not ns.no_timestamp,
    )
    return _emit(report, ns)


# ---------------------------------------------------------------------------
# mc-run


MC_DEFAULTS = {
    "theta1": 0.0,
    "theta2": 0.0,
    "trials": 1_000_000,
    "seed": 0,
    "description": "alice",
}


def _mc_single(cfg: dict, description: Description, workers: int) -> tuple[dict, list[Check]]:
    axis1, axis2 = Direction(cfg["theta1"]), Direction(cfg["theta2"])
    config = mc.ExperimentConfig(
        axis1, axis2, cfg["trials"], description, cfg["seed"],
        stream_id=0 if description is Description.ALICE else 1,
    )
    stats = mc.run_experiment(config, workers=workers)
    analytic = quantum_correlation(axis1, axis2, description)
    tol = mc.covariance_tolerance(analytic, cfg["trials"])
    error = abs(stats.covariance - analytic)
    results = {
        "description": description.value,
        "phi": angle_between(axis1, axis2),
        "analytic": analytic,
        "stats": stats.to_json_dict(),
        "error": error,
        "tolerance": tol,
    }
    checks = [
        Check(
            f"{description.value}: empirical covariance matches analytic",
            error <= tol, value=stats.covariance, target=analytic, tolerance=tol,
        )
    ]
    return results, checks


def cmd_mc_run(ns: argparse.Namespace) -> int:
    cli_cfg = {
        "theta1": parse_angle(ns.theta1) if ns.theta1 else None,
        "theta2": parse_angle(ns.theta2) if ns.theta2 else None,
        "trials": ns.trials,
        "seed": ns.seed,
        "description": ns.description,
    }
    if ns.phi:
        if ns.theta1 or ns.theta2:
            raise UsageError("--phi is a shorthand for --theta1 0rad --theta2 PHI; "
                             "do not combine them")
        cli_cfg["theta1"] = 0.0
        cli_cfg["theta2"] = parse_angle(ns.phi)
    cfg = _resolve(MC_DEFAULTS, _load_config_file(ns.config), cli_cfg)
    _require_positive_int(cfg["trials"], "trials")
    workers = _require_positive_int(ns.workers if ns.workers is not None else 1, "workers")
    if cfg["description"] not in ("alice", "bob", "both"):
        raise UsageError("description must be alice, bob or both")

    outputs: dict = {}
    if cfg["description"] == "both":
        if ns.csv_out:
            raise UsageError("per-trial CSV output requires a single description")
        comparison = mc.description_equivalence(
            Direction(cfg["theta1"]), Direction(cfg["theta2"]),
            cfg["trials"], cfg["seed"], workers=workers,
        )
        results = {"equivalence": comparison.to_json_dict()}
        checks = [
            Check("alice covariance matches analytic",
                  abs(comparison.alice.covariance - comparison.analytic)
                  <= comparison.tolerance,
                  value=comparison.alice.covariance, target=comparison.analytic,
                  tolerance=comparison.tolerance),
            Check("bob covariance matches analytic",
                  abs(comparison.bob.covariance - comparison.analytic)
                  <= comparison.tolerance,
                  value=comparison.bob.covariance, target=comparison.analytic,
                  tolerance=comparison.tolerance),
            Check("descriptions agree with each other",
                  comparison.discrepancy <= comparison.combined_tolerance,
                  value=comparison.discrepancy, target=0.0,
                  tolerance=comparison.combined_tolerance),
        ]
    else:
        description = Description(cfg["description"])
        if ns.csv_out:
            config = mc.ExperimentConfig(
                Direction(cfg["theta1"]), Direction(cfg["theta2"]), cfg["trials"],
                description, cfg["seed"],
                stream_id=0 if description is Description.ALICE else 1,
            )
            _, arrays = mc.run_experiment_records(config)
            mc.write_trials_csv(ns.csv_out, arrays)
            outputs["trials_csv"] = ns.csv_out
        results, checks = _mc_single(cfg, description, workers)

    report = build_report(
        "mc-run", cfg, results, checks, seed=cfg["seed"],
        outputs=outputs, timestamp=not ns.no_timestamp,
    )
    return _emit(report, ns)


# ---------------------------------------------------------------------------
# ball-protocol


BALL_DEFAULTS = {
    "stage": None,
    "all_stages": False,
    "alice_filter": None,
    "bob_filter": None,
    "trials": 1_000_000,
    "seed": 0,
    "p_stage1": 0.15,
    "p_stage23": 0.04,
    "filter_mismatch_prob": 0.0,
    "mode": "empirical",
}


def _stage_checks(report: bp.AggregateReport, config: bp.StageConfig) -> list[Check]:
    analytic = bp.analytic_stage_report(config)
    tol = 4.0 / math.sqrt(config.trials)
    checks = []
    for pair in bp.SIGN_PAIRS:
        label = f"{'+' if pair[0] > 0 else '-'}{'+' if pair[1] > 0 else '-'}"
        emp, ana = report.joint_freq[pair], analytic.joint_freq[pair]
        checks.append(
            Check(f"stage {config.stage} joint frequency {label} matches analytic",
                  abs(emp - ana) <= tol, value=emp, target=ana, tolerance=tol)
        )
    checks.append(
        Check(f"stage {config.stage} correlation matches analytic",
              abs(report.correlation - analytic.correlation) <= tol,
              value=report.correlation, target=analytic.correlation, tolerance=tol)
    )
    return checks


def cmd_ball_protocol(ns: argparse.Namespace) -> int:
    cli_cfg = {
        "stage": ns.stage,
        "all_stages": True if ns.all_stages else None,
        "alice_filter": ns.alice_filter,
        "bob_filter": ns.bob_filter,
        "trials": ns.trials,
        "seed": ns.seed,
        "p_stage1": ns.p1,
        "p_stage23": ns.p23,
        "filter_mismatch_prob": ns.mismatch_prob,
        "mode": ns.mode,
    }
    cfg = _resolve(BALL_DEFAULTS, _load_config_file(ns.config), cli_cfg)
    _require_positive_int(cfg["trials"], "trials")
    workers = _require_positive_int(ns.workers if ns.workers is not None else 1, "workers")
    if cfg["mode"] not in ("empirical", "analytic"):
        raise UsageError("mode must be empirical or analytic")
    if cfg["all_stages"]:
        if cfg["stage"] is not None or cfg["alice_filter"] or cfg["bob_filter"]:
            raise UsageError("--all-stages uses the canonical stage filters; "
                             "drop --stage and the filter flags")
        stages = [1, 2, 3]
    else:
        if cfg["stage"] is None:
            raise UsageError("ball-protocol needs --stage or --all-stages")
        if cfg["stage"] not in (1, 2, 3):
            raise UsageError("stage must be 1, 2 or 3")
        stages = [cfg["stage"]]

    def stage_config(stage: int) -> bp.StageConfig:
        try:
            return bp.StageConfig(
                stage=stage,
                alice_filter=cfg["alice_filter"] if not cfg["all_stages"] else None,
                bob_filter=cfg["bob_filter"] if not cfg["all_stages"] else None,
                trials=cfg["trials"],
                seed=cfg["seed"],
                p_stage1=cfg["p_stage1"],
                p_stage23=cfg["p_stage23"],
                filter_mismatch_prob=cfg["filter_mismatch_prob"],
            )
        except ValidationError as exc:
            raise UsageError(str(exc)) from exc

    if ns.csv_out and (len(stages) != 1 or cfg["mode"] != "empirical"):
        raise UsageError("per-trial CSV output requires a single empirical stage")

    outputs: dict = {}
    checks: list[Check] = []
    stage_reports = []
    for stage in stages:
        config = stage_config(stage)
        if cfg["mode"] == "analytic":
            stage_reports.append(bp.analytic_stage_report(config))
        elif ns.csv_out:
            rep, arrays = bp.run_stage_records(config)
            bp.write_stage_csv(ns.csv_out, arrays, config)
            outputs["trials_csv"] = ns.csv_out
            stage_reports.append(rep)
            checks.extend(_stage_checks(rep, config))
        else:
            rep = bp.run_stage(config, workers=workers)
            stage_reports.append(rep)
            checks.extend(_stage_checks(rep, config))

    results: dict = {"stages": [r.to_json_dict() for r in stage_reports]}
    if cfg["all_stages"]:
        inequality = bp.bell_inequality_check(tuple(stage_reports))
        decompositions = [
            bp.contextual_decomposition(stage_config(stage), 1, 1).to_json_dict()
            for stage in stages
        ]
        results["inequality"] = inequality.to_json_dict()
        results["decomposition"] = decompositions

    report = build_report(
        "ball-protocol", cfg, results, checks, seed=cfg["seed"],
        outputs=outputs, timestamp=not ns.no_timestamp,
    )
    return _emit(report, ns)


# ---------------------------------------------------------------------------
# common-cause


CAUSE_DEFAULTS = {
    "builtin": None,
    "model_file": None,
    "phi": math.pi / 3,
    "x_outcome": 1,
    "y_outcome": 1,
    "stage": 1,
    "empirical": False,
    "trials": 1_000_000,
    "seed": 0,
    "tolerance": None,
}


def cmd_common_cause(ns: argparse.Namespace) -> int:
    cli_cfg = {
        "builtin": ns.builtin,
        "model_file": ns.model,
        "phi": parse_angle(ns.phi) if ns.phi else None,
        "x_outcome": ns.x_outcome,
        "y_outcome": ns.y_outcome,
        "stage": ns.stage,
        "empirical": True if ns.empirical else None,
        "trials": ns.trials,
        "seed": ns.seed,
        "tolerance": ns.tolerance,
    }
    cfg = _resolve(CAUSE_DEFAULTS, _load_config_file(ns.config), cli_cfg)
    if (cfg["builtin"] is None) == (cfg["model_file"] is None):
        raise UsageError("common-cause needs exactly one of --builtin or --model")

    if cfg["model_file"] is not None:
        try:
            data = json.loads(Path(cfg["model_file"]).read_text(encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"cannot read model file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"model file is not valid JSON: {exc}") from exc
        model = cc.binary_event_model_from_json_dict(data)
        source = {"kind": "file", "path": cfg["model_file"]}
    elif cfg["builtin"] == "spin":
        model = cc.spin_event_model(
            Direction(0.0), Direction(cfg["phi"]), cfg["x_outcome"], cfg["y_outcome"]
        )
        source = {"kind": "builtin-spin", "phi": cfg["phi"]}
    elif cfg["builtin"] == "ball":
        stage_cfg = bp.StageConfig(stage=cfg["stage"], trials=cfg["trials"], seed=cfg["seed"])
        if cfg["empirical"]:
            model = cc.empirical_ball_event_model(
                bp.run_stage(stage_cfg), cfg["x_outcome"], cfg["y_outcome"]
            )
        else:
            model = cc.ball_event_model(stage_cfg, cfg["x_outcome"], cfg["y_outcome"])
        source = {"kind": "builtin-ball", "stage": cfg["stage"], "empirical": cfg["empirical"]}
    else:
        raise UsageError("builtin must be 'spin' or 'ball'")

    cause_report = cc.full_report(model, cfg["tolerance"])
    results = {
        "source": source,
        "model": model.to_json_dict(),
        "report": cause_report.to_json_dict(),
    }
    checks = [
        Check(f"{c.name} holds", c.holds, value=c.lhs, target=c.rhs,
              tolerance=cause_report.tolerance)
        for c in cause_report.conditions
        if not c.name.startswith("relevance")
    ]
    checks.append(
        Check("certified as common-cause explained", cause_report.certified,
              value=cause_report.covariance, target=None,
              tolerance=cause_report.tolerance)
    )
    report = build_report(
        "common-cause", cfg, results, checks, seed=cfg["seed"],
        timestamp=not ns.no_timestamp,
    )
    return _emit(report, ns)


# ---------------------------------------------------------------------------
# chsh


CHSH_DEFAULTS = {
    "angles": [0.0, math.pi / 2, math.pi / 4, 3 * math.pi / 4],
    "mode": "analytic",
    "trials": 1_000_000,
    "seed": 0,
}


def cmd_chsh(ns: argparse.Namespace) -> int:
    cli_cfg = {
        "angles": [parse_angle(a) for a in ns.angles.split(",")] if ns.angles else None,
        "mode": ns.mode,
        "trials": ns.trials,
        "seed": ns.seed,
    }
    cfg = _resolve(CHSH_DEFAULTS, _load_config_file(ns.config), cli_cfg)
    if not isinstance(cfg["angles"], list) or len(cfg["angles"]) != 4:
        raise UsageError("chsh needs exactly four angles: a, a', b, b'")
    if cfg["mode"] not in ("analytic", "empirical"):
        raise UsageError("mode must be analytic or empirical")
    _require_positive_int(cfg["trials"], "trials")
    workers = _require_positive_int(ns.workers if ns.workers is not None else 1, "workers")

    axes = [Direction(float(a)) for a in cfg["angles"]]
    result = mc.chsh_details(
        *axes, mode=cfg["mode"], trials=cfg["trials"], seed=cfg["seed"],
        workers=workers,
    )
    checks = []
    if cfg["mode"] == "analytic":
        checks.append(
            Check("|S| within the singlet bound",
                  abs(result.value) <= mc.CHSH_SINGLET_BOUND + 1e-12,
                  value=abs(result.value), target=mc.CHSH_SINGLET_BOUND, tolerance=1e-12)
        )
        results = {"chsh": result.to_json_dict()}
    else:
        analytic = mc.chsh_details(*axes, mode="analytic")
        tol = sum(
            mc.covariance_tolerance(ctx.expectation, cfg["trials"])
            for ctx in analytic.contexts
        )
        error = abs(result.value - analytic.value)
        checks.append(
            Check("empirical S matches analytic combination", error <= tol,
                  value=result.value, target=analytic.value, tolerance=tol)
        )
        results = {"chsh": result.to_json_dict(), "analytic": analytic.to_json_dict()}

    report = build_report(
        "chsh", cfg, results, checks,
        seed=cfg["seed"] if cfg["mode"] == "empirical" else None,
        timestamp=not ns.no_timestamp,
    )
    return _emit(report, ns)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellsim",
        description="Singlet correlations from axis-anchored hidden variables: "
                    "analytic evaluators, Monte Carlo runs, the colored-ball "
                    "protocol and common-cause diagnostics.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("spin-correlation",
                       help="analytic quantum and subquantum correlations per angle")
    p.add_argument("--phi", action="append", metavar="ANGLE",
                   help="angle between the axes, e.g. 60deg (repeatable)")
    p.add_argument("--sweep", metavar="START:STOP:STEP",
                   help="angle sweep, e.g. 0:180:5deg")
    p.add_argument("--sweep-out", metavar="PATH",
                   help="write the sweep as two-column text here")
    _common_flags(p)
    p.set_defaults(handler=cmd_spin_correlation)

    p = sub.add_parser("mc-run", help="Monte Carlo run vs the analytic correlation")
    p.add_argument("--phi", metavar="ANGLE", help="shorthand for --theta1 0rad --theta2 ANGLE")
    p.add_argument("--theta1", metavar="ANGLE", help="first measurement axis")
    p.add_argument("--theta2", metavar="ANGLE", help="second measurement axis")
    p.add_argument("--description", choices=("alice", "bob", "both"), default=None)
    p.add_argument("--csv-out", metavar="PATH", help="write per-trial records as CSV")
    _common_flags(p)
    p.set_defaults(handler=cmd_mc_run)

    p = sub.add_parser("ball-protocol", help="colored-ball stages, optionally the full trilogy")
    p.add_argument("--stage", type=int, choices=(1, 2, 3), default=None)
    p.add_argument("--all-stages", action="store_true",
                   help="run stages 1-3 and evaluate the cross-stage inequality")
    p.add_argument("--alice-filter", choices=("a", "c"), default=None)
    p.add_argument("--bob-filter", choices=("b", "c"), default=None)
    p.add_argument("--p1", type=float, default=None, metavar="P",
                   help="stage-1 correlated-configuration probability")
    p.add_argument("--p23", type=float, default=None, metavar="P",
                   help="stage-2/3 correlated-configuration probability")
    p.add_argument("--mismatch-prob", type=float, default=None, metavar="P",
                   help="per-observer chance of an unsuitable filter choice per trial")
    p.add_argument("--mode", choices=("empirical", "analytic"), default=None)
    p.add_argument("--csv-out", metavar="PATH", help="write per-trial records as CSV")
    _common_flags(p)
    p.set_defaults(handler=cmd_ball_protocol)

    p = sub.add_parser("common-cause", help="six-condition common-cause report")
    p.add_argument("--builtin", choices=("spin", "ball"), default=None)
    p.add_argument("--model", metavar="FILE", default=None,
                   help="JSON file with p_z, joint_given_z, joint_given_not_z")
    p.add_argument("--phi", metavar="ANGLE", default=None, help="axis angle for --builtin spin")
    p.add_argument("--x-outcome", type=int, choices=(1, -1), default=None)
    p.add_argument("--y-outcome", type=int, choices=(1, -1), default=None)
    p.add_argument("--stage", type=int, choices=(1, 2, 3), default=None,
                   help="stage for --builtin ball")
    p.add_argument("--empirical", action="store_true",
                   help="estimate the ball model from a simulated run")
    p.add_argument("--tolerance", type=float, default=None)
    _common_flags(p)
    p.set_defaults(handler=cmd_common_cause)

    p = sub.add_parser("chsh", help="CHSH combination (derived demonstration)")
    p.add_argument("--angles", metavar="A,A',B,B'", default=None,
                   help="four comma-separated angles, e.g. 0deg,90deg,45deg,135deg")
    p.add_argument("--mode", choices=("analytic", "empirical"), default=None)
    _common_flags(p)
    p.set_defaults(handler=cmd_chsh)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.handler(ns)
    except (UsageError, ValidationError, ConditioningUndefinedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EmptyReportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BellsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
