"""
ATM cash-replenishment routing - command-line entry point.

Sub-commands cover the whole experiment pipeline: generate an instance,
split demand, solve, validate a plan, compare the split and no-split
policies, render a stored report and sweep weights for a Pareto front.

Exit codes: 0 success, 1 infeasible result or violations found, 2 input error.

Example Usage:
    python -m src.main generate --n-atms 28 --seed 3 --output instance.json
    python -m src.main compare --instance instance.json --format table
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import ValidationError

from src.config import Settings
from src.core.exact import solve_exact
from src.core.feasibility import check_plan
from src.core.pareto import default_weights, pareto_sweep
from src.core.pipeline import compare_policies
from src.core.report import (
    FORMATS,
    TABLE,
    pareto_front,
    parse_report,
    render_cost_breakdown,
    render_pareto,
    render_report,
)
from src.core.solver import solve_heuristic
from src.core.splitting import build_split_schedule
from src.core.state_machine import SolverError
from src.models.instance import Instance, InstanceError, parse_instance, serialize_instance, validate_instance
from src.models.plan import Plan, PlanError, parse_plan, serialize_plan
from src.models.scenario import ScenarioError, ScenarioParams, WithdrawalProfile
from src.models.solve import ExactLimits, NeighborhoodKind, SolveConfig
from src.models.split import SplitMode, SplitPolicy
from src.models.violation import render_violations
from src.tools.distance_matrix import ingest_distance_matrix, with_distance_matrix
from src.tools.scenario import generate_scenario

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INPUT = 2


@dataclass
class AppConfig:
    """Resolved global options: flags first, then environment, then defaults"""
    seed: int = 0
    time_limit: Optional[float] = None
    output_dir: Path = Path(".")
    log_level: str = "INFO"

    @classmethod
    def resolve(cls, args: argparse.Namespace, settings: Settings) -> "AppConfig":
        return cls(
            seed=args.seed if args.seed is not None else settings.seed,
            time_limit=args.time_limit if args.time_limit is not None else settings.time_limit,
            output_dir=Path(args.output_dir if args.output_dir is not None else settings.output_dir),
            log_level=(args.log_level or settings.log_level).upper(),
        )

    def output_path(self, name: str) -> Path:
        path = Path(name)
        return path if path.is_absolute() else self.output_dir / path


# ========== INPUT HELPERS ==========

def load_instance(path: str) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def load_plan(path: str) -> Plan:
    return parse_plan(Path(path).read_text(encoding="utf-8"))


def write_text(config: AppConfig, name: str, text: str) -> Path:
    path = config.output_path(name)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def parse_weights(text: str) -> Tuple[float, float]:
    """"w1,w2" -> (w1, w2)"""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"Weights must look like 'w1,w2', got {text!r}")
    return float(parts[0]), float(parts[1])


def parse_weight_list(text: str) -> List[Tuple[float, float]]:
    """"1,0;0.5,0.5;0,1" -> [(1, 0), (0.5, 0.5), (0, 1)]"""
    return [parse_weights(chunk) for chunk in text.split(";") if chunk.strip()]


def solve_config(args: argparse.Namespace, config: AppConfig) -> SolveConfig:
    update = {"seed": config.seed, "time_limit": config.time_limit}
    if getattr(args, "weights", None):
        update["weights"] = parse_weights(args.weights)
    if getattr(args, "max_iterations", None):
        update["max_iterations"] = args.max_iterations
    if getattr(args, "workers", None):
        update["workers"] = args.workers
    if getattr(args, "neighborhoods", None):
        update["neighborhoods"] = [NeighborhoodKind(n.strip()) for n in args.neighborhoods.split(",")]
    return SolveConfig(**update)


def split_policy(args: argparse.Namespace) -> SplitPolicy:
    policy = SplitPolicy(mode=SplitMode(args.policy.replace("-", "_")) if getattr(args, "policy", None) else SplitMode.SPLIT)
    update = {}
    if getattr(args, "lower", None) is not None:
        update["lower_bound"] = args.lower
    if getattr(args, "upper", None) is not None:
        update["upper_bound"] = args.upper
    return SplitPolicy(**{**policy.model_dump(), **update})


# ========== COMMANDS ==========

def cmd_generate(args: argparse.Namespace, config: AppConfig) -> int:
    params = ScenarioParams()
    if args.params:
        params = ScenarioParams.model_validate_json(Path(args.params).read_text(encoding="utf-8"))
    update = {}
    if args.seed is not None or not args.params:
        update["seed"] = config.seed
    if args.n_atms is not None:
        update["n_atms"] = args.n_atms
    if args.profile:
        update["withdrawal_profile"] = WithdrawalProfile(args.profile)
    if update:
        params = ScenarioParams(**{**params.model_dump(), **update})

    inst = generate_scenario(params)
    if args.distance_file:
        matrix = ingest_distance_matrix(args.distance_file, inst.node_ids)
        inst = with_distance_matrix(inst, matrix)
        defects = validate_instance(inst)
        if defects:
            raise InstanceError(defects)

    path = write_text(config, args.output, serialize_instance(inst) + "\n")
    print(f"✅ Instance saved to {path}")
    print(f"📊 Contains: {len(inst.atms)} ATMs, {len(inst.depots)} depots, {len(inst.vehicles)} vehicles, {inst.periods} periods")
    return EXIT_OK


def cmd_check_instance(args: argparse.Namespace, config: AppConfig) -> int:
    try:
        inst = load_instance(args.instance)
    except InstanceError as exc:
        for problem in exc.problems:
            print(f"❌ {problem}")
        return EXIT_INFEASIBLE
    print(f"✅ {inst.name or args.instance}: {len(inst.atms)} ATMs, {len(inst.vehicles)} vehicles, {inst.periods} periods")
    return EXIT_OK


def cmd_split(args: argparse.Namespace, config: AppConfig) -> int:
    inst = load_instance(args.instance)
    schedule = build_split_schedule(inst, split_policy(args))
    path = write_text(config, args.output, schedule.model_dump_json(indent=2) + "\n")
    print(f"✅ Split schedule saved to {path}")
    for warning in schedule.warnings:
        print(f"⚠️  {warning}")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace, config: AppConfig) -> int:
    inst = load_instance(args.instance)
    cfg = solve_config(args, config)
    schedule = build_split_schedule(inst, split_policy(args))
    if args.method == "exact":
        limits = ExactLimits(time_limit=config.time_limit) if config.time_limit else ExactLimits()
        result = solve_exact(inst, schedule, limits, cfg.weights)
    else:
        result = solve_heuristic(inst, schedule, cfg)

    path = write_text(config, args.output, serialize_plan(result.plan) + "\n")
    print(render_cost_breakdown(result), end="")
    print(f"✅ Plan saved to {path}")
    if not result.solved:
        print(render_violations(result.violations))
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, config: AppConfig) -> int:
    inst = load_instance(args.instance)
    plan = load_plan(args.plan)
    violations = check_plan(inst, plan)
    if violations:
        print(render_violations(violations))
        return EXIT_INFEASIBLE
    print("✅ Plan satisfies every constraint")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, config: AppConfig) -> int:
    inst = load_instance(args.instance)
    cfg = solve_config(args, config)
    report, results = compare_policies(inst, cfg, split_policy(args))

    write_text(config, "plan_no_split.json", serialize_plan(results[SplitMode.NO_SPLIT].plan) + "\n")
    write_text(config, "plan_split.json", serialize_plan(results[SplitMode.SPLIT].plan) + "\n")
    path = write_text(config, args.output, render_report(report, "structured"))
    print(render_report(report, args.format), end="")
    print(f"✅ Report saved to {path}")
    return EXIT_OK if report.complete else EXIT_INFEASIBLE


def cmd_report(args: argparse.Namespace, config: AppConfig) -> int:
    report = parse_report(Path(args.report).read_text(encoding="utf-8"))
    print(render_report(report, args.format), end="")
    return EXIT_OK if report.complete else EXIT_INFEASIBLE


def cmd_pareto(args: argparse.Namespace, config: AppConfig) -> int:
    inst = load_instance(args.instance)
    cfg = solve_config(args, config)
    policy = split_policy(args)
    weight_list = parse_weight_list(args.weights_list) if args.weights_list else default_weights(args.points)

    front = pareto_front(inst.name, config.seed, policy.mode.value, pareto_sweep(inst, policy, weight_list, cfg))
    path = write_text(config, args.output, front.model_dump_json(indent=2) + "\n")
    if not front.points:
        print("❌ No weight pair produced a feasible plan")
        return EXIT_INFEASIBLE
    print(render_pareto(front), end="")
    print(f"✅ Pareto front saved to {path}")
    return EXIT_OK


# ========== PARSER ==========

def _add_policy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--policy", choices=["split", "no-split"], default="split")
    p.add_argument("--lower", type=int, help="Smallest single deposit L (VND)")
    p.add_argument("--upper", type=int, help="Largest single deposit U (VND)")


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--weights", help="Objective weights 'w1,w2' for transport and financial cost")
    p.add_argument("--max-iterations", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--neighborhoods", help="Comma-separated subset of " + ",".join(k.value for k in NeighborhoodKind))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="Random seed (env ATM_ROUTING_SEED)")
    common.add_argument("--time-limit", type=float, help="Wall-clock cap in seconds, off by default (env ATM_ROUTING_TIME_LIMIT)")
    common.add_argument("--output-dir", help="Directory for relative output paths (env ATM_ROUTING_OUTPUT_DIR)")
    common.add_argument("--log-level", help="Logging level (env ATM_ROUTING_LOG_LEVEL)")

    parser = argparse.ArgumentParser(description="Multi-period, multi-depot ATM cash-replenishment routing")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="Generate a simulated instance")
    p.add_argument("--params", help="ScenarioParams JSON file")
    p.add_argument("--n-atms", type=int)
    p.add_argument("--profile", choices=[w.value for w in WithdrawalProfile])
    p.add_argument("--distance-file", help="CSV distance matrix replacing the generated distances")
    p.add_argument("--output", "-o", default="instance.json")
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("check-instance", parents=[common], help="Report every defect of an instance file")
    p.add_argument("--instance", required=True)
    p.set_defaults(handler=cmd_check_instance)

    p = sub.add_parser("split", parents=[common], help="Build the per-period deposit schedule")
    p.add_argument("--instance", required=True)
    _add_policy_flags(p)
    p.add_argument("--output", "-o", default="split.json")
    p.set_defaults(handler=cmd_split)

    p = sub.add_parser("solve", parents=[common], help="Split, construct and improve a plan")
    p.add_argument("--instance", required=True)
    p.add_argument("--method", choices=["local", "exact"], default="local")
    _add_policy_flags(p)
    _add_search_flags(p)
    p.add_argument("--output", "-o", default="plan.json")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("validate", parents=[common], help="List every constraint a plan violates")
    p.add_argument("--instance", required=True)
    p.add_argument("--plan", required=True)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("compare", parents=[common], help="Compare the no-split and split policies")
    p.add_argument("--instance", required=True)
    p.add_argument("--lower", type=int)
    p.add_argument("--upper", type=int)
    _add_search_flags(p)
    p.add_argument("--format", choices=FORMATS, default=TABLE)
    p.add_argument("--output", "-o", default="report.json")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("report", parents=[common], help="Render a stored comparison report")
    p.add_argument("--report", required=True)
    p.add_argument("--format", choices=FORMATS, default=TABLE)
    p.set_defaults(handler=cmd_report)

    p = sub.add_parser("pareto", parents=[common], help="Weighted-sum sweep over transport and financial cost")
    p.add_argument("--instance", required=True)
    _add_policy_flags(p)
    _add_search_flags(p)
    p.add_argument("--weights-list", help="Weight pairs 'w1,w2;w1,w2;...'")
    p.add_argument("--points", type=int, default=5, help="Evenly spread weight pairs when --weights-list is absent")
    p.add_argument("--output", "-o", default="pareto.json")
    p.set_defaults(handler=cmd_pareto)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """CLI entry point"""
    args = build_parser().parse_args(argv)
    try:
        config = AppConfig.resolve(args, Settings.from_env())
    except ValueError as exc:
        logging.basicConfig(level=logging.INFO)
        logger.error(str(exc))
        return EXIT_INPUT
    logging.basicConfig(level=getattr(logging, config.log_level, logging.INFO))

    try:
        return args.handler(args, config)
    except InstanceError as exc:
        for problem in exc.problems:
            logger.error(f"Invalid instance: {problem}")
        return EXIT_INPUT
    except (PlanError, ScenarioError, SolverError, ValidationError, ValueError, OSError) as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
