"""Command-line entry point

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 check failure.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .config import get_settings
from .errors import (
    BenchmarkBudgetError,
    BenchmarkInfeasibleError,
    CheckFailure,
    EmissionError,
    EmptyPolyhedronError,
    ProjectionError,
    RoundError,
)
from .evaluation import CHECKS, DEFAULT_CHECKS, DiagnoseRunner, run_qp_selftest
from .harness import (
    LEARNERS,
    game_function_params,
    generate_instance,
    generate_synthetic_instance,
    run_simulation,
    run_synthetic,
)
from .observability import configure_logging, metrics_collector
from .schemas import LearnerConfig, MetricsLog
from .utils import FORMATS, emit, load_log

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_CHECK = 3

NUMERICAL_ERRORS = (
    ProjectionError,
    EmptyPolyhedronError,
    BenchmarkInfeasibleError,
    BenchmarkBudgetError,
    RoundError,
)

DEFAULT_ALPHA = 100.0


class CLIArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got '{value}'")


def _int_list(value: str) -> List[int]:
    try:
        return [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{value}'")


def build_parser() -> argparse.ArgumentParser:
    parser = CLIArgumentParser(prog="cvvpro", description="CVV-Pro online learning experiments")
    parser.add_argument("--log-level", default=None, help="Logging level (default from CVVPRO_LOG_LEVEL)")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=CLIArgumentParser)

    simulate = commands.add_parser("simulate", help="Run one learner on a seeded game")
    simulate.add_argument("--learner", choices=LEARNERS, default="cvvpro")
    simulate.add_argument("--n", type=int, default=100, help="Pure strategies per player")
    simulate.add_argument("--m", type=int, default=10, help="Shared resource constraints")
    simulate.add_argument("--T", type=int, default=1000, help="Rounds")
    simulate.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="Softening rate")
    simulate.add_argument("--capacity", type=float, default=1.0, help="Shared capacity b")
    simulate.add_argument("--d-offset", type=int, choices=(0, 15), default=0, help="Step offset d")
    simulate.add_argument("--augment", type=_bool, default=False, help="Append the hypersphere row")
    simulate.add_argument("--instance-seed", type=int, default=0)
    simulate.add_argument("--run-seed", type=int, default=0)
    simulate.add_argument("--out", required=True, help="Output file")
    simulate.add_argument("--format", choices=FORMATS, default="csv")
    simulate.add_argument("--checkpoints", choices=("log", "all"), default="log")

    compare = commands.add_parser("compare", help="Run CVV-Pro and OGD on the same seeds")
    compare.add_argument("--T", type=int, default=2000)
    compare.add_argument("--n", type=int, default=200)
    compare.add_argument("--m", type=int, default=20)
    compare.add_argument("--capacity", type=float, default=1.3)
    compare.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    compare.add_argument("--seeds", type=_int_list, default=[0, 1, 2, 3, 4])
    compare.add_argument("--out", required=True, help="Output directory")

    diagnose = commands.add_parser("diagnose", help="Check structural guarantees on a JSON log")
    diagnose.add_argument("--log", required=True, help="JSON log written by simulate or synthetic")
    diagnose.add_argument("--checks", default=None,
                          help=f"Comma-separated subset of {','.join(CHECKS)} (default: "
                               f"{','.join(DEFAULT_CHECKS['game'])} for game logs, "
                               f"{','.join(DEFAULT_CHECKS['synthetic'])} for synthetic logs)")
    diagnose.add_argument("--samples", type=int, default=None, help="Feasible samples per checked round")
    diagnose.add_argument("--seed", type=int, default=0, help="Sampling seed")
    diagnose.add_argument("--all-rounds", action="store_true", help="Check every round, not 1, 2, 4, ...")
    diagnose.add_argument("--out", required=True, help="Report file (JSON)")

    selftest = commands.add_parser("qp-selftest", help="Projection solver vs brute-force enumeration")
    selftest.add_argument("--instances", type=int, default=1000)
    selftest.add_argument("--seed", type=int, default=7)

    synthetic = commands.add_parser("synthetic", help="Augmented CVV-Pro on a certified ball-constrained instance")
    synthetic.add_argument("--n", type=int, default=5)
    synthetic.add_argument("--m", type=int, default=3)
    synthetic.add_argument("--T", type=int, default=2000)
    synthetic.add_argument("--instance-seed", type=int, default=0)
    synthetic.add_argument("--run-seed", type=int, default=0)
    synthetic.add_argument("--out", required=True)
    synthetic.add_argument("--format", choices=FORMATS, default="json")

    return parser


def game_config(instance, alpha: float, d: int, augment: bool) -> LearnerConfig:
    return LearnerConfig(alpha=alpha, step_offset=d, augment=augment, params=game_function_params(instance))


def cmd_simulate(args) -> int:
    instance = generate_instance(args.n, args.m, args.capacity, args.instance_seed)
    config = game_config(instance, args.alpha, args.d_offset, args.augment)
    log = run_simulation(instance, args.learner, args.T, config, args.run_seed, checkpoints=args.checkpoints)
    emit(log, args.format, args.out)
    return EXIT_OK


def _percentiles(values: Sequence[float]) -> Dict[str, float]:
    p25, p50, p75 = np.percentile(np.asarray(values, dtype=float), [25, 50, 75])
    return {"p25": float(p25), "p50": float(p50), "p75": float(p75)}


def compare_summary(logs: Dict[str, List[MetricsLog]]) -> Dict[str, Any]:
    """Per-learner regret percentiles at checkpoints, row counts and violated fractions"""
    summary: Dict[str, Any] = {}
    for learner, runs in logs.items():
        checkpoints = sorted({c.t for run in runs for c in run.checkpoints if c.convention == "per_checkpoint"})
        regret = {}
        for t in checkpoints:
            # runs whose C_t was empty have no regret at t
            values = [run.series["regret"][t - 1] for run in runs if run.series["regret"][t - 1] is not None]
            if values:
                regret[str(t)] = _percentiles(values)
        late = [run for run in runs if run.T >= 100]
        summary[learner] = {
            "regret": regret,
            "mean_projection_rows_after_100": (
                float(np.mean([np.mean(run.series["projection_rows"][99:]) for run in late])) if late else None
            ),
            "max_violated_fraction_after_500": (
                float(max(max(run.series["violated_fraction"][499:]) for run in runs if run.T >= 500))
                if any(run.T >= 500 for run in runs) else None
            ),
            "config": runs[0].metadata.get("learner", {}),
        }
    reference_rounds = sorted({int(t) for entry in summary.values() for t in entry["regret"]})
    summary["reference_5_sqrt_t"] = {str(t): 5.0 * float(np.sqrt(t)) for t in reference_rounds}
    return summary


def cmd_compare(args) -> int:
    out = Path(args.out)
    logs: Dict[str, List[MetricsLog]] = {learner: [] for learner in LEARNERS}
    for seed in args.seeds:
        instance = generate_instance(args.n, args.m, args.capacity, seed)
        config = game_config(instance, args.alpha, 0, False)
        for learner in LEARNERS:
            log = run_simulation(instance, learner, args.T, config, seed)
            emit(log, "csv", out / f"seed{seed}_{learner}.csv")
            emit(log, "json", out / f"seed{seed}_{learner}.json")
            logs[learner].append(log)

    summary = compare_summary(logs)
    try:
        with open(out / "summary.json", "w", encoding="utf-8") as f:
            json.dump(summary, f, indent=2, sort_keys=True)
    except OSError as e:
        raise EmissionError(str(out / "summary.json"), e) from e
    logger.info(f"Comparison over seeds {args.seeds} written to {out}")
    return EXIT_OK


def cmd_diagnose(args) -> int:
    checks = [name.strip() for name in (args.checks or "").split(",") if name.strip()]
    unknown = [name for name in checks if name not in CHECKS]
    if unknown:
        print(f"cvvpro diagnose: unknown checks {unknown}; expected a subset of {list(CHECKS)}", file=sys.stderr)
        return EXIT_USAGE

    runner = DiagnoseRunner(load_log(args.log), samples=args.samples, seed=args.seed, all_rounds=args.all_rounds)
    results = runner.run(checks or None)
    runner.save_results(results, args.out)
    if not results["all_passed"]:
        failed = [name for name, result in results["results"].items() if not result["passed"]]
        raise CheckFailure(f"failed checks: {', '.join(failed)}")
    return EXIT_OK


def cmd_qp_selftest(args) -> int:
    results = run_qp_selftest(args.instances, args.seed)
    print(json.dumps({key: value for key, value in results.items() if key != "mismatches"}, indent=2))
    if not results["passed"]:
        raise CheckFailure(f"{len(results['mismatches'])} of {args.instances} instances disagree")
    return EXIT_OK


def cmd_synthetic(args) -> int:
    instance = generate_synthetic_instance(args.n, args.m, args.instance_seed)
    log = run_synthetic(instance, args.T, seed=args.run_seed)
    emit(log, args.format, args.out)
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "diagnose": cmd_diagnose,
    "qp-selftest": cmd_qp_selftest,
    "synthetic": cmd_synthetic,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or get_settings().log_level)

    try:
        code = COMMANDS[args.command](args)
    except CheckFailure as e:
        logger.error(f"Check failure: {e}")
        code = EXIT_CHECK
    except NUMERICAL_ERRORS as e:
        logger.error(f"Numerical failure: {e}")
        code = EXIT_NUMERICAL
    except (ValueError, FileNotFoundError, EmissionError) as e:
        logger.error(f"Usage error: {e}")
        code = EXIT_USAGE

    logger.info(f"Solver metrics: {metrics_collector.get_summary()}")
    return code


if __name__ == "__main__":
    sys.exit(main())
