"""Game simulation loop for CVV-Pro and the OGD baseline"""
import logging
import time
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .. import __version__
from ..constraints import AveragedAffineConstraints, evaluate_violations, start_average
from ..errors import BenchmarkInfeasibleError
from ..learners import CVVProLearner, OGDLearner
from ..observability import metrics_collector, run_logger
from ..schemas import BenchmarkResult, CostSample, GameInstance, LearnerConfig, MetricsLog, RunningAverages
from ..utils.series import FIXED_FINAL, attach_series, checkpoint_schedule
from .adversary import adversary_move
from .benchmark import solve_hindsight_benchmark
from .game import feasible_set, oracle_constraints, round_constraint, simplex_equality_rows
from .instance import STREAMS, make_stream

logger = logging.getLogger(__name__)

LEARNERS = ("cvvpro", "ogd")


def _build_learner(learner: str, instance: GameInstance, config: LearnerConfig):
    x0 = np.full(instance.n, 1.0 / instance.n)
    if learner == "cvvpro":
        return CVVProLearner(config, x0, extra_rows=simplex_equality_rows(instance.n))
    if learner == "ogd":
        return OGDLearner(config, x0)
    raise ValueError(f"unknown learner '{learner}'; expected one of {LEARNERS}")


def run_simulation(
    instance: GameInstance,
    learner: str,
    T: int,
    config: LearnerConfig,
    seed: int,
    checkpoints: str = "log",
    mix: float = 0.8,
    extra_checkpoints: Sequence[int] = ()
) -> MetricsLog:
    """Play T rounds of the game and return the full log with derived series

    Per round: the adversary responds to x_t, the averaged constraints absorb y_t,
    the oracle is queried at x_t and the learner steps. A checkpoint whose C_t is
    empty gets no benchmark; its round is listed under infeasible_checkpoints in the
    metadata and the regret series stays empty there.

    Args:
        instance: Game matrices and capacity
        learner: "cvvpro" or "ogd"
        T: Number of rounds
        config: Step schedule and function class constants
        seed: Run seed for the adversary's noise
        checkpoints: "log" (powers of two and T) or "all"
        mix: Weight of the best response in the adversary's move
        extra_checkpoints: Additional rounds to benchmark
    """
    if T < 1:
        raise ValueError("T must be >= 1")

    started = time.time()
    run_logger.log_run_started(learner, instance.n, instance.m, T, instance.seed, seed)

    agent = _build_learner(learner, instance, config)
    rng = make_stream(seed, "adversary")
    schedule = set(checkpoint_schedule(T, checkpoints)) | {t for t in extra_checkpoints if 1 <= t <= T}
    averages = RunningAverages.start(instance.n)
    resources: Optional[AveragedAffineConstraints] = None
    benchmarks: List[BenchmarkResult] = []
    infeasible: List[int] = []
    y_bars: Dict[int, np.ndarray] = {}
    x_star: Optional[np.ndarray] = None

    for t in range(1, T + 1):
        x = agent.play()
        y = adversary_move(instance.A, x, rng, mix)
        intercepts, slopes = round_constraint(instance, y)
        if resources is None:
            resources = AveragedAffineConstraints(start_average(intercepts, slopes))
        else:
            resources.update(intercepts, slopes)
        averages.update(x, y)

        gradient = instance.A @ y
        cost = CostSample(value=float(x @ gradient), gradient=gradient)
        report = evaluate_violations(oracle_constraints(resources), x)

        if learner == "cvvpro":
            record = agent.step(cost, report)
        else:
            record = agent.step(cost, feasible_set(instance, averages.y_bar))
            record.violated_count = report.count

        resource_values = resources.values(x)
        record.resource_violated_count = int(np.sum(resource_values <= 0.0))
        record.min_constraint_value = float(np.min(resource_values)) if instance.m else None
        record.adversary_move = y

        if t in schedule:
            y_bars[t] = averages.y_bar.copy()
            try:
                benchmark = solve_hindsight_benchmark(instance, averages.y_bar, t, x_init=x_star)
            except BenchmarkInfeasibleError:
                logger.warning(f"Checkpoint t={t}: feasible set is empty, no benchmark")
                infeasible.append(t)
            else:
                x_star = benchmark.x_star
                benchmarks.append(benchmark)

    final = benchmarks[-1] if benchmarks and benchmarks[-1].t == T else None
    fixed_final = [] if final is None else [
        BenchmarkResult(
            t=t,
            x_star=final.x_star,
            value=t * float(final.x_star @ instance.A @ y_bars[t]),
            kkt_residual=final.kkt_residual,
            iterations=0,
            convention=FIXED_FINAL,
        )
        for t in sorted(y_bars)
    ]

    log = MetricsLog(
        records=agent.records,
        checkpoints=benchmarks + fixed_final,
        final_benchmark=final,
        m=instance.m,
        equality_rows=1 if learner == "cvvpro" else 0,
        metadata=_metadata(instance, agent, T, seed, checkpoints, mix, infeasible),
    )
    attach_series(log)

    metrics_collector.record_rounds(T)
    final_regret = log.series["regret"][-1]
    run_logger.log_run_completed(learner, T, time.time() - started, final_regret)
    return log


def _metadata(
    instance: GameInstance,
    agent,
    T: int,
    seed: int,
    checkpoints: str,
    mix: float,
    infeasible: List[int]
) -> Dict[str, Any]:
    return {
        "version": __version__,
        "experiment": "game",
        "instance": instance.describe(),
        "learner": agent.describe(),
        "T": T,
        "run_seed": seed,
        "streams": sorted(STREAMS),
        "checkpoints": checkpoints,
        "adversary_mix": mix,
        "regret_convention": "per_checkpoint",
        "infeasible_checkpoints": infeasible,
        "tracked_constraints": "resource",
    }
