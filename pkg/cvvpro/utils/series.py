"""Metric series derived from a MetricsLog"""
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from ..constraints import ConstraintFamily
from ..errors import MissingBenchmarkError
from ..schemas import MetricsLog, RunningAverages

Series = List[Optional[float]]
FamilyAtRound = Callable[[int], ConstraintFamily]

PER_CHECKPOINT = "per_checkpoint"
FIXED_FINAL = "fixed_final"


def checkpoint_schedule(T: int, mode: str = "log") -> List[int]:
    """Rounds at which the hindsight benchmark is solved: powers of two and T, or every round"""
    if T < 1:
        return []
    if mode == "all":
        return list(range(1, T + 1))
    if mode != "log":
        raise ValueError(f"unknown checkpoint mode '{mode}'")
    rounds = set()
    power = 1
    while power <= T:
        rounds.add(power)
        power *= 2
    rounds.add(T)
    return sorted(rounds)


def cumulative_costs(log: MetricsLog) -> np.ndarray:
    return np.cumsum([record.cost for record in log.records]) if log.records else np.zeros(0)


def regret_at(log: MetricsLog, t: int, convention: str = PER_CHECKPOINT) -> float:
    """sum_{l <= t} f_l(x_l) - benchmark value at t

    Raises:
        MissingBenchmarkError: no benchmark of that convention was solved at t
    """
    checkpoint = log.checkpoint_at(t, convention)
    if checkpoint is None or not 1 <= t <= log.T:
        raise MissingBenchmarkError(f"no {convention} benchmark at t={t}")
    total = float(np.sum([record.cost for record in log.records[:t]]))
    return total - checkpoint.value


def compute_regret_curve(log: MetricsLog, convention: str = PER_CHECKPOINT) -> Series:
    """Regret at every checkpoint of the given convention, None elsewhere"""
    costs = cumulative_costs(log)
    curve: Series = [None] * log.T
    for checkpoint in log.checkpoints:
        if checkpoint.convention != convention:
            continue
        if not 1 <= checkpoint.t <= log.T:
            raise MissingBenchmarkError(f"checkpoint t={checkpoint.t} outside 1..{log.T}")
        curve[checkpoint.t - 1] = float(costs[checkpoint.t - 1] - checkpoint.value)
    return curve


def max_violation_series(
    log: MetricsLog,
    constraints: Optional[Union[ConstraintFamily, FamilyAtRound]] = None
) -> Series:
    """max(0, -min_i g_{t,i}(x_t)) per round

    Without a family the recorded min_constraint_value is used; a family is either
    time-invariant or a callable returning the family in force at round t.
    """
    series: Series = []
    for record in log.records:
        if constraints is None:
            if record.min_constraint_value is None:
                raise ValueError("log has no constraint values; pass a constraint family")
            lowest = record.min_constraint_value
        else:
            family = constraints if isinstance(constraints, ConstraintFamily) else constraints(record.t)
            values = family.values(record.x)
            lowest = float(np.min(values)) if values.size else np.inf
        series.append(max(0.0, -float(lowest)))
    return series


def violation_envelope(violations: Series) -> Series:
    """sup_{s >= t} max_violation(s): the quantity a per-round rate bound controls"""
    envelope: Series = [0.0] * len(violations)
    running = 0.0
    for index in range(len(violations) - 1, -1, -1):
        running = max(running, violations[index] or 0.0)
        envelope[index] = running
    return envelope


def _average_history(log: MetricsLog) -> Tuple[List[np.ndarray], Optional[List[np.ndarray]]]:
    """x_bar_t per round, and y_bar_t when adversary moves were recorded"""
    moves = log.adversary_moves()
    if not log.records:
        return [], None if moves is None else []
    averages = RunningAverages.start(log.records[0].x.shape[0])
    x_bars: List[np.ndarray] = []
    y_bars: List[np.ndarray] = []
    for index, record in enumerate(log.records):
        averages.update(record.x, None if moves is None else moves[index])
        x_bars.append(averages.x_bar)
        y_bars.append(averages.y_bar)
    return x_bars, None if moves is None else y_bars


def _distance_to_final(means: List[np.ndarray]) -> Series:
    if not means:
        return []
    final = means[-1]
    return [float(np.linalg.norm(mean - final)) for mean in means]


def averaged_iterate_convergence(log: MetricsLog) -> Series:
    """||xbar_t - xbar_T|| with xbar maintained incrementally"""
    x_bars, _ = _average_history(log)
    return _distance_to_final(x_bars)


def adversary_average_convergence(log: MetricsLog) -> Optional[Series]:
    """||ybar_t - ybar_T|| when adversary moves were recorded"""
    _, y_bars = _average_history(log)
    return None if y_bars is None else _distance_to_final(y_bars)


def violated_fraction(log: MetricsLog) -> Series:
    """Violated tracked constraints over m"""
    if log.m == 0:
        return [0.0] * log.T
    series: Series = []
    for record in log.records:
        count = record.resource_violated_count
        if count is None:
            count = min(record.violated_count, log.m)
        series.append(count / log.m)
    return series


def projection_rows(log: MetricsLog) -> Series:
    return [float(record.projection_rows) for record in log.records]


def derive_series(log: MetricsLog) -> Dict[str, Series]:
    """Every derived series that can be computed from the records and checkpoints alone"""
    series: Dict[str, Series] = {
        "regret": compute_regret_curve(log, PER_CHECKPOINT),
        "regret_fixed_final": compute_regret_curve(log, FIXED_FINAL),
        "avg_iterate_distance": averaged_iterate_convergence(log),
        "violated_fraction": violated_fraction(log),
        "projection_rows": projection_rows(log),
    }
    if all(record.min_constraint_value is not None for record in log.records):
        series["max_violation"] = max_violation_series(log)
        series["max_violation_envelope"] = violation_envelope(series["max_violation"])
    adversary = adversary_average_convergence(log)
    if adversary is not None:
        series["avg_adversary_distance"] = adversary
    return series


def attach_series(log: MetricsLog) -> MetricsLog:
    log.series = derive_series(log)
    return log
