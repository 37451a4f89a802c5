"""Closed-form regret, feasibility and velocity guarantees"""
import math
from typing import Callable, Dict

from ..errors import UnknownBoundError
from ..schemas import BoundReport, FunctionClassParams

# Offset d used by the time-varying and augmented guarantees
TIME_VARYING_OFFSET = 15


def _thm1_regret(p: FunctionClassParams, t: int) -> BoundReport:
    c = 18.0
    return BoundReport(theorem="thm1_regret", t=t, value=c * p.L_F * p.R * math.sqrt(t),
                       constants={"c": c, "L_F": p.L_F, "R": p.R})


def _thm1_feasibility(p: FunctionClassParams, t: int) -> BoundReport:
    c = 8.0
    scale = (p.L_G / p.R + 2.0 * p.beta_G) * p.R ** 2
    return BoundReport(theorem="thm1_feasibility", t=t, value=-c * scale / math.sqrt(t),
                       constants={"c": c, "beta_factor": 2.0, "L_G": p.L_G, "beta_G": p.beta_G, "R": p.R})


def _thm2_regret(p: FunctionClassParams, t: int) -> BoundReport:
    c = 246.0
    return BoundReport(theorem="thm2_regret", t=t, value=c * p.L_F * p.R * math.sqrt(t),
                       constants={"c": c, "L_F": p.L_F, "R": p.R})


def _thm2_feasibility(p: FunctionClassParams, t: int) -> BoundReport:
    c = 265.0
    scale = (p.L_G / p.R + 4.0 * p.beta_G) * p.R ** 2
    return BoundReport(theorem="thm2_feasibility", t=t, value=-c * scale / math.sqrt(t + TIME_VARYING_OFFSET),
                       constants={"c": c, "beta_factor": 4.0, "L_G": p.L_G, "beta_G": p.beta_G, "R": p.R})


def _thm2_feasibility_split(p: FunctionClassParams, t: int) -> BoundReport:
    c_lg, c_beta = 265.0, 927.0
    scale = (c_lg * p.L_G / p.R + c_beta * p.beta_G) * p.R ** 2
    return BoundReport(theorem="thm2_feasibility_split", t=t, value=-scale / math.sqrt(t + TIME_VARYING_OFFSET),
                       constants={"c_L_G": c_lg, "c_beta": c_beta, "L_G": p.L_G, "beta_G": p.beta_G, "R": p.R})


def _thm2_attraction(p: FunctionClassParams, t: int) -> BoundReport:
    c = 27.0
    return BoundReport(theorem="thm2_attraction", t=t, value=-c * p.R ** 2 / math.sqrt(t + TIME_VARYING_OFFSET),
                       constants={"c": c, "R": p.R})


def _velocity_bound(p: FunctionClassParams, t: int) -> BoundReport:
    c = 7.0
    return BoundReport(theorem="velocity_bound", t=t, value=c * p.L_F,
                       constants={"c": c, "L_F": p.L_F, "script_V": c * p.L_F})


def _augmented_feasibility(p: FunctionClassParams, t: int) -> BoundReport:
    c = 21.0
    return BoundReport(theorem="augmented_feasibility", t=t, value=-c * p.tvc_scale / math.sqrt(t + TIME_VARYING_OFFSET),
                       constants={"c": c, "beta_factor": 3.0, "L_G": p.L_G, "beta_G": p.beta_G, "R": p.R})


def _average_tvc(p: FunctionClassParams, t: int) -> BoundReport:
    alpha = p.L_F / p.R
    eta_next = 1.0 / (alpha * math.sqrt(t + 1 + TIME_VARYING_OFFSET))
    velocity = 7.0 * p.L_F
    value = 2.0 * eta_next ** 2 * (p.L_G / p.R + 3.0 * p.beta_G) * velocity ** 2
    return BoundReport(theorem="average_tvc", t=t, value=value,
                       constants={"c": 2.0, "eta_next": eta_next, "script_V": velocity,
                                  "L_G": p.L_G, "beta_G": p.beta_G, "R": p.R})


def _tvc_assumption(p: FunctionClassParams, t: int) -> BoundReport:
    c = 98.0
    return BoundReport(theorem="tvc_assumption", t=t, value=c / (t + 16) * p.tvc_scale,
                       constants={"c": c, "L_G": p.L_G, "beta_G": p.beta_G, "R": p.R})


BOUNDS: Dict[str, Callable[[FunctionClassParams, int], BoundReport]] = {
    "thm1_regret": _thm1_regret,
    "thm1_feasibility": _thm1_feasibility,
    "thm2_regret": _thm2_regret,
    "thm2_feasibility": _thm2_feasibility,
    "thm2_feasibility_split": _thm2_feasibility_split,
    "thm2_attraction": _thm2_attraction,
    "velocity_bound": _velocity_bound,
    "augmented_feasibility": _augmented_feasibility,
    "average_tvc": _average_tvc,
    "tvc_assumption": _tvc_assumption,
}


def theorem_bounds(params: FunctionClassParams, T_or_t: int, which: str) -> BoundReport:
    """Evaluate the named guarantee at round t (feasibility) or horizon T (regret)

    Raises:
        UnknownBoundError: which is not one of BOUNDS
    """
    if which not in BOUNDS:
        raise UnknownBoundError(f"unknown bound '{which}'; expected one of {sorted(BOUNDS)}")
    if T_or_t < 1:
        raise ValueError("T_or_t must be >= 1")
    return BOUNDS[which](params, T_or_t)


def feasibility_convergence_bound(
    params: FunctionClassParams,
    velocity_max: float,
    alpha: float,
    eta: float
) -> float:
    """-c eta with c = 2 V (L_G + V beta_G / alpha)"""
    if alpha <= 0 or eta <= 0:
        raise ValueError("alpha and eta must be positive")
    c = 2.0 * velocity_max * (params.L_G + velocity_max * params.beta_G / alpha)
    return -c * eta


def inactive_row_bound(
    params: FunctionClassParams,
    velocity_max: float,
    alpha: float,
    eta_next: float
) -> float:
    """Lower bound -eta_{t+1} V [2 L_G + V beta_G / alpha] for rows not violated at x_t"""
    return -eta_next * velocity_max * (2.0 * params.L_G + velocity_max * params.beta_G / alpha)
