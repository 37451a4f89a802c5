"""Logging configuration and structured run events"""
import json
import logging
from typing import Any, Dict, Optional

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(level: str = "INFO") -> None:
    """Configure root logging once for CLI runs"""
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT)


class RunLogger:
    """Logger for simulation and diagnostic events"""

    def __init__(self):
        self.logger = logging.getLogger("cvvpro.runs")

    def log_run_started(self, learner: str, n: int, m: int, T: int, instance_seed: int, run_seed: int):
        """Log the start of a simulation"""
        log_data = {
            "event": "run_started",
            "learner": learner,
            "n": n,
            "m": m,
            "T": T,
            "instance_seed": instance_seed,
            "run_seed": run_seed
        }
        self.logger.info(f"Run event: {json.dumps(log_data)}")

    def log_checkpoint(self, t: int, value: float, kkt_residual: float, iterations: int):
        """Log a solved hindsight benchmark"""
        log_data = {
            "event": "checkpoint_solved",
            "t": t,
            "value": round(value, 6),
            "kkt_residual": kkt_residual,
            "iterations": iterations
        }
        self.logger.debug(f"Run event: {json.dumps(log_data)}")

    def log_run_completed(self, learner: str, T: int, duration: float, final_regret: Optional[float]):
        """Log the end of a simulation"""
        log_data = {
            "event": "run_completed",
            "learner": learner,
            "T": T,
            "duration_seconds": round(duration, 3),
            "final_regret": final_regret
        }
        self.logger.info(f"Run event: {json.dumps(log_data)}")

    def log_projection_failure(self, round_index: int, error: str):
        """Log a failed velocity or OGD projection"""
        log_data = {
            "event": "projection_failed",
            "round": round_index,
            "error": error
        }
        self.logger.error(f"Run event failed: {json.dumps(log_data)}")

    def log_check(self, check: str, passed: bool, details: Dict[str, Any]):
        """Log the outcome of a diagnostic check"""
        log_data = {"event": "check_completed", "check": check, "passed": passed}
        log_data.update(details)

        if passed:
            self.logger.info(f"Check: {json.dumps(log_data, default=float)}")
        else:
            self.logger.error(f"Check failed: {json.dumps(log_data, default=float)}")


# Global run logger instance
run_logger = RunLogger()
