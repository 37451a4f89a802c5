"""Solver and simulation metrics"""
import json
from datetime import datetime
from typing import Any, Dict


class MetricsCollector:
    """Collects and aggregates solver metrics"""

    def __init__(self):
        self.reset_metrics()

    def reset_metrics(self):
        """Reset all metrics"""
        self.metrics = {
            "projections": 0,
            "active_set_iterations": 0,
            "warm_starts": 0,
            "projection_failures": 0,
            "rounds_simulated": 0,
            "runs_completed": 0,
            "errors": [],
            "start_time": datetime.now().isoformat()
        }

    def record_projection(self, iterations: int, warm_started: bool):
        """Record a successful projection"""
        self.metrics["projections"] += 1
        self.metrics["active_set_iterations"] += iterations
        if warm_started:
            self.metrics["warm_starts"] += 1

    def record_rounds(self, rounds: int):
        """Record a completed simulation"""
        self.metrics["rounds_simulated"] += rounds
        self.metrics["runs_completed"] += 1

    def record_error(self, error: str, context: str = ""):
        """Record an error"""
        self.metrics["projection_failures"] += 1
        self.metrics["errors"].append({
            "error": error,
            "context": context,
            "timestamp": datetime.now().isoformat()
        })

        # Keep only last 100 errors
        if len(self.metrics["errors"]) > 100:
            self.metrics["errors"] = self.metrics["errors"][-100:]

    def get_metrics(self) -> Dict[str, Any]:
        """Get current metrics"""
        avg_iterations = (
            self.metrics["active_set_iterations"] / self.metrics["projections"]
            if self.metrics["projections"] > 0
            else 0
        )

        return {
            "projections": self.metrics["projections"],
            "avg_active_set_iterations": round(avg_iterations, 2),
            "warm_start_rate": (
                self.metrics["warm_starts"] / self.metrics["projections"]
                if self.metrics["projections"] > 0
                else 0
            ),
            "projection_failures": self.metrics["projection_failures"],
            "rounds_simulated": self.metrics["rounds_simulated"],
            "runs_completed": self.metrics["runs_completed"],
            "recent_errors": self.metrics["errors"][-10:],
            "uptime_since": self.metrics["start_time"]
        }

    def get_summary(self) -> str:
        """Get metrics summary as string"""
        return json.dumps(self.get_metrics(), indent=2)


# Global metrics collector
metrics_collector = MetricsCollector()
