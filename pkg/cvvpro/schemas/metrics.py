"""Metrics Log Schema"""
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from .game import BenchmarkResult
from .learner import StepRecord

CSV_FIELDS = [
    "t",
    "cost",
    "regret",
    "max_violation",
    "violated_fraction",
    "avg_iterate_distance",
    "eta",
    "velocity_norm",
    "kkt_residual",
    "projection_rows",
    "hypersphere_active",
]


class MetricsLog(BaseModel):
    """Per-round records of one run plus checkpoints, derived series and metadata"""
    records: List[StepRecord] = Field(default_factory=list, description="One record per round")
    checkpoints: List[BenchmarkResult] = Field(default_factory=list, description="Hindsight benchmarks")
    final_benchmark: Optional[BenchmarkResult] = Field(None, description="x*_T used by the fixed-final convention")
    m: int = Field(0, ge=0, description="Number of tracked constraints for violated_fraction")
    equality_rows: int = Field(0, ge=0, description="Permanent equality rows per projection")
    series: Dict[str, List[Optional[float]]] = Field(default_factory=dict, description="Derived series")
    metadata: Dict[str, Any] = Field(default_factory=dict, description="Config, seeds, versions")

    class Config:
        arbitrary_types_allowed = True

    @property
    def T(self) -> int:
        return len(self.records)

    def decisions(self) -> np.ndarray:
        """T x n matrix of played decisions"""
        if not self.records:
            return np.zeros((0, 0))
        return np.vstack([record.x for record in self.records])

    def adversary_moves(self) -> Optional[np.ndarray]:
        """T x n matrix of adversary moves, if recorded"""
        if not self.records or self.records[0].adversary_move is None:
            return None
        return np.vstack([record.adversary_move for record in self.records])

    def checkpoint_at(self, t: int, convention: str = "per_checkpoint") -> Optional[BenchmarkResult]:
        for checkpoint in self.checkpoints:
            if checkpoint.t == t and checkpoint.convention == convention:
                return checkpoint
        return None
