"""Base class for online learners"""
import logging
from typing import List, Optional

import numpy as np

from ..schemas import LearnerConfig, LearnerState, StepRecord

logger = logging.getLogger(__name__)


class BaseLearner:
    """Base class for all online learners

    A learner owns its state and the records of every round it played. One
    instance serves exactly one run.
    """

    def __init__(
        self,
        learner_name: str,
        description: str,
        config: LearnerConfig,
        x0: np.ndarray
    ):
        """Initialize the learner

        Args:
            learner_name: Identifier used in logs and output metadata
            description: Short description of the update rule
            config: Step schedule, softening rate and function class constants
            x0: Initial decision x_1
        """
        self.learner_name = learner_name
        self.description = description
        self.config = config
        self.state = LearnerState(x=np.array(x0, dtype=float), t=1)
        self.records: List[StepRecord] = []

        logger.info(
            f"Initialized {learner_name} (n={self.dimension}, alpha={config.alpha}, "
            f"d={config.step_offset}, augment={config.augment})"
        )

    @property
    def dimension(self) -> int:
        return self.state.x.shape[0]

    @property
    def t(self) -> int:
        return self.state.t

    def play(self) -> np.ndarray:
        """Decision x_t for the current round"""
        return self.state.x.copy()

    def _commit(self, state: LearnerState, record: StepRecord) -> StepRecord:
        self.state = state
        self.records.append(record)
        return record

    def last_record(self) -> Optional[StepRecord]:
        return self.records[-1] if self.records else None

    def describe(self) -> dict:
        """Configuration written into run metadata"""
        return {
            "learner": self.learner_name,
            "description": self.description,
            "alpha": self.config.alpha,
            "step_offset": self.config.step_offset,
            "augment": self.config.augment,
            "params": self.config.params.model_dump(),
        }
