"""Observability package initialization"""
from .logging_setup import RunLogger, configure_logging, run_logger
from .metrics import MetricsCollector, metrics_collector

__all__ = [
    "RunLogger",
    "configure_logging",
    "run_logger",
    "MetricsCollector",
    "metrics_collector",
]
