"""CSV and JSON emission of run logs"""
import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..errors import EmissionError
from ..schemas import CSV_FIELDS, BenchmarkResult, MetricsLog, StepRecord

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")


def _number(value: Optional[float]) -> str:
    """Shortest round-trip decimal; blank for missing values"""
    if value is None:
        return ""
    return repr(float(value))


def _series_value(log: MetricsLog, name: str, index: int) -> Optional[float]:
    values = log.series.get(name)
    if not values:
        return None
    return values[index]


def csv_rows(log: MetricsLog) -> List[Dict[str, str]]:
    """One CSV row per round with the fixed column set"""
    rows = []
    for index, record in enumerate(log.records):
        rows.append({
            "t": str(record.t),
            "cost": _number(record.cost),
            "regret": _number(_series_value(log, "regret", index)),
            "max_violation": _number(_series_value(log, "max_violation", index)),
            "violated_fraction": _number(_series_value(log, "violated_fraction", index)),
            "avg_iterate_distance": _number(_series_value(log, "avg_iterate_distance", index)),
            "eta": _number(record.eta),
            "velocity_norm": _number(record.velocity_norm),
            "kkt_residual": _number(record.kkt_residual),
            "projection_rows": str(record.projection_rows),
            "hypersphere_active": "true" if record.hypersphere_active else "false",
        })
    return rows


def to_csv(log: MetricsLog) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(csv_rows(log))
    return buffer.getvalue()


def to_json_payload(log: MetricsLog) -> Dict[str, Any]:
    """Full-fidelity representation: records, checkpoints, series and metadata"""
    return {
        "metadata": log.metadata,
        "m": log.m,
        "equality_rows": log.equality_rows,
        "records": [record.to_dict() for record in log.records],
        "checkpoints": [checkpoint.to_dict() for checkpoint in log.checkpoints],
        "final_benchmark": log.final_benchmark.to_dict() if log.final_benchmark else None,
        "series": log.series,
    }


def to_json(log: MetricsLog) -> str:
    return json.dumps(to_json_payload(log), indent=2, sort_keys=True) + "\n"


def emit(log: MetricsLog, fmt: str, path: Union[str, Path]) -> Path:
    """Write the log as CSV or JSON; identical logs produce identical bytes

    Raises:
        EmissionError: the file could not be written
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format '{fmt}'; expected one of {FORMATS}")
    text = to_csv(log) if fmt == "csv" else to_json(log)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        raise EmissionError(str(path), e) from e

    logger.info(f"Wrote {fmt} log with {log.T} records to {path}")
    return path


def load_log(path: Union[str, Path]) -> MetricsLog:
    """Read a JSON log written by emit()"""
    with open(path, "r", encoding="utf-8") as f:
        payload = json.load(f)

    final = payload.get("final_benchmark")
    return MetricsLog(
        records=[StepRecord.from_dict(record) for record in payload["records"]],
        checkpoints=[BenchmarkResult.from_dict(checkpoint) for checkpoint in payload["checkpoints"]],
        final_benchmark=BenchmarkResult.from_dict(final) if final else None,
        m=payload.get("m", 0),
        equality_rows=payload.get("equality_rows", 0),
        series=payload.get("series", {}),
        metadata=payload.get("metadata", {}),
    )
