"""Projection solver self-test against brute-force active-set enumeration"""
import logging
import time
from typing import Any, Dict, List

import numpy as np

from ..errors import CVVProError
from ..harness import make_stream
from ..schemas import Polyhedron
from ..solvers import enumerate_active_sets_oracle, project_onto_polyhedron

logger = logging.getLogger(__name__)

MAX_DIMENSION = 6
MAX_INEQUALITIES = 6
MAX_EQUALITIES = 2
AGREEMENT_TOLERANCE = 1e-8


def random_feasible_instance(rng: np.random.Generator):
    """Polyhedron built around a known interior-or-boundary point, plus a point to project"""
    n = int(rng.integers(1, MAX_DIMENSION + 1))
    k = int(rng.integers(0, MAX_INEQUALITIES + 1))
    q = int(rng.integers(0, min(MAX_EQUALITIES, n - 1) + 1))

    anchor = rng.standard_normal(n)
    normals = rng.standard_normal((n, k))
    # About a third of the rows pass exactly through the anchor
    slack = np.where(rng.random(k) < 0.33, 0.0, rng.exponential(1.0, k))
    eq_normals = rng.standard_normal((n, q))
    poly = Polyhedron(
        normals=normals,
        offsets=normals.T @ anchor - slack,
        eq_normals=eq_normals,
        eq_offsets=eq_normals.T @ anchor,
    )
    point = anchor + 3.0 * rng.standard_normal(n)
    return point, poly


def run_qp_selftest(instances: int = 1000, seed: int = 7) -> Dict[str, Any]:
    """Compare project_onto_polyhedron with the enumeration oracle on seeded instances"""
    rng = make_stream(seed, "instance")
    started = time.time()
    mismatches: List[Dict[str, Any]] = []
    max_error = 0.0

    for index in range(instances):
        point, poly = random_feasible_instance(rng)
        try:
            solved = project_onto_polyhedron(point, poly).v
            expected = enumerate_active_sets_oracle(point, poly)
        except CVVProError as e:
            mismatches.append({"instance": index, "error": str(e)})
            continue

        error = float(np.max(np.abs(solved - expected))) if solved.size else 0.0
        max_error = max(max_error, error)
        if error > AGREEMENT_TOLERANCE:
            mismatches.append({
                "instance": index,
                "n": poly.dimension,
                "k": poly.num_inequalities,
                "q": poly.num_equalities,
                "error": error,
            })

    duration = time.time() - started
    logger.info(
        f"QP self-test: {instances - len(mismatches)}/{instances} agree, "
        f"max error {max_error:.2e}, {duration:.2f}s"
    )
    return {
        "instances": instances,
        "seed": seed,
        "agreements": instances - len(mismatches),
        "mismatches": mismatches,
        "max_error": max_error,
        "duration_seconds": round(duration, 3),
        "passed": not mismatches,
    }
