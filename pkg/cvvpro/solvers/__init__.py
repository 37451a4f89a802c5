"""Solvers package initialization"""
from .projection import (
    ActiveSetProjector,
    enumerate_active_sets_oracle,
    halfspace_projection,
    kkt_residual,
    project_onto_polyhedron,
)
from .simplex import project_onto_simplex

__all__ = [
    "ActiveSetProjector",
    "enumerate_active_sets_oracle",
    "halfspace_projection",
    "kkt_residual",
    "project_onto_polyhedron",
    "project_onto_simplex",
]
