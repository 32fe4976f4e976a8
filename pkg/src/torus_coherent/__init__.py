"""Coherent states for a quantum particle on a circle and on a two-torus."""
from .circle_cs import PhasePoint1D
from .theta_engine import theta2, theta3
from .torus_cs import SYMMETRIC_SECTORS, DensityGrid, TorusPhasePoint, TorusSector, TorusState

__all__ = [
    "PhasePoint1D",
    "theta2",
    "theta3",
    "SYMMETRIC_SECTORS",
    "DensityGrid",
    "TorusPhasePoint",
    "TorusSector",
    "TorusState",
]
