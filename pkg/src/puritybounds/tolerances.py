"""Shared numerical tolerances."""
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    algebraic: float = 1e-10
    quadrature: float = 1e-6
    hermiticity: float = 1e-12


TOL = Tolerances()
