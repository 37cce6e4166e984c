"""Scattering and electrostatics on open arcs in the plane."""

from .arcgeom import UNIT_SLIT, Arc, CircularArc, Segment, SplineArc, arc_from_dict
from .electrostatic import EquilibriumSolution, solve_equilibrium
from .helmholtz import Density, FarField, IncidentWave, far_field, solve_density

__all__ = [
    "Arc", "CircularArc", "Density", "EquilibriumSolution", "FarField", "IncidentWave",
    "Segment", "SplineArc", "UNIT_SLIT", "arc_from_dict", "far_field", "solve_density",
    "solve_equilibrium",
]
__version__ = "0.1.0"
