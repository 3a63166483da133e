"""Fredholm indices of real Cauchy-Riemann operators on W-spin orbicurves."""

from .errors import WSpinError
from .qpoly import GroupElement, QPoly, check_nondegeneracy, compute_weights, parse_poly, symmetry_group
from .wspin import DecoratedOrbicurve, MarkedPoint, Metric, validate_structure
from .maslov import BundlePair, maslov, rr_boundary_index
from .index import smooth_total_index, spin_jump, WeightMatrix
from .oracle import GridConfig, HalfCylinderProblem, discrete_index, mode_count_index

__version__ = "0.1.0"
