"""Discrete octonionic function theory on the lattice hZ^8."""

from octolat.lattice import DIM, GridFunction, GridSpec, HalfSpace, Topology
from octolat.layer import BoundaryData
from octolat.octonion import ComplexOctonion, Octonion

__all__ = ["DIM", "BoundaryData", "ComplexOctonion", "GridFunction", "GridSpec", "HalfSpace", "Octonion", "Topology"]
__version__ = "0.1.0"
