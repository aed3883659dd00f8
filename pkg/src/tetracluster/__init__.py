"""Quantum cluster transformations, quantum dilogarithm identities and the
tetrahedron equation for the associated R-matrix."""

from .errors import TetraError
from .scalar import PolyQ, ScalarQ, q
from .cluster import ExchangeMatrix, TropicalSeed
from .torus import TorusElement
from .monomial import MonomialMap, compose_steps, tau_step
from .series import Series

__version__ = "0.1.0"
