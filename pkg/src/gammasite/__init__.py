"""Exact finite models of S-algebras, their spectra as Grothendieck sites,
structure sheaves and topos points."""

from .gamma_core import PointedMap, SAlgebra, SAlgebraMorphism, smash_index
from .families import H, SM, norm_ball_HQ1, product, quotient, sphere
from .structures import FiniteMonoid, FiniteSemiring, StructureError

__version__ = "0.1.0"
