"""Arithmetic linking invariants for primes.

Exact arithmetic in unitriangular groups over Z/q, Magnus-series
coefficients, globalizations of link-type presentations, and the classical
Legendre / Redei symbols they specialize to over Q.
"""

from .arithmetic import (ConicSolution, SymbolResult, legendre,
                         linking_invariant_n1, linking_invariant_n2,
                         mu_linking_number, redei_solve_conic, redei_symbol)
from .linking import (Globalization, LinkPresentation, Obstruction, Relator,
                      Slot, build_globalization, check_link_type_vanishing,
                      fiber_lift, hoechsmann_pairing, linking_invariant,
                      massey_coordinates, parse_presentation)
from .magnus import TruncatedSeries, eps, magnus_eval, magnus_matrix
from .rings import ResidueRing
from .unitriangular import (ConvexShape, PartialMatrix, elementary,
                            fiber_decompose, fiber_glue, filtration_depth,
                            identity, inverse, is_convex, mul, project,
                            project_window)
from .words import GroupWord, commutator, parse_word

__version__ = "0.1.0"
