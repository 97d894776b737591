"""Exponential sums, Newton and Hodge polygons, and Hasse polynomials for the
Laurent family  f = sum a_i x_{n+1} (x_i + 1/x_i) + a_{n+1} x_{n+1} + 1/x_{n+1}."""

from .config import BudgetExceeded, config
from .ff import FField, FFElem, ff_make, parse_elem
from .cyclo import CycInt, CycRat
from .expsum import FamilySpec, LaurentPoly, expsum_direct, expsum_family, klo_table, power_sums
from .lfun import (LPolyCoeffs, Polygon, coeffs_from_power_sums, fe_complete,
                   functional_equation_check, newton_polygon, symmetry_complete)
from .polytope import Polytope, family_hodge_polygon, family_polytope, hodge_polygon, weight_counts
from .dwork import hasse_closed_full, hasse_closed_le1, hasse_minor, nondegenerate
from .sing import MPolyFp, gradient, hasse_symbolic, singular_search
from .pipeline import HasseReport, SweepRecord, cmd_case, cmd_sweep

__version__ = "0.1.0"
