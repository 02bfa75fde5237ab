"""Generalised Pythagorean equations ax^2+by^2+cz^2=0 over Q and Q(sqrt(d)).

Solvability certificates, Legendre descent with lattice reduction, slope
parameterisation of all solutions, and Holzer-style minimisation.
"""

from .fields import (
    FieldDescriptor,
    FieldElement,
    format_element,
    make_field,
    parse_element,
)
from .solvability import Certificate, ConicEquation, check_solvable
from .descent import DescentTrace, SolutionTriple, legendre_descent, solve_conic, verify
from .parametrize import enumerate_solutions, param_solution, primitive_param
from .holzer import is_reduced, reduce_solution

__all__ = [
    "Certificate",
    "ConicEquation",
    "DescentTrace",
    "FieldDescriptor",
    "FieldElement",
    "SolutionTriple",
    "check_solvable",
    "enumerate_solutions",
    "format_element",
    "is_reduced",
    "legendre_descent",
    "make_field",
    "param_solution",
    "parse_element",
    "primitive_param",
    "reduce_solution",
    "solve_conic",
    "verify",
]

__version__ = "0.1.0"
