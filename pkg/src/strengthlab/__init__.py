"""Rank (strength) of polynomials, difference operators, multilinear forms,
bias and Gowers norms over small finite fields."""
from .field import GF, FieldElement, FiniteField, find_irreducible, inv, trace
from .poly import (
    Polynomial,
    ValueTable,
    delta,
    directional_derivative,
    evaluate,
    homogeneous_part,
    parse,
    to_text,
    value_table,
)

__version__ = "0.1.0"
