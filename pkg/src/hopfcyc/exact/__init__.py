from .rational import Q, to_q, parse_q, format_q
from .mpoly import MPoly, JetPoly, jet_mul, monomials_upto, lincomb
from .poly3 import Poly3, apply_vector_field, poly3_apply_vector_field
from .qmatrix import QMatrix, qmatrix_rank, determinant, solve, rref

__all__ = [
    "Q", "to_q", "parse_q", "format_q",
    "MPoly", "JetPoly", "jet_mul", "monomials_upto", "lincomb",
    "Poly3", "apply_vector_field", "poly3_apply_vector_field",
    "QMatrix", "qmatrix_rank", "determinant", "solve", "rref",
]
