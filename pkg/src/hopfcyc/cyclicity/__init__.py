from .algebraic import AlgebraicNumber, NumberField, FieldElement, isolate_real_roots, sturm_sequence
from .rank import RankCertificate, HigherOrderProblem, rank_certificate, reduce_to_quadratic_problem
from .line import LineCertificate, NotFound, solve_line, verify_line

__all__ = [
    "AlgebraicNumber", "NumberField", "FieldElement", "isolate_real_roots", "sturm_sequence",
    "RankCertificate", "HigherOrderProblem", "rank_certificate", "reduce_to_quadratic_problem",
    "LineCertificate", "NotFound", "solve_line", "verify_line",
]
