"""Rank criterion on the linear parts, and reduction to a quadratic line problem."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..exact.mpoly import MPoly
from ..exact.qmatrix import QMatrix, bareiss_echelon, solve
from ..exact.rational import Q, format_q
from ..focal import FocalSequence, linear_part_matrix


@dataclass(frozen=True)
class RankCertificate:
    K: int
    matrix: QMatrix
    rank: int
    pivot_columns: tuple       # lexicographically first independent columns
    pivot_rows: tuple         # first independent rows
    param_names: tuple = ()
    independent_prefix: int = 0   # largest k with rows 1..k independent

    @property
    def pivot_params(self) -> tuple:
        if not self.param_names:
            return self.pivot_columns
        return tuple(self.param_names[j] for j in self.pivot_columns)

    @property
    def lower_bound_without_trace(self) -> int:
        return self.rank - 1

    @property
    def lower_bound_with_trace(self) -> int:
        return self.rank

    def report(self) -> list[tuple[str, str]]:
        """Key/value pairs shared by the text and machine outputs."""
        return [
            ("K", str(self.K)),
            ("parameters", str(self.matrix.cols)),
            ("rank", str(self.rank)),
            ("independent_prefix", str(self.independent_prefix)),
            ("pivot_params", ", ".join(map(str, self.pivot_params))),
            ("pivot_rows", ", ".join(str(i + 1) for i in self.pivot_rows)),
            ("bound_without_trace", str(max(self.lower_bound_without_trace, 0))),
            ("bound_with_trace", str(self.lower_bound_with_trace)),
        ]


def _prefix_length(M: QMatrix) -> int:
    rows = M.entries
    for k in range(1, M.rows + 1):
        if bareiss_echelon(rows[:k], M.cols)[0] < k:
            return k - 1
    return M.rows


def rank_certificate(F: FocalSequence) -> RankCertificate:
    M = linear_part_matrix(F)
    if M.cols == 0 or M.rows == 0:
        return RankCertificate(F.K, M, 0, (), (), tuple(F.param_names), 0)
    rank, cols, _ = bareiss_echelon(M.entries, M.cols)
    rows = M.pivot_rows()
    return RankCertificate(F.K, M, rank, tuple(cols), tuple(rows),
                           tuple(F.param_names), _prefix_length(M))


@dataclass
class HigherOrderProblem:
    k: int                          # number of independent linear parts
    residual: tuple                 # residual parameter names
    h: list                         # degree-2 MPoly forms in the residual parameters
    indices: tuple                  # 1-based focal indices of the h_i
    elimination: list = field(default_factory=list)   # pivot param -> linear form in residuals
    pivot_params: tuple = ()

    @property
    def target_index(self) -> int:
        return self.indices[-1]

    @property
    def nvars(self) -> int:
        return len(self.residual)

    def form_text(self, i: int) -> str:
        return self.h[i].to_str(self.residual)


def _quadratic_part(L, nvars: int) -> MPoly:
    return MPoly({e: c for e, c in L.terms.items() if sum(e) == 2}, nvars)


def reduce_to_quadratic_problem(F: FocalSequence, cert: RankCertificate, extra: int,
                                *, corrected: bool = True) -> HigherOrderProblem:
    """Quadratic forms h_{r+1}..h_{r+l} on the subspace where the first r linear parts vanish.

    The pivot parameters are eliminated with the linear parts only (the
    change of variables u_i = L_i^1, then u = 0).  Before restricting, the
    combination of L_1..L_r that matches each target's linear part is
    subtracted, so h_i is the quadratic part of L_i modulo the earlier
    coefficients.  ``corrected=False`` skips that subtraction and restricts
    the bare quadratic part of L_i.
    """
    if F.order < 2:
        raise ValueError("quadratic reduction needs jet order T >= 2")
    r = cert.rank
    if extra < 1:
        raise ValueError("extra must be at least 1")
    if r + extra > F.K:
        raise ValueError(f"need {r + extra} focal coefficients, only {F.K} computed")
    if tuple(cert.pivot_rows) != tuple(range(r)):
        raise ValueError("the first r linear parts are not independent; "
                         "the quadratic reduction needs them as new coordinates")
    m = F.nparams
    names = tuple(F.param_names) or tuple(f"p{j}" for j in range(m))
    piv = list(cert.pivot_columns)
    res = [j for j in range(m) if j not in piv]
    nres = len(res)
    A = cert.matrix

    # pivot params as linear forms in the residual params, from A_RP x_P + A_Rres x_res = 0
    App = QMatrix.from_rows([[A[i, j] for j in piv] for i in range(r)])
    rhs = [[-A[i, j] for i in range(r)] for j in res]
    sol = solve(App, rhs) if r else []          # sol[k][p]: coefficient of residual k in pivot p
    gens = [MPoly.gen(k, nres) for k in range(nres)]
    subst = [None] * m
    elimination = []
    for p, j in enumerate(piv):
        form = MPoly({}, nres)
        for k in range(nres):
            if sol[k][p]:
                form = form + gens[k].scale(sol[k][p])
        subst[j] = form
        elimination.append((names[j], form))
    for k, j in enumerate(res):
        subst[j] = gens[k]

    def restrict(i: int) -> MPoly:
        q = _quadratic_part(F.L[i], m)
        return q.evaluate(subst) if q.terms else MPoly({}, nres)

    base = [restrict(i) for i in range(r)] if corrected else []
    AppT = QMatrix.from_rows([[App[i, p] for i in range(r)] for p in range(r)]) if corrected else None
    forms = []
    idx = tuple(range(r + 1, r + extra + 1))
    for i in (t - 1 for t in idx):
        h = restrict(i)
        if corrected and r:
            c = solve(AppT, [[A[i, j] for j in piv]])[0]
            for j in range(r):
                if c[j]:
                    h = h - base[j].scale(c[j])
        if not isinstance(h, MPoly):
            h = MPoly({}, nres) if h == 0 else MPoly({(0,) * nres: h}, nres)
        forms.append(h)
    return HigherOrderProblem(r, tuple(names[j] for j in res), forms, idx,
                              elimination, tuple(names[j] for j in piv))


def coefficient_text(c) -> str:
    return format_q(Q(c))
