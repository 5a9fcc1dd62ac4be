from __future__ import annotations

import random

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from hopfcyc.cyclicity import (AlgebraicNumber, HigherOrderProblem, LineCertificate, NotFound,
                               NumberField, isolate_real_roots, rank_certificate,
                               reduce_to_quadratic_problem, solve_line, verify_line)
from hopfcyc.cyclicity.algebraic import (count_roots, element_minpoly, factor_rational,
                                         integral_scale, peval, sturm_sequence)
from hopfcyc.cyclicity.elimination import eliminate, resultant
from hopfcyc.cyclicity.line import read_eta_file
from hopfcyc.exact.mpoly import JetPoly, MPoly
from hopfcyc.exact.rational import Q
from hopfcyc.focal import FocalSequence

WIDTH = Q(1, 2 ** 64)
ONE = AlgebraicNumber((-1, 1), Q(0), Q(2))          # alpha = 1, for rational lines


def forms(n, *specs):
    """Quadratic forms from {(i, j): coeff} maps over n variables."""
    out = []
    for spec in specs:
        terms = {}
        for (i, j), c in spec.items():
            e = [0] * n
            e[i] += 1
            e[j] += 1
            terms[tuple(e)] = c
        out.append(MPoly(terms, n))
    return out


def problem(n, *specs, k=0):
    h = forms(n, *specs)
    return HigherOrderProblem(k, tuple(f"x{i + 1}" for i in range(n)), h,
                              tuple(range(k + 1, k + len(h) + 1)))


# -- real roots and Q(alpha) ---------------------------------------------------

int_polys = st.lists(st.integers(-30, 30), min_size=2, max_size=7).filter(lambda c: c[-1] != 0)


@settings(max_examples=60, deadline=None)
@given(int_polys)
def test_sturm_counts_match_numeric_roots(coeffs):
    p = [Q(c) for c in coeffs]
    sq = sp.Poly(list(reversed(coeffs)), sp.Symbol("t"))
    distinct = sorted(set(float(r) for r in sp.real_roots(sq)))
    ivs = isolate_real_roots(p, WIDTH)
    assert len(ivs) == len(distinct)
    seq = sturm_sequence(p)
    for (lo, hi), r in zip(ivs, distinct):
        assert hi - lo <= WIDTH
        assert float(lo) - 1e-9 <= r <= float(hi) + 1e-9
        if lo == hi:        # exactly rational root
            assert peval(p, lo) == 0
        else:
            assert count_roots(seq, lo, hi) == 1


def test_number_field_arithmetic():
    alpha = AlgebraicNumber((-2, 0, 1), Q(1), Q(2))
    F = NumberField(alpha)
    a = F.gen()
    assert a * a == F(2)
    assert (1 / a) * a == F(1)
    assert (a - Q(3, 2)).sign() == -1 and (a - Q(7, 5)).sign() == 1
    assert element_minpoly(a + 1) == [-1, -2, 1]
    assert not (a * a - 2)


def test_factor_and_scale():
    assert factor_rational([Q(-2), Q(0), Q(2)]) in ([([-1, 0, 1], 1)], [([-1, 1], 1), ([1, 1], 1)],
                                                   [([1, 1], 1), ([-1, 1], 1)])
    assert integral_scale([7, 3, 9]) == 3
    assert integral_scale([7, 2, 9]) == 1


def test_resultant_matches_sympy():
    a, b = sp.symbols("a b")
    f = MPoly({(2, 0): 1, (0, 1): -3, (1, 1): 2}, 2)
    g = MPoly({(1, 0): 1, (0, 2): 1, (0, 0): -5}, 2)
    ours = resultant(f, g, 0)
    ref = sp.Poly(sp.resultant(a ** 2 - 3 * b + 2 * a * b, a + b ** 2 - 5, a), b)
    assert {e[1]: c for e, c in ours.terms.items()} == {m[0]: Q(int(c)) for m, c in zip(ref.monoms(), ref.coeffs())}


def test_elimination_removes_shared_components():
    # both equations vanish on the line x + y = 1; the remaining common point is isolated
    x, y = MPoly.gen(0, 2), MPoly.gen(1, 2)
    line = x + y - 1
    f = line * (x - 2)
    g = line * (y - 3)
    stages, last, unis, removed = eliminate([f, g, x * y - 6], [0, 1])
    assert removed


# -- rank certificates ---------------------------------------------------------

def sequence(rows, quad=None, order=1):
    m = len(rows[0])
    L = []
    for i, r in enumerate(rows):
        terms = {tuple(1 if t == j else 0 for t in range(m)): c for j, c in enumerate(r) if c}
        if quad and i in quad:
            terms.update(quad[i])
        L.append(JetPoly(terms, m, order))
    return FocalSequence(L, m, order, tuple(f"p{j}" for j in range(m)))


def test_rank_certificate_bookkeeping():
    F = sequence([[1, 0, 2, 0], [0, 1, 1, 0], [1, 1, 3, 0], [0, 0, 0, 5]])
    c = rank_certificate(F)
    assert c.rank == 3
    assert c.lower_bound_without_trace == 2 and c.lower_bound_with_trace == 3
    assert c.independent_prefix == 2
    assert c.pivot_params == ("p0", "p1", "p3")


def test_rank_certificate_of_zero_matrix():
    F = sequence([[0, 0], [0, 0]])
    assert rank_certificate(F).rank == 0


def test_thirteen_cycle_rank(thirteen_cycle_linear):
    c = rank_certificate(thirteen_cycle_linear)
    assert c.rank == 9 and c.lower_bound_with_trace == 9
    assert c.pivot_params == ("a002", "a011", "a020", "a101", "a110", "a200", "b002", "b011", "b020")


def test_reduction_against_direct_substitution():
    # L1 = p0 + p2 + p0 p1, L2 = p1 - p2 + p2^2, L3 = 2 p0 + 2 p2 + p1 p2 + 3 p2^2
    quad = {0: {(1, 1, 0): 1}, 1: {(0, 0, 2): 1}, 2: {(0, 1, 1): 1, (0, 0, 2): 3}}
    F = sequence([[1, 0, 1], [0, 1, -1], [2, 0, 2]], quad, order=2)
    c = rank_certificate(F)
    assert c.rank == 2
    p = reduce_to_quadratic_problem(F, c, 1)
    assert p.residual == ("p2",)
    t = sp.Symbol("t")
    # first order: p0 = -t, p1 = t; L3 - 2 L1 restricted = (p1 p2 + 3 p2^2 - 2 p0 p1) at that point
    expect = sp.expand(t * t + 3 * t * t - 2 * (-t) * t)
    assert p.h[0] == MPoly({(2,): int(expect.coeff(t, 2))}, 1)
    bare = reduce_to_quadratic_problem(F, c, 1, corrected=False)
    assert bare.h[0] == MPoly({(2,): 4}, 1)


def test_reduction_preconditions():
    F1 = sequence([[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        reduce_to_quadratic_problem(F1, rank_certificate(F1), 1)
    F2 = sequence([[1, 0, 0], [0, 1, 0]], order=2)
    with pytest.raises(ValueError):
        reduce_to_quadratic_problem(F2, rank_certificate(F2), 1)
    F3 = sequence([[0, 0, 0], [0, 1, 0], [1, 0, 0]], order=2)
    with pytest.raises(ValueError):
        reduce_to_quadratic_problem(F3, rank_certificate(F3), 1)


def test_zero_quadratic_parts_give_zero_forms():
    F = sequence([[1, 0, 0], [0, 0, 0]], order=2)
    p = reduce_to_quadratic_problem(F, rank_certificate(F), 1)
    assert p.h == [MPoly({}, 2)]


# -- line search and verification ----------------------------------------------

def coordinate_problem():
    # x1 x4, x2 x4, x3 x4 vanish on the x4 axis; x4^2 does not
    return problem(4, {(0, 3): 1}, {(1, 3): 1}, {(2, 3): 1}, {(3, 3): 1})


def test_coordinate_line_found_after_retry():
    res = solve_line(coordinate_problem())
    assert isinstance(res, LineCertificate) and res.verified
    assert [v.to_str() for v in res.eta] == ["0", "0", "0", "1"]
    assert res.total_bound == 4


def test_squares_are_not_transversal():
    res = solve_line(problem(4, {(0, 0): 1}, {(1, 1): 1}, {(2, 2): 1}, {(3, 3): 1}))
    assert isinstance(res, NotFound)
    assert any("not transversal" in why for _, why in res.attempts)


def _definite(n, rng):
    B = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
    A = [[sum(B[k][i] * B[k][j] for k in range(n)) + (1 if i == j else 0) for j in range(n)] for i in range(n)]
    spec = {}
    for i in range(n):
        for j in range(i, n):
            spec[(i, j)] = A[i][j] * (1 if i == j else 2)
    return spec, np.array(A, dtype=float)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_no_real_line_is_not_found(seed):
    rng = random.Random(seed)
    n = 3
    specs, mats = zip(*(_definite(n, rng) for _ in range(n - 1)))
    target = {(0, 1): 1, (2, 2): 1}
    # oracle: the first form is positive on a dense sample of the unit sphere
    pts = np.random.default_rng(seed).normal(size=(20000, n))
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    assert np.einsum("ij,jk,ik->i", pts, mats[0], pts).min() > 0
    res = solve_line(problem(n, *specs, target))
    assert isinstance(res, NotFound)


def test_verify_rejects_origin_and_nudged_line():
    p = coordinate_problem()
    ok, _ = verify_line(p, [[0], [0], [0], [0]], ONE)
    assert not ok
    ok, cert = verify_line(p, [[0], [Q(1, 1000)], [0], [1]], ONE)
    assert not ok and not cert.values[1].is_zero()
    ok, _ = verify_line(p, [[0], [0], [0], [1]], ONE)
    assert ok


def test_signs_invariant_under_scaling():
    # x1 (x1 - x3) and x2 (x2 - x3) vanish on (1, 1, 1); x1 x2 + x3^2 is positive there
    p = problem(3, {(0, 0): 1, (0, 2): -1}, {(1, 1): 1, (1, 2): -1}, {(0, 1): 1, (2, 2): 1})
    res = solve_line(p)
    assert isinstance(res, LineCertificate)
    F = res.field
    scaled = [v * 4 for v in res.eta]
    ok, cert = verify_line(p, scaled, res.alpha, res.jacobian_vars, F)
    assert ok
    assert cert.determinant.sign() == res.determinant.sign()
    assert cert.final_value.sign() == res.final_value.sign()


def test_round_trip_through_text():
    res = solve_line(coordinate_problem())
    text = "\n".join(f"{k} = {v}" for k, v in res.report())
    eta, alpha = read_eta_file(text, coordinate_problem())
    assert verify_line(coordinate_problem(), eta, alpha)[0]


# -- the 13-cycle certificate ---------------------------------------------------

@pytest.mark.slow
def test_thirteen_cycle_forms(thirteen_cycle_problem):
    p = thirteen_cycle_problem
    assert p.k == 9 and p.indices == (10, 11, 12, 13)
    assert p.residual == ("b101", "b110", "b200", "c002")
    h10 = p.h[0]
    assert h10 and all(sum(e) == 2 for e in h10.terms)
    assert len(h10.terms) == 9 and (0, 0, 0, 2) not in h10.terms


@pytest.mark.slow
def test_thirteen_cycle_certificate(thirteen_cycle_problem, thirteen_cycle_certificate):
    cert = thirteen_cycle_certificate
    assert isinstance(cert, LineCertificate) and cert.verified
    assert cert.alpha.degree == 3
    assert all(isinstance(c, int) for c in cert.alpha.minpoly)
    names = thirteen_cycle_problem.residual
    eta = dict(zip(names, cert.eta))
    assert eta["b101"] == cert.field(1)
    assert eta["b200"] == cert.field.gen() / 3
    assert not cert.determinant.is_zero() and not cert.final_value.is_zero()
    assert cert.total_bound == 13
    assert 2.45 < cert.alpha.approx() < 2.47


@pytest.mark.slow
def test_thirteen_cycle_round_trip(thirteen_cycle_problem, thirteen_cycle_certificate):
    text = "\n".join(f"{k} = {v}" for k, v in thirteen_cycle_certificate.report())
    eta, alpha = read_eta_file(text, thirteen_cycle_problem)
    ok, cert = verify_line(thirteen_cycle_problem, eta, alpha)
    assert ok and cert.total_bound == 13
