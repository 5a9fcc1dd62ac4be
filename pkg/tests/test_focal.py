from __future__ import annotations

import pytest

from hopfcyc.exact.poly3 import Poly3, apply_vector_field
from hopfcyc.exact.rational import Q
from hopfcyc.focal import (FocalError, ResourceError, focal_coefficients, focal_coefficients_field,
                           linear_part_matrix, quadratic_parts)
from hopfcyc.system import parse_system
from hopfcyc.system.model import nonlinear_field

PRINTED_L1 = {"a011": Q(22, 45), "a020": 4, "a101": Q(-4, 45), "a110": Q(2, 3), "a200": Q(4, 3),
              "b011": Q(4, 45), "b020": Q(-2, 3), "b101": Q(22, 45), "b110": Q(-4, 3), "b200": -2}
PRINTED_L2 = {"b200": Q(3713, 25), "c002": Q(4, 3), "a002": Q(-2, 9), "a011": Q(-39937, 1125),
              "a020": Q(-7297, 25), "a101": Q(6409, 1125), "a110": Q(-3389, 75), "a200": Q(-1463, 15),
              "b011": Q(-9409, 1125), "b020": Q(3839, 75), "b101": Q(-37687, 1125), "b110": Q(1433, 15)}
PRINTED_L3 = {"a002": Q(44084, 1785), "a011": Q(28460414, 7875), "a020": Q(442099341, 14875),
              "a101": Q(-76527541, 133875), "c002": Q(-5168, 35), "a110": Q(203415874, 44625),
              "a200": Q(444002837, 44625), "b002": Q(5707, 1785), "b011": Q(116062741, 133875),
              "b020": Q(-233857774, 44625), "b101": Q(26669714, 7875), "b110": Q(-433328537, 44625),
              "b200": Q(-225465802, 14875)}


def linear_part(F, k):
    row = F.L[k - 1].linear_coefficients()
    return {n: v for n, v in zip(F.param_names, row) if v}


@pytest.fixture(scope="module")
def first_three(thirteen_cycle):
    S, pert = thirteen_cycle
    return focal_coefficients(S, pert, 3, 1)[0]


@pytest.mark.parametrize("k, printed", [(1, PRINTED_L1), (2, PRINTED_L2), (3, PRINTED_L3)])
def test_printed_linear_parts(first_three, k, printed):
    assert linear_part(first_three, k) == {n: Q(v) for n, v in printed.items()}


def test_unperturbed_parts_vanish(first_three):
    assert first_three.order_zero() == [0, 0, 0]


def planar(c):
    return parse_system(f"lambda = 1\nP = {c}*x*(x^2+y^2)\nQ = {c}*y*(x^2+y^2)\n")[0]


@pytest.mark.parametrize("c", ["1", "5/7", "-3/2"])
def test_planar_embedding(c):
    # X(x^2+y^2) = 2c(x^2+y^2)^2 with H = x^2+y^2 exactly
    S = planar(c)
    F, _ = focal_coefficients(S, None, 1, 0, convention="radial")
    assert F.order_zero() == [2 * Q(c)]
    # on x^4 alone the obstruction is rescaled by the circle mean of x^4, 3/8
    F, _ = focal_coefficients(S, None, 1, 0, convention="monomial")
    assert F.order_zero() == [2 * Q(c) * Q(8, 3)]


def test_linear_system_has_no_focal_values():
    S, _ = parse_system("lambda = 2\n")
    F, _ = focal_coefficients(S, None, 4, 0)
    assert F.order_zero() == [0] * 4


def test_zero_lambda_is_refused():
    z = Poly3({}, 0, 0)
    with pytest.raises(FocalError):
        focal_coefficients_field([z, z, z], 0, 2)


def _small_problem(catalog, names=("u200", "u011", "v101", "v020", "w002", "w110")):
    e = catalog["thm31a1"]
    S = e.instantiate({"a100": 1, "a010": 2, "a001": 0, "b20": 1, "b11": -1, "b02": 3})
    return S, e.perturbation().restricted(list(names))


@pytest.mark.parametrize("convention", ["monomial", "radial"])
def test_identity_recomputed_independently(catalog, convention):
    S, pert = _small_problem(catalog)
    K, T = 3, 2
    F, H = focal_coefficients(S, pert, K, T, convention=convention, keep_h=True)
    m = pert.nparams
    Hp = H.as_poly3(m, T)
    nl = nonlinear_field(S, pert, T)
    x, y, z = (Poly3.var(v, m, T) for v in "xyz")
    X = [-y + nl[0], x + nl[1], z.scale(-Q(S.lam)) + nl[2]]
    rhs = Poly3({}, m, T)
    for k in range(1, K + 1):
        bundle = (x * x + y * y) ** (k + 1) if convention == "radial" else x ** (2 * k + 2)
        rhs = rhs + bundle * Poly3({(0, 0, 0): F.L[k - 1]}, m, T)
    assert not (apply_vector_field(X, Hp) - rhs).truncate(2 * K + 2)


@pytest.mark.parametrize("entry", ["thm31a1", "thm33c"])
def test_rank_independent_of_normalization(catalog, entry):
    e = catalog[entry]
    S, pert = e.instantiate(e.rank_sample(1)), e.perturbation()
    ranks = set()
    for norm in ("kernel", "xpow", "ypow"):
        F, _ = focal_coefficients(S, pert, 7, 1, normalization=norm)
        ranks.add(linear_part_matrix(F).rank())
    assert len(ranks) == 1


def test_scaling_covariance(catalog):
    S, pert = _small_problem(catalog)
    F1, _ = focal_coefficients(S, pert, 3, 2)
    F2, _ = focal_coefficients(S, pert.scaled(2), 3, 2)
    for k in range(1, 4):
        for j in (1, 2):
            assert F2.slice(k, j) == F1.slice(k, j).scale(2 ** j)


def test_quadratic_parts_follow_relabeling(catalog):
    names = ("u200", "u011", "v101", "w002")
    S, pert = _small_problem(catalog, names)
    F, _ = focal_coefficients(S, pert, 3, 2)
    perm_names = ("w002", "u200", "v101", "u011")
    S2, pert2 = _small_problem(catalog, perm_names)
    G, _ = focal_coefficients(S2, pert2, 3, 2)
    perm = [perm_names.index(n) for n in names]
    for a, b in zip(quadratic_parts(F, [1, 2, 3]), quadratic_parts(G, [1, 2, 3])):
        assert a.relabel(perm) == b


def test_quadratic_parts_need_second_order(first_three):
    with pytest.raises(ValueError):
        quadratic_parts(first_three, [1])


def test_zero_perturbation_gives_zero_matrix(catalog):
    S = catalog["thm38"].instantiate()
    F, _ = focal_coefficients(S, catalog["thm38"].perturbation().scaled(0), 4, 1)
    M = linear_part_matrix(F)
    assert (M.rows, M.cols) == (4, 13) and M.rank() == 0


def test_memory_budget_reports_progress(catalog):
    S, pert = _small_problem(catalog)
    with pytest.raises(ResourceError) as info:
        focal_coefficients(S, pert, 8, 1, max_entries=300)
    assert 0 <= info.value.last_completed < 8
    assert focal_coefficients(S, pert, 8, 1, max_entries=10 ** 7)[0].K == 8


def test_jet_orders_agree(catalog):
    # the order-1 slice does not depend on the truncation order of the run
    S, pert = _small_problem(catalog)
    F1, _ = focal_coefficients(S, pert, 3, 1)
    F2, _ = focal_coefficients(S, pert, 3, 2)
    assert [F1.slice(k, 1) for k in (1, 2, 3)] == [F2.slice(k, 1).truncate(1) for k in (1, 2, 3)]
