from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from hopfcyc.exact.poly3 import Poly3
from hopfcyc.exact.rational import Q
from hopfcyc.focal import focal_coefficients
from hopfcyc.system import (SystemSpec, SystemSyntaxError, SystemValidationError, parse_system,
                            print_system)
from hopfcyc.system.catalog import CenterConditionError, instantiate_center, load_entry
from hopfcyc.system.model import standard_quadratic_perturbation

THIRTEEN_MASK = ("c011", "c020", "c101", "c110", "c200")


def test_thirteen_cycle_file_has_expected_R(catalog):
    S = catalog["thm38"].instantiate()
    assert S.R.rational_coeff((2, 0, 0)) == Q(2, 3)
    assert S.R.rational_coeff((0, 2, 0)) == Q(-2, 3)
    assert S.R.rational_coeff((0, 0, 2)) == 6
    assert S.P.rational_coeff((1, 0, 1)) == 3
    assert S.lam == 1


def test_linear_system_is_valid():
    S, pert = parse_system("lambda = 1\n")
    assert not S.P and not S.Q and not S.R
    assert pert.nparams == 0


@pytest.mark.parametrize("text", [
    "lambda = 1\nP = x^1\n",
    "lambda = 1\nQ = 3\n",
    "lambda = 1\nparams = a\nG2 = a*y\n",
])
def test_low_degree_terms_are_rejected(text):
    with pytest.raises(SystemValidationError):
        parse_system(text)


def test_zero_lambda_is_rejected():
    with pytest.raises(SystemValidationError):
        parse_system("lambda = 0\nP = x^2\n")


@pytest.mark.parametrize("text, line, col", [
    ("lambda = 1\nP = x*y +\n", 2, 10),
    ("lambda = 1\nP = x*$\n", 2, 7),
    ("lambda = 1\nfoo = 2\n", 2, 1),
    ("lambda = 1\nP x^2\n", 2, 1),
])
def test_syntax_errors_carry_position(text, line, col):
    with pytest.raises(SystemSyntaxError) as info:
        parse_system(text)
    assert (info.value.line, info.value.col) == (line, col)


def test_nonlinear_parameter_dependence_is_rejected():
    with pytest.raises(SystemValidationError):
        parse_system("lambda = 1\nparams = a, b\nG1 = a*b*x^2\n")


def test_standard_quadratic_counts():
    assert standard_quadratic_perturbation(("a", "b", "c")).nparams == 18
    masked = standard_quadratic_perturbation(("a", "b", "c"), THIRTEEN_MASK)
    assert masked.nparams == 13
    assert "c002" in masked.params and "c011" not in masked.params
    with pytest.raises(ValueError):
        standard_quadratic_perturbation(("a", "b", "c"), degree=3)


def test_thirteen_cycle_entry_uses_masked_perturbation(catalog):
    pert = catalog["thm38"].perturbation()
    assert pert.params == standard_quadratic_perturbation(("a", "b", "c"), THIRTEEN_MASK).params


def test_first_rigid_family_sample_is_a_center(catalog):
    e = catalog["thm31a1"]
    S = instantiate_center(e, {"a100": 1, "a010": 2, "a001": 0, "b20": 1, "b11": -1, "b02": 3})
    F, _ = focal_coefficients(S, None, 12, 0)
    assert all(v == 0 for v in F.order_zero())


def test_first_rigid_family_rejects_off_condition_sample(catalog):
    with pytest.raises(CenterConditionError) as info:
        catalog["thm31a1"].instantiate({"a100": 1, "a010": 2, "a001": 1, "b20": 1, "b11": -1, "b02": 3})
    assert "a001 = 0" in str(info.value)


def test_zero_denominator_in_condition_is_rejected(catalog):
    e = catalog["thm33f"]
    with pytest.raises(CenterConditionError) as info:
        e.instantiate({"a100": 1, "a010": 2, "a001": 0, "b002": 1})
    assert "division by zero" in str(info.value)


def test_random_samples_are_seeded_and_valid(catalog):
    e = catalog["thm33e"]
    s1, s2 = e.random_sample(5), e.random_sample(5)
    assert s1 == s2
    e.complete_sample(s1)       # raises if any equation fails
    assert e.random_sample(6) != s1


def test_recorded_sample_pins_rank_experiments(catalog):
    e = catalog["thm33d"]
    rec = e.recorded_sample()
    assert rec == {"a100": 1, "a010": 2, "a001": 3, "b200": Q(2, 3), "b110": 1}
    assert e.rank_sample()["b101"] == 2 * 1 + 2


def test_catalog_lists_every_center_condition(catalog):
    assert len(catalog) >= 16
    families = {k[:5] for k in catalog}
    assert {"thm31", "thm33", "thm34", "thm35", "thm37", "thm38"} <= families


def test_catalog_entry_from_text():
    e = load_entry("id = toy\nlambda = 1\nP = x*(a*x)\nQ = y*(a*x)\nR = c*x^2\n"
                   "condition = c = 2*a\nperturbation = quadratic(u, v, w)\n")
    assert e.free_names == ["a", "c"]
    assert e.complete_sample({"a": 3})["c"] == 6
    assert e.perturbation().nparams == 18


# -- printing round trip --------------------------------------------------------

exps = [(j, k, l) for j in range(4) for k in range(4) for l in range(4) if 2 <= j + k + l <= 3]
coeffs = st.fractions(min_value=-9, max_value=9, max_denominator=7).map(lambda f: Q(f.numerator, f.denominator))


@st.composite
def polys(draw):
    chosen = draw(st.lists(st.sampled_from(exps), max_size=5, unique=True))
    return Poly3.rational({e: draw(coeffs) for e in chosen})


@settings(max_examples=50, deadline=None)
@given(coeffs.filter(bool), polys(), polys(), polys(), st.sampled_from([(), THIRTEEN_MASK]))
def test_print_parse_round_trip(lam, P, Qp, R, mask):
    S = SystemSpec(lam, P, Qp, R)
    pert = standard_quadratic_perturbation(("a", "b", "c"), mask)
    text = print_system(S, pert)
    S2, pert2 = parse_system(text)
    assert S2 == S
    assert pert2 == pert
    assert print_system(S2, pert2) == text


def test_catalog_systems_round_trip(catalog):
    for e in catalog.values():
        S = e.instantiate(e.rank_sample(1))
        assert parse_system(print_system(S))[0] == S
