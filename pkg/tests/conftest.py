from __future__ import annotations

import pytest

from hopfcyc.system.catalog import load_catalog


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def thirteen_cycle(catalog):
    """The rigid quadratic center with 13 limit cycles: (system, perturbation)."""
    e = catalog["thm38"]
    return e.instantiate(), e.perturbation()


@pytest.fixture(scope="session")
def thirteen_cycle_linear(thirteen_cycle):
    from hopfcyc.focal import focal_coefficients
    S, pert = thirteen_cycle
    return focal_coefficients(S, pert, 13, 1)[0]


@pytest.fixture(scope="session")
def thirteen_cycle_quadratic(thirteen_cycle):
    """K=13 at jet order 2; about a minute and a half on one core."""
    from hopfcyc.focal import focal_coefficients
    S, pert = thirteen_cycle
    return focal_coefficients(S, pert, 13, 2)[0]


@pytest.fixture(scope="session")
def thirteen_cycle_problem(thirteen_cycle_quadratic):
    from hopfcyc.cyclicity import rank_certificate, reduce_to_quadratic_problem
    F = thirteen_cycle_quadratic
    return reduce_to_quadratic_problem(F, rank_certificate(F), 4)


@pytest.fixture(scope="session")
def thirteen_cycle_certificate(thirteen_cycle_problem):
    from hopfcyc.cyclicity import solve_line
    return solve_line(thirteen_cycle_problem)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
