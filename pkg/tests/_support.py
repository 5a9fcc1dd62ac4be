"""Shared fixtures-as-functions for the test modules and the acceptance run."""
from __future__ import annotations

import math
import random

from gmpy2 import mpq

from hopfcyc.oracle import first_focal_value, reduced_displacement

# rigid family, n=1 m=2, first center condition
FIRST_FAMILY_SAMPLE = {"a100": 1, "a010": 2, "a001": 0, "b20": 1, "b11": -1, "b02": 3}

RHO0 = 1e-3
TOL = 1e-12


def first_family(catalog):
    e = catalog["thm31a1"]
    return e.instantiate(FIRST_FAMILY_SAMPLE), e.perturbation()


def oracle_directions(pert, count=5, seed=5, scale=100):
    """Seeded rational perturbation directions (entries k/scale, |k| <= 9)."""
    rng = random.Random(seed)
    return [{n: mpq(rng.randint(-9, 9), scale) for n in pert.params} for _ in range(count)]


def oracle_comparison(S, pert, values, rho0=RHO0, tol=TOL):
    """(exact L1 in the radial convention, sampled d, d / (pi L1 rho0^3))."""
    L1 = float(first_focal_value(S, pert, values))
    s = reduced_displacement(S, pert, {n: float(v) for n, v in values.items()}, rho0, tol=tol)
    return L1, s.d, s.d / (math.pi * L1 * rho0 ** 3)
