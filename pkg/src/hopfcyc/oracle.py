"""Floating-point return map and reduced displacement, as an advisory cross-check.

With x = rho cos(theta), y = rho sin(theta), z = rho*omega the perturbed
system becomes a non-autonomous system in theta, integrated over one turn.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .system.model import Perturbation, SystemSpec

DEFAULT_TOL = 1e-12


class OrbitEscapeError(RuntimeError):
    """The angular speed came close to zero: rho0 is outside the polar reduction's range."""


class AccuracyError(RuntimeError):
    pass


class NoSectionPointError(RuntimeError):
    pass


@dataclass(frozen=True)
class DisplacementSample:
    rho0: float
    omega_tilde: float
    d: float
    d2: float
    steps: int
    tol: float

    def row(self) -> dict:
        return {"rho0": repr(self.rho0), "omega_tilde": repr(self.omega_tilde), "d": repr(self.d),
                "steps": str(self.steps), "tol": repr(self.tol)}


CSV_COLUMNS = ("rho0", "omega_tilde", "d", "steps", "tol")


def samples_to_csv(samples: Sequence[DisplacementSample]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for s in samples:
        w.writerow(s.row())
    return buf.getvalue()


def _compile(S: SystemSpec, pert: Perturbation | None, values: Mapping[str, float]):
    """Float term lists (j, k, l, coeff) for the three nonlinear components."""
    vals = np.zeros(pert.nparams if pert else 0)
    if pert is not None:
        unknown = set(values) - set(pert.params)
        if unknown:
            raise KeyError(f"unknown parameters: {', '.join(sorted(unknown))}")
        for i, n in enumerate(pert.params):
            vals[i] = float(values.get(n, 0.0))
    comps = []
    for i in range(3):
        acc: dict = {}
        for e, c in S.components[i].terms.items():
            acc[e] = acc.get(e, 0.0) + float(c.constant_term())
        if pert is not None:
            for e, c in pert.G[i].terms.items():
                v = 0.0
                for pe, pc in c.terms.items():
                    if sum(pe) == 1:
                        v += float(pc) * vals[pe.index(1)]
                acc[e] = acc.get(e, 0.0) + v
        comps.append([(j, k, l, c) for (j, k, l), c in acc.items() if c != 0.0])
    return comps


def _eval(terms, x, y, z) -> float:
    s = 0.0
    for j, k, l, c in terms:
        s += c * x ** j * y ** k * z ** l
    return s


class _Field:
    def __init__(self, S: SystemSpec, pert, values, lam0: float):
        self.P, self.Q, self.R = _compile(S, pert, values)
        self.lam = float(S.lam)
        self.lam0 = float(lam0)
        self.min_speed = math.inf

    def __call__(self, theta, u):
        rho, omega = u
        c, s = math.cos(theta), math.sin(theta)
        x, y, z = rho * c, rho * s, rho * omega
        f1 = self.lam0 * x + _eval(self.P, x, y, z)
        f2 = self.lam0 * y + _eval(self.Q, x, y, z)
        f3 = _eval(self.R, x, y, z)
        rdot = (x * f1 + y * f2) / rho
        tdot = 1.0 + (x * f2 - y * f1) / (rho * rho)
        self.min_speed = min(self.min_speed, tdot)
        if tdot < 1e-3:
            raise OrbitEscapeError(f"angular speed {tdot:.3g} at theta={theta:.4f}")
        wdot = -self.lam * omega + f3 / rho - omega * rdot / rho
        return [rdot / tdot, wdot / tdot]


def return_map(S: SystemSpec, pert: Perturbation | None, values: Mapping[str, float],
               rho0: float, omega0: float, *, lam0: float = 0.0, tol: float = DEFAULT_TOL,
               max_steps: int = 200000) -> tuple[float, float, int]:
    """(rho, omega) after one turn theta: 0 -> 2 pi, plus the number of right-hand-side calls."""
    if rho0 <= 0:
        raise ValueError("rho0 must be positive")
    field = _Field(S, pert, values, lam0)
    sol = solve_ivp(field, (0.0, 2 * math.pi), [rho0, omega0], method="DOP853",
                    rtol=tol, atol=tol * rho0 * 1e-3)
    if not sol.success:
        raise AccuracyError(sol.message)
    if sol.nfev > max_steps:
        raise AccuracyError(f"{sol.nfev} evaluations exceed the cap {max_steps}")
    return float(sol.y[0, -1]), float(sol.y[1, -1]), int(sol.nfev)


def section_guess(S: SystemSpec, rho0: float) -> float:
    """omega on the center-manifold jet at (x, y) = (rho0, 0)."""
    from .rigidity import center_manifold_jet
    jet = center_manifold_jet(S, 4)
    return float(jet.h.evaluate([rho0, 0.0])) / rho0 if jet.h.terms else 0.0


def reduced_displacement(S: SystemSpec, pert: Perturbation | None, values: Mapping[str, float],
                         rho0: float, *, lam0: float = 0.0, tol: float = DEFAULT_TOL,
                         omega0: float | None = None, max_iter: int = 50) -> DisplacementSample:
    """Solve d2(rho0, omega) = 0 by Newton (finite-difference slope), return d1 there."""
    w = section_guess(S, rho0) if omega0 is None else omega0
    steps = 0

    def d2(om):
        nonlocal steps
        r, o, n = return_map(S, pert, values, rho0, om, lam0=lam0, tol=tol)
        steps += n
        return o - om, r - rho0

    g, d1 = d2(w)
    # d2 is close to (exp(-2 pi lambda) - 1) * omega; start from that slope
    slope = math.exp(-2 * math.pi * float(S.lam)) - 1.0
    h = max(abs(w), 1.0) * 1e-6
    for _ in range(max_iter):
        if abs(g) <= tol * 10:
            return DisplacementSample(rho0, w, d1, g, steps, tol)
        g2, _ = d2(w + h)
        if g2 != g:
            slope = (g2 - g) / h
        w = w - g / slope
        g, d1 = d2(w)
    raise NoSectionPointError(f"no section point after {max_iter} Newton steps (|d2| = {abs(g):.3g})")


def first_focal_value(S: SystemSpec, pert: Perturbation | None, values: Mapping[str, object]):
    """L_1 at the given parameter values, in the convention where l_1 = pi L_1 (exact rational)."""
    from .exact.rational import to_q
    from .focal import focal_coefficients
    F, _ = focal_coefficients(S, pert, 1, 2 if pert is not None and pert.nparams else 0,
                              convention="radial")
    L1 = F.L[0]
    names = pert.params if pert is not None else ()
    point = [to_q(values.get(n, 0)) for n in names]
    return L1.evaluate(point) if names else L1.constant_term()
