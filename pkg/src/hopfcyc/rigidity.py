"""Center-manifold jets and the two rigidity tests (cylindrical, and on the center manifold)."""
from __future__ import annotations

from dataclasses import dataclass

from .exact.mpoly import MPoly
from .exact.rational import Q
from .homological import rotation_apply, rotation_solve
from .system.model import SystemSpec


@dataclass(frozen=True)
class CenterManifoldJet:
    h: MPoly        # bivariate in (x, y), degrees 2..N
    order: int

    def slice(self, d: int) -> list:
        """Coefficients of x^i y^(d-i), i = 0..d."""
        return [self.h.coeff((i, d - i)) for i in range(d + 1)]

    def truncate(self, m: int) -> "CenterManifoldJet":
        return CenterManifoldJet(self.h.truncate(m), m)

    def to_str(self) -> str:
        return self.h.to_str(["x", "y"])


def _planar(poly3, Z: MPoly, order: int) -> MPoly:
    """poly3(x, y, Z) truncated at total degree ``order`` (poly3 must have rational coefficients)."""
    x, y = MPoly.gen(0, 2, order), MPoly.gen(1, 2, order)
    out = MPoly({}, 2, order)
    zpow = {0: MPoly.constant(1, 2, order)}
    for (j, k, l), c in poly3.terms.items():
        if j + k + 2 * l > order:      # Z starts at degree 2
            continue
        if l not in zpow:
            zpow[l] = Z ** l
        out = out + (x ** j * y ** k * zpow[l]).scale(c.constant_term())
    return out


def _slice(p: MPoly, d: int) -> list:
    return [p.coeff((i, d - i)) for i in range(d + 1)]


def invariance_residual(S: SystemSpec, h: MPoly, order: int) -> MPoly:
    """h_x x' + h_y y' - z' on z = h, truncated at ``order``."""
    x, y = MPoly.gen(0, 2, order), MPoly.gen(1, 2, order)
    Z = MPoly(h.terms, 2, order)
    xdot = -y + _planar(S.P, Z, order)
    ydot = x + _planar(S.Q, Z, order)
    zdot = Z.scale(-Q(S.lam)) + _planar(S.R, Z, order)
    return Z.diff(0) * xdot + Z.diff(1) * ydot - zdot


def center_manifold_jet(S: SystemSpec, N: int) -> CenterManifoldJet:
    """Degree-by-degree solve of (Rot + lambda) h_d = [R(x,y,h) - h_x P - h_y Q]_d for d = 2..N."""
    if N < 2:
        raise ValueError("center-manifold order must be at least 2")
    lam = Q(S.lam)
    h = MPoly({}, 2, N)
    for d in range(2, N + 1):
        # with h known below degree d, the residual's degree-d part is -(Rot + lam) h_d + rhs_d
        res = invariance_residual(S, h, d)
        rhs = [-c for c in _slice(res, d)]
        hd = rotation_solve(rhs, d, mu=-lam)
        h = h + MPoly({(i, d - i): c for i, c in enumerate(hd) if c}, 2, N)
    return CenterManifoldJet(h, N)


def _cross(S: SystemSpec) -> dict:
    """Terms of x*Q - y*P keyed by exponent triple."""
    out: dict = {}
    for (j, k, l), c in S.Q.terms.items():
        out[(j + 1, k, l)] = out.get((j + 1, k, l), 0) + c.constant_term()
    for (j, k, l), c in S.P.terms.items():
        out[(j, k + 1, l)] = out.get((j, k + 1, l), 0) - c.constant_term()
    return {e: v for e, v in out.items() if v != 0}


def is_rigid_cylindrical(S: SystemSpec) -> bool:
    """x Q - y P vanishes identically, so the angular speed is 1 before any restriction."""
    return not _cross(S)


def rigidity_on_cm_defect(S: SystemSpec, N: int) -> MPoly:
    """(x Q - y P) on z = h(x, y), through degree N."""
    if N < 2:
        raise ValueError("order must be at least 2")
    jet = center_manifold_jet(S, max(N - 1, 2))
    x, y = MPoly.gen(0, 2, N), MPoly.gen(1, 2, N)
    Z = MPoly(jet.h.terms, 2, N)
    return x * _planar(S.Q, Z, N) - y * _planar(S.P, Z, N)


def is_rigid_on_cm(S: SystemSpec, N: int = 8) -> bool:
    """Finite-order check only: no terms of degree <= N survive on the center-manifold jet."""
    if is_rigid_cylindrical(S):
        return True
    return not rigidity_on_cm_defect(S, N)


def check_jet(S: SystemSpec, jet: CenterManifoldJet) -> bool:
    """Invariance equation holds through the jet order."""
    return not invariance_residual(S, jet.h, jet.order)


__all__ = ["CenterManifoldJet", "center_manifold_jet", "is_rigid_cylindrical", "is_rigid_on_cm",
           "rigidity_on_cm_defect", "invariance_residual", "check_jet", "rotation_apply"]
