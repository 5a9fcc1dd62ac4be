"""Focal coefficients from the formal identity XH = sum_k L_{k-1} (x^2+y^2)^k.

H = x^2 + y^2 + H_3 + H_4 + ... is solved one homogeneous degree at a time.
At degree d the linear part of the field contributes
    D H_d,  D = -y d/dx + x d/dy - lam z d/dz,
and the nonlinear terms contribute N_d, built from H_{d'} with d' < d.  D keeps
the z-exponent l, so each layer l is a planar problem (Rot - lam*l) p = rhs.
Layer l = 0 at even d carries the obstruction L_{d/2-1}: the circle average of
N_d restricted to z = 0.

Coefficients are jets in the perturbation parameters.  They are stored as
dense numpy object vectors of mpq indexed by the jet monomials, so that every
solve is a rational computation applied column-wise (D does not depend on the
parameters).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exact.mpoly import JetPoly, monomials_upto
from .exact.poly3 import Poly3
from .exact.qmatrix import QMatrix
from .exact.rational import Q
from .homological import (NORMALIZATIONS, circle_average, radial_power,
                          rotation_apply, rotation_solve)

log = logging.getLogger(__name__)


class FocalError(Exception):
    pass


class SelfCheckError(FocalError):
    """The recomputed degree-d residual of XH - sum L (x^2+y^2)^k is not zero."""


class ResourceError(FocalError):
    def __init__(self, message: str, last_completed: int):
        super().__init__(message)
        self.last_completed = last_completed


@dataclass
class HSeries:
    coefficients: dict = field(default_factory=dict)   # (j,k,l) -> JetPoly, degree >= 3
    computed_degree: int = 2

    def as_poly3(self, nparams: int, order: int) -> Poly3:
        terms = {(2, 0, 0): 1, (0, 2, 0): 1}
        terms = {e: JetPoly.constant(c, nparams, order) for e, c in terms.items()}
        terms.update(self.coefficients)
        return Poly3(terms, nparams, order)


@dataclass
class FocalSequence:
    L: list                      # JetPoly values L_1..L_K
    nparams: int
    order: int
    param_names: tuple = ()
    provenance: dict = field(default_factory=dict)

    @property
    def K(self) -> int:
        return len(self.L)

    def slice(self, k: int, j: int) -> JetPoly:
        """Homogeneous degree-j part of L_k (1-based k)."""
        return self.L[k - 1].homogeneous(j)

    def order_zero(self) -> list:
        return [c.constant_term() for c in self.L]


# -- monomial bookkeeping -------------------------------------------------------

@lru_cache(maxsize=None)
def _layer_offsets(d: int) -> tuple:
    offs = [0]
    for l in range(d + 1):
        offs.append(offs[-1] + (d - l + 1))
    return tuple(offs)


def row_index(e) -> int:
    j, k, l = e
    d = j + k + l
    return _layer_offsets(d)[l] + j


def nrows(d: int) -> int:
    return (d + 1) * (d + 2) // 2


@lru_cache(maxsize=None)
def _rows_of_degree(d: int) -> tuple:
    out = []
    for l in range(d + 1):
        n = d - l
        for i in range(n + 1):
            out.append((i, n - i, l))
    return tuple(out)


@lru_cache(maxsize=None)
def _shift_map(var: int, e: tuple, dsrc: int):
    """Rows of d/dvar applied to degree-dsrc monomials, then times x^e."""
    src, dst, fac = [], [], []
    for r, m in enumerate(_rows_of_degree(dsrc)):
        k = m[var]
        if not k:
            continue
        t = list(m)
        t[var] -= 1
        t = (t[0] + e[0], t[1] + e[1], t[2] + e[2])
        src.append(r)
        dst.append(row_index(t))
        fac.append(Q(k))
    return np.array(src, dtype=np.intp), np.array(dst, dtype=np.intp), np.array(fac, dtype=object)


class _JetLayout:
    def __init__(self, nparams: int, order: int):
        self.nparams = nparams
        self.order = order
        self.monos = monomials_upto(nparams, order)
        self.index = {m: i for i, m in enumerate(self.monos)}
        self.size = len(self.monos)
        self._mult: dict = {}

    def mult_map(self, gamma: tuple):
        """(src, dst) column indices for multiplication by the monomial gamma."""
        got = self._mult.get(gamma)
        if got is None:
            g = sum(gamma)
            src, dst = [], []
            for i, m in enumerate(self.monos):
                if sum(m) + g <= self.order:
                    src.append(i)
                    dst.append(self.index[tuple(a + b for a, b in zip(m, gamma))])
            got = (np.array(src, dtype=np.intp), np.array(dst, dtype=np.intp))
            self._mult[gamma] = got
        return got

    def to_jet(self, vec) -> JetPoly:
        return JetPoly({self.monos[i]: v for i, v in enumerate(vec) if v}, self.nparams, self.order)

    def zeros(self, shape):
        return np.full(shape, Q(0), dtype=object)


OBSTRUCTIONS = ("xpow", "radial")


def obstruction_bundle(kind: str, n: int) -> tuple:
    """Planar degree-n polynomial that carries L at even degree n (z-free layer)."""
    if kind == "radial":
        return radial_power(n // 2)
    if kind == "xpow":
        v = [Q(0)] * (n + 1)
        v[n] = Q(1)
        return tuple(v)
    raise ValueError(f"unknown obstruction {kind!r}")


def _is_zero(arr) -> bool:
    return all(v == 0 for v in np.asarray(arr).flat)


def focal_coefficients_field(nonlinear: Sequence[Poly3], lam, K: int, *,
                             normalization: str = "xpow", obstruction: str = "xpow", keep_h: bool = False,
                             self_check: bool = True, max_entries: int | None = None,
                             param_names: Sequence[str] = ()) -> tuple[FocalSequence, HSeries | None]:
    """Solve XH = sum L_{k-1}(x^2+y^2)^k through degree 2K+2.

    ``nonlinear`` holds the three components of the field minus its linear part
    (-y, x, -lam z); all share one jet ring.
    """
    lam = Q(lam)
    if lam == 0:
        raise FocalError("lambda = 0 makes the homological operator singular")
    if K < 1:
        raise ValueError("K must be at least 1")
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}")
    if obstruction not in OBSTRUCTIONS:
        raise ValueError(f"unknown obstruction {obstruction!r}")
    nparams, order = nonlinear[0].nparams, nonlinear[0].order
    if any((f.nparams, f.order) != (nparams, order) for f in nonlinear):
        raise ValueError("field components over different parameter rings")
    lay = _JetLayout(nparams, order)
    J = lay.size

    terms = []   # (var, exponent, [(gamma, coeff)])
    maxdeg = 2
    for var, comp in enumerate(nonlinear):
        for e, c in comp.terms.items():
            if sum(e) < 2:
                raise FocalError("nonlinear part has constant or linear terms")
            maxdeg = max(maxdeg, sum(e))
            terms.append((var, e, [(g, v) for g, v in c.terms.items()]))
    for _, _, jt in terms:
        for g, _ in jt:
            lay.mult_map(g)

    H: dict[int, np.ndarray] = {}
    h2 = lay.zeros((nrows(2), J))
    h2[row_index((2, 0, 0)), 0] = Q(1)
    h2[row_index((0, 2, 0)), 0] = Q(1)
    H[2] = h2
    series = HSeries() if keep_h else None
    L: list[JetPoly] = []
    top = 2 * K + 2
    for d in range(3, top + 1):
        N = lay.zeros((nrows(d), J))
        for var, e, jt in terms:
            dsrc = d - sum(e) + 1
            if dsrc < 2:
                continue
            src, dst, fac = _shift_map(var, e, dsrc)
            if not len(src):
                continue
            A = H[dsrc][src] * fac[:, None]
            for g, coef in jt:
                if not any(g):
                    N[dst] += A * coef
                else:
                    cs, cd = lay.mult_map(g)
                    if len(cs):
                        N[np.ix_(dst, cd)] += A[:, cs] * coef
        Hd = lay.zeros((nrows(d), J))
        offs = _layer_offsets(d)
        Lvec = None
        for l in range(d + 1):
            n = d - l
            block = [N[offs[l] + i] for i in range(n + 1)]
            mu = lam * l
            if l == 0 and d % 2 == 0:
                rad = obstruction_bundle(obstruction, n)
                Lvec = circle_average(block, n) * (1 / circle_average(list(rad), n))
                rhs = [Lvec * rad[i] - block[i] for i in range(n + 1)]
            else:
                rhs = [-b for b in block]
            p = rotation_solve(rhs, n, mu, normalization)
            if self_check:
                back = rotation_apply(p, n, mu)
                if not all(_is_zero(back[i] - rhs[i]) for i in range(n + 1)):
                    raise SelfCheckError(f"residual of XH does not vanish at degree {d}, layer {l}")
            for i in range(n + 1):
                Hd[offs[l] + i] = p[i]
        H[d] = Hd
        if keep_h:
            for r, m in enumerate(_rows_of_degree(d)):
                jet = lay.to_jet(Hd[r])
                if jet:
                    series.coefficients[m] = jet
            series.computed_degree = d
        else:
            H.pop(d + 1 - maxdeg, None)
        if Lvec is not None:
            L.append(lay.to_jet(Lvec))
            log.debug("L_%d done (degree %d)", len(L), d)
        if max_entries is not None and sum(a.size for a in H.values()) > max_entries:
            raise ResourceError(f"memory budget exceeded at degree {d}", len(L))
    seq = FocalSequence(L, nparams, order, tuple(param_names),
                        {"lambda": lam, "K": K, "T": order, "normalization": normalization,
                         "obstruction": obstruction})
    return seq, series


def linear_part_matrix(F: FocalSequence) -> QMatrix:
    """Row i is the gradient of L_i at zero parameters."""
    if F.order < 1:
        raise ValueError("linear parts need jet order T >= 1")
    if F.nparams == 0:
        return QMatrix.zeros(F.K, 0)
    return QMatrix.from_rows([c.linear_coefficients() for c in F.L])


def quadratic_parts(F: FocalSequence, indices: Sequence[int]) -> list[JetPoly]:
    """Degree-2 slices of the selected L_i (1-based indices)."""
    if F.order < 2:
        raise ValueError("quadratic parts need jet order T >= 2")
    return [F.L[i - 1].homogeneous(2) for i in indices]


# obstruction placement and kernel normalization
CONVENTIONS = {
    "monomial": ("xpow", "xpow"),
    "radial": ("radial", "kernel"),
}


def focal_coefficients(system, pert, K: int, T: int = 1, *, convention: str = "monomial",
                       normalization: str | None = None, keep_h: bool = False,
                       self_check: bool = True, max_entries: int | None = None):
    """Focal coefficients L_1..L_K of a SystemSpec under a Perturbation, as jets of order T.

    ``convention="monomial"`` places L_k on x^(2k+2) and keeps x^d out of H;
    ``"radial"`` places it on (x^2+y^2)^(k+1), for which l_1 = pi L_1.
    """
    from .system.model import nonlinear_field

    obstruction, default_norm = CONVENTIONS[convention]
    field_ = nonlinear_field(system, pert, T)
    names = pert.params if pert is not None else ()
    seq, series = focal_coefficients_field(
        field_, system.lam, K, normalization=normalization or default_norm,
        obstruction=obstruction, keep_h=keep_h, self_check=self_check,
        max_entries=max_entries, param_names=names)
    seq.provenance.update({"system": system, "perturbation": pert, "convention": convention})
    return seq, series
