"""Resultant elimination over Q[x_1..x_n] and univariate polynomials over Q(alpha)."""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from ..exact.mpoly import MPoly
from ..exact.rational import Q
from .algebraic import FieldElement, NumberField, trim


def sylvester(f: MPoly, g: MPoly, var: int) -> list[list[MPoly]]:
    fc, gc = f.coefficients_in(var), g.coefficients_in(var)
    m, n = max(fc), max(gc)
    zero = f.zero()
    size = m + n
    rows = []
    for i in range(n):
        rows.append([fc.get(m - (j - i), zero) if 0 <= j - i <= m else zero for j in range(size)])
    for i in range(m):
        rows.append([gc.get(n - (j - i), zero) if 0 <= j - i <= n else zero for j in range(size)])
    return rows


def determinant_expand(mat: Sequence[Sequence]) -> object:
    """Division-free determinant by memoized Laplace expansion along rows (O(n 2^n))."""
    n = len(mat)
    if n == 0:
        return Q(1)

    @lru_cache(maxsize=None)
    def minor(i: int, mask: int):
        if i == n:
            return None
        total = None
        sign = 1
        for j in range(n):
            if not mask >> j & 1:
                continue
            a = mat[i][j]
            if a:
                sub = minor(i + 1, mask & ~(1 << j))
                t = a if sub is None else a * sub
                t = t if sign > 0 else -t
                total = t if total is None else total + t
            sign = -sign
        if total is None:
            total = mat[0][0] * 0
        return total

    return minor(0, (1 << n) - 1)


def resultant(f: MPoly, g: MPoly, var: int) -> MPoly:
    if f.degree_in(var) == 0 or g.degree_in(var) == 0:
        raise ValueError("resultant needs both polynomials to involve the variable")
    return determinant_expand(sylvester(f, g, var))


def _to_sympy(p: MPoly, gens):
    import sympy
    return sympy.Poly.from_dict(
        {e: sympy.Rational(int(c.numerator), int(c.denominator)) for e, c in p.terms.items()},
        *gens, domain="QQ")


def _from_sympy(sp, nvars: int) -> MPoly:
    return MPoly({tuple(e): Q(int(c.p), int(c.q)) for e, c in sp.terms()}, nvars)


def common_factor(polys: Sequence[MPoly]) -> MPoly | None:
    """Nonconstant gcd over Q of the given polynomials, or None."""
    import sympy
    if len(polys) < 2:
        return None
    n = polys[0].nvars
    gens = sympy.symbols(f"t0:{n}")
    sp = [_to_sympy(p, gens) for p in polys]
    g = sp[0]
    for q in sp[1:]:
        g = g.gcd(q)
        if g.total_degree() == 0:
            return None
    return _from_sympy(g.monic(), n)


def divide_exact(p: MPoly, g: MPoly) -> MPoly:
    import sympy
    gens = sympy.symbols(f"t0:{p.nvars}")
    return _from_sympy(_to_sympy(p, gens).exquo(_to_sympy(g, gens)), p.nvars)


def to_univariate(p: MPoly, var: int) -> list:
    out = {}
    for e, c in p.terms.items():
        if any(k for i, k in enumerate(e) if i != var):
            raise ValueError("polynomial involves other variables")
        out[e[var]] = c
    return trim([out.get(i, 0) for i in range(max(out, default=-1) + 1)])


def eliminate(polys: Sequence[MPoly], unknowns: Sequence[int], names: Sequence[str] | None = None):
    """Successive resultants down to one unknown.

    At each stage the unknown of least maximal degree is removed (ties go to
    the earliest declared), using the lowest-degree polynomial in it as pivot.
    A common factor of the new resultants cuts out a positive-dimensional
    set of solutions, where no intersection is transversal; it is divided
    out and listed in ``removed``.
    Returns (stages, last_unknown, univariate_polys, removed); ``stages``
    holds (variable, system before elimination) for back-substitution.
    Raises ArithmeticError naming the stage when a resultant vanishes identically.
    """
    label = (lambda v: names[v]) if names else str
    system = [p for p in polys if p]
    left = list(unknowns)
    stages = []
    removed = []
    while len(left) > 1:
        def cost(v):
            return (max((p.degree_in(v) for p in system), default=0), left.index(v))
        v = min(left, key=cost)
        involved = [p for p in system if p.degree_in(v) > 0]
        rest = [p for p in system if p.degree_in(v) == 0]
        stages.append((v, list(system)))
        left.remove(v)
        if not involved:
            raise ArithmeticError(f"stage {len(stages)}: no equation involves {label(v)}")
        pivot = min(involved, key=lambda p: (p.degree_in(v), len(p.terms)))
        others = [p for p in involved if p is not pivot]
        new = []
        for q in others:
            r = resultant(pivot, q, v)
            if not r:
                raise ArithmeticError(f"stage {len(stages)}: resultant in {label(v)} vanishes identically")
            new.append(r)
        g = common_factor(new)
        if g is not None:
            removed.append((len(stages), g))
            new = [divide_exact(r, g) for r in new]
        system = rest + new
        if not system:
            raise ArithmeticError(f"stage {len(stages)}: no equations left")
    last = left[0]
    stages.append((last, list(system)))
    return stages, last, [to_univariate(p, last) for p in system], removed


# -- univariate polynomials over Q(alpha) ---------------------------------------

def ftrim(p: list) -> list:
    while p and p[-1].is_zero():
        p.pop()
    return p


def fdivmod_rem(a: list, b: list) -> list:
    r = list(a)
    inv = b[-1].inverse()
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] * inv
        for i, y in enumerate(b):
            r[shift + i] = r[shift + i] - c * y
        ftrim(r)
    return r


def fgcd(a: list, b: list) -> list:
    a, b = ftrim(list(a)), ftrim(list(b))
    while b:
        a, b = b, fdivmod_rem(a, b)
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


def fderiv(a: list) -> list:
    return ftrim([a[i] * i for i in range(1, len(a))])


def fsquarefree(a: list) -> list:
    """Square-free part (monic) of a univariate polynomial over Q(alpha)."""
    g = fgcd(a, fderiv(a))
    if len(g) <= 1:
        return fgcd(a, [a[0].field(0)])
    # exact division a / g
    q = [a[0].field(0)] * (len(a) - len(g) + 1)
    r = list(a)
    inv = g[-1].inverse()
    while len(r) >= len(g) and r:
        shift = len(r) - len(g)
        c = r[-1] * inv
        q[shift] = c
        for i, y in enumerate(g):
            r[shift + i] = r[shift + i] - c * y
        ftrim(r)
    return fgcd(ftrim(q), [a[0].field(0)])


def specialize(p: MPoly, var: int, values: dict, field: NumberField) -> list:
    """Univariate polynomial over Q(alpha) in ``var`` after substituting known values."""
    point = [values.get(i) for i in range(p.nvars)]
    out = []
    for k, coeff in sorted(p.coefficients_in(var).items()):
        while len(out) < k:
            out.append(field(0))
        v = coeff.evaluate(point)
        out.append(field(v) if not isinstance(v, FieldElement) else v)
    return ftrim(out)
