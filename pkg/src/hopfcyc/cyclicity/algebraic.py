"""Univariate polynomials over Q, Sturm root isolation, and arithmetic in Q(alpha).

Univariate polynomials are lists of mpq, constant term first, no trailing zeros.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Sequence


from ..exact.rational import Q, to_q, format_q

Upoly = list


def trim(p: Sequence) -> Upoly:
    p = [to_q(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def deg(p: Upoly) -> int:
    return len(p) - 1


def padd(a: Upoly, b: Upoly) -> Upoly:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def pneg(a: Upoly) -> Upoly:
    return [-c for c in a]


def psub(a: Upoly, b: Upoly) -> Upoly:
    return padd(a, pneg(b))


def pmul(a: Upoly, b: Upoly) -> Upoly:
    if not a or not b:
        return []
    out = [Q(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def pscale(a: Upoly, c) -> Upoly:
    return trim([x * c for x in a])


def pdivmod(a: Upoly, b: Upoly) -> tuple[Upoly, Upoly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [Q(0)] * max(len(a) - len(b) + 1, 1)
    inv = 1 / b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] * inv
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] -= c * y
        r = trim(r)
    return trim(q), r


def prem(a: Upoly, b: Upoly) -> Upoly:
    return pdivmod(a, b)[1]


def monic(a: Upoly) -> Upoly:
    return pscale(a, 1 / a[-1]) if a else a


def pgcd(a: Upoly, b: Upoly) -> Upoly:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, prem(a, b)
    return monic(a)


def pderiv(a: Upoly) -> Upoly:
    return trim([a[i] * i for i in range(1, len(a))])


def peval(a: Upoly, x):
    v = Q(0)
    for c in reversed(a):
        v = v * x + c
    return v


def squarefree(a: Upoly) -> Upoly:
    g = pgcd(a, pderiv(a))
    return monic(pdivmod(a, g)[0]) if deg(g) > 0 else monic(a)


def primitive_integer(a: Upoly) -> list[int]:
    """Integer multiple of a with content 1 and positive leading coefficient."""
    m = lcm(*(int(c.denominator) for c in a))
    ints = [int(c * m) for c in a]
    from math import gcd
    g = 0
    for v in ints:
        g = gcd(g, v)
    ints = [v // g for v in ints]
    if ints[-1] < 0:
        ints = [-v for v in ints]
    return ints


def factor_rational(a: Upoly) -> list[tuple[list[int], int]]:
    """Irreducible factors over Q (primitive integer coefficient lists) with multiplicities."""
    import sympy
    t = sympy.Symbol("t")
    expr = sum(sympy.Integer(v) * t ** i for i, v in enumerate(primitive_integer(a)))
    _, facs = sympy.factor_list(expr, t)
    out = []
    for f, mult in facs:
        coeffs = [int(c) for c in reversed(sympy.Poly(f, t).all_coeffs())]
        if len(coeffs) > 1:
            out.append((primitive_integer([Q(c) for c in coeffs]), mult))
    out.sort(key=lambda fm: (len(fm[0]), fm[0]))
    return out


def integral_scale(minpoly: Sequence[int]) -> int:
    """Largest c > 0 with c^i | a_i for i >= 1, so that c*root has minimal polynomial sum (a_i/c^i) x^i.

    Only primes of gcd(a_1, ..., a_n) below 10^6 are tried, so no large factoring happens.
    """
    from math import gcd
    import sympy
    a = [int(v) for v in minpoly]
    g = 0
    for v in a[1:]:
        g = gcd(g, v)
    c = 1
    for p in sympy.factorint(abs(g), limit=10 ** 6):
        if p > 10 ** 6 or not sympy.isprime(p):
            continue
        k = 0
        while all(a[i] % p ** ((k + 1) * i) == 0 for i in range(1, len(a))):
            k += 1
        c *= p ** k
    return c


def upoly_to_str(a, var: str = "x") -> str:
    if not a:
        return "0"
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = to_q(a[i])
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        mag = abs(c)
        body = format_q(mag) if not mono else (mono if mag == 1 else f"{format_q(mag)}*{mono}")
        parts.append(("-" if c < 0 else "+", body))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, b in parts[1:]:
        text += f" {s} {b}"
    return text


# -- Sturm sequences -----------------------------------------------------------------

def sturm_sequence(a: Upoly) -> list[Upoly]:
    f = squarefree(a)
    seq = [f, pderiv(f)]
    while seq[-1]:
        r = prem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(pneg(r))
    return seq


def _sign_changes(seq: list[Upoly], x) -> int:
    signs = []
    for p in seq:
        v = peval(p, x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_roots(seq: list[Upoly], lo, hi) -> int:
    """Distinct real roots in (lo, hi] of the square-free head of ``seq``."""
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


def root_bound(a: Upoly):
    """All real roots lie in (-B, B)."""
    a = trim(a)
    lead = abs(a[-1])
    return 1 + max((abs(c) / lead for c in a[:-1]), default=Q(0))


def isolate_real_roots(a: Upoly, width=None) -> list[tuple]:
    """Disjoint rational intervals (lo, hi], each with exactly one real root, sorted.

    Roots that are exactly rational are returned as degenerate intervals (r, r).
    """
    f = squarefree(a)
    if deg(f) < 1:
        return []
    seq = sturm_sequence(f)
    B = root_bound(f)
    out = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort()
    res = []
    for lo, hi in out:
        if peval(f, hi) == 0:
            res.append((hi, hi))
        else:
            res.append(refine(f, (lo, hi), width, seq) if width else (lo, hi))
    return res


def refine(f: Upoly, interval, width, seq=None) -> tuple:
    lo, hi = interval
    if lo == hi:
        return interval
    width = to_q(width)
    flo = peval(f, lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = peval(f, mid)
        if fm == 0:
            return (mid, mid)
        # a simple root: f changes sign across it; at lo the value may be zero only
        # when lo is excluded from (lo, hi], so use the Sturm count there
        if flo == 0:
            if count_roots(seq or sturm_sequence(f), lo, mid) == 1:
                hi = mid
            else:
                lo, flo = mid, fm
        elif (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo, hi)


@dataclass(frozen=True)
class AlgebraicNumber:
    """A real root of an irreducible integer polynomial, pinned by an isolating interval."""
    minpoly: tuple          # integer coefficients, constant first
    lo: object
    hi: object

    def __post_init__(self):
        f = [Q(c) for c in self.minpoly]
        if self.lo == self.hi:
            if peval(f, self.lo) != 0:
                raise ValueError("degenerate interval is not a root")
            return
        if count_roots(sturm_sequence(f), self.lo, self.hi) != 1:
            raise ValueError("interval does not isolate exactly one root")

    @property
    def poly(self) -> Upoly:
        return [Q(c) for c in self.minpoly]

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    def refined(self, width) -> "AlgebraicNumber":
        lo, hi = refine(self.poly, (self.lo, self.hi), width)
        return AlgebraicNumber(self.minpoly, lo, hi)

    def approx(self) -> float:
        return float((self.lo + self.hi) / 2)

    def isolates(self) -> bool:
        try:
            AlgebraicNumber(self.minpoly, self.lo, self.hi)
        except ValueError:
            return False
        return True


# -- the field Q(alpha) ----------------------------------------------------------------

class NumberField:
    def __init__(self, alpha: AlgebraicNumber):
        self.alpha = alpha
        self.modulus = monic(alpha.poly)
        if deg(pgcd(self.modulus, pderiv(self.modulus))) > 0:
            raise ValueError("minimal polynomial is not square-free")

    @property
    def degree(self) -> int:
        return deg(self.modulus)

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            return value
        return FieldElement(self, trim([value]))

    def gen(self) -> "FieldElement":
        return FieldElement(self, prem([Q(0), Q(1)], self.modulus))

    def from_poly(self, coeffs) -> "FieldElement":
        return FieldElement(self, prem(trim(coeffs), self.modulus))


class FieldElement:
    __slots__ = ("field", "c")

    def __init__(self, field: NumberField, coeffs: Upoly):
        self.field = field
        self.c = coeffs if len(coeffs) <= field.degree else prem(coeffs, field.modulus)

    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            return other
        return FieldElement(self.field, trim([other]))

    def __add__(self, other):
        return FieldElement(self.field, padd(self.c, self._lift(other).c))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, pneg(self.c))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            return FieldElement(self.field, pscale(self.c, to_q(other)))
        return FieldElement(self.field, prem(pmul(self.c, other.c), self.field.modulus))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self.c:
            raise ZeroDivisionError("inverse of zero in Q(alpha)")
        # extended Euclid: s*c + t*m = g
        r0, r1 = self.field.modulus, self.c
        s0, s1 = [], [Q(1)]
        while r1:
            q, r = pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, psub(s0, pmul(q, s1))
        if deg(r0) != 0:
            raise ZeroDivisionError("element shares a factor with the modulus")
        return FieldElement(self.field, pscale(s0, 1 / r0[0]))

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = FieldElement(self.field, [Q(1)])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.c == other.c
        try:
            return self.c == trim([other])
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(tuple(self.c))

    def sign(self) -> int:
        """Exact sign, by refining the isolating interval until the value's enclosure excludes 0."""
        if not self.c:
            return 0
        a = self.field.alpha
        lo, hi = a.lo, a.hi
        width = (hi - lo) if hi != lo else Q(0)
        f = a.poly
        for _ in range(4000):
            vlo, vhi = _interval_eval(self.c, lo, hi)
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            width = (hi - lo) / 2
            lo, hi = refine(f, (lo, hi), width)
            if lo == hi:
                v = peval(self.c, lo)
                return (v > 0) - (v < 0)
        raise ArithmeticError("sign not resolved")

    def approx(self) -> float:
        a = self.field.alpha.refined(Q(1, 2 ** 80))
        return float(peval(self.c, (a.lo + a.hi) / 2))

    def to_str(self, var: str = "alpha") -> str:
        return upoly_to_str(self.c, var)

    def __repr__(self):
        return f"FieldElement({self.to_str()})"


def _interval_eval(p: Upoly, lo, hi) -> tuple:
    """Enclosure of p over [lo, hi] via interval Horner."""
    vlo = vhi = Q(0)
    for c in reversed(p):
        cands = (vlo * lo, vlo * hi, vhi * lo, vhi * hi)
        vlo, vhi = min(cands) + c, max(cands) + c
    return vlo, vhi


def element_minpoly(x: FieldElement) -> list[int]:
    """Minimal polynomial of x over Q (primitive integer coefficients)."""
    F = x.field
    n = F.degree
    # power basis coordinates of 1, x, x^2, ..., find first dependency
    vecs = []
    p = F(1)
    for k in range(n + 1):
        vecs.append([p.c[i] if i < len(p.c) else Q(0) for i in range(n)])
        from ..exact.qmatrix import rref
        # columns are powers; solve for dependency among the first k+1
        mat = [[vecs[j][i] for j in range(k + 1)] for i in range(n)]
        red, piv = rref(mat)
        if len(piv) < k + 1:
            free = next(j for j in range(k + 1) if j not in piv)
            coeffs = [Q(0)] * (k + 1)
            coeffs[free] = Q(1)
            for r, pc in enumerate(piv):
                coeffs[pc] = -red[r][free]
            return primitive_integer(trim(coeffs))
        p = p * x
    raise ArithmeticError("no dependency found")


def express_in(x: FieldElement, generator: FieldElement) -> Upoly:
    """Coefficients c with x = sum c_i generator^i (generator must span the field)."""
    F = x.field
    n = F.degree
    cols = []
    p = F(1)
    for _ in range(n):
        cols.append([p.c[i] if i < len(p.c) else Q(0) for i in range(n)])
        p = p * generator
    from ..exact.qmatrix import QMatrix, solve
    M = QMatrix.from_rows([[cols[j][i] for j in range(n)] for i in range(n)])
    rhs = [x.c[i] if i < len(x.c) else Q(0) for i in range(n)]
    return trim(solve(M, [rhs])[0])
