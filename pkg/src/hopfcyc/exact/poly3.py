"""Sparse polynomials in (x, y, z) with jet coefficients."""
from __future__ import annotations

from typing import Callable, Mapping, Sequence

from .mpoly import JetPoly, MPoly
from .rational import Q, format_q

Exp3 = tuple[int, int, int]
VARS = ("x", "y", "z")


class Poly3:
    """``terms`` maps (j, k, l) for x^j y^k z^l to a coefficient jet.

    All coefficients share one parameter ring, described by ``nparams`` and
    ``order``.  A plain rational polynomial uses ``nparams=0, order=0``.
    """

    __slots__ = ("terms", "nparams", "order")

    def __init__(self, terms: Mapping[Exp3, object] | None = None,
                 nparams: int = 0, order: int = 0):
        self.nparams = nparams
        self.order = order
        clean: dict[Exp3, JetPoly] = {}
        for e, c in (terms or {}).items():
            if len(e) != 3 or min(e) < 0:
                raise ValueError(f"bad exponent triple {e}")
            if not isinstance(c, MPoly):
                c = JetPoly.constant(c, nparams, order)
            elif c.nvars != nparams or c.order != order:
                raise ValueError("coefficient jet does not match the polynomial's ring")
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    def _new(self, terms: dict) -> "Poly3":
        obj = object.__new__(Poly3)
        obj.nparams = self.nparams
        obj.order = self.order
        obj.terms = terms
        return obj

    @classmethod
    def var(cls, name: str, nparams: int = 0, order: int = 0) -> "Poly3":
        e = [0, 0, 0]
        e[VARS.index(name)] = 1
        return cls({tuple(e): 1}, nparams, order)

    @classmethod
    def rational(cls, terms: Mapping[Exp3, object]) -> "Poly3":
        return cls(terms, 0, 0)

    def jet_zero(self) -> JetPoly:
        return JetPoly({}, self.nparams, self.order)

    def jet_const(self, c) -> JetPoly:
        return JetPoly.constant(c, self.nparams, self.order)

    # -- ring changes -------------------------------------------------------------
    def lift(self, nparams: int, order: int) -> "Poly3":
        """Embed a parameter-free polynomial into a parameter ring."""
        if self.nparams == nparams and self.order == order:
            return self
        out = {}
        for e, c in self.terms.items():
            if c.degree() > 0:
                raise ValueError("only parameter-free polynomials can be lifted")
            out[e] = JetPoly.constant(c.constant_term(), nparams, order)
        return Poly3(out, nparams, order)

    def map_coefficients(self, fn: Callable[[JetPoly], JetPoly], nparams=None, order=None) -> "Poly3":
        nparams = self.nparams if nparams is None else nparams
        order = self.order if order is None else order
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if v:
                out[e] = v
        obj = Poly3.__new__(Poly3)
        obj.nparams, obj.order, obj.terms = nparams, order, out
        return obj

    def at_zero_parameters(self) -> "Poly3":
        """Constant parts of all coefficients, as a parameter-free polynomial."""
        return Poly3({e: c.constant_term() for e, c in self.terms.items()}, 0, 0)

    # -- queries ------------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=-1)

    def homogeneous(self, d: int) -> "Poly3":
        return self._new({e: c for e, c in self.terms.items() if sum(e) == d})

    def truncate(self, d: int) -> "Poly3":
        return self._new({e: c for e, c in self.terms.items() if sum(e) <= d})

    def coeff(self, e: Exp3) -> JetPoly:
        return self.terms.get(tuple(e), self.jet_zero())

    def rational_coeff(self, e: Exp3):
        return self.coeff(e).constant_term()

    # -- arithmetic ---------------------------------------------------------------
    def _coerce(self, other) -> "Poly3":
        if isinstance(other, Poly3):
            if (other.nparams, other.order) != (self.nparams, self.order):
                if other.nparams == 0 and other.order == 0:
                    return other.lift(self.nparams, self.order)
                if self.nparams == 0 and self.order == 0:
                    raise _Promote(other)
                raise ValueError("polynomials over different parameter rings")
            return other
        if isinstance(other, MPoly):
            return self._new({(0, 0, 0): other} if other else {})
        c = self.jet_const(other)
        return self._new({(0, 0, 0): c} if c else {})

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except _Promote as p:
            return self.lift(p.target.nparams, p.target.order) + p.target
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (Poly3, MPoly)):
            return self + (-other)
        return self + (-Q(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, MPoly):
            return self._new({e: c * other for e, c in self.terms.items() if c * other})
        if not isinstance(other, Poly3):
            return self.scale(other)
        try:
            other = self._coerce(other)
        except _Promote as p:
            return self.lift(p.target.nparams, p.target.order) * p.target
        out: dict[Exp3, JetPoly] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                v = c1 * c2
                if e in out:
                    v = out[e] + v
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return self._new(out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly3":
        if c == 0:
            return self._new({})
        return self._new({e: v.scale(c) for e, v in self.terms.items()})

    def __truediv__(self, c):
        return self.scale(Q(1) / Q(c))

    def __pow__(self, n: int):
        result = self._coerce(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly3):
            return NotImplemented
        a, b = self, other
        if (a.nparams, a.order) != (b.nparams, b.order):
            return False
        return a.terms == b.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- calculus -----------------------------------------------------------------
    def diff(self, var: int | str) -> "Poly3":
        i = VARS.index(var) if isinstance(var, str) else var
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c.scale(e[i])
        return self._new(out)

    def substitute_z(self, h: "Poly3", max_degree: int | None = None) -> "Poly3":
        """Replace z by h (a polynomial in x, y); optionally drop terms above max_degree."""
        out = self._new({})
        powers = {0: self._coerce(1)}
        for e, c in self.terms.items():
            k = e[2]
            if k not in powers:
                p = powers[max(powers)]
                for _ in range(max(powers), k):
                    p = p * h
                    if max_degree is not None:
                        p = p.truncate(max_degree)
                    powers[len(powers)] = p
            term = self._new({(e[0], e[1], 0): c}) * powers[k]
            if max_degree is not None:
                term = term.truncate(max_degree)
            out = out + term
        return out

    def evaluate_parameters(self, values: Sequence) -> "Poly3":
        """Fix the parameters to rationals, giving a parameter-free polynomial."""
        return Poly3({e: c.evaluate(values) for e, c in self.terms.items()}, 0, 0)

    # -- display ------------------------------------------------------------------
    def to_str(self, param_names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, key=lambda e: (sum(e), -e[0], -e[1])):
            c = self.terms[e]
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(VARS, e) if k)
            if c.degree() <= 0:
                q = c.constant_term()
                sign = "-" if q < 0 else "+"
                mag = abs(q)
                body = mono if mag == 1 and mono else (f"{format_q(mag)}*{mono}" if mono else format_q(mag))
                pieces.append((sign, body))
                continue
            names = param_names or [f"p{i}" for i in range(self.nparams)]
            if len(c.terms) == 1:
                (pe, q), = c.terms.items()
                sign = "-" if q < 0 else "+"
                inner = _single(pe, abs(q), names)
                body = f"{inner}*{mono}" if mono else inner
            else:
                sign = "+"
                body = f"({c.to_str(names)})" + (f"*{mono}" if mono else "")
            pieces.append((sign, body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Poly3({self.to_str()})"


def _single(e, q, names) -> str:
    mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
    if q == 1:
        return mono
    return f"{format_q(q)}*{mono}"


class _Promote(Exception):
    def __init__(self, target):
        self.target = target


def apply_vector_field(field: Sequence[Poly3], H: Poly3) -> Poly3:
    """Directional derivative XH = H_x*X1 + H_y*X2 + H_z*X3."""
    out = None
    for i, comp in enumerate(field):
        term = H.diff(i) * comp
        out = term if out is None else out + term
    return out


# alias matching the operation name used across the package
poly3_apply_vector_field = apply_vector_field
