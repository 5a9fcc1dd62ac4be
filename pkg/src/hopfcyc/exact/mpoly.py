"""Sparse multivariate polynomials over Q, optionally truncated in total degree.

An :class:`MPoly` stores ``{exponent tuple: mpq}``.  When ``order`` is set the
polynomial is a jet: every product drops terms of total degree above ``order``.
:class:`JetPoly` is the truncated flavour used for perturbation-parameter jets.
"""
from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .rational import Q, to_q, format_q


def monomials_upto(nvars: int, order: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree <= order, degree then lex (descending)."""
    out: list[tuple[int, ...]] = []
    for deg in range(order + 1):
        layer = set()
        for combo in combinations_with_replacement(range(nvars), deg):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            layer.add(tuple(e))
        out.extend(sorted(layer, reverse=True))
    return out


def _add_exp(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(i + j for i, j in zip(a, b))


class MPoly:
    __slots__ = ("terms", "nvars", "order")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None,
                 nvars: int = 0, order: int | None = None):
        self.nvars = nvars
        self.order = order
        clean: dict[tuple[int, ...], mpq] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} does not have {nvars} entries")
                c = to_q(c)
                if c == 0:
                    continue
                if order is not None and sum(e) > order:
                    continue
                clean[tuple(e)] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------------
    def _new(self, terms: dict) -> "MPoly":
        # terms are already clean; skip validation
        obj = object.__new__(type(self))
        obj.nvars = self.nvars
        obj.order = self.order
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, c, nvars: int, order: int | None = None):
        return cls({(0,) * nvars: c}, nvars, order)

    @classmethod
    def gen(cls, i: int, nvars: int, order: int | None = None):
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): 1}, nvars, order)

    def zero(self):
        return self._new({})

    def const(self, c):
        c = to_q(c)
        return self._new({(0,) * self.nvars: c} if c else {})

    # -- queries ----------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def constant_term(self) -> mpq:
        return self.terms.get((0,) * self.nvars, Q(0))

    def coeff(self, e: Sequence[int]) -> mpq:
        return self.terms.get(tuple(e), Q(0))

    def homogeneous(self, deg: int):
        return self._new({e: c for e, c in self.terms.items() if sum(e) == deg})

    def truncate(self, order: int):
        obj = self._new({e: c for e, c in self.terms.items() if sum(e) <= order})
        obj.order = order
        return obj

    def is_homogeneous(self, deg: int) -> bool:
        return all(sum(e) == deg for e in self.terms)

    # -- arithmetic -------------------------------------------------------------
    def _check(self, other: "MPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError("polynomials live in rings with different variable counts")
        if self.order != other.order:
            raise ValueError(f"mismatched truncation orders {self.order} and {other.order}")

    def _coerce(self, other):
        if isinstance(other, MPoly):
            self._check(other)
            return other
        return self.const(other)

    def __add__(self, other):
        other = self._coerce(other)
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
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = to_q(c)
        if c == 0:
            return self._new({})
        return self._new({e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return self.scale(other)
        self._check(other)
        T = self.order
        out: dict[tuple[int, ...], mpq] = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if T is not None and d1 + sum(e2) > T:
                    continue
                e = _add_exp(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return self._new({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.scale(Q(1) / to_q(c))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = self.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        return self.terms == self.const(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- calculus / substitution --------------------------------------------------
    def diff(self, i: int):
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return self._new(out)

    def evaluate(self, values: Sequence) -> object:
        """Evaluate at a point; values may be any ring elements supporting + and *."""
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(values, e):
                if k:
                    t = t * v ** k
            total = total + t
        return total

    def substitute(self, i: int, value: "MPoly | object"):
        """Replace variable i by ``value`` (a polynomial of the same ring or a scalar)."""
        if not isinstance(value, MPoly):
            value = self.const(value)
        out = self.zero()
        powers = {0: self.const(1)}
        for e, c in self.terms.items():
            k = e[i]
            if k not in powers:
                powers[k] = value ** k
            f = list(e)
            f[i] = 0
            out = out + self._new({tuple(f): c}) * powers[k]
        return out

    def coefficients_in(self, i: int) -> dict[int, "MPoly"]:
        """Split as sum_k c_k * v_i^k; returns {k: c_k} with v_i removed from c_k."""
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            f = list(e)
            k = f[i]
            f[i] = 0
            parts.setdefault(k, {})[tuple(f)] = c
        return {k: self._new(t) for k, t in parts.items()}

    def relabel(self, perm: Sequence[int]):
        """New polynomial whose variable perm[i] is this polynomial's variable i."""
        out = {}
        for e, c in self.terms.items():
            f = [0] * self.nvars
            for i, k in enumerate(e):
                f[perm[i]] += k
            out[tuple(f)] = c
        return self._new(out)

    def linear_coefficients(self) -> list[mpq]:
        """Gradient at the origin (the degree-1 slice as a coefficient vector)."""
        row = [Q(0)] * self.nvars
        for e, c in self.terms.items():
            if sum(e) == 1:
                row[e.index(1)] = c
        return row

    # -- display ----------------------------------------------------------------
    def to_str(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"v{i}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-k for k in e))):
            c = self.terms[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = format_q(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_q(a)}*{mono}"
            parts.append((sign, body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_str()})"


class JetPoly(MPoly):
    """Polynomial in the perturbation parameters truncated at total degree ``order``."""

    __slots__ = ()

    def __init__(self, terms=None, nvars: int = 0, order: int = 2):
        if order is None or order < 0:
            raise ValueError("a jet needs a non-negative truncation order")
        super().__init__(terms, nvars, order)

    def slice(self, j: int) -> "JetPoly":
        """Homogeneous part of degree j (L^j in the usual notation)."""
        return self.homogeneous(j)


def jet_mul(a: JetPoly, b: JetPoly) -> JetPoly:
    if a.order != b.order:
        raise ValueError(f"mismatched truncation orders {a.order} and {b.order}")
    return a * b


def lincomb(polys: Iterable[MPoly], coeffs: Iterable) -> MPoly:
    polys = list(polys)
    out = polys[0].zero()
    for p, c in zip(polys, coeffs):
        if c:
            out = out + p.scale(c)
    return out
