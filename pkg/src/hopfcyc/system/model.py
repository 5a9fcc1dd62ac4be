"""Hopf systems  x' = -y + P + G1,  y' = x + Q + G2,  z' = -lam z + R + G3.

A system file is line oriented::

    # comment
    lambda = 1
    P = x^2 + 2*x*y + 3*x*z
    params = a002, a011
    G1 = a002*z^2 + a011*y*z
    perturbation = quadratic(a, b, c)      # alternative to params/G lines
    mask = c011, c020

Catalog files add ``id``, ``source``, ``expected_rank``, ``K``, ``condition``
and ``solve_for`` lines (see :mod:`hopfcyc.system.catalog`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..exact.mpoly import JetPoly
from ..exact.poly3 import Poly3
from ..exact.rational import Q, format_q
from .expr import EvalError, SystemSyntaxError, evaluate, names_in, parse_expr


class SystemValidationError(ValueError):
    pass


POLY_KEYS = ("P", "Q", "R", "G1", "G2", "G3")
LIST_KEYS = ("params", "mask")
TEXT_KEYS = ("id", "source", "perturbation", "trace", "solve_for", "free", "sample")
INT_KEYS = ("K", "expected_rank")
ALL_KEYS = ("lambda",) + POLY_KEYS + LIST_KEYS + TEXT_KEYS + INT_KEYS + ("condition",)
QUADRATIC_MONOMIALS = ((0, 0, 2), (0, 1, 1), (0, 2, 0), (1, 0, 1), (1, 1, 0), (2, 0, 0))


@dataclass(frozen=True)
class SystemSpec:
    lam: object
    P: Poly3
    Q: Poly3
    R: Poly3

    def __post_init__(self):
        if Q(self.lam) == 0:
            raise SystemValidationError("lambda must be nonzero")
        for name in ("P", "Q", "R"):
            poly = getattr(self, name)
            if poly.nparams or poly.order:
                raise SystemValidationError(f"{name} must have rational coefficients")
            _check_no_low_terms(name, poly)

    @property
    def components(self) -> tuple[Poly3, Poly3, Poly3]:
        return self.P, self.Q, self.R

    def degree(self) -> int:
        return max(p.degree() for p in self.components)

    def with_components(self, P=None, Q=None, R=None) -> "SystemSpec":
        return SystemSpec(self.lam, P if P is not None else self.P,
                          Q if Q is not None else self.Q, R if R is not None else self.R)


@dataclass(frozen=True)
class Perturbation:
    params: tuple[str, ...]
    G: tuple[Poly3, Poly3, Poly3]     # coefficients are jets of order 1
    trace: bool = True

    def __post_init__(self):
        if len(set(self.params)) != len(self.params):
            raise SystemValidationError("parameter names must be unique")
        for i, g in enumerate(self.G, 1):
            if g.nparams != len(self.params):
                raise SystemValidationError(f"G{i} is not over the declared parameters")
            _check_no_low_terms(f"G{i}", g)
            for e, c in g.terms.items():
                if c.constant_term() != 0 or not c.is_homogeneous(1):
                    raise SystemValidationError(f"G{i} coefficient of {e} is not linear in the parameters")

    @property
    def nparams(self) -> int:
        return len(self.params)

    def at_order(self, order: int) -> tuple[Poly3, Poly3, Poly3]:
        m = self.nparams
        out = []
        for g in self.G:
            terms = {e: JetPoly(c.terms, m, order) for e, c in g.terms.items()}
            out.append(Poly3({e: c for e, c in terms.items() if c}, m, order))
        return tuple(out)

    def scaled(self, c) -> "Perturbation":
        return Perturbation(self.params, tuple(g.scale(c) for g in self.G), self.trace)

    def restricted(self, keep: Sequence[str]) -> "Perturbation":
        """Keep only the named parameters (others set to zero)."""
        idx = [self.params.index(n) for n in keep]
        m = len(keep)
        out = []
        for g in self.G:
            terms = {}
            for e, c in g.terms.items():
                jt = {}
                for pe, v in c.terms.items():
                    i = pe.index(1)
                    if i in idx:
                        ne = [0] * m
                        ne[idx.index(i)] = 1
                        jt[tuple(ne)] = v
                if jt:
                    terms[e] = JetPoly(jt, m, 1)
            out.append(Poly3(terms, m, 1))
        return Perturbation(tuple(keep), tuple(out), self.trace)

    @classmethod
    def empty(cls) -> "Perturbation":
        z = Poly3({}, 0, 1)
        return cls((), (z, z, z), True)


def _check_no_low_terms(name: str, poly: Poly3) -> None:
    for e in poly.terms:
        if sum(e) < 2:
            kind = "constant" if sum(e) == 0 else "linear"
            raise SystemValidationError(f"{name} has a {kind} term {_mono(e)}")


def _mono(e) -> str:
    s = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip("xyz", e) if k)
    return s or "1"


def quadratic_param_names(prefix: str) -> list[str]:
    return [prefix + "".join(map(str, e)) for e in QUADRATIC_MONOMIALS]


def standard_quadratic_perturbation(prefixes: Sequence[str] = ("a", "b", "c"),
                                    mask: Sequence[str] = (), degree: int = 2,
                                    trace: bool = True) -> Perturbation:
    """G_i = sum over j+k+l=2 of prefix_i{jkl} x^j y^k z^l, minus masked names."""
    if degree != 2:
        raise ValueError("only quadratic perturbations are generated by this helper")
    if len(prefixes) != 3:
        raise ValueError("need one prefix per component")
    names = [n for p in prefixes for n in quadratic_param_names(p)]
    unknown = set(mask) - set(names)
    if unknown:
        raise ValueError(f"masked names not in the perturbation: {sorted(unknown)}")
    params = [n for n in names if n not in set(mask)]
    m = len(params)
    G = []
    for p in prefixes:
        terms = {}
        for e in QUADRATIC_MONOMIALS:
            n = p + "".join(map(str, e))
            if n in params:
                terms[e] = JetPoly.gen(params.index(n), m, 1)
        G.append(Poly3(terms, m, 1))
    return Perturbation(tuple(params), tuple(G), trace)


# -- file format -------------------------------------------------------------------

@dataclass
class SystemFile:
    """Raw key/value content of a system or catalog file (ASTs kept unevaluated)."""
    exprs: dict = field(default_factory=dict)        # key -> (ast, line)
    lists: dict = field(default_factory=dict)        # key -> [names]
    texts: dict = field(default_factory=dict)
    ints: dict = field(default_factory=dict)
    conditions: list = field(default_factory=list)   # (lhs_ast, rhs_ast, line, text)

    def free_names(self) -> list[str]:
        """Names in lambda/P/Q/R that are not perturbation parameters, in first-use order."""
        params = set(self.declared_params())
        seen: list[str] = []
        for key in ("lambda", "P", "Q", "R"):
            if key in self.exprs:
                for n in _ordered_names(self.exprs[key][0]):
                    if n not in params and n not in "xyz" and n not in seen:
                        seen.append(n)
        return seen

    def declared_params(self) -> list[str]:
        if "params" in self.lists:
            return list(self.lists["params"])
        if "perturbation" in self.texts:
            return list(_quadratic_from_text(self.texts["perturbation"], self.lists.get("mask", ())).params)
        return []


def _ordered_names(node) -> list[str]:
    from .expr import Bin, Name, Neg, Pow
    if isinstance(node, Name):
        return [node.name]
    if isinstance(node, Neg):
        return _ordered_names(node.arg)
    if isinstance(node, Pow):
        return _ordered_names(node.base)
    if isinstance(node, Bin):
        return _ordered_names(node.left) + _ordered_names(node.right)
    return []


def read_system_file(text: str) -> SystemFile:
    sf = SystemFile()
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            raise SystemSyntaxError("expected 'key = value'", lineno, len(line) - len(line.lstrip()) + 1)
        key, value = line.split("=", 1)
        col0 = len(key) + 1
        key = key.strip()
        if key not in ALL_KEYS:
            raise SystemSyntaxError(f"unknown key {key!r}", lineno, raw.index(key) + 1)
        if key in seen and key != "condition":
            raise SystemSyntaxError(f"duplicate key {key!r}", lineno, raw.index(key) + 1)
        seen.add(key)
        if key in POLY_KEYS or key == "lambda":
            sf.exprs[key] = (parse_expr(value, lineno, col0), lineno)
        elif key in LIST_KEYS:
            names = [n.strip() for n in value.split(",") if n.strip()]
            for n in names:
                if not n.isidentifier():
                    raise SystemSyntaxError(f"bad name {n!r}", lineno, col0 + value.index(n) + 1)
            sf.lists[key] = names
        elif key in INT_KEYS:
            try:
                sf.ints[key] = int(value)
            except ValueError:
                raise SystemSyntaxError(f"{key} must be an integer", lineno, col0 + 1) from None
        elif key == "condition":
            offset = col0
            for piece in value.split(";"):
                if piece.strip():
                    sf.conditions.append(_parse_condition(piece, lineno, offset))
                offset += len(piece) + 1
        else:
            sf.texts[key] = value.strip()
    return sf


def _parse_condition(text: str, line: int, col0: int):
    if text.count("=") != 1:
        raise SystemSyntaxError("a condition needs exactly one '='", line, col0 + 1)
    lhs, rhs = text.split("=")
    return (parse_expr(lhs, line, col0), parse_expr(rhs, line, col0 + len(lhs) + 1), line, text.strip())


def _quadratic_from_text(spec: str, mask: Sequence[str]) -> Perturbation:
    import re
    m = re.fullmatch(r"\s*quadratic\s*\(\s*(\w+)\s*,\s*(\w+)\s*,\s*(\w+)\s*\)\s*", spec)
    if not m:
        raise SystemValidationError(f"unsupported perturbation {spec!r}; expected quadratic(a, b, c)")
    return standard_quadratic_perturbation(m.groups(), mask)


def build_system(sf: SystemFile, values: Mapping[str, object] | None = None) -> tuple[SystemSpec, Perturbation]:
    """Evaluate a parsed file with free coefficients fixed by ``values``."""
    values = {k: Q(v) for k, v in (values or {}).items()}
    x, y, z = (Poly3.var(v) for v in "xyz")
    env = dict(values, x=x, y=y, z=z)

    def ev(key, env, default=None):
        if key not in sf.exprs:
            return default
        node, line = sf.exprs[key]
        try:
            return evaluate(node, env)
        except (EvalError, ZeroDivisionError) as exc:
            raise SystemValidationError(f"line {line}: {key}: {exc}") from None

    lam = ev("lambda", env, Q(1))
    if isinstance(lam, Poly3):
        raise SystemValidationError("lambda must be a rational number")
    polys = []
    for key in ("P", "Q", "R"):
        p = ev(key, env, Poly3())
        if not isinstance(p, Poly3):
            p = Poly3({(0, 0, 0): p} if p else {})
        polys.append(p)
    system = SystemSpec(Q(lam), *polys)

    trace = sf.texts.get("trace", "true").lower() not in ("false", "off", "no", "0")
    if "perturbation" in sf.texts:
        if any(k in sf.exprs for k in ("G1", "G2", "G3")) or "params" in sf.lists:
            raise SystemValidationError("give either 'perturbation =' or params/G lines, not both")
        pert = _quadratic_from_text(sf.texts["perturbation"], sf.lists.get("mask", ()))
        pert = Perturbation(pert.params, pert.G, trace)
        return system, pert
    params = list(sf.lists.get("params", ()))
    m = len(params)
    # evaluate at jet order 2 so that products of parameters are seen, not truncated away
    penv = {k: (v.lift(m, 2) if isinstance(v, Poly3) else v) for k, v in env.items()}
    penv.update({v: Poly3.var(v, m, 2) for v in "xyz"})
    for i, n in enumerate(params):
        if n in values:
            raise SystemValidationError(f"{n} is both a parameter and a free coefficient")
        penv[n] = Poly3({(0, 0, 0): JetPoly.gen(i, m, 2)}, m, 2)
    G = []
    for key in ("G1", "G2", "G3"):
        g = ev(key, penv, Poly3({}, m, 2))
        if not isinstance(g, Poly3):
            g = Poly3({(0, 0, 0): g} if g else {}, m, 2)
        for e, c in g.terms.items():
            if c.constant_term() != 0 or not c.is_homogeneous(1):
                raise SystemValidationError(f"{key} coefficient of {_mono(e)} is not linear in the parameters")
        G.append(Poly3({e: JetPoly(c.terms, m, 1) for e, c in g.terms.items()}, m, 1))
    return system, Perturbation(tuple(params), tuple(G), trace)


def parse_system(text: str, values: Mapping[str, object] | None = None) -> tuple[SystemSpec, Perturbation]:
    """Parse a system file whose coefficients are all numeric (or fixed by ``values``)."""
    sf = read_system_file(text)
    missing = [n for n in sf.free_names() if n not in (values or {})]
    if missing:
        raise SystemValidationError(f"unassigned coefficients: {', '.join(missing)}")
    for key in ("G1", "G2", "G3"):
        if key in sf.exprs:
            extra = names_in(sf.exprs[key][0]) - set(sf.declared_params()) - set("xyz") - set(values or {})
            if extra:
                raise SystemValidationError(f"{key} uses undeclared names: {', '.join(sorted(extra))}")
    return build_system(sf, values)


def print_system(system: SystemSpec, pert: Perturbation | None = None) -> str:
    """Canonical text; ``parse_system(print_system(S, p))`` returns (S, p)."""
    lines = [f"lambda = {format_q(system.lam)}"]
    for key, poly in zip(("P", "Q", "R"), system.components):
        lines.append(f"{key} = {poly.to_str()}")
    if pert is not None:
        lines.append(f"params = {', '.join(pert.params)}")
        lines.append(f"trace = {'true' if pert.trace else 'false'}")
        for i, g in enumerate(pert.G, 1):
            lines.append(f"G{i} = {g.to_str(pert.params)}")
    return "\n".join(lines) + "\n"


def nonlinear_field(system: SystemSpec, pert: Perturbation | None, order: int) -> list[Poly3]:
    """(P+G1, Q+G2, R+G3) over the jet ring of the perturbation at ``order``."""
    if pert is None:
        pert = Perturbation.empty()
    G = pert.at_order(order)
    m = pert.nparams
    return [system.components[i].lift(m, order) + G[i] for i in range(3)]
