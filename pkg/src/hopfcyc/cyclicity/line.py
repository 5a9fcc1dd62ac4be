"""Transversal line search for the quadratic problem, with exact verification in Q(alpha)."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..exact.mpoly import MPoly
from ..exact.rational import Q, format_q, parse_q, to_q
from .algebraic import (AlgebraicNumber, FieldElement, NumberField, element_minpoly,
                        express_in, factor_rational, integral_scale, isolate_real_roots, pgcd,
                        primitive_integer, trim, upoly_to_str)
from .elimination import eliminate, fgcd, fsquarefree, specialize
from .rank import HigherOrderProblem

ROOT_WIDTH = Q(1, 2 ** 64)


@dataclass
class LineCertificate:
    problem: HigherOrderProblem
    alpha: AlgebraicNumber
    field: NumberField
    eta: list                      # FieldElement per residual parameter
    vanishing: tuple               # 0-based indices into problem.h
    values: list                   # h_i(eta) for every form, in Q(alpha)
    determinant: FieldElement
    jacobian_vars: tuple           # residual indices differentiated in the determinant
    dehomogenized: int             # residual index fixed to 1
    verified: bool = False

    @property
    def final_value(self) -> FieldElement:
        return self.values[-1]

    @property
    def total_bound(self) -> int:
        return self.problem.k + len(self.problem.h)

    def report(self) -> list[tuple[str, str]]:
        p = self.problem
        names = p.residual
        out = [
            ("alpha_minpoly", upoly_to_str(self.alpha.poly, "x")),
            ("alpha_degree", str(self.alpha.degree)),
            ("alpha_interval", f"{format_q(self.alpha.lo)}, {format_q(self.alpha.hi)}"),
            ("alpha_approx", repr(self.alpha.approx())),
            ("linear_rank", str(p.k)),
            ("residual", ", ".join(names)),
        ]
        for name, v in zip(names, self.eta):
            out.append((f"eta_{name}", v.to_str()))
        for i, v in zip(p.indices, self.values):
            out.append((f"h_{i}", v.to_str()))
        out.append(("jacobian_vars", ", ".join(names[j] for j in self.jacobian_vars)))
        out.append(("jacobian_det", self.determinant.to_str()))
        out.append(("jacobian_det_sign", str(self.determinant.sign())))
        out.append((f"h_{p.target_index}_sign", str(self.final_value.sign())))
        out.append(("verified", "true" if self.verified else "false"))
        out.append(("total_bound", str(self.total_bound)))
        return out


@dataclass
class NotFound:
    attempts: list = field(default_factory=list)     # (dehomogenized name, reason)

    def report(self) -> list[tuple[str, str]]:
        out = [("result", "NOT-FOUND")]
        for name, why in self.attempts:
            out.append((f"attempt_{name}", why))
        return out


def _field_det(rows: list[list[FieldElement]]) -> FieldElement:
    a = [list(r) for r in rows]
    n = len(a)
    F = a[0][0].field if n else None
    det = F(1) if F else None
    for c in range(n):
        p = next((i for i in range(c, n) if not a[i][c].is_zero()), None)
        if p is None:
            return F(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det = det * a[c][c]
        inv = a[c][c].inverse()
        for i in range(c + 1, n):
            if not a[i][c].is_zero():
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def _lift(v, F: NumberField) -> FieldElement:
    return v if isinstance(v, FieldElement) else F(to_q(v) if not isinstance(v, int) else Q(v))


def evaluate_form(h: MPoly, eta: list, F: NumberField) -> FieldElement:
    return _lift(h.evaluate(eta), F)


def verify_line(problem: HigherOrderProblem, eta, alpha: AlgebraicNumber,
                jacobian_vars=None, field_: NumberField | None = None) -> tuple[bool, LineCertificate]:
    """Exact check: h_i(eta) = 0 for all but the last form, a nonzero Jacobian, h_last(eta) != 0.

    ``eta`` entries are FieldElements, or coefficient lists in alpha (constant first).
    """
    if not alpha.isolates():
        raise ValueError("alpha interval does not isolate a root")
    F = field_ or NumberField(alpha)
    pts = [e if isinstance(e, FieldElement) else F.from_poly(list(e) if isinstance(e, (list, tuple)) else [e])
           for e in eta]
    n = problem.nvars
    if len(pts) != n:
        raise ValueError(f"eta has {len(pts)} coordinates, expected {n}")
    vanish = tuple(range(len(problem.h) - 1))
    if jacobian_vars is None:
        fixed = next((i for i, v in enumerate(pts) if v == F(1)), 0)
        jacobian_vars = tuple(i for i in range(n) if i != fixed)
    else:
        fixed = next(i for i in range(n) if i not in jacobian_vars)
    values = [evaluate_form(h, pts, F) for h in problem.h]
    rows = [[_lift(problem.h[i].diff(j).evaluate(pts), F) for j in jacobian_vars] for i in vanish]
    det = _field_det(rows) if rows and len(rows) == len(jacobian_vars) else F(0)
    ok = (all(values[i].is_zero() for i in vanish) and not det.is_zero()
          and not values[-1].is_zero())
    cert = LineCertificate(problem, alpha, F, pts, vanish, values, det,
                           tuple(jacobian_vars), fixed, ok)
    return ok, cert


def _candidate_roots(univariates: list) -> list[tuple[list[int], tuple]]:
    g = []
    for u in univariates:
        if u:
            g = u if not g else pgcd(g, u)
    if not g:
        raise ArithmeticError("final stage: eliminant vanishes identically")
    if len(g) < 2:
        return []
    roots = []
    for fac, _mult in factor_rational(g):
        for iv in isolate_real_roots([Q(c) for c in fac], ROOT_WIDTH):
            roots.append((fac, iv))
    roots.sort(key=lambda r: (r[1][0], r[1][1]))
    return roots


def _back_substitute(stages, last: int, F: NumberField, fixed: int, names) -> dict | str:
    values = {fixed: F(1), last: F.gen()}
    for var, system in reversed(stages[:-1]):
        g = []
        for p in system:
            if p.degree_in(var) == 0:
                continue
            u = specialize(p, var, values, F)
            if u:
                g = u if not g else fgcd(g, u)
        if not g:
            return f"{names[var]} is not determined"
        g = fsquarefree(g)
        if len(g) == 1:
            return f"no common value for {names[var]}"
        if len(g) > 2:
            return f"{names[var]} is not determined uniquely"
        values[var] = -g[0] / g[1]
    return values


def solve_line(problem: HigherOrderProblem, *, generator="auto"):
    """Search a line where h_1..h_{l-1} vanish transversally and h_l does not.

    Residual parameters are dehomogenized one at a time (first to last) by
    setting them to 1.  The field is generated by the coordinate left after
    elimination; with ``generator="auto"`` that root is scaled by the
    integer from ``integral_scale`` so alpha has the smaller minimal
    polynomial.  ``generator=(name, c)`` asks for alpha = c * eta_name, and
    ``None`` keeps the raw root.  Returns a verified LineCertificate or NotFound.
    """
    n = problem.nvars
    nf = NotFound()
    if len(problem.h) != n:
        raise ValueError(f"need {n - 1} vanishing forms plus one target for {n} residual parameters")
    for fixed in range(n):
        name = problem.residual[fixed]
        unknowns = [i for i in range(n) if i != fixed]
        one = MPoly.constant(1, n)
        polys = [h.substitute(fixed, one) for h in problem.h[:-1]]
        try:
            stages, last, unis, _removed = eliminate(polys, unknowns, problem.residual)
            roots = _candidate_roots(unis)
        except ArithmeticError as exc:
            nf.attempts.append((name, str(exc)))
            continue
        if not roots:
            nf.attempts.append((name, "eliminant has no real roots"))
            continue
        reasons = []
        for fac, (lo, hi) in roots:
            alpha = AlgebraicNumber(tuple(fac), lo, hi)
            F = NumberField(alpha)
            vals = _back_substitute(stages, last, F, fixed, problem.residual)
            if isinstance(vals, str):
                reasons.append(vals)
                continue
            eta = [vals[i] for i in range(n)]
            ok, cert = verify_line(problem, eta, alpha, tuple(unknowns), F)
            if ok:
                if generator == "auto":
                    c = integral_scale(alpha.minpoly)
                    return present(cert, (problem.residual[last], c)) if c > 1 else cert
                return present(cert, generator) if generator else cert
            reasons.append(_failure(cert))
        nf.attempts.append((name, "; ".join(dict.fromkeys(reasons)) or "no verified root"))
    return nf


def _failure(cert: LineCertificate) -> str:
    if not all(cert.values[i].is_zero() for i in cert.vanishing):
        return "extraneous root"
    if cert.determinant.is_zero():
        return "intersection not transversal"
    return "last form vanishes on the line"


def present(cert: LineCertificate, generator: tuple) -> LineCertificate:
    """Re-express the certificate with alpha' = c * eta[name] as field generator."""
    name, c = generator
    j = cert.problem.residual.index(name)
    new_gen = cert.eta[j] * to_q(c)
    mp = element_minpoly(new_gen)
    if len(mp) - 1 != cert.field.degree:
        raise ValueError(f"{c}*{name} does not generate the field")
    coords = [express_in(v, new_gen) for v in cert.eta]
    # isolate the image of the root: the value of new_gen is a root of mp
    target = new_gen.approx()
    cands = isolate_real_roots([Q(x) for x in mp], ROOT_WIDTH)
    lo, hi = min(cands, key=lambda iv: abs(float((iv[0] + iv[1]) / 2) - target))
    beta = AlgebraicNumber(tuple(mp), lo, hi)
    G = NumberField(beta)
    # confirm the chosen root is the right conjugate: new_gen - midpoint has the sign pattern of beta
    mid = (lo + hi) / 2
    if (new_gen - mid).sign() != (G.gen() - mid).sign():
        raise ArithmeticError("could not match the conjugate of the new generator")
    eta = [G.from_poly(cf) for cf in coords]
    ok, out = verify_line(cert.problem, eta, beta, cert.jacobian_vars, G)
    if not ok:
        raise ArithmeticError("re-presented certificate failed verification")
    return out


class CertificateFormatError(ValueError):
    pass


def read_eta_file(text: str, problem: HigherOrderProblem):
    """Parse ``alpha_minpoly``, ``alpha_interval`` and ``eta_<name>`` lines."""
    from ..system.expr import evaluate, parse_expr
    kv = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line or "=" not in line:
            continue
        k, v = line.split("=", 1)
        kv[k.strip()] = v.strip()
    missing = [k for k in ("alpha_minpoly", "alpha_interval") if k not in kv]
    missing += [f"eta_{n}" for n in problem.residual if f"eta_{n}" not in kv]
    if missing:
        raise CertificateFormatError(f"certificate file lacks {', '.join(missing)}")
    x = MPoly.gen(0, 1)
    mp = evaluate(parse_expr(kv["alpha_minpoly"]), {"x": x, "alpha": x})
    coeffs = [mp.coeff((i,)) for i in range(mp.degree() + 1)]
    try:
        lo, hi = (parse_q(s.strip()) for s in kv["alpha_interval"].split(","))
    except ValueError as exc:
        raise CertificateFormatError(f"bad alpha_interval: {exc}") from None
    alpha = AlgebraicNumber(tuple(primitive_integer(trim(coeffs))), lo, hi)
    eta = []
    for name in problem.residual:
        e = evaluate(parse_expr(kv[f"eta_{name}"]), {"alpha": x})
        if isinstance(e, MPoly):
            eta.append([e.coeff((i,)) for i in range(e.degree() + 1)])
        else:
            eta.append([Q(e)])
    return eta, alpha
