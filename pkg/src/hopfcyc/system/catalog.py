"""Catalog of rigid centers: systems with free coefficients and their center conditions.

A condition line holds ``;``-separated equations.  ``name = expr`` with ``name``
a free coefficient is a substitution (solved form); anything else is a
polynomial constraint ``lhs = rhs`` that a sample must satisfy exactly.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

from ..exact.mpoly import MPoly
from ..exact.rational import Q, format_q, parse_q
from .expr import EvalError, Name, evaluate, names_in
from .model import Perturbation, SystemFile, SystemSpec, build_system, read_system_file


class CenterConditionError(ValueError):
    def __init__(self, equation: str, reason: str):
        self.equation = equation
        super().__init__(f"sample violates center condition {equation!r}: {reason}")


@dataclass
class Condition:
    lhs: object
    rhs: object
    text: str
    target: str | None = None     # substitution target, or None for a constraint


@dataclass
class CatalogEntry:
    id: str
    source: str
    raw: SystemFile
    conditions: list = field(default_factory=list)
    expected_rank: int | None = None
    K: int = 12
    path: Path | None = None

    @property
    def free_names(self) -> list[str]:
        return self.raw.free_names()

    def substituted(self) -> list[str]:
        return [c.target for c in self.conditions if c.target]

    def solve_targets(self) -> dict[int, str]:
        """Constraint index -> the free coefficient solved from it when sampling."""
        hints = [s.strip() for s in self.raw.texts.get("solve_for", "").split(",") if s.strip()]
        out = {}
        subst = set(self.substituted())
        k = 0
        for i, c in enumerate(self.conditions):
            if c.target:
                continue
            if k < len(hints):
                out[i] = hints[k]
            else:
                cands = [n for n in sorted(names_in(c.lhs) | names_in(c.rhs)) if n not in subst]
                if not cands:
                    raise ValueError(f"{self.id}: constraint {c.text!r} has no variable to solve for")
                out[i] = cands[-1]
            k += 1
        return out

    def independent_names(self) -> list[str]:
        dependent = set(self.substituted()) | set(self.solve_targets().values())
        return [n for n in self.free_names if n not in dependent]

    def recorded_sample(self) -> dict | None:
        """The ``sample = name = value, ...`` line, if the entry pins one."""
        text = self.raw.texts.get("sample", "").strip()
        if not text:
            return None
        out = {}
        for piece in text.split(","):
            name, _, value = piece.partition("=")
            if not value.strip():
                raise ValueError(f"{self.id}: bad sample item {piece.strip()!r}")
            out[name.strip()] = parse_q(value.strip())
        return out

    def rank_sample(self, seed: int = 1) -> dict:
        """Sample used for rank experiments: the recorded one, else a seeded random one."""
        rec = self.recorded_sample()
        return self.complete_sample(rec) if rec is not None else self.random_sample(seed)

    def perturbation(self) -> Perturbation:
        return build_system(self.raw, {n: 1 for n in self.free_names})[1]

    # -- instantiation ------------------------------------------------------------
    def complete_sample(self, sample: Mapping[str, object]) -> dict:
        """Fill substitution targets and check every equation exactly."""
        values = {k: Q(v) for k, v in sample.items()}
        for c in self.conditions:
            if c.target and c.target not in values:
                values[c.target] = self._eval(c.rhs, values, c)
                continue
            lhs = self._eval(c.lhs, values, c)
            rhs = self._eval(c.rhs, values, c)
            if lhs != rhs:
                raise CenterConditionError(c.text, f"{format_q(lhs)} != {format_q(rhs)}")
        missing = [n for n in self.free_names if n not in values]
        if missing:
            raise ValueError(f"{self.id}: sample does not fix {', '.join(missing)}")
        return values

    @staticmethod
    def _eval(node, values, cond):
        try:
            return evaluate(node, values)
        except ZeroDivisionError:
            raise CenterConditionError(cond.text, "division by zero") from None
        except EvalError as exc:
            raise CenterConditionError(cond.text, str(exc)) from None

    def instantiate(self, sample: Mapping[str, object] | None = None) -> SystemSpec:
        values = self.complete_sample(sample or {})
        return build_system(self.raw, values)[0]

    def random_sample(self, seed: int, bound: int = 20, tries: int = 100) -> dict:
        """Seeded rational sample with numerators/denominators in [-bound, bound] minus 0."""
        rng = random.Random(seed)
        solve = self.solve_targets()
        draw = lambda: Q(rng.choice([i for i in range(-bound, bound + 1) if i]),
                         rng.choice([i for i in range(-bound, bound + 1) if i]))
        for _ in range(tries):
            values = {n: draw() for n in self.independent_names()}
            try:
                for i, c in enumerate(self.conditions):
                    if c.target:
                        values[c.target] = self._eval(c.rhs, values, c)
                    elif i in solve:
                        values[solve[i]] = self._solve_linear(c, solve[i], values)
                return self.complete_sample(values)
            except (CenterConditionError, ArithmeticError):
                continue
        raise RuntimeError(f"{self.id}: no valid sample after {tries} draws")

    @staticmethod
    def _solve_linear(c: Condition, var: str, values) -> object:
        t = MPoly.gen(0, 1)
        env = dict(values)
        env[var] = t
        expr = evaluate(c.lhs, env) - evaluate(c.rhs, env)
        if not isinstance(expr, MPoly):
            raise ArithmeticError("constraint does not involve the solve variable")
        if expr.degree() != 1:
            raise ArithmeticError(f"constraint is not linear in {var}")
        a, b = expr.coeff((1,)), expr.coeff((0,))
        return -b / a


def load_entry(text: str, path: Path | None = None) -> CatalogEntry:
    sf = read_system_file(text)
    free = set(sf.free_names())
    conds = []
    for lhs, rhs, _line, txt in sf.conditions:
        target = lhs.name if isinstance(lhs, Name) and lhs.name in free else None
        conds.append(Condition(lhs, rhs, txt, target))
    return CatalogEntry(
        id=sf.texts.get("id", path.stem if path else "system"),
        source=sf.texts.get("source", ""),
        raw=sf,
        conditions=conds,
        expected_rank=sf.ints.get("expected_rank"),
        K=sf.ints.get("K", 12),
        path=path,
    )


def catalog_dir() -> Path:
    return Path(str(resources.files("hopfcyc.system") / "catalog"))


def load_catalog() -> dict[str, CatalogEntry]:
    out = {}
    for p in sorted(catalog_dir().glob("*.sys")):
        e = load_entry(p.read_text(encoding="utf-8"), p)
        out[e.id] = e
    return out


def instantiate_center(entry: CatalogEntry, sample: Mapping[str, object] | None = None) -> SystemSpec:
    return entry.instantiate(sample)
