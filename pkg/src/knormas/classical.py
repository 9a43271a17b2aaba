"""Classical hybrid logic over finite Kripke structures (W, R, V)."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .formula import (
    And, At, Bottom, Box, Diamond, HybridFormula, Implies, Nom, Not, Or, Prop, Top,
)
from .violations import UnknownSymbolError, Violation

Assignment = Mapping[str, str]


@dataclass(frozen=True)
class ClassicalHybridModel:
    worlds: frozenset[str]
    access: frozenset[tuple[str, str]]
    valuation: Mapping[tuple[str, str], bool]
    props: frozenset[str] = field(default=frozenset())

    @cached_property
    def successors(self) -> dict[str, tuple[str, ...]]:
        succ: dict[str, list[str]] = {w: [] for w in self.worlds}
        for u, v in sorted(self.access):
            succ.setdefault(u, []).append(v)
        return {w: tuple(vs) for w, vs in succ.items()}

    @cached_property
    def atoms(self) -> frozenset[str]:
        return self.props | {p for _, p in self.valuation}


def validate_classical(model: ClassicalHybridModel, g: Assignment) -> list[Violation]:
    out = []
    if not model.worlds:
        out.append(Violation("empty-worlds", "W must be nonempty"))
    for u, v in sorted(model.access):
        for end in (u, v):
            if end not in model.worlds:
                out.append(Violation(
                    "dangling-access", f"accessibility endpoint {end} of ({u},{v}) not in W", (u, v)))
    for w in sorted(model.worlds):
        for p in sorted(model.atoms):
            if (w, p) not in model.valuation:
                out.append(Violation(
                    "partial-valuation", f"valuation undefined at ({w}, {p})", (w, p)))
    for w, p in sorted(model.valuation):
        if w not in model.worlds:
            out.append(Violation("dangling-valuation", f"valuation world {w} not in W", (w, p)))
    for a, w in sorted(g.items()):
        if w not in model.worlds:
            out.append(Violation(
                "dangling-assignment", f"assignment target not in W: {a} -> {w}", (a, w)))
    return out


def eval_classical(model: ClassicalHybridModel, g: Assignment, w: str, f: HybridFormula) -> bool:
    """``M, g, w |= f``.  Diamond and disjunction are the classical duals."""
    if w not in model.worlds:
        raise ValueError(f"world {w!r} not in W")
    return _ev(model, g, w, f)


def _ev(m: ClassicalHybridModel, g: Assignment, w: str, f) -> bool:
    match f:
        case Prop(p):
            try:
                return m.valuation[(w, p)]
            except KeyError:
                raise UnknownSymbolError(f"no valuation for proposition {p!r} at {w!r}") from None
        case Nom(a):
            return w == _lookup(g, a)
        case Top():
            return True
        case Bottom():
            return False
        case And(a, b):
            return _ev(m, g, w, a) and _ev(m, g, w, b)
        case Or(a, b):
            return _ev(m, g, w, a) or _ev(m, g, w, b)
        case Implies(a, b):
            return not _ev(m, g, w, a) or _ev(m, g, w, b)
        case Not(a):
            return not _ev(m, g, w, a)
        case Box(a):
            return all(_ev(m, g, v, a) for v in m.successors.get(w, ()))
        case Diamond(a):
            return any(_ev(m, g, v, a) for v in m.successors.get(w, ()))
        case At(n, a):
            return _ev(m, g, _lookup(g, n), a)
    raise TypeError(f"not a hybrid formula: {f!r}")


def _lookup(g: Assignment, a: str):
    try:
        return g[a]
    except KeyError:
        raise UnknownSymbolError(f"unknown nominal {a!r}") from None


def eval_all_worlds(model: ClassicalHybridModel, g: Assignment, f: HybridFormula) -> dict[str, bool]:
    return {w: eval_classical(model, g, w, f) for w in sorted(model.worlds)}
