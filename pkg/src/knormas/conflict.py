"""Conflict analysis: contradictions among imperatives, collisions involving permissions.

Imperatives get an obedience statement; a permission gets two conformity
statements (availing oneself of it, declining it).  A bottom-labelled world
is explained by its minimal sets of jointly unsatisfiable statements: only
imperatives make a normative contradiction, and any permission conformity
statement makes it a normative collision.  All impossibility is relative to
the model's trace bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .lattice import LatticeTerm
from .mas import MasSystem, Trace, enumerate_traces
from .norms import ComplianceTable, KelsenianModel, NormSpec
from .patterns import Pattern, PNot, conjoin, holds, render_pattern

CONTRADICTION = "normative-contradiction"
COLLISION = "normative-collision"


class StatementKindError(ValueError):
    pass


@dataclass(frozen=True)
class ComplianceStatement:
    source: str
    kind: str  # obedience | conformity-taken | conformity-declined
    predicate: Pattern

    def __str__(self) -> str:
        return f"{self.kind}({self.source}): {render_pattern(self.predicate)}"


def obedience_statement(n: NormSpec) -> ComplianceStatement:
    """Certifies compliance with an obligation or prohibition."""
    if not n.imperative:
        raise StatementKindError(
            f"{n.id} is a permission: obedience cannot be stated, use conformity_statements")
    demand = n.demand if n.kind == "obligation" else PNot(n.demand)
    return ComplianceStatement(n.id, "obedience", conjoin(n.context, demand))


def conformity_statements(n: NormSpec) -> tuple[ComplianceStatement, ComplianceStatement]:
    """(chose to do what is allowed, chose not to do it)."""
    if n.imperative:
        raise StatementKindError(f"{n.id} is an imperative: use obedience_statement")
    source = n.permission or n.id
    return (
        ComplianceStatement(source, "conformity-taken", conjoin(n.context, n.demand)),
        ComplianceStatement(source, "conformity-declined", conjoin(n.context, PNot(n.demand))),
    )


def statement_for(n: NormSpec) -> ComplianceStatement:
    """The statement a norm nominal stands for in a world."""
    if n.imperative:
        return obedience_statement(n)
    taken, declined = conformity_statements(n)
    return taken if n.polarity == "taken" else declined


@dataclass(frozen=True)
class JointCompliance:
    satisfiable: bool
    witness: Trace | None
    bound: int


def joint_compliance_test(statements: Iterable[ComplianceStatement], mas: MasSystem,
                          bound: int) -> JointCompliance:
    """Search the bounded traces, shortest first, for one meeting every statement."""
    statements = list(statements)
    if not statements:
        raise ValueError("joint compliance needs at least one statement")
    for trace in enumerate_traces(mas, bound):
        if all(holds(s.predicate, trace, mas) for s in statements):
            return JointCompliance(True, trace, bound)
    return JointCompliance(False, None, bound)


# -- reports -----------------------------------------------------------------


@dataclass(frozen=True)
class ConflictReport:
    cls: str
    participants: LatticeTerm
    witness: LatticeTerm
    bound: int
    explanation: str
    subsumed: tuple[LatticeTerm, ...] = ()

    @property
    def witness_worlds(self) -> tuple[LatticeTerm, ...]:
        return (self.witness,) + self.subsumed

    @property
    def minimal_sets(self) -> list[frozenset[str]]:
        return sorted(self.participants.clauses, key=lambda c: sorted(c))


@dataclass(frozen=True)
class Unfulfillable:
    """A bottom world explained by norms the system cannot uphold, not by a conflict."""

    norms: tuple[frozenset[str], ...]
    witness: LatticeTerm
    bound: int
    explanation: str
    subsumed: tuple[LatticeTerm, ...] = ()

    @property
    def witness_worlds(self) -> tuple[LatticeTerm, ...]:
        return (self.witness,) + self.subsumed


@dataclass(frozen=True)
class ConflictAnalysis:
    reports: tuple[ConflictReport, ...]
    unfulfillable: tuple[Unfulfillable, ...]

    @property
    def clean(self) -> bool:
        return not self.reports and not self.unfulfillable


def complementary(norms: dict[str, NormSpec], nominals: Iterable[str]) -> bool:
    """Both polarities of one permission."""
    seen: dict[str, str] = {}
    for name in nominals:
        n = norms[name]
        if n.permission is None:
            continue
        if seen.setdefault(n.permission, n.polarity) != n.polarity:
            return True
    return False


def minimal_unsatisfiable(table: ComplianceTable, clause: Iterable[str]) -> list[frozenset[str]]:
    """Every minimal subset of ``clause`` with no compliant trace.

    Subsets holding both polarities of a permission are skipped: they exclude
    each other by construction and say nothing about the norms.
    """
    names = sorted(clause)
    found: list[frozenset[str]] = []
    for k in range(1, len(names) + 1):
        for combo in combinations(names, k):
            s = frozenset(combo)
            if complementary(table.norms, s) or any(f <= s for f in found):
                continue
            if not table.clause_set(s):
                found.append(s)
    return found


def analyse_conflicts(model: KelsenianModel) -> ConflictAnalysis:
    table = model.table or ComplianceTable(model.mas, model.bound, model.norms)
    rank = {t: i for i, t in enumerate(model.terms)}
    ups = {t: sum(model.leq(t, u) for u in model.terms) for t in model.terms}
    bottoms = sorted(model.bottom_worlds(), key=lambda t: (ups[t], rank[t]))

    findings: list[dict] = []
    for w in bottoms:
        parent = next((f for f in findings if model.leq(w, f["witness"])), None)
        if parent is not None:
            parent["subsumed"].append(w)
            continue
        cores = []
        for clause in sorted(w.clauses, key=sorted):
            for s in minimal_unsatisfiable(table, clause):
                if s not in cores:
                    cores.append(s)
        findings.append({"witness": w, "cores": cores, "subsumed": []})

    reports, unfulfillable = [], []
    for f in findings:
        w, cores = f["witness"], f["cores"]
        pairs = [c for c in cores if len(c) >= 2]
        single = [c for c in cores if len(c) < 2]
        subsumed = tuple(f["subsumed"])
        if pairs:
            term = LatticeTerm.of(pairs)
            is_collision = any(not model.norms[n].imperative for n in term.nominals)
            reports.append(ConflictReport(
                cls=COLLISION if is_collision else CONTRADICTION,
                participants=term,
                witness=w,
                bound=model.bound,
                explanation=_explain(model, pairs),
                subsumed=subsumed,
            ))
        else:
            norms = tuple(single) or tuple(
                frozenset(c) for c in sorted(w.clauses, key=sorted))
            why = ("the system admits no compliant trace for "
                   + ", ".join(" & ".join(sorted(c)) for c in norms)
                   + f" (traces of length <= {model.bound})")
            unfulfillable.append(Unfulfillable(norms, w, model.bound, why, subsumed))
    return ConflictAnalysis(tuple(reports), tuple(unfulfillable))


def detect_conflicts(model: KelsenianModel) -> list[ConflictReport]:
    return list(analyse_conflicts(model).reports)


def _explain(model: KelsenianModel, cores: list[frozenset[str]]) -> str:
    parts = []
    for core in sorted(cores, key=sorted):
        stmts = [statement_for(model.norms[n]) for n in sorted(core)]
        names = " and ".join(f"{s.kind}({n})" for s, n in zip(stmts, sorted(core)))
        parts.append(names)
    return ("; ".join(parts)
            + f": no trace of length <= {model.bound} satisfies these statements jointly")
