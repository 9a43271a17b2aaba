"""Kelsenian NorMAS: norms as worlds over a multi-agent transition system.

Each declared world is a lattice term over norm nominals.  Its compliance set
is the set of bounded traces that uphold every norm of some clause; a world
with no compliant trace is labelled bottom.  The worlds, ordered by
precedence, become the knowledge states of an intuitionistic hybrid model
whose points are MAS states.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .formula import HybridFormula
from .intuitionistic import (
    IntuitionisticHybridModel, WAssignment, close_order, covering_pairs, eval_intuitionistic,
    validate_heredity,
)
from .lattice import LatticeTerm, term_leq
from .mas import MasSystem, Trace, enumerate_traces, validate_mas, visited_states
from .patterns import Pattern, holds, symbols
from .violations import Violation

DEFAULT_BOUND = 6
KINDS = ("obligation", "prohibition", "permission")


class Compliance(enum.Enum):
    COMPLIES = "complies"
    VIOLATES = "violates"
    INAPPLICABLE = "context-inapplicable"


@dataclass(frozen=True)
class NormSpec:
    """One norm nominal.

    A permission contributes two nominals sharing ``permission``: one with
    polarity ``taken`` (the agency avails itself of the permission) and one
    with polarity ``declined``.
    """

    id: str
    kind: str
    demand: Pattern
    context: Pattern | None = None
    polarity: str | None = None
    permission: str | None = None
    system: str | None = None
    says: str = ""

    def __post_init__(self):
        if not self.id:
            raise ValueError("norm id must be nonempty")
        if self.kind not in KINDS:
            raise ValueError(f"norm {self.id}: unknown deontic type {self.kind!r}")
        if self.kind == "permission":
            if self.polarity not in ("taken", "declined"):
                raise ValueError(f"permission {self.id} needs polarity 'taken' or 'declined'")
        elif self.polarity is not None:
            raise ValueError(f"imperative {self.id} cannot carry a polarity")

    @property
    def imperative(self) -> bool:
        return self.kind != "permission"


def permission_pair(id: str, declined_id: str, demand: Pattern, context: Pattern | None = None,
                    **kw) -> tuple[NormSpec, NormSpec]:
    return (
        NormSpec(id, "permission", demand, context, "taken", id, **kw),
        NormSpec(declined_id, "permission", demand, context, "declined", id, **kw),
    )


def check_norm(n: NormSpec, mas: MasSystem) -> list[Violation]:
    out = []
    for part in (n.demand, n.context):
        if part is None:
            continue
        actions, agents = symbols(part)
        for a in sorted(actions - mas.actions):
            out.append(Violation("norm-action", f"norm {n.id} mentions unknown action {a}", (n.id, a)))
        for a in sorted(agents - mas.agents):
            out.append(Violation("norm-agent", f"norm {n.id} mentions unknown agent {a}", (n.id, a)))
    return out


def trace_complies(n: NormSpec, trace: Trace, mas: MasSystem) -> Compliance:
    problems = check_norm(n, mas)
    if problems:
        raise ValueError("; ".join(map(str, problems)))
    return _complies(n, trace, mas)


def _complies(n: NormSpec, trace: Trace, mas: MasSystem) -> Compliance:
    if n.context is not None and not holds(n.context, trace, mas):
        return Compliance.INAPPLICABLE
    met = holds(n.demand, trace, mas)
    if n.kind == "obligation":
        return Compliance.COMPLIES if met else Compliance.VIOLATES
    if n.kind == "prohibition":
        return Compliance.VIOLATES if met else Compliance.COMPLIES
    wanted = met if n.polarity == "taken" else not met
    return Compliance.COMPLIES if wanted else Compliance.INAPPLICABLE


class ComplianceTable:
    """Bounded traces of a system with each norm's compliant subset, computed once."""

    def __init__(self, mas: MasSystem, bound: int, norms: Mapping[str, NormSpec]):
        self.mas = mas
        self.bound = bound
        self.norms = dict(norms)
        self.traces = enumerate_traces(mas, bound)
        self._sets: dict[str, frozenset[int]] = {}

    def norm_set(self, nominal: str) -> frozenset[int]:
        hit = self._sets.get(nominal)
        if hit is None:
            n = self.norms[nominal]
            hit = self._sets[nominal] = frozenset(
                i for i, t in enumerate(self.traces)
                if _complies(n, t, self.mas) is Compliance.COMPLIES)
        return hit

    def clause_set(self, clause: Iterable[str]) -> frozenset[int]:
        clause = sorted(clause)
        if not clause:
            raise ValueError("empty clause")
        out = self.norm_set(clause[0])
        for nominal in clause[1:]:
            out = out & self.norm_set(nominal)
        return out

    def world_set(self, world: LatticeTerm) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for clause in world.clauses:
            out = out | self.clause_set(clause)
        return out

    def world_traces(self, world: LatticeTerm) -> list[Trace]:
        return [self.traces[i] for i in sorted(self.world_set(world))]


def joint_compliance_set(world: LatticeTerm, norms: Mapping[str, NormSpec], mas: MasSystem,
                         bound: int = DEFAULT_BOUND) -> frozenset[Trace]:
    """Traces that, for some clause of ``world``, satisfy every clause norm's
    context and meet its demand."""
    if not isinstance(world, LatticeTerm):
        raise TypeError("world must be a LatticeTerm")
    missing = world.nominals - set(norms)
    if missing:
        raise KeyError(f"undeclared norm nominals: {sorted(missing)}")
    table = ComplianceTable(mas, bound, norms)
    return frozenset(table.world_traces(world))


# -- the Kelsenian model -----------------------------------------------------


@dataclass(frozen=True)
class WorldSpec:
    term: LatticeTerm
    text: str = ""
    expect: bool | None = None
    annotation: HybridFormula | None = None

    @property
    def source(self) -> str:
        return self.text or str(self.term)


@dataclass
class KelsenianModel:
    norms: dict[str, NormSpec]
    worlds: tuple[WorldSpec, ...]
    order: frozenset[tuple[LatticeTerm, LatticeTerm]]
    mas: MasSystem
    bound: int
    props: dict[str, Pattern]
    compliance: dict[LatticeTerm, frozenset[Trace]]
    labels: dict[LatticeTerm, bool]
    ihl: IntuitionisticHybridModel
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    table: ComplianceTable | None = None

    @staticmethod
    def state_id(t: LatticeTerm) -> str:
        return str(t)

    @cached_property
    def terms(self) -> list[LatticeTerm]:
        return [w.term for w in self.worlds]

    @cached_property
    def by_id(self) -> dict[str, LatticeTerm]:
        return {self.state_id(t): t for t in self.terms}

    def spec(self, t: LatticeTerm) -> WorldSpec:
        return next(w for w in self.worlds if w.term == t)

    def leq(self, a: LatticeTerm, b: LatticeTerm) -> bool:
        return (a, b) in self.order

    def covering_edges(self) -> list[tuple[LatticeTerm, LatticeTerm]]:
        ids = covering_pairs({(self.state_id(a), self.state_id(b)) for a, b in self.order})
        rank = {t: i for i, t in enumerate(self.terms)}
        edges = [(self.by_id[a], self.by_id[b]) for a, b in ids]
        return sorted(edges, key=lambda e: (rank[e[0]], rank[e[1]]))

    def least(self) -> LatticeTerm | None:
        lows = [t for t in self.terms if all(self.leq(t, u) for u in self.terms)]
        return lows[0] if lows else None

    def greatest(self) -> LatticeTerm | None:
        highs = [t for t in self.terms if all(self.leq(u, t) for u in self.terms)]
        return highs[0] if highs else None

    def bottom_worlds(self) -> list[LatticeTerm]:
        return [t for t in self.terms if not self.labels[t]]

    def assignment(self, t: LatticeTerm) -> WAssignment:
        # every D_w contains the initial MAS state, so nominals denote it everywhere
        return WAssignment(self.state_id(t), {n: self.mas.initial for n in self.norms})

    def satisfies(self, t: LatticeTerm, f: HybridFormula) -> bool:
        """The world is a model of ``f``: ``f`` holds at every point of ``D_w``."""
        w = self.state_id(t)
        g = self.assignment(t)
        return all(eval_intuitionistic(self.ihl, g, w, d, f) for d in sorted(self.ihl.domain[w]))

    def world_traces(self, t: LatticeTerm) -> list[Trace]:
        return sorted(self.compliance[t], key=lambda tr: (len(tr), tr))


def build_kelsenian_model(norms: Mapping[str, NormSpec] | Iterable[NormSpec],
                          worlds: Sequence[LatticeTerm | WorldSpec], mas: MasSystem,
                          bound: int = DEFAULT_BOUND, props: Mapping[str, Pattern] | None = None,
                          order: Iterable[tuple[LatticeTerm, LatticeTerm]] | None = None
                          ) -> KelsenianModel:
    """Label declared worlds by joint compliance and derive the IHL model.

    Without ``order`` the worlds are ordered by :func:`term_leq`.  A declared
    ``order`` (covering edges) is closed reflexively and transitively; it must
    contain the term order and keep compliance sets monotone, and pairs beyond
    the term order are listed in ``notes``.
    """
    if not isinstance(norms, Mapping):
        norms = {n.id: n for n in norms}
    norms = dict(norms)
    props = dict(props or {})
    specs = tuple(w if isinstance(w, WorldSpec) else WorldSpec(w) for w in worlds)
    if not specs:
        raise ValueError("at least one world must be declared")
    terms = [w.term for w in specs]
    if len(set(terms)) != len(terms):
        raise ValueError("duplicate world declarations")
    for t in terms:
        missing = t.nominals - set(norms)
        if missing:
            raise KeyError(f"world {t} uses undeclared nominals {sorted(missing)}")
    systems = {n.system for n in norms.values() if n.system is not None}
    if len(systems) > 1:
        raise ValueError(
            "norms from distinct normative systems (normative competition) are out of scope: "
            + ", ".join(sorted(systems)))

    violations = validate_mas(mas)
    for n in norms.values():
        violations.extend(check_norm(n, mas))
    for name, p in sorted(props.items()):
        actions, agents = symbols(p)
        for a in sorted(actions - mas.actions):
            violations.append(Violation("prop-action", f"proposition {name} mentions unknown action {a}"))
        for a in sorted(agents - mas.agents):
            violations.append(Violation("prop-agent", f"proposition {name} mentions unknown agent {a}"))

    table = ComplianceTable(mas, bound, norms)
    compliance = {t: frozenset(table.world_traces(t)) for t in terms}
    labels = {t: bool(compliance[t]) for t in terms}

    ids = {t: KelsenianModel.state_id(t) for t in terms}
    lattice_pairs = {(a, b) for a in terms for b in terms if term_leq(a, b)}
    notes: list[str] = []
    if order is None:
        closed = frozenset(lattice_pairs)
    else:
        edges = list(order)
        for a, b in edges:
            if a not in ids or b not in ids:
                raise KeyError(f"order edge {a} <= {b} uses an undeclared world")
        closed_ids = close_order(ids.values(), [(ids[a], ids[b]) for a, b in edges])
        back = {v: k for k, v in ids.items()}
        closed = frozenset((back[a], back[b]) for a, b in closed_ids)
        for a, b in sorted(lattice_pairs - closed, key=lambda e: (str(e[0]), str(e[1]))):
            violations.append(Violation(
                "order-omits-lattice", f"declared order omits lattice pair {a} <= {b}", (a, b)))
        for a, b in sorted(closed, key=lambda e: (str(e[0]), str(e[1]))):
            if a != b and (b, a) in closed and str(a) < str(b):
                violations.append(Violation(
                    "order-not-antisymmetric", f"declared order has a cycle through {a} and {b}", (a, b)))
            if compliance[a] <= compliance[b]:
                continue
            if len(a.clauses) > 1 or len(b.clauses) > 1:
                # a join world only promises some clause, so it need not shrink along <=
                notes.append(f"precedence {a} <= {b} is not compliance-monotone (join world)")
            else:
                violations.append(Violation(
                    "order-not-monotone",
                    f"precedence {a} <= {b} admits traces at {a} that {b} excludes", (a, b)))
        for a, b in sorted(closed - lattice_pairs, key=lambda e: (str(e[0]), str(e[1]))):
            notes.append(f"declared precedence {a} <= {b} lies beyond the lattice order")

    ihl = _derive_ihl(terms, ids, closed, compliance, mas, props)
    violations.extend(validate_heredity(ihl))
    for w in specs:
        if w.expect is not None and w.expect != labels[w.term]:
            want = "top" if w.expect else "bot"
            got = "top" if labels[w.term] else "bot"
            violations.append(Violation(
                "label-mismatch", f"world {w.source} expected {want} but is {got}", (w.term,)))

    return KelsenianModel(
        norms=norms, worlds=specs, order=closed, mas=mas, bound=bound, props=props,
        compliance=compliance, labels=labels, ihl=ihl, violations=violations, notes=notes,
        table=table,
    )


def _derive_ihl(terms, ids, order, compliance, mas: MasSystem, props) -> IntuitionisticHybridModel:
    domain, access, valuation = {}, {}, {}
    for t in terms:
        w = ids[t]
        traces = compliance[t]
        points = {mas.initial}
        steps = set()
        for tr in traces:
            points |= visited_states(mas, tr)
            steps |= {(e.source, e.target) for e in tr}
        domain[w] = frozenset(points)
        access[w] = frozenset(steps)
        # a trace proposition is known at w when every compliant trace of w bears it out
        valuation[w] = {
            p: frozenset(points) if traces and all(holds(pat, tr, mas) for tr in traces) else frozenset()
            for p, pat in props.items()
        }
    return IntuitionisticHybridModel(
        states=frozenset(ids.values()),
        order=frozenset((ids[a], ids[b]) for a, b in order),
        domain=domain,
        equiv={ids[t]: frozenset() for t in terms},
        access=access,
        valuation=valuation,
        props=frozenset(props),
    )
