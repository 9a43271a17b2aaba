"""Intuitionistic hybrid logic models (W, <=, {D_w}, {~_w}, {R_w}, {V_w}).

Knowledge states ``W`` are partially ordered; each state carries its own set
of points, equivalence, accessibility and valuation, all growing along the
order.  Nominals denote points through a w-assignment.

An empty (or partial) ``~_w`` is read through its reflexive closure on
``D_w``, so a nominal always holds at the point it is assigned to.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping

from .classical import ClassicalHybridModel, eval_classical
from .formula import (
    And, At, Bottom, Box, Diamond, HybridFormula, Implies, Nom, Not, Or, Prop, Top,
    negation_as_implication,
)
from .violations import UnknownSymbolError, Violation

Pair = tuple[str, str]


def close_order(states: Iterable[str], pairs: Iterable[Pair]) -> frozenset[Pair]:
    """Reflexive-transitive closure of ``pairs`` over ``states``."""
    states = sorted(set(states))
    up = {s: {s} for s in states}
    for a, b in pairs:
        up.setdefault(a, {a}).add(b)
        up.setdefault(b, {b})
    changed = True
    while changed:
        changed = False
        for a in up:
            reach = set().union(*(up[b] for b in up[a]))
            if not reach <= up[a]:
                up[a] |= reach
                changed = True
    return frozenset((a, b) for a, bs in up.items() for b in bs)


def covering_pairs(order: Iterable[Pair]) -> list[Pair]:
    """Hasse diagram of a partial order given as a set of pairs."""
    strict = {(a, b) for a, b in order if a != b}
    above: dict[str, set[str]] = {}
    for a, b in strict:
        above.setdefault(a, set()).add(b)
    return sorted(
        (a, b) for a, b in strict
        if not any(c != b and (c, b) in strict for c in above.get(a, ()))
    )


@dataclass(frozen=True)
class IntuitionisticHybridModel:
    states: frozenset[str]
    order: frozenset[Pair]
    domain: Mapping[str, frozenset[str]]
    equiv: Mapping[str, frozenset[Pair]] = field(default_factory=dict)
    access: Mapping[str, frozenset[Pair]] = field(default_factory=dict)
    valuation: Mapping[str, Mapping[str, frozenset[str]]] = field(default_factory=dict)
    props: frozenset[str] = frozenset()

    @classmethod
    def from_covering(cls, states, covering, domain, equiv=None, access=None,
                      valuation=None, props=()):
        """Build a model whose order is the closure of the listed covering edges."""
        states = frozenset(states)
        return cls(
            states=states,
            order=close_order(states, covering),
            domain={w: frozenset(domain.get(w, ())) for w in states},
            equiv={w: frozenset((equiv or {}).get(w, ())) for w in states},
            access={w: frozenset((access or {}).get(w, ())) for w in states},
            valuation={w: {p: frozenset(ds) for p, ds in (valuation or {}).get(w, {}).items()}
                       for w in states},
            props=frozenset(props),
        )

    @cached_property
    def up(self) -> dict[str, tuple[str, ...]]:
        ups: dict[str, list[str]] = {w: [] for w in self.states}
        for a, b in sorted(self.order):
            ups.setdefault(a, []).append(b)
        return {w: tuple(vs) for w, vs in ups.items()}

    @cached_property
    def successors(self) -> dict[str, dict[str, tuple[str, ...]]]:
        out = {}
        for w in self.states:
            succ: dict[str, list[str]] = {}
            for d, e in sorted(self.access.get(w, ())):
                succ.setdefault(d, []).append(e)
            out[w] = {d: tuple(es) for d, es in succ.items()}
        return out

    @cached_property
    def atoms(self) -> frozenset[str]:
        names = set(self.props)
        for vw in self.valuation.values():
            names.update(vw)
        return frozenset(names)

    def leq(self, w: str, v: str) -> bool:
        return (w, v) in self.order

    def is_discrete(self) -> bool:
        return all(a == b for a, b in self.order)

    def equivalent(self, w: str, d: str, e: str) -> bool:
        return d == e or (d, e) in self.equiv.get(w, ())


@dataclass(frozen=True)
class WAssignment:
    """Assignment of points of ``D_base`` to nominals; valid at every state above ``base``."""

    base: str
    mapping: Mapping[str, str]

    def __getitem__(self, nominal: str) -> str:
        try:
            return self.mapping[nominal]
        except KeyError:
            raise UnknownSymbolError(f"unknown nominal {nominal!r}") from None


# -- validation --------------------------------------------------------------


def validate_heredity(model: IntuitionisticHybridModel) -> list[Violation]:
    """Partial-order laws plus the monotonicity of D, ~, R and V along <=."""
    out: list[Violation] = []
    W = model.states
    order = model.order
    if not W:
        out.append(Violation("empty-states", "W must be nonempty"))
    for a, b in sorted(order):
        if a not in W or b not in W:
            out.append(Violation("dangling-order", f"order pair ({a},{b}) leaves W", (a, b)))
    for w in sorted(W):
        if (w, w) not in order:
            out.append(Violation("order-not-reflexive", f"order not reflexive at {w}", (w,)))
    for (a, b), (c, d) in product(sorted(order), repeat=2):
        if b == c and (a, d) not in order:
            out.append(Violation(
                "order-not-transitive", f"order not transitive at ({a},{b},{d})", (a, b, d)))
    for a, b in sorted(order):
        if a < b and (b, a) in order:
            out.append(Violation(
                "order-not-antisymmetric", f"order not antisymmetric at ({a},{b})", (a, b)))

    for w in sorted(W):
        D = model.domain.get(w, frozenset())
        if not D:
            out.append(Violation("empty-domain", f"domain of {w} is empty", (w,)))
        eq = model.equiv.get(w, frozenset())
        for d, e in sorted(eq):
            if d not in D or e not in D:
                out.append(Violation("equiv-outside-domain", f"~ at {w} leaves D: ({d},{e})", (w, d, e)))
            elif not model.equivalent(w, e, d):
                out.append(Violation("equiv-not-symmetric", f"~ at {w} not symmetric at ({d},{e})", (w, d, e)))
        for (d, e), (e2, f) in product(sorted(eq), repeat=2):
            if e == e2 and not model.equivalent(w, d, f):
                out.append(Violation(
                    "equiv-not-transitive", f"~ at {w} not transitive at ({d},{e},{f})", (w, d, e, f)))
        for d, e in sorted(model.access.get(w, ())):
            if d not in D or e not in D:
                out.append(Violation("access-outside-domain", f"R at {w} leaves D: ({d},{e})", (w, d, e)))
        for p, ds in sorted(model.valuation.get(w, {}).items()):
            if not ds <= D:
                out.append(Violation(
                    "valuation-outside-domain", f"V at {w} puts {p} outside D", (w, p)))

    for w, v in sorted(order):
        if w == v or w not in W or v not in W:
            continue
        if not model.domain.get(w, frozenset()) <= model.domain.get(v, frozenset()):
            out.append(Violation("domain-not-monotone", f"domain not monotone at ({w},{v})", (w, v)))
        if not model.equiv.get(w, frozenset()) <= model.equiv.get(v, frozenset()):
            out.append(Violation("equiv-not-monotone", f"equivalence not monotone at ({w},{v})", (w, v)))
        if not model.access.get(w, frozenset()) <= model.access.get(v, frozenset()):
            out.append(Violation("access-not-monotone", f"accessibility not monotone at ({w},{v})", (w, v)))
        vw, vv = model.valuation.get(w, {}), model.valuation.get(v, {})
        for p in sorted(set(vw) | set(vv)):
            if not vw.get(p, frozenset()) <= vv.get(p, frozenset()):
                out.append(Violation(
                    "valuation-not-monotone", f"valuation not monotone at ({w},{v}) for {p}", (w, v, p)))
    return out


def validate_assignment(model: IntuitionisticHybridModel, g: WAssignment) -> list[Violation]:
    out = []
    if g.base not in model.states:
        out.append(Violation("dangling-base", f"assignment base {g.base} not in W", (g.base,)))
        return out
    D = model.domain.get(g.base, frozenset())
    for a, d in sorted(g.mapping.items()):
        if d not in D:
            out.append(Violation(
                "assignment-outside-domain", f"assignment target not in D_{g.base}: {a} -> {d}", (a, d)))
    return out


# -- satisfaction ------------------------------------------------------------


class _Evaluator:
    """Memoised ``M, g, w, d |= f`` for one model and assignment."""

    def __init__(self, model: IntuitionisticHybridModel, g: WAssignment):
        self.m = model
        self.g = g
        self.memo: dict = {}

    def __call__(self, w: str, d: str, f) -> bool:
        key = (w, d, f)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = self._eval(w, d, f)
        return hit

    def _eval(self, w: str, d: str, f) -> bool:
        m = self.m
        match f:
            case Prop(p):
                vw = m.valuation.get(w, {})
                if p not in vw and p not in m.atoms:
                    raise UnknownSymbolError(f"unknown proposition {p!r}")
                return d in vw.get(p, ())
            case Nom(a):
                return m.equivalent(w, d, self.g[a])
            case Top():
                return True
            case Bottom():
                return False
            case And(a, b):
                return self(w, d, a) and self(w, d, b)
            case Or(a, b):
                return self(w, d, a) or self(w, d, b)
            case Implies(a, b):
                return all(not self(v, d, a) or self(v, d, b) for v in m.up[w])
            case Not(a):
                return all(not self(v, d, a) for v in m.up[w])
            case Box(a):
                return all(self(v, e, a) for v in m.up[w]
                           for e in m.successors[v].get(d, ()))
            case Diamond(a):
                return any(self(w, e, a) for e in m.successors[w].get(d, ()))
            case At(n, a):
                return self(w, self.g[n], a)
        raise TypeError(f"not a hybrid formula: {f!r}")


def eval_intuitionistic(model: IntuitionisticHybridModel, g: WAssignment, w: str, d: str,
                        f: HybridFormula) -> bool:
    """``M, g, w, d |= f``; ``~a`` is evaluated exactly as ``a -> F``."""
    if w not in model.states:
        raise ValueError(f"state {w!r} not in W")
    if not model.leq(g.base, w):
        raise ValueError(f"assignment based at {g.base!r} is not usable at {w!r}")
    if d not in model.domain.get(w, ()):
        raise ValueError(f"point {d!r} not in D_{w}")
    return _Evaluator(model, g)(w, d, f)


def check_persistence(model: IntuitionisticHybridModel, g: WAssignment, f: HybridFormula,
                      samples: Iterable[tuple[str, str, str]] | None = None
                      ) -> list[tuple[str, str, str]]:
    """Triples ``(w, d, v)`` with ``w <= v`` where ``f`` holds at (w, d) but not at (v, d).

    Without ``samples`` every triple reachable from the assignment's base is checked.
    """
    ev = _Evaluator(model, g)
    if samples is None:
        samples = [
            (w, d, v)
            for w in sorted(model.states) if model.leq(g.base, w)
            for d in sorted(model.domain.get(w, ()))
            for v in model.up[w]
        ]
    bad = []
    for w, d, v in samples:
        if d not in model.domain.get(v, ()):
            # a non-monotone domain already breaks heredity at this triple
            if ev(w, d, f):
                bad.append((w, d, v))
            continue
        if ev(w, d, f) and not ev(v, d, f):
            bad.append((w, d, v))
    return bad


def induced_classical(model: IntuitionisticHybridModel, w: str) -> ClassicalHybridModel:
    """The classical structure (D_w, R_w, V_w) seen at a single state."""
    D = model.domain[w]
    vw = model.valuation.get(w, {})
    return ClassicalHybridModel(
        worlds=frozenset(D),
        access=frozenset(model.access.get(w, ())),
        valuation={(d, p): d in vw.get(p, ()) for d in D for p in model.atoms},
        props=model.atoms,
    )


def discrete_reduction_eval(model: IntuitionisticHybridModel, g: WAssignment, w: str, d: str,
                            f: HybridFormula) -> bool:
    """Classical evaluation on the structure induced at ``w``; needs an identity order."""
    if not model.is_discrete():
        raise ValueError("discrete reduction needs <= to be the identity relation")
    if any(a != b for a, b in model.equiv.get(w, ())):
        raise ValueError("discrete reduction needs ~ to be trivial")
    return eval_classical(induced_classical(model, w), g.mapping, d, negation_as_implication(f))
