"""Multi-agent systems as action-labelled transition systems, and their bounded traces."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .violations import Violation


@dataclass(frozen=True, order=True)
class Event:
    agent: str
    action: str
    source: str
    target: str

    def __str__(self) -> str:
        return f"({self.agent},{self.action})"


Transition = Event
Trace = tuple[Event, ...]


@dataclass(frozen=True)
class MasSystem:
    """States, actions and agents with one transition relation per agent.

    ``subjects`` are the agents a norm addresses when it says "all agents";
    it defaults to every agent.
    """

    states: frozenset[str]
    initial: str
    actions: frozenset[str]
    agents: frozenset[str]
    transitions: frozenset[Transition]
    subjects: frozenset[str] | None = field(default=None)

    @property
    def norm_subjects(self) -> frozenset[str]:
        return self.agents if self.subjects is None else self.subjects

    @cached_property
    def outgoing(self) -> dict[str, tuple[Transition, ...]]:
        out: dict[str, list[Transition]] = {}
        for t in sorted(self.transitions):
            out.setdefault(t.source, []).append(t)
        return {s: tuple(ts) for s, ts in out.items()}

    def relation(self, agent: str) -> frozenset[Transition]:
        """``R_i``: the transitions performed by one agent."""
        return frozenset(t for t in self.transitions if t.agent == agent)


def validate_mas(mas: MasSystem) -> list[Violation]:
    out = []
    if mas.initial not in mas.states:
        out.append(Violation("initial-not-state", f"initial state {mas.initial} not in D"))
    for t in sorted(mas.transitions):
        for end in (t.source, t.target):
            if end not in mas.states:
                out.append(Violation("transition-state", f"transition {t} uses unknown state {end}", (t,)))
        if t.action not in mas.actions:
            out.append(Violation("transition-action", f"transition {t} uses unknown action {t.action}", (t,)))
        if t.agent not in mas.agents:
            out.append(Violation("transition-agent", f"transition {t} uses unknown agent {t.agent}", (t,)))
    for s in sorted(mas.norm_subjects - mas.agents):
        out.append(Violation("subject-not-agent", f"norm subject {s} is not an agent", (s,)))
    return out


def enumerate_traces(mas: MasSystem, bound: int) -> list[Trace]:
    """Every trace from the initial state with at most ``bound`` events.

    Shorter traces come first; traces of equal length follow the sorted order of
    their transitions.
    """
    if bound < 0:
        raise ValueError("trace bound must be >= 0")
    traces: list[Trace] = [()]
    frontier: list[tuple[Trace, str]] = [((), mas.initial)]
    for _ in range(bound):
        nxt = []
        for trace, state in frontier:
            for t in mas.outgoing.get(state, ()):
                nxt.append((trace + (t,), t.target))
        traces.extend(tr for tr, _ in nxt)
        frontier = nxt
    return traces


def is_trace(mas: MasSystem, trace: Trace) -> bool:
    state = mas.initial
    for e in trace:
        if e not in mas.transitions or e.source != state:
            return False
        state = e.target
    return True


def visited_states(mas: MasSystem, trace: Trace) -> set[str]:
    return {mas.initial} | {e.target for e in trace}


def render_trace(trace: Trace) -> str:
    return "".join(str(e) for e in trace) or "ε"
