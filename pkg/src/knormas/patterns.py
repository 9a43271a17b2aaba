"""Trace predicates used for norm contexts, demands and trace-level propositions.

Grammar::

    pattern := conj ("or" conj)*
    conj    := neg ("and" neg)*
    neg     := "not" neg | atom
    atom    := "occurs" "(" ACTION ["by" AGENT | "by" "all"] ")"
             | "after" "(" pattern "," pattern ")"
             | "true" | "false" | "(" pattern ")"

``occurs(a by all)`` holds when every norm subject of the system performs ``a``.
``after(p, q)`` holds when the trace splits into a prefix satisfying ``p``
followed by a suffix satisfying ``q``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .mas import MasSystem, Trace

ALL = "all"


@dataclass(frozen=True)
class Occurs:
    action: str
    agent: str | None = None


@dataclass(frozen=True)
class After:
    first: "Pattern"
    then: "Pattern"


@dataclass(frozen=True)
class PNot:
    body: "Pattern"


@dataclass(frozen=True)
class PAnd:
    left: "Pattern"
    right: "Pattern"


@dataclass(frozen=True)
class POr:
    left: "Pattern"
    right: "Pattern"


@dataclass(frozen=True)
class PConst:
    value: bool


Pattern = Union[Occurs, After, PNot, PAnd, POr, PConst]


def holds(p: Pattern, trace: Trace, mas: MasSystem) -> bool:
    match p:
        case Occurs(action, None):
            return any(e.action == action for e in trace)
        case Occurs(action, agent) if agent == ALL:
            done = {e.agent for e in trace if e.action == action}
            return mas.norm_subjects <= done
        case Occurs(action, agent):
            return any(e.action == action and e.agent == agent for e in trace)
        case After(first, then):
            return any(holds(first, trace[:k], mas) and holds(then, trace[k:], mas)
                       for k in range(len(trace) + 1))
        case PNot(body):
            return not holds(body, trace, mas)
        case PAnd(a, b):
            return holds(a, trace, mas) and holds(b, trace, mas)
        case POr(a, b):
            return holds(a, trace, mas) or holds(b, trace, mas)
        case PConst(value):
            return value
    raise TypeError(f"not a pattern: {p!r}")


def conjoin(*parts: Pattern | None) -> Pattern:
    present = [p for p in parts if p is not None]
    if not present:
        return PConst(True)
    out = present[0]
    for p in present[1:]:
        out = PAnd(out, p)
    return out


def symbols(p: Pattern) -> tuple[set[str], set[str]]:
    """Actions and named agents mentioned by ``p``."""
    actions: set[str] = set()
    agents: set[str] = set()

    def go(q):
        match q:
            case Occurs(action, agent):
                actions.add(action)
                if agent is not None and agent != ALL:
                    agents.add(agent)
            case After(a, b) | PAnd(a, b) | POr(a, b):
                go(a)
                go(b)
            case PNot(a):
                go(a)

    go(p)
    return actions, agents


def render_pattern(p: Pattern, top: bool = True) -> str:
    match p:
        case Occurs(action, None):
            return f"occurs({action})"
        case Occurs(action, agent):
            return f"occurs({action} by {agent})"
        case After(a, b):
            return f"after({render_pattern(a)}, {render_pattern(b)})"
        case PNot(a):
            return "not " + render_pattern(a, False)
        case PConst(value):
            return "true" if value else "false"
        case PAnd(a, b):
            text = f"{render_pattern(a, False)} and {render_pattern(b, False)}"
        case POr(a, b):
            text = f"{render_pattern(a, False)} or {render_pattern(b, False)}"
        case _:
            raise TypeError(f"not a pattern: {p!r}")
    return text if top else f"({text})"


class PatternSyntaxError(ValueError):
    pass


_TOK = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([(),]))")
_KEYWORDS = {"occurs", "after", "not", "and", "or", "by", "true", "false"}


def parse_pattern(text: str) -> Pattern:
    toks: list[str] = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _TOK.match(stripped, pos)
        if not m or m.end() == pos:
            raise PatternSyntaxError(f"bad pattern {text!r} at column {pos + 1}")
        toks.append(m.group(1) or m.group(2))
        pos = m.end()
    toks.append("")
    i = 0

    def peek():
        return toks[i]

    def take(tok=None):
        nonlocal i
        cur = toks[i]
        if tok is not None and cur != tok:
            raise PatternSyntaxError(f"expected {tok!r} in pattern {text!r}, found {cur or 'end'!r}")
        if cur == "":
            raise PatternSyntaxError(f"unexpected end of pattern {text!r}")
        i += 1
        return cur

    def name():
        tok = take()
        if not re.match(r"[A-Za-z_]", tok) or tok in _KEYWORDS - {ALL}:
            raise PatternSyntaxError(f"expected a name in pattern {text!r}, found {tok!r}")
        return tok

    def disj():
        p = conj()
        while peek() == "or":
            take()
            p = POr(p, conj())
        return p

    def conj():
        p = neg()
        while peek() == "and":
            take()
            p = PAnd(p, neg())
        return p

    def neg():
        if peek() == "not":
            take()
            return PNot(neg())
        return atom()

    def atom():
        tok = peek()
        if tok == "(":
            take()
            p = disj()
            take(")")
            return p
        if tok in ("true", "false"):
            take()
            return PConst(tok == "true")
        if tok == "occurs":
            take()
            take("(")
            action = name()
            agent = None
            if peek() == "by":
                take()
                agent = name()
            take(")")
            return Occurs(action, agent)
        if tok == "after":
            take()
            take("(")
            first = disj()
            take(",")
            then = disj()
            take(")")
            return After(first, then)
        raise PatternSyntaxError(f"unexpected {tok or 'end'!r} in pattern {text!r}")

    p = disj()
    if peek() != "":
        raise PatternSyntaxError(f"trailing {peek()!r} in pattern {text!r}")
    return p
