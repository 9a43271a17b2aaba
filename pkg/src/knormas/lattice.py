"""Norm-world terms: joins of meets of norm nominals, kept in absorbed normal form.

A term is an antichain of clauses; each clause is the meet of its nominals and
the term is the join of its clauses.  A lower term upholds more norms:
``n1 & n2 <= n1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union

from .formula import pretty_name


@dataclass(frozen=True)
class LatticeTerm:
    clauses: frozenset[frozenset[str]]

    def __post_init__(self):
        if not self.clauses:
            raise ValueError("a lattice term needs at least one clause")
        if any(not c for c in self.clauses):
            raise ValueError("lattice clauses must be nonempty")
        for c in self.clauses:
            for d in self.clauses:
                if c != d and d < c:
                    raise ValueError(f"clause {sorted(c)} is absorbed by {sorted(d)}")

    @classmethod
    def of(cls, clauses: Iterable[Iterable[str]]) -> "LatticeTerm":
        """Normal form of a join of meets: absorbed, deduplicated."""
        return cls(_absorb(frozenset(c) for c in clauses))

    @classmethod
    def nominal(cls, name: str) -> "LatticeTerm":
        return cls(frozenset({frozenset({name})}))

    @property
    def sorted_clauses(self) -> list[list[str]]:
        return sorted((sorted(c) for c in self.clauses), key=lambda c: (len(c), c))

    @property
    def nominals(self) -> frozenset[str]:
        return frozenset().union(*self.clauses)

    def __str__(self) -> str:
        return " | ".join(" & ".join(c) for c in self.sorted_clauses)

    def pretty(self) -> str:
        """Unicode text with the nominals shared by every clause factored out."""
        common = frozenset.intersection(*self.clauses)
        rest = [sorted(c - common) for c in self.clauses]
        rest = sorted((r for r in rest if r), key=lambda c: (len(c), c))
        meet = " ⊓ "
        parts = [pretty_name(n) for n in sorted(common)]
        if len(rest) > 1:
            joined = " ⊔ ".join(
                meet.join(map(pretty_name, r)) if len(r) == 1 else
                "(" + meet.join(map(pretty_name, r)) + ")" for r in rest)
            parts.insert(0, f"({joined})" if common else joined)
        elif rest:
            parts = [pretty_name(n) for n in sorted(common | set(rest[0]))]
        return meet.join(parts)


def _absorb(clauses: Iterable[frozenset[str]]) -> frozenset[frozenset[str]]:
    unique = set(clauses)
    return frozenset(c for c in unique if not any(d < c for d in unique))


def term_meet(a: LatticeTerm, b: LatticeTerm) -> LatticeTerm:
    return LatticeTerm(_absorb(c | d for c in a.clauses for d in b.clauses))


def term_join(a: LatticeTerm, b: LatticeTerm) -> LatticeTerm:
    return LatticeTerm(_absorb(a.clauses | b.clauses))


def term_leq(a: LatticeTerm, b: LatticeTerm) -> bool:
    """``a <= b`` iff every clause of ``a`` contains some clause of ``b``."""
    return all(any(d <= c for d in b.clauses) for c in a.clauses)


# -- raw term trees ----------------------------------------------------------


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Meet:
    left: "RawTerm"
    right: "RawTerm"


@dataclass(frozen=True)
class Join:
    left: "RawTerm"
    right: "RawTerm"


RawTerm = Union[Gen, Meet, Join]


class UndeclaredNominalError(LookupError):
    pass


def canonicalize_term(raw: RawTerm, declared: Iterable[str] | None = None) -> LatticeTerm:
    """Distribute meets over joins and absorb."""
    allowed = None if declared is None else frozenset(declared)

    def go(t) -> LatticeTerm:
        match t:
            case Gen(name):
                if allowed is not None and name not in allowed:
                    raise UndeclaredNominalError(f"undeclared nominal {name!r}")
                return LatticeTerm.nominal(name)
            case Meet(a, b):
                return term_meet(go(a), go(b))
            case Join(a, b):
                return term_join(go(a), go(b))
        raise TypeError(f"not a lattice term: {t!r}")

    return go(raw)


_TERM_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([&|()]))")


def parse_term(text: str) -> RawTerm:
    """Parse ``n1 & (n2 | n3)``: ``&`` is meet, ``|`` is join, ``&`` binds tighter."""
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TERM_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad lattice term {text!r} at column {pos + 1}")
        toks.append(m.group(1) or m.group(2))
        pos = m.end()
    toks.append(None)
    i = 0

    def peek():
        return toks[i]

    def join():
        nonlocal i
        t = meet()
        while peek() == "|":
            i += 1
            t = Join(t, meet())
        return t

    def meet():
        nonlocal i
        t = atom()
        while peek() == "&":
            i += 1
            t = Meet(t, atom())
        return t

    def atom():
        nonlocal i
        tok = peek()
        if tok == "(":
            i += 1
            t = join()
            if peek() != ")":
                raise ValueError(f"unbalanced parentheses in {text!r}")
            i += 1
            return t
        if tok is None or tok in "&|)":
            raise ValueError(f"bad lattice term {text!r}: unexpected {tok or 'end'!r}")
        i += 1
        return Gen(tok)

    t = join()
    if peek() is not None:
        raise ValueError(f"bad lattice term {text!r}: trailing {peek()!r}")
    return t


def term(text: str, declared: Iterable[str] | None = None) -> LatticeTerm:
    return canonicalize_term(parse_term(text), declared)
