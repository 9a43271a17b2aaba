"""Formula syntax shared by the hybrid evaluators and the SDL proof checker.

Two dialects are parsed from the same ASCII grammar:

* ``hybrid``: ``T``, ``F``, identifiers, ``~``, ``&``, ``|``, ``->``, ``[]``,
  ``<>`` and ``@nom``.  Identifiers listed in ``nominals`` parse as
  :class:`Nom`, all others as :class:`Prop`.
* ``deontic``: identifiers, ``~``, ``&``, ``->``, ``O(...)`` and ``P(...)``.
  ``P(x)`` is read as ``~O(~x)``.

Precedence, loosest first: ``->`` (right associative), ``|``, ``&``, then the
unary operators.  ``#`` starts a comment running to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.reason = message
        self.line = line
        self.column = column


# -- hybrid formulas ---------------------------------------------------------


@dataclass(frozen=True)
class Prop:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("proposition name must be nonempty")


@dataclass(frozen=True)
class Nom:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("nominal name must be nonempty")


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class And:
    left: "HybridFormula"
    right: "HybridFormula"


@dataclass(frozen=True)
class Or:
    left: "HybridFormula"
    right: "HybridFormula"


@dataclass(frozen=True)
class Implies:
    left: "HybridFormula"
    right: "HybridFormula"


@dataclass(frozen=True)
class Not:
    body: "HybridFormula"


@dataclass(frozen=True)
class Box:
    body: "HybridFormula"


@dataclass(frozen=True)
class Diamond:
    body: "HybridFormula"


@dataclass(frozen=True)
class At:
    nominal: str
    body: "HybridFormula"


HybridFormula = Union[Prop, Nom, Top, Bottom, And, Or, Implies, Not, Box, Diamond, At]


# -- deontic formulas --------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Neg:
    body: "DeonticFormula"


@dataclass(frozen=True)
class Conj:
    left: "DeonticFormula"
    right: "DeonticFormula"


@dataclass(frozen=True)
class Impl:
    left: "DeonticFormula"
    right: "DeonticFormula"


@dataclass(frozen=True)
class Ob:
    body: "DeonticFormula"


DeonticFormula = Union[Atom, Neg, Conj, Impl, Ob]


def Perm(body: DeonticFormula) -> DeonticFormula:
    """Permission as the dual of obligation."""
    return Neg(Ob(Neg(body)))


# -- tokenizer ---------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>\#[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>->|\[\]|<>|[~&|()@])"
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("ident", "op"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str, dialect: str, nominals: frozenset[str]):
        self.toks = _tokenize(text)
        self.i = 0
        self.dialect = dialect
        self.nominals = nominals

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise FormulaSyntaxError(message, tok.line, tok.col)

    def take(self, text: str) -> _Tok:
        if self.tok.text != text or self.tok.kind == "eof":
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def parse(self):
        if self.tok.kind == "eof":
            self.error("empty formula")
        f = self.implication()
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")
        return f

    def implication(self):
        left = self.disjunction()
        if self.tok.text == "->":
            self.i += 1
            right = self.implication()
            return Impl(left, right) if self.dialect == "deontic" else Implies(left, right)
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.tok.text == "|":
            if self.dialect == "deontic":
                self.error("'|' is not part of the deontic dialect")
            self.i += 1
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.tok.text == "&":
            self.i += 1
            right = self.unary()
            left = Conj(left, right) if self.dialect == "deontic" else And(left, right)
        return left

    def unary(self):
        tok = self.tok
        deontic = self.dialect == "deontic"
        if tok.text == "~":
            self.i += 1
            body = self.unary()
            return Neg(body) if deontic else Not(body)
        if tok.text in ("[]", "<>", "@"):
            if deontic:
                self.error(f"{tok.text!r} is not part of the deontic dialect")
            self.i += 1
            if tok.text == "[]":
                return Box(self.unary())
            if tok.text == "<>":
                return Diamond(self.unary())
            if self.tok.kind != "ident" or self.tok.text in ("T", "F"):
                self.error("expected a nominal after '@'")
            name = self.tok.text
            self.i += 1
            return At(name, self.unary())
        if deontic and tok.kind == "ident" and tok.text in ("O", "P"):
            self.i += 1
            self.take("(")
            body = self.implication()
            self.take(")")
            return Ob(body) if tok.text == "O" else Perm(body)
        return self.atom()

    def atom(self):
        tok = self.tok
        if tok.text == "(":
            self.i += 1
            f = self.implication()
            self.take(")")
            return f
        if tok.kind != "ident":
            self.error(f"unexpected {tok.text or 'end of input'!r}")
        self.i += 1
        if tok.text in ("T", "F"):
            if self.dialect == "deontic":
                self.error(f"constant {tok.text!r} is not part of the deontic dialect", tok)
            return Top() if tok.text == "T" else Bottom()
        if self.dialect == "deontic":
            return Atom(tok.text)
        return Nom(tok.text) if tok.text in self.nominals else Prop(tok.text)


DIALECTS = ("hybrid", "deontic")


def parse_formula(text: str, dialect: str = "hybrid", nominals=frozenset()):
    """Parse ``text`` into a hybrid or deontic formula.

    Raises :class:`FormulaSyntaxError` carrying line and column on malformed
    input and :class:`ValueError` on an unknown dialect.
    """
    if dialect not in DIALECTS:
        raise ValueError(f"unknown dialect {dialect!r}; expected one of {DIALECTS}")
    return _Parser(text, dialect, frozenset(nominals)).parse()


# -- printing ----------------------------------------------------------------


def render_formula(f) -> str:
    """Fully parenthesized canonical text; ``parse_formula`` inverts it."""
    match f:
        case Prop(name) | Nom(name) | Atom(name):
            return name
        case Top():
            return "T"
        case Bottom():
            return "F"
        case And(a, b) | Conj(a, b):
            return f"({render_formula(a)} & {render_formula(b)})"
        case Or(a, b):
            return f"({render_formula(a)} | {render_formula(b)})"
        case Implies(a, b) | Impl(a, b):
            return f"({render_formula(a)} -> {render_formula(b)})"
        case Not(a) | Neg(a):
            return "~" + render_formula(a)
        case Box(a):
            return "[]" + render_formula(a)
        case Diamond(a):
            return "<>" + render_formula(a)
        case At(n, a):
            return f"@{n} ({render_formula(a)})"
        case Ob(a):
            return f"O({render_formula(a)})"
    raise TypeError(f"not a formula: {f!r}")


_PRETTY_BINARY = {And: "∧", Conj: "∧", Or: "∨", Implies: "⇒", Impl: "⇒"}


def pretty_formula(f, top: bool = True) -> str:
    """Unicode rendering for reports and graph captions."""
    match f:
        case Prop(name) | Nom(name) | Atom(name):
            return pretty_name(name)
        case Top():
            return "⊤"
        case Bottom():
            return "⊥"
        case Not(a) | Neg(a):
            return "¬" + pretty_formula(a, False)
        case Box(a):
            return "□" + pretty_formula(a, False)
        case Diamond(a):
            return "◇" + pretty_formula(a, False)
        case At(n, a):
            return f"{pretty_name(n)}:{pretty_formula(a, False)}"
        case Ob(a):
            return f"O({pretty_formula(a)})"
    op = _PRETTY_BINARY.get(type(f))
    if op is None:
        raise TypeError(f"not a formula: {f!r}")
    text = f"{pretty_formula(f.left, False)} {op} {pretty_formula(f.right, False)}"
    return text if top else f"({text})"


_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")
_NAME = re.compile(r"^([A-Za-z_]*?)(\d*)(bar)?$")


def pretty_name(name: str) -> str:
    """``n3`` -> ``n₃``; a ``bar`` suffix becomes an overline (``n4bar`` -> ``n̄₄``)."""
    m = _NAME.match(name)
    if not m or not m.group(1):
        return name
    letters, digits, bar = m.groups()
    if bar and not digits:
        return name
    if bar:
        letters = letters + "̄"
    return letters + digits.translate(_SUBSCRIPTS)


# -- traversal ---------------------------------------------------------------


def subformulas(f) -> Iterator:
    yield f
    for child in _children(f):
        yield from subformulas(child)


def _children(f):
    match f:
        case And(a, b) | Or(a, b) | Implies(a, b) | Conj(a, b) | Impl(a, b):
            return (a, b)
        case Not(a) | Box(a) | Diamond(a) | At(_, a) | Neg(a) | Ob(a):
            return (a,)
    return ()


def free_nominals(f: HybridFormula) -> set[str]:
    """Every nominal occurring in ``f``, as an atom or as an ``@`` binder."""
    names = set()
    for g in subformulas(f):
        if isinstance(g, Nom):
            names.add(g.name)
        elif isinstance(g, At):
            names.add(g.nominal)
    return names


def propositions(f: HybridFormula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Prop)}


def depth(f) -> int:
    children = _children(f)
    return 1 + max(map(depth, children)) if children else 0


def negation_as_implication(f: HybridFormula) -> HybridFormula:
    """Rewrite every ``~a`` as ``a -> F``, the intuitionistic reading of negation."""
    match f:
        case Not(a):
            return Implies(negation_as_implication(a), Bottom())
        case And(a, b):
            return And(negation_as_implication(a), negation_as_implication(b))
        case Or(a, b):
            return Or(negation_as_implication(a), negation_as_implication(b))
        case Implies(a, b):
            return Implies(negation_as_implication(a), negation_as_implication(b))
        case Box(a):
            return Box(negation_as_implication(a))
        case Diamond(a):
            return Diamond(negation_as_implication(a))
        case At(n, a):
            return At(n, negation_as_implication(a))
    return f
