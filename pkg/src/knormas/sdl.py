"""Hilbert-style proof checking for Standard Deontic Logic.

Axioms and rules: TAUT (propositional tautologies, with ``O``-rooted
subformulas read as opaque variables), K, D, modus ponens and obligation
necessitation.  Necessitation only applies to lines that depend on no premise.

Script format, one item per line::

    premise O(p)
    goal O(q) & O(~q)
    clash 9 12
    1. O(p) ; Premise
    2. O(p -> q) -> (O(p) -> O(q)) ; AxK(p, q)
    3. O(p) -> O(q) ; MP(1, 2)

``MP(i, j)`` needs line ``j`` to read ``line i -> this line``.  The optional
``clash`` names lines whose conjunction must be propositionally inconsistent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from importlib import resources
from itertools import product

from .formula import Atom, Conj, DeonticFormula, Impl, Neg, Ob, parse_formula, render_formula

RULES = ("Premise", "Taut", "AxK", "AxD", "MP", "ObNec")


class ProofSyntaxError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Justification:
    rule: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.rule
        shown = [render_formula(a) if not isinstance(a, int) else str(a) for a in self.args]
        return f"{self.rule}({', '.join(shown)})"


@dataclass(frozen=True)
class ProofLine:
    index: int
    formula: DeonticFormula
    justification: Justification


@dataclass(frozen=True)
class ProofScript:
    premises: tuple[DeonticFormula, ...]
    lines: tuple[ProofLine, ...]
    goal: DeonticFormula
    clash: tuple[int, ...] = ()


@dataclass(frozen=True)
class ProofResult:
    accepted: bool
    line: int | None = None
    reason: str = ""
    dependencies: dict = field(default_factory=dict, compare=False)

    def __str__(self) -> str:
        if self.accepted:
            return "accepted"
        where = f" at line {self.line}" if self.line is not None else ""
        return f"rejected{where}: {self.reason}"


# -- tautologies -------------------------------------------------------------


def _variables(f: DeonticFormula, out: list) -> None:
    match f:
        case Atom() | Ob():
            if f not in out:
                out.append(f)
        case Neg(a):
            _variables(a, out)
        case Conj(a, b) | Impl(a, b):
            _variables(a, out)
            _variables(b, out)
        case _:
            raise TypeError(f"not a deontic formula: {f!r}")


def _truth(f: DeonticFormula, row: dict) -> bool:
    match f:
        case Atom() | Ob():
            return row[f]
        case Neg(a):
            return not _truth(a, row)
        case Conj(a, b):
            return _truth(a, row) and _truth(b, row)
        case Impl(a, b):
            return not _truth(a, row) or _truth(b, row)
    raise TypeError(f"not a deontic formula: {f!r}")


def is_tautology(f: DeonticFormula) -> bool:
    """Truth-table validity, reading atoms and maximal ``O(...)`` subformulas as variables."""
    names: list = []
    _variables(f, names)
    return all(_truth(f, dict(zip(names, values)))
               for values in product((False, True), repeat=len(names)))


def is_consistent(formulas) -> bool:
    formulas = list(formulas)
    if not formulas:
        return True
    conj = formulas[0]
    for g in formulas[1:]:
        conj = Conj(conj, g)
    return not is_tautology(Neg(conj))


# -- schemas -----------------------------------------------------------------


def axiom_k(phi: DeonticFormula, psi: DeonticFormula) -> DeonticFormula:
    return Impl(Ob(Impl(phi, psi)), Impl(Ob(phi), Ob(psi)))


def axiom_d(phi: DeonticFormula) -> DeonticFormula:
    return Impl(Ob(phi), Neg(Ob(Neg(phi))))


def check_proof(script: ProofScript) -> ProofResult:
    deps: dict[int, frozenset[int]] = {}
    formulas: dict[int, DeonticFormula] = {}
    premises = set(script.premises)
    if not script.lines:
        return ProofResult(False, None, "empty proof")
    for pos, line in enumerate(script.lines, start=1):
        k, f, j = line.index, line.formula, line.justification
        if k != pos:
            return ProofResult(False, k, f"line numbered {k}, expected {pos}")

        def ref(i):
            if not isinstance(i, int) or not 1 <= i < k:
                raise _Reject(f"{j.rule} refers to line {i}, which is not an earlier line")
            return formulas[i]

        try:
            if j.rule == "Premise":
                if j.args:
                    raise _Reject("Premise takes no arguments")
                if f not in premises:
                    raise _Reject(f"{render_formula(f)} is not a declared premise")
                deps[k] = frozenset({k})
            elif j.rule == "Taut":
                if j.args:
                    raise _Reject("Taut takes no arguments")
                if not is_tautology(f):
                    raise _Reject(f"{render_formula(f)} is not a tautology")
                deps[k] = frozenset()
            elif j.rule == "AxK":
                if len(j.args) != 2:
                    raise _Reject("AxK takes two formulas")
                if f != axiom_k(*j.args):
                    raise _Reject("formula is not the K instance named by the justification")
                deps[k] = frozenset()
            elif j.rule == "AxD":
                if len(j.args) != 1:
                    raise _Reject("AxD takes one formula")
                if f != axiom_d(*j.args):
                    raise _Reject("formula is not the D instance named by the justification")
                deps[k] = frozenset()
            elif j.rule == "MP":
                if len(j.args) != 2:
                    raise _Reject("MP takes two line numbers")
                i, m = j.args
                antecedent, implication = ref(i), ref(m)
                if implication != Impl(antecedent, f):
                    raise _Reject(f"line {m} is not 'line {i} -> this line'")
                deps[k] = deps[i] | deps[m]
            elif j.rule == "ObNec":
                if len(j.args) != 1:
                    raise _Reject("ObNec takes one line number")
                (i,) = j.args
                if f != Ob(ref(i)):
                    raise _Reject(f"formula is not O(line {i})")
                if deps[i]:
                    raise _Reject(
                        f"ObNec needs a theorem, but line {i} depends on premise lines "
                        f"{sorted(deps[i])}")
                deps[k] = frozenset()
            else:
                raise _Reject(f"unknown rule {j.rule!r}")
        except _Reject as r:
            return ProofResult(False, k, str(r), deps)
        formulas[k] = f

    last = script.lines[-1]
    if last.formula != script.goal:
        return ProofResult(False, last.index, "last line is not the goal", deps)
    if script.clash:
        missing = [i for i in script.clash if i not in formulas]
        if missing:
            return ProofResult(False, None, f"clash names unknown lines {missing}", deps)
        if is_consistent(formulas[i] for i in script.clash):
            return ProofResult(False, None, f"lines {list(script.clash)} are consistent", deps)
    return ProofResult(True, None, "", deps)


class _Reject(Exception):
    pass


# -- script text -------------------------------------------------------------

_LINE = re.compile(r"^\s*(\d+)\.\s*(.*?)\s*;\s*([A-Za-z]+)\s*(?:\((.*)\))?\s*$")


def parse_proof(text: str) -> ProofScript:
    premises, lines = [], []
    goal = None
    clash: tuple[int, ...] = ()
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        try:
            if body.startswith("premise "):
                premises.append(parse_formula(body[len("premise "):], "deontic"))
            elif body.startswith("goal "):
                goal = parse_formula(body[len("goal "):], "deontic")
            elif body.startswith("clash "):
                clash = tuple(int(x) for x in body[len("clash "):].split())
            else:
                m = _LINE.match(body)
                if not m:
                    raise ProofSyntaxError("expected 'k. FORMULA ; RULE(args)'", no)
                index, ftext, rule, args = m.groups()
                if rule not in RULES:
                    raise ProofSyntaxError(f"unknown rule {rule!r}", no)
                lines.append(ProofLine(int(index), parse_formula(ftext, "deontic"),
                                       Justification(rule, _parse_args(rule, args))))
        except ValueError as e:
            if isinstance(e, ProofSyntaxError):
                raise
            raise ProofSyntaxError(str(e), no) from e
    if goal is None:
        raise ProofSyntaxError("missing 'goal' declaration", 0)
    return ProofScript(tuple(premises), tuple(lines), goal, clash)


def _parse_args(rule: str, args: str | None) -> tuple:
    if args is None or not args.strip():
        return ()
    if rule in ("MP", "ObNec"):
        return tuple(int(a) for a in args.split(","))
    return tuple(parse_formula(a, "deontic") for a in _split_top(args))


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    parts.append(cur)
    return parts


def render_proof(script: ProofScript) -> str:
    out = [f"premise {render_formula(p)}" for p in script.premises]
    out.append(f"goal {render_formula(script.goal)}")
    if script.clash:
        out.append("clash " + " ".join(map(str, script.clash)))
    for line in script.lines:
        out.append(f"{line.index}. {render_formula(line.formula)} ; {line.justification}")
    return "\n".join(out) + "\n"


# -- the Chisholm set --------------------------------------------------------


def chisholm_script() -> ProofScript:
    text = resources.files("knormas").joinpath("models/chisholm.prf").read_text()
    return parse_proof(text)


@dataclass(frozen=True)
class ChisholmReport:
    script: ProofScript
    result: ProofResult
    dropped: int | None = None


def chisholm_demo(drop_premise: int | None = None,
                  replace_premise: tuple[int, DeonticFormula] | None = None) -> ChisholmReport:
    """Check the bundled derivation of O(q) & O(~q) from the four Chisholm sentences.

    ``drop_premise`` removes one of the sentences (1-4) from the premise list;
    ``replace_premise`` swaps one for another formula.  The script itself is
    left untouched, so such variants show where the derivation breaks.
    """
    script = chisholm_script()
    premises = list(script.premises)
    if replace_premise is not None:
        k, f = replace_premise
        premises[k - 1] = f
    if drop_premise is not None:
        if not 1 <= drop_premise <= len(premises):
            raise ValueError(f"no premise ({drop_premise})")
        del premises[drop_premise - 1]
    script = replace(script, premises=tuple(premises))
    return ChisholmReport(script, check_proof(script), drop_premise)
