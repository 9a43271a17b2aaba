"""Line-oriented model files (``.knm``).

A file starts with header lines and continues with ``[section]`` blocks of
``key: value`` or free-form lines; ``#`` starts a comment.  The ``model``
header picks one of three kinds:

``kelsenian``
    ``[mas]``, ``[norms]``, ``[worlds]`` and optionally ``[props]`` and ``[order]``.
``classical``
    ``[worlds]``, ``[access]``, ``[valuation]``, ``[nominals]``.
``intuitionistic``
    ``[states]``, ``[order]``, ``[domain]``, ``[access]``, ``[equiv]``,
    ``[valuation]``, ``[nominals]`` and a ``base`` header naming the state the
    nominal assignment belongs to.

See the bundled models for complete examples.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .classical import ClassicalHybridModel
from .formula import parse_formula
from .intuitionistic import IntuitionisticHybridModel, WAssignment
from .lattice import LatticeTerm, UndeclaredNominalError, term
from .mas import Event, MasSystem
from .norms import DEFAULT_BOUND, KINDS, KelsenianModel, NormSpec, WorldSpec, build_kelsenian_model
from .patterns import parse_pattern

MODEL_KINDS = ("kelsenian", "classical", "intuitionistic")
REQUIRED = {
    "kelsenian": ("mas", "norms", "worlds"),
    "classical": ("worlds", "valuation"),
    "intuitionistic": ("states", "domain"),
}
ALLOWED = {
    "kelsenian": {"mas", "norms", "worlds", "props", "order"},
    "classical": {"worlds", "access", "valuation", "nominals"},
    "intuitionistic": {"states", "order", "domain", "access", "equiv", "valuation", "nominals"},
}


class ModelFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = ""):
        where = f"{source or '<model>'}:{line}: " if line else (f"{source}: " if source else "")
        super().__init__(where + message)
        self.line = line
        self.source = source


@dataclass
class _Section:
    name: str
    line: int
    entries: list[tuple[int, str]] = field(default_factory=list)


@dataclass(frozen=True)
class ClassicalFile:
    model: ClassicalHybridModel
    assignment: dict[str, str]


@dataclass(frozen=True)
class IntuitionisticFile:
    model: IntuitionisticHybridModel
    assignment: WAssignment


@dataclass(frozen=True)
class LoadedModel:
    kind: str
    source: str
    bound: int
    kelsenian: KelsenianModel | None = None
    classical: ClassicalFile | None = None
    intuitionistic: IntuitionisticFile | None = None

    @property
    def nominals(self) -> frozenset[str]:
        if self.kelsenian is not None:
            return frozenset(self.kelsenian.norms)
        if self.classical is not None:
            return frozenset(self.classical.assignment)
        return frozenset(self.intuitionistic.assignment.mapping)


def bundled_models() -> list[str]:
    root = resources.files("knormas").joinpath("models")
    return sorted(p.name for p in root.iterdir() if p.name.endswith((".knm", ".prf")))


def resolve(path: str) -> tuple[str, str]:
    """Read a model from disk, falling back to the bundled models by name."""
    p = Path(path)
    if p.is_file():
        return p.read_text(encoding="utf-8"), str(p)
    name = p.name
    root = resources.files("knormas").joinpath("models")
    for candidate in (name, name + ".knm"):
        res = root.joinpath(candidate)
        if res.is_file():
            return res.read_text(encoding="utf-8"), candidate
    raise FileNotFoundError(f"no such model file: {path}")


def load_model(path: str, bound: int | None = None) -> LoadedModel:
    text, source = resolve(path)
    return parse_model(text, source, bound)


def _split(text: str, source: str) -> tuple[dict[str, tuple[int, str]], dict[str, _Section]]:
    headers: dict[str, tuple[int, str]] = {}
    sections: dict[str, _Section] = {}
    current: _Section | None = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[([a-z]+)\]", line)
        if m:
            name = m.group(1)
            if name in sections:
                raise ModelFileError(f"duplicate section [{name}]", no, source)
            current = sections[name] = _Section(name, no)
            continue
        if current is None:
            key, sep, value = line.partition(":")
            if not sep:
                raise ModelFileError(f"expected 'key: value' header, got {line!r}", no, source)
            headers[key.strip()] = (no, value.strip())
        else:
            current.entries.append((no, line))
    return headers, sections


def parse_model(text: str, source: str = "<model>", bound: int | None = None) -> LoadedModel:
    headers, sections = _split(text, source)
    if "model" not in headers:
        raise ModelFileError("missing 'model:' header", None, source)
    no, kind = headers["model"]
    if kind not in MODEL_KINDS:
        raise ModelFileError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}", no, source)
    for name, sec in sections.items():
        if name not in ALLOWED[kind]:
            raise ModelFileError(f"section [{name}] does not belong in a {kind} model", sec.line, source)
    for name in REQUIRED[kind]:
        if name not in sections:
            raise ModelFileError(f"missing section [{name}]", None, source)
    if bound is None:
        if "bound" in headers:
            no, value = headers["bound"]
            try:
                bound = int(value)
            except ValueError:
                raise ModelFileError(f"bound must be an integer, got {value!r}", no, source) from None
        else:
            bound = DEFAULT_BOUND
    if bound < 1:
        raise ModelFileError(f"trace bound must be >= 1, got {bound}", None, source)

    if kind == "kelsenian":
        return LoadedModel(kind, source, bound, kelsenian=_kelsenian(sections, source, bound))
    if kind == "classical":
        return LoadedModel(kind, source, bound, classical=_classical(sections, source))
    return LoadedModel(kind, source, bound,
                       intuitionistic=_intuitionistic(headers, sections, source))


def _kv(entry: tuple[int, str], source: str) -> tuple[int, str, str]:
    no, line = entry
    key, sep, value = line.partition(":")
    if not sep:
        raise ModelFileError(f"expected 'key: value', got {line!r}", no, source)
    return no, key.strip(), value.strip()


def _guard(fn, no: int, source: str):
    try:
        return fn()
    except ModelFileError:
        raise
    except (ValueError, KeyError, LookupError) as e:
        msg = e.args[0] if e.args else str(e)
        raise ModelFileError(str(msg), no, source) from e


# -- kelsenian ---------------------------------------------------------------


def _kelsenian(sections: dict[str, _Section], source: str, bound: int) -> KelsenianModel:
    mas = _mas(sections["mas"], source)

    props = {}
    for no, line in sections.get("props", _Section("props", 0)).entries:
        name, sep, pat = line.partition(":")
        name = name.strip()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise ModelFileError(f"bad proposition name {name!r}", no, source)
        props[name] = _guard(lambda: parse_pattern(pat), no, source) if sep else None
    unbound = sorted(p for p, v in props.items() if v is None)
    if unbound:
        raise ModelFileError(
            f"propositions {unbound} need a trace predicate in a kelsenian model",
            sections["props"].line, source)

    norms: dict[str, NormSpec] = {}
    for no, line in sections["norms"].entries:
        for n in _guard(lambda: _norm(line), no, source):
            if n.id in norms:
                raise ModelFileError(f"duplicate norm {n.id}", no, source)
            norms[n.id] = n

    nominals = set(norms)
    worlds = []
    for no, line in sections["worlds"].entries:
        worlds.append(_guard(lambda: _world(line, nominals), no, source))

    order = None
    if "order" in sections:
        declared = {w.term for w in worlds}
        order = []
        for no, line in sections["order"].entries:
            lo, sep, hi = line.partition("<=")
            if not sep:
                raise ModelFileError(f"expected 'TERM <= TERM', got {line!r}", no, source)
            a = _guard(lambda: term(lo, nominals), no, source)
            b = _guard(lambda: term(hi, nominals), no, source)
            for t in (a, b):
                if t not in declared:
                    raise ModelFileError(f"order mentions undeclared world {t}", no, source)
            order.append((a, b))

    sec = sections["worlds"]
    return _guard(lambda: build_kelsenian_model(norms, worlds, mas, bound, props, order),
                  sec.line, source)


def _mas(sec: _Section, source: str) -> MasSystem:
    fields: dict[str, str] = {}
    transitions = []
    for entry in sec.entries:
        no, key, value = _kv(entry, source)
        if key == "transition":
            m = re.fullmatch(r"(\S+)\s+(\S+)\s+(\S+)\s*->\s*(\S+)", value)
            if not m:
                raise ModelFileError(
                    f"expected 'transition: AGENT ACTION SOURCE -> TARGET', got {value!r}", no, source)
            agent, action, src, dst = m.groups()
            transitions.append(Event(agent, action, src, dst))
        elif key in ("states", "initial", "actions", "agents", "subjects"):
            if key in fields:
                raise ModelFileError(f"duplicate mas key {key!r}", no, source)
            fields[key] = value
        else:
            raise ModelFileError(f"unknown mas key {key!r}", no, source)
    for key in ("states", "initial", "actions", "agents"):
        if key not in fields:
            raise ModelFileError(f"[mas] needs '{key}:'", sec.line, source)
    return MasSystem(
        states=frozenset(fields["states"].split()),
        initial=fields["initial"],
        actions=frozenset(fields["actions"].split()),
        agents=frozenset(fields["agents"].split()),
        transitions=frozenset(transitions),
        subjects=frozenset(fields["subjects"].split()) if "subjects" in fields else None,
    )


def _norm(line: str) -> list[NormSpec]:
    head, _, rest = line.partition(";")
    nid, sep, kind = head.partition("=")
    if not sep:
        raise ValueError(f"expected 'ID = KIND; ...', got {line!r}")
    nid, kind = nid.strip(), kind.strip()
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", nid):
        raise ValueError(f"bad norm id {nid!r}")
    if kind not in KINDS:
        raise ValueError(
            f"norm {nid}: {kind!r} is not a deontic norm type (expected one of {', '.join(KINDS)}); "
            "non-deontic norms are not supported")
    opts: dict[str, str] = {}
    for part in rest.split(";"):
        part = part.strip()
        if not part:
            continue
        key, sep, value = part.partition(":")
        key = key.strip()
        if not sep or key not in ("context", "demand", "declined", "system", "says"):
            raise ValueError(f"norm {nid}: bad option {part!r}")
        opts[key] = value.strip()
    if "demand" not in opts:
        raise ValueError(f"norm {nid}: missing demand")
    demand = parse_pattern(opts["demand"])
    context = parse_pattern(opts["context"]) if "context" in opts else None
    extra = {"system": opts.get("system"), "says": opts.get("says", "")}
    if kind == "permission":
        if "declined" not in opts:
            raise ValueError(f"permission {nid}: needs 'declined: ID' naming its declined nominal")
        taken = NormSpec(nid, kind, demand, context, "taken", nid, **extra)
        declined = NormSpec(opts["declined"], kind, demand, context, "declined", nid, **extra)
        return [taken, declined]
    if "declined" in opts:
        raise ValueError(f"norm {nid}: only permissions have a declined nominal")
    return [NormSpec(nid, kind, demand, context, **extra)]


def _world(line: str, nominals: set[str]) -> WorldSpec:
    text, *opts = [p.strip() for p in line.split(";")]
    t = term(text, nominals)
    expect = None
    annotation = None
    for opt in opts:
        key, sep, value = opt.partition(":")
        key, value = key.strip(), value.strip()
        if key == "expect" and value in ("top", "bot"):
            expect = value == "top"
        elif key == "annotate" and value:
            annotation = parse_formula(value, "hybrid", frozenset(nominals))
        else:
            raise ValueError(f"bad world option {opt!r}")
    return WorldSpec(t, text, expect, annotation)


# -- raw models ----------------------------------------------------------------


def _names(sec: _Section) -> list[str]:
    return [x for _, line in sec.entries for x in line.split()]


def _classical(sections: dict[str, _Section], source: str) -> ClassicalFile:
    worlds = frozenset(_names(sections["worlds"]))
    access = set()
    for no, line in sections.get("access", _Section("access", 0)).entries:
        m = re.fullmatch(r"(\S+)\s*->\s*(\S+)", line)
        if not m:
            raise ModelFileError(f"expected 'w -> v', got {line!r}", no, source)
        access.add(m.groups())
    valuation: dict[tuple[str, str], bool] = {}
    for entry in sections["valuation"].entries:
        no, w, rest = _kv(entry, source)
        for item in rest.split():
            m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)=([01])", item)
            if not m:
                raise ModelFileError(f"expected 'p=0' or 'p=1', got {item!r}", no, source)
            valuation[(w, m.group(1))] = m.group(2) == "1"
    g = {}
    for entry in sections.get("nominals", _Section("nominals", 0)).entries:
        no, a, w = _kv(entry, source)
        g[a] = w
    props = frozenset(p for _, p in valuation)
    return ClassicalFile(ClassicalHybridModel(worlds, frozenset(access), valuation, props), g)


def _intuitionistic(headers, sections: dict[str, _Section], source: str) -> IntuitionisticFile:
    states = frozenset(_names(sections["states"]))
    covering = []
    for no, line in sections.get("order", _Section("order", 0)).entries:
        lo, sep, hi = line.partition("<=")
        if not sep:
            raise ModelFileError(f"expected 'w <= v', got {line!r}", no, source)
        covering.append((lo.strip(), hi.strip()))

    def per_state(name):
        out: dict[str, list[tuple[int, str]]] = {}
        for entry in sections.get(name, _Section(name, 0)).entries:
            no, w, rest = _kv(entry, source)
            out.setdefault(w, []).append((no, rest))
        return out

    domain = {w: set(x for _, r in rows for x in r.split()) for w, rows in per_state("domain").items()}
    access, equiv, valuation = {}, {}, {}
    for name, target, sym in (("access", access, "->"), ("equiv", equiv, "~")):
        for w, rows in per_state(name).items():
            for no, rest in rows:
                for item in rest.split(","):
                    d, sep, e = item.partition(sym)
                    if not sep:
                        raise ModelFileError(f"expected 'd {sym} e', got {item.strip()!r}", no, source)
                    target.setdefault(w, set()).add((d.strip(), e.strip()))
    props = set()
    for w, rows in per_state("valuation").items():
        for no, rest in rows:
            p, sep, pts = rest.partition("=")
            if not sep:
                raise ModelFileError(f"expected 'p = d e ...', got {rest!r}", no, source)
            p = p.strip()
            props.add(p)
            valuation.setdefault(w, {})[p] = frozenset(pts.split())
    for w in valuation:
        for p in props:
            valuation[w].setdefault(p, frozenset())

    model = IntuitionisticHybridModel.from_covering(
        states, covering, domain, equiv, access, valuation, props)
    if "base" in headers:
        base = headers["base"][1]
    else:
        lows = [w for w in sorted(states) if all(model.leq(w, v) for v in states)]
        if not lows:
            raise ModelFileError("no least state; add a 'base:' header", None, source)
        base = lows[0]
    g = {}
    for entry in sections.get("nominals", _Section("nominals", 0)).entries:
        no, a, d = _kv(entry, source)
        g[a] = d
    return IntuitionisticFile(model, WAssignment(base, g))


def parse_world(model: KelsenianModel, text: str) -> LatticeTerm:
    """Resolve ``top``, ``bottom``, a nominal or a term text to a declared world."""
    key = text.strip()
    if key in ("top", "bottom"):
        t = model.greatest() if key == "top" else model.least()
        if t is None:
            raise LookupError(f"the declared worlds have no {'greatest' if key == 'top' else 'least'} element")
        return t
    try:
        t = term(key, model.norms)
    except UndeclaredNominalError as e:
        raise LookupError(str(e)) from e
    if t not in model.terms:
        raise LookupError(f"{t} is not a declared world")
    return t
