"""knormas command line.

Exit status: 0 clean, 1 findings (violations, conflicts, rejected proof),
2 usage or parse errors.  ``KNORMAS_FORMAT`` sets the default output format.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .classical import eval_classical, validate_classical
from .conflict import analyse_conflicts
from .formula import FormulaSyntaxError, parse_formula, pretty_formula, pretty_name, render_formula
from .intuitionistic import eval_intuitionistic, validate_assignment, validate_heredity
from .lattice import LatticeTerm
from .mas import enumerate_traces, render_trace
from .modelfile import LoadedModel, ModelFileError, load_model, parse_world
from .norms import KelsenianModel
from .sdl import chisholm_demo
from .violations import UnknownSymbolError

FORMATS = ("text", "json", "dot")
EXIT_OK, EXIT_FINDINGS, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    bound: int | None = None
    format: str = "text"

    def __post_init__(self):
        if self.bound is not None and self.bound < 1:
            raise UsageError(f"--bound must be >= 1, got {self.bound}")
        if self.format not in FORMATS:
            raise UsageError(f"unknown format {self.format!r}")


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=False)


def _kelsenian(loaded: LoadedModel) -> KelsenianModel:
    if loaded.kelsenian is None:
        raise UsageError(f"{loaded.source} is a {loaded.kind} model; this command needs a kelsenian one")
    return loaded.kelsenian


def _no_dot(cfg: RunConfig, command: str):
    if cfg.format == "dot":
        raise UsageError(f"--format dot is only available for 'lattice', not {command!r}")


def caption(model: KelsenianModel, t: LatticeTerm) -> str:
    spec = model.spec(t)
    if spec.annotation is not None:
        sign = "⊨" if model.satisfies(t, spec.annotation) else "⊭"
        return f"{t.pretty()} {sign} {pretty_formula(spec.annotation)}"
    return f"{t.pretty()} ⊨ {'⊤' if model.labels[t] else '⊥'}"


# -- commands ------------------------------------------------------------------


def cmd_validate(loaded: LoadedModel, cfg: RunConfig) -> tuple[str, int]:
    _no_dot(cfg, "validate")
    notes: list[str] = []
    if loaded.kelsenian is not None:
        problems = loaded.kelsenian.violations
        notes = loaded.kelsenian.notes
    elif loaded.classical is not None:
        problems = validate_classical(loaded.classical.model, loaded.classical.assignment)
    else:
        f = loaded.intuitionistic
        problems = validate_heredity(f.model) + validate_assignment(f.model, f.assignment)
    status = EXIT_FINDINGS if problems else EXIT_OK
    if cfg.format == "json":
        return _dump({
            "model": loaded.source, "kind": loaded.kind, "bound": loaded.bound,
            "valid": not problems,
            "violations": [{"kind": v.kind, "message": v.message} for v in problems],
            "notes": notes,
        }), status
    lines = [f"{loaded.source}: {loaded.kind} model, "
             + ("valid" if not problems else f"{len(problems)} violation(s)")]
    lines += [f"  violation [{v.kind}]: {v.message}" for v in problems]
    lines += [f"  note: {n}" for n in notes]
    return "\n".join(lines), status


def cmd_eval(loaded: LoadedModel, where: str, formula: str, cfg: RunConfig) -> tuple[str, int]:
    _no_dot(cfg, "eval")
    f = parse_formula(formula, "hybrid", loaded.nominals)
    if loaded.kelsenian is not None:
        m = loaded.kelsenian
        t = parse_world(m, where)
        value = m.satisfies(t, f)
        at = str(t)
        semantics = "intuitionistic"
    elif loaded.classical is not None:
        c = loaded.classical
        w = c.assignment.get(where, where)
        if w not in c.model.worlds:
            raise LookupError(f"unknown world or nominal {where!r}")
        value = eval_classical(c.model, c.assignment, w, f)
        at = w
        semantics = "classical"
    else:
        i = loaded.intuitionistic
        state, _, point = where.partition(":")
        if state not in i.model.states:
            raise LookupError(f"unknown state {state!r}")
        points = [point] if point else sorted(i.model.domain[state])
        value = all(eval_intuitionistic(i.model, i.assignment, state, d, f) for d in points)
        at = where
        semantics = "intuitionistic"
    text = "true" if value else "false"
    if cfg.format == "json":
        return _dump({"model": loaded.source, "at": at, "formula": render_formula(f),
                      "semantics": semantics, "value": value}), EXIT_OK
    return text, EXIT_OK


def cmd_lattice(loaded: LoadedModel, cfg: RunConfig) -> tuple[str, int]:
    m = _kelsenian(loaded)
    edges = m.covering_edges()
    least, greatest = m.least(), m.greatest()
    if cfg.format == "dot":
        return lattice_dot(m), EXIT_OK
    if cfg.format == "json":
        return _dump({
            "model": loaded.source, "bound": m.bound,
            "worlds": [{"id": str(t), "term": t.sorted_clauses, "pretty": t.pretty(),
                        "label": "top" if m.labels[t] else "bot", "caption": caption(m, t),
                        "compliant_traces": len(m.compliance[t])} for t in m.terms],
            "edges": [[str(a), str(b)] for a, b in edges],
            "least": str(least) if least is not None else None,
            "greatest": str(greatest) if greatest is not None else None,
        }), EXIT_OK
    lines = [f"worlds ({len(m.terms)}), trace bound {m.bound}:"]
    for t in m.terms:
        label = "⊤" if m.labels[t] else "⊥"
        lines.append(f"  {label}  {caption(m, t)}   [{len(m.compliance[t])} compliant traces]")
    lines.append(f"covering edges ({len(edges)}):")
    lines += [f"  {a.pretty()} ≤ {b.pretty()}" for a, b in edges]
    lines.append(f"bottom: {least.pretty() if least is not None else '(none)'}")
    lines.append(f"top: {greatest.pretty() if greatest is not None else '(none)'}")
    return "\n".join(lines), EXIT_OK


def lattice_dot(m: KelsenianModel) -> str:
    ids = {t: f"w{i}" for i, t in enumerate(m.terms)}
    out = ["digraph lattice {", "  rankdir=BT;", "  node [shape=ellipse];"]
    for t in m.terms:
        label = caption(m, t).replace('"', '\\"')
        out.append(f'  {ids[t]} [label="{label}"];')
    for a, b in m.covering_edges():
        out.append(f'  {ids[a]} -> {ids[b]} [label="≤"];')
    out.append("}")
    return "\n".join(out)


def cmd_conflicts(loaded: LoadedModel, cfg: RunConfig) -> tuple[str, int]:
    _no_dot(cfg, "conflicts")
    m = _kelsenian(loaded)
    analysis = analyse_conflicts(m)
    status = EXIT_OK if analysis.clean else EXIT_FINDINGS
    if cfg.format == "json":
        return _dump({
            "model": loaded.source, "bound": m.bound,
            "conflicts": [{
                "class": r.cls,
                "participants": [sorted(c) for c in r.minimal_sets],
                "witness": str(r.witness),
                "subsumed": [str(s) for s in r.subsumed],
                "bound": r.bound,
                "explanation": r.explanation,
            } for r in analysis.reports],
            "unfulfillable": [{
                "norms": [sorted(c) for c in u.norms],
                "witness": str(u.witness),
                "subsumed": [str(s) for s in u.subsumed],
                "bound": u.bound,
                "explanation": u.explanation,
            } for u in analysis.unfulfillable],
        }), status
    if analysis.clean:
        return f"no conflicts (traces of length <= {m.bound})", status
    lines = []
    for r in analysis.reports:
        sets = ", ".join("{" + ", ".join(pretty_name(n) for n in sorted(c)) + "}" for c in r.minimal_sets)
        lines.append(f"{r.cls}: minimal sets {sets}")
        lines.append(f"  witness: {r.witness.pretty()} ⊨ ⊥ (bound {r.bound})")
        for s in r.subsumed:
            lines.append(f"  subsumed: {s.pretty()} ⊨ ⊥")
        lines.append(f"  why: {r.explanation}")
    for u in analysis.unfulfillable:
        lines.append("unfulfillable: " + ", ".join(
            " ⊓ ".join(pretty_name(n) for n in sorted(c)) for c in u.norms))
        lines.append(f"  witness: {u.witness.pretty()} ⊨ ⊥ (bound {u.bound})")
        for s in u.subsumed:
            lines.append(f"  subsumed: {s.pretty()} ⊨ ⊥")
        lines.append(f"  why: {u.explanation}")
    return "\n".join(lines), status


def cmd_chisholm(drop_premise: int | None, cfg: RunConfig) -> tuple[str, int]:
    _no_dot(cfg, "chisholm")
    report = chisholm_demo(drop_premise=drop_premise)
    res, script = report.result, report.script
    status = EXIT_OK if res.accepted else EXIT_FINDINGS
    if cfg.format == "json":
        return _dump({
            "premises": [render_formula(p) for p in script.premises],
            "goal": render_formula(script.goal),
            "clash": list(script.clash),
            "lines": [{"index": l.index, "formula": render_formula(l.formula),
                       "justification": str(l.justification),
                       "depends_on": sorted(res.dependencies.get(l.index, ()))}
                      for l in script.lines],
            "accepted": res.accepted,
            "rejected_at": res.line,
            "reason": res.reason,
        }), status
    lines = ["premises:"]
    lines += [f"  {pretty_formula(p)}" for p in script.premises]
    for l in script.lines:
        mark = "✗ " if not res.accepted and l.index == res.line else "  "
        lines.append(f"{mark}{l.index:>2}. {pretty_formula(l.formula):<32} {l.justification}")
        if not res.accepted and l.index == res.line:
            break
    if script.clash and res.accepted:
        lines.append("clash: lines " + " and ".join(map(str, script.clash))
                     + " are jointly inconsistent (axiom D against the derived obligations)")
    lines.append(str(res))
    return "\n".join(lines), status


def cmd_traces(loaded: LoadedModel, world: str | None, cfg: RunConfig) -> tuple[str, int]:
    _no_dot(cfg, "traces")
    m = _kelsenian(loaded)
    if world is None:
        traces = enumerate_traces(m.mas, m.bound)
        scope = "all"
    else:
        t = parse_world(m, world)
        traces = m.world_traces(t)
        scope = str(t)
    if cfg.format == "json":
        return _dump({"model": loaded.source, "bound": m.bound, "world": scope,
                      "traces": [[[e.agent, e.action, e.source, e.target] for e in tr]
                                 for tr in traces]}), EXIT_OK
    head = f"{len(traces)} trace(s) of length <= {m.bound}" + ("" if world is None else f" complying with {scope}")
    return "\n".join([head] + [f"  {render_trace(tr)}" for tr in traces]), EXIT_OK


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=None, metavar="L",
                        help="trace bound (default: the file's, else 6)")
    common.add_argument("--format", choices=FORMATS, default=None)

    p = argparse.ArgumentParser(prog="knormas", description="Kelsenian normative multi-agent systems")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("validate", parents=[common], help="check a model file")
    s.add_argument("file")
    s = sub.add_parser("eval", parents=[common], help="evaluate a formula at a world")
    s.add_argument("file")
    s.add_argument("world", help="world term, nominal, 'top'/'bottom', or STATE[:POINT]")
    s.add_argument("formula")
    s = sub.add_parser("lattice", parents=[common], help="list worlds, order and labels")
    s.add_argument("file")
    s = sub.add_parser("conflicts", parents=[common], help="classify bottom worlds")
    s.add_argument("file")
    s = sub.add_parser("chisholm", parents=[common], help="check the Chisholm derivation")
    s.add_argument("--drop-premise", type=int, default=None, metavar="K")
    s.add_argument("--json", action="store_true", help="same as --format json")
    s = sub.add_parser("traces", parents=[common], help="list bounded traces")
    s.add_argument("file")
    s.add_argument("--world", default=None)
    return p


def run(argv: list[str] | None = None) -> tuple[str, str, int]:
    """(stdout, stderr, exit status) for one invocation."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return "", "", int(e.code or 0)
    fmt = args.format or os.environ.get("KNORMAS_FORMAT") or "text"
    if getattr(args, "json", False):
        fmt = "json"
    try:
        cfg = RunConfig(args.bound, fmt)
        if args.command == "chisholm":
            out, status = cmd_chisholm(args.drop_premise, cfg)
            return out + "\n", "", status
        loaded = load_model(args.file, cfg.bound)
        if args.command == "validate":
            out, status = cmd_validate(loaded, cfg)
        elif args.command == "eval":
            out, status = cmd_eval(loaded, args.world, args.formula, cfg)
        elif args.command == "lattice":
            out, status = cmd_lattice(loaded, cfg)
        elif args.command == "conflicts":
            out, status = cmd_conflicts(loaded, cfg)
        else:
            out, status = cmd_traces(loaded, args.world, cfg)
    except (UsageError, ModelFileError, FormulaSyntaxError, FileNotFoundError,
            LookupError, UnknownSymbolError, ValueError) as e:
        return "", f"knormas: error: {e}\n", EXIT_USAGE
    return out + "\n", "", status


def main(argv: list[str] | None = None) -> int:
    out, err, status = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return status


if __name__ == "__main__":
    sys.exit(main())
