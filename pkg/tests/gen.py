"""Random generators and independent oracles shared by the tests."""

from __future__ import annotations

import random
from dataclasses import replace
from itertools import combinations, product

from knormas.conflict import complementary, joint_compliance_test, statement_for
from knormas.formula import (
    And, At, Atom, Bottom, Box, Conj, Diamond, Impl, Implies, Neg, Nom, Not, Ob, Or, Prop, Top,
    parse_formula, render_formula,
)
from knormas.intuitionistic import IntuitionisticHybridModel, WAssignment, close_order
from knormas.lattice import LatticeTerm
from knormas.mas import Event
from knormas.patterns import ALL, After, Occurs, PAnd, PConst, PNot, POr
from knormas.sdl import Justification, chisholm_script

POINTS = ("d0", "d1", "d2")
PROPS = ("p", "q")
NOMINALS = ("a", "b")


# -- formulas --------------------------------------------------------------------


def random_formula(rng: random.Random, depth: int, props=PROPS, nominals=NOMINALS):
    if depth == 0 or rng.random() < 0.25:
        kind = rng.randrange(4)
        if kind == 0:
            return Prop(rng.choice(props))
        if kind == 1 and nominals:
            return Nom(rng.choice(nominals))
        if kind == 2:
            return Top()
        if kind == 3:
            return Bottom()
        return Prop(rng.choice(props))
    op = rng.randrange(8)
    sub = lambda: random_formula(rng, depth - 1, props, nominals)
    if op == 0:
        return And(sub(), sub())
    if op == 1:
        return Or(sub(), sub())
    if op == 2:
        return Implies(sub(), sub())
    if op == 3:
        return Not(sub())
    if op == 4:
        return Box(sub())
    if op == 5:
        return Diamond(sub())
    if op == 6 and nominals:
        return At(rng.choice(nominals), sub())
    return Implies(sub(), Bottom())


# -- intuitionistic models -------------------------------------------------------


def _sub(rng, items, prob):
    return {x for x in items if rng.random() < prob}


def _equiv_close(pairs, domain):
    parent = {d: d for d in domain}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in pairs:
        parent[find(a)] = find(b)
    return {(a, b) for a in domain for b in domain if a != b and find(a) == find(b)}


def random_ihl(rng: random.Random, max_states: int = 4, max_points: int = 3):
    """A model satisfying every heredity condition, rooted at state ``s0``.

    States are built bottom-up so each inherits everything below it.
    """
    n = rng.randint(1, max_states)
    states = [f"s{i}" for i in range(n)]
    pairs = [("s0", s) for s in states[1:]]
    pairs += [(states[i], states[j]) for i in range(1, n) for j in range(i + 1, n) if rng.random() < 0.4]
    order = close_order(states, pairs)
    points = POINTS[:max_points]
    domain, equiv, access, valuation = {}, {}, {}, {}
    for s in states:
        below = [w for w in states if (w, s) in order and w != s]
        D = set().union(*(domain[w] for w in below)) if below else set()
        D |= _sub(rng, points, 0.4)
        if not D:
            D.add(rng.choice(points))
        E = set().union(*(equiv[w] for w in below)) if below else set()
        if rng.random() < 0.3:
            E.add((rng.choice(sorted(D)), rng.choice(sorted(D))))
        E = _equiv_close(E, D)
        R = set().union(*(access[w] for w in below)) if below else set()
        R |= _sub(rng, product(sorted(D), repeat=2), 0.3)
        V = {}
        for p in PROPS:
            inherited = set().union(*(valuation[w][p] for w in below)) if below else set()
            V[p] = frozenset(inherited | _sub(rng, D, 0.35))
        domain[s], equiv[s], access[s], valuation[s] = frozenset(D), frozenset(E), frozenset(R), V
    model = IntuitionisticHybridModel(
        states=frozenset(states), order=order, domain=domain, equiv=equiv, access=access,
        valuation=valuation, props=frozenset(PROPS))
    root = sorted(domain["s0"])
    g = WAssignment("s0", {a: rng.choice(root) for a in NOMINALS})
    return model, g


def mutate_heredity(rng: random.Random, model: IntuitionisticHybridModel):
    """Break exactly one monotonicity condition along some strict pair, or None."""
    strict = sorted((w, v) for w, v in model.order if w != v)
    rng.shuffle(strict)
    kinds = ["domain", "access", "valuation", "equiv"]
    rng.shuffle(kinds)
    for w, v in strict:
        for kind in kinds:
            if kind == "domain":
                dom = dict(model.domain)
                gone = sorted(model.domain[w])
                d = rng.choice(gone)
                dom[v] = frozenset(model.domain[v] - {d}) or frozenset({"zz"})
                # keep the rest inside D_v so only monotonicity of D can fail
                acc = dict(model.access)
                acc[v] = frozenset((a, b) for a, b in model.access[v] if d not in (a, b))
                eq = dict(model.equiv)
                eq[v] = frozenset((a, b) for a, b in model.equiv[v] if d not in (a, b))
                val = dict(model.valuation)
                val[v] = {p: ds - {d} for p, ds in model.valuation[v].items()}
                return _replace(model, domain=dom, access=acc, equiv=eq, valuation=val)
            if kind == "access" and model.access[w]:
                e = rng.choice(sorted(model.access[w]))
                acc = dict(model.access)
                acc[v] = model.access[v] - {e}
                return _replace(model, access=acc)
            if kind == "equiv" and model.equiv[w]:
                a, b = rng.choice(sorted(model.equiv[w]))
                eq = dict(model.equiv)
                eq[v] = frozenset(x for x in model.equiv[v] if set(x) != {a, b})
                return _replace(model, equiv=eq)
            if kind == "valuation":
                held = [(p, d) for p, ds in model.valuation[w].items() for d in sorted(ds)]
                if held:
                    p, d = rng.choice(held)
                    val = dict(model.valuation)
                    val[v] = dict(model.valuation[v])
                    val[v][p] = model.valuation[v][p] - {d}
                    return _replace(model, valuation=val)
    return None


def _replace(model, **kw):
    fields = dict(states=model.states, order=model.order, domain=model.domain, equiv=model.equiv,
                  access=model.access, valuation=model.valuation, props=model.props)
    fields.update(kw)
    return IntuitionisticHybridModel(**fields)


# -- lattice terms ---------------------------------------------------------------


GENERATORS = ("n1", "n2", "n3", "n4")


def random_term(rng: random.Random, gens=GENERATORS) -> LatticeTerm:
    k = rng.randint(1, 3)
    clauses = [frozenset(rng.sample(gens, rng.randint(1, len(gens)))) for _ in range(k)]
    return LatticeTerm.of(clauses)


def truth_table(t: LatticeTerm, gens=GENERATORS) -> frozenset:
    """Assignments (as sets of true generators) satisfying ``t`` read as a positive formula."""
    rows = []
    for bits in product((False, True), repeat=len(gens)):
        true = {g for g, b in zip(gens, bits) if b}
        if any(c <= true for c in t.clauses):
            rows.append(frozenset(true))
    return frozenset(rows)


def oracle_leq(a: LatticeTerm, b: LatticeTerm) -> bool:
    """a <= b iff a entails b as a monotone Boolean function."""
    gens = tuple(sorted(a.nominals | b.nominals))
    return truth_table(a, gens) <= truth_table(b, gens)


# -- traces and patterns ---------------------------------------------------------


def oracle_traces(mas, bound):
    """Depth-first enumeration, independent of the library's breadth-first one."""
    out = set()

    def go(state, trace):
        out.add(tuple(trace))
        if len(trace) == bound:
            return
        for t in mas.transitions:
            if t.source == state:
                go(t.target, trace + [t])

    go(mas.initial, [])
    return out


def oracle_holds(p, trace, subjects) -> bool:
    if isinstance(p, PConst):
        return p.value
    if isinstance(p, PNot):
        return not oracle_holds(p.body, trace, subjects)
    if isinstance(p, PAnd):
        return oracle_holds(p.left, trace, subjects) and oracle_holds(p.right, trace, subjects)
    if isinstance(p, POr):
        return oracle_holds(p.left, trace, subjects) or oracle_holds(p.right, trace, subjects)
    if isinstance(p, Occurs):
        doers = [e.agent for e in trace if e.action == p.action]
        if p.agent is None:
            return bool(doers)
        if p.agent == ALL:
            return all(s in doers for s in subjects)
        return p.agent in doers
    if isinstance(p, After):
        for k in reversed(range(len(trace) + 1)):
            if oracle_holds(p.first, trace[:k], subjects) and oracle_holds(p.then, trace[k:], subjects):
                return True
        return False
    raise TypeError(p)


def oracle_upholds(n, trace, subjects) -> bool:
    """Whether ``trace`` meets the clause obligations of norm ``n`` in a world."""
    if n.context is not None and not oracle_holds(n.context, trace, subjects):
        return False
    met = oracle_holds(n.demand, trace, subjects)
    if n.kind == "obligation":
        return met
    if n.kind == "prohibition":
        return not met
    return met if n.polarity == "taken" else not met


def oracle_world(world: LatticeTerm, norms, mas, bound):
    subjects = mas.norm_subjects
    return {tr for tr in oracle_traces(mas, bound)
            if any(all(oracle_upholds(norms[n], tr, subjects) for n in c) for c in world.clauses)}


def contract_net(participants=("P1", "P2"), bidders=None):
    bidders = participants if bidders is None else bidders
    from knormas.mas import MasSystem
    ts = {Event("I", "recognize", "Idle", "Recognized"), Event("I", "announce", "Recognized", "Announced"),
          Event("I", "award", "Bade", "Awarded")}
    for p in bidders:
        ts |= {Event(p, "bid", "Announced", "Bade"), Event(p, "bid", "Bade", "Bade")}
    return MasSystem(
        states=frozenset({"Idle", "Recognized", "Announced", "Bade", "Awarded"}),
        initial="Idle",
        actions=frozenset({"recognize", "announce", "bid", "award"}),
        agents=frozenset({"I", *participants}),
        transitions=frozenset(ts),
        subjects=frozenset(participants),
    )


# -- exhaustive discrete collapse ----------------------------------------------------


def discrete_models(max_points: int = 3):
    """Every single-state model with |D| <= max_points, one proposition p and one
    nominal a, up to renaming of points."""
    from itertools import permutations

    for n in range(1, max_points + 1):
        pts = POINTS[:n]
        pairs = list(product(pts, repeat=2))
        seen = set()
        for rbits in product((False, True), repeat=len(pairs)):
            R = frozenset(pr for pr, b in zip(pairs, rbits) if b)
            for vbits in product((False, True), repeat=n):
                V = frozenset(d for d, b in zip(pts, vbits) if b)
                for a in pts:
                    key = min(
                        (tuple(sorted((pi[x], pi[y]) for x, y in R)), tuple(sorted(pi[d] for d in V)), pi[a])
                        for perm in permutations(pts) for pi in [dict(zip(pts, perm))])
                    if key in seen:
                        continue
                    seen.add(key)
                    yield pts, R, V, a


def collapse_disagreements(max_points: int = 3, depth: int = 3):
    """Compare both semantics on every formula of depth <= ``depth`` over p and a.

    Formulas are explored by their denotations: each round applies every
    connective to placeholder propositions carrying the denotations reached so
    far, evaluates the result with the real intuitionistic and classical
    evaluators, and records any disagreement.  Because both evaluators are
    compositional, covering every denotation pair covers every formula.
    Returns (models checked, connective applications checked, disagreements).
    """
    from knormas.intuitionistic import discrete_reduction_eval, eval_intuitionistic

    models = checked = 0
    bad = []
    for pts, R, V, a in discrete_models(max_points):
        models += 1
        subsets = [frozenset(s for s, b in zip(pts, bits) if b) for bits in product((False, True), repeat=len(pts))]
        name = {s: "x" + "".join(sorted(s)) for s in subsets}
        val = {"p": V, **{name[s]: s for s in subsets}}
        m = IntuitionisticHybridModel(
            states=frozenset({"w"}), order=frozenset({("w", "w")}), domain={"w": frozenset(pts)},
            equiv={"w": frozenset()}, access={"w": R}, valuation={"w": val}, props=frozenset(val))
        g = WAssignment("w", {"a": a})

        def run(f):
            nonlocal checked
            checked += 1
            i = frozenset(d for d in pts if eval_intuitionistic(m, g, "w", d, f))
            c = frozenset(d for d in pts if discrete_reduction_eval(m, g, "w", d, f))
            if i != c:
                bad.append((pts, R, V, a, f))
            return i

        known = {run(Prop("p")), run(Nom("a")), run(Top()), run(Bottom())}
        done_unary, done_binary = set(), set()
        for _ in range(depth):
            reached = set(known)
            for x in known:
                if x in done_unary:
                    continue
                done_unary.add(x)
                px = Prop(name[x])
                for f in (Not(px), Box(px), Diamond(px), At("a", px), Implies(px, Bottom())):
                    reached.add(run(f))
            for x in known:
                for y in known:
                    if (x, y) in done_binary:
                        continue
                    done_binary.add((x, y))
                    px, py = Prop(name[x]), Prop(name[y])
                    for f in (And(px, py), Or(px, py), Implies(px, py)):
                        reached.add(run(f))
            known = reached
    return models, checked, bad


# -- conflicts ---------------------------------------------------------------------


def oracle_cores(model, world):
    """Brute-force minimal unsatisfiable subsets of a world's clauses via joint_compliance_test."""
    cores = set()
    for clause in world.clauses:
        names = sorted(clause)
        subsets = [frozenset(c) for k in range(1, len(names) + 1) for c in combinations(names, k)]
        unsat = set()
        for s in subsets:
            if complementary(model.norms, s):
                continue
            stmts = [statement_for(model.norms[n]) for n in s]
            if not joint_compliance_test(stmts, model.mas, model.bound).satisfiable:
                unsat.add(s)
        cores |= {s for s in unsat if not any(o < s for o in unsat)}
    return cores


# -- proof mutations -----------------------------------------------------------------


def formula_mutations(f):
    """Nearby formulas: negation, dropped negation, swapped atoms, swapped sides."""
    out = {Neg(f)}
    if isinstance(f, Neg):
        out.add(f.body)
    swap = render_formula(f).replace("p", "#").replace("q", "p").replace("#", "q")
    out.add(parse_formula(swap, "deontic"))
    if isinstance(f, (Impl, Conj)):
        out.add(type(f)(f.right, f.left))
    if isinstance(f, Ob):
        out.add(f.body)
    out.discard(f)
    return out


def justification_mutations(j: Justification, n_lines: int):
    out = set()
    if j.rule in ("MP", "ObNec"):
        k = len(j.args)
        for args in product(range(1, n_lines + 1), repeat=k):
            out.add(Justification(j.rule, args))
        out.add(Justification("ObNec" if j.rule == "MP" else "MP", j.args[:1] * 2))
    else:
        atoms = (Atom("p"), Atom("q"), Neg(Atom("q")))
        out |= {Justification("AxK", (a, b)) for a in atoms for b in atoms}
        out |= {Justification("AxD", (a,)) for a in atoms}
    for rule in ("Premise", "Taut"):
        out.add(Justification(rule))
    out |= {Justification("MP", (i, i + 1)) for i in range(1, n_lines)}
    out.discard(j)
    return out


def chisholm_mutants():
    s = chisholm_script()
    for i, line in enumerate(s.lines):
        for f in formula_mutations(line.formula):
            yield i, replace(line, formula=f)
        for j in justification_mutations(line.justification, len(s.lines)):
            yield i, replace(line, justification=j)
