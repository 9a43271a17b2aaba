import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knormas.conflict import (
    COLLISION, CONTRADICTION, StatementKindError, analyse_conflicts, complementary,
    conformity_statements, detect_conflicts, joint_compliance_test, obedience_statement,
    statement_for,
)
from knormas.lattice import LatticeTerm, term
from knormas.modelfile import load_model
from knormas.norms import NormSpec, build_kelsenian_model, permission_pair
from knormas.patterns import PNot, parse_pattern, render_pattern

from gen import contract_net, oracle_cores

BUNDLED = ["fig1-contractnet", "fig2-misbehaving", "fig3", "fig4"]


def fig(name):
    return load_model(name).kelsenian


def test_obedience_statements():
    m = fig("fig3")
    s = obedience_statement(m.norms["n1"])
    assert s.kind == "obedience"
    assert render_pattern(s.predicate) == (
        "occurs(announce) and after(occurs(announce), occurs(bid by all))")
    award = NormSpec("x", "prohibition", parse_pattern("occurs(award)"))
    assert render_pattern(obedience_statement(award).predicate) == "not occurs(award)"
    with pytest.raises(StatementKindError):
        obedience_statement(fig("fig4").norms["n4"])


def test_conformity_statements():
    taken, declined = conformity_statements(fig("fig4").norms["n4"])
    assert (taken.kind, declined.kind) == ("conformity-taken", "conformity-declined")
    assert taken.source == declined.source == "n4"
    award, _ = permission_pair("p", "pbar", parse_pattern("occurs(award)"))
    t, d = conformity_statements(award)
    assert t.predicate == parse_pattern("occurs(award)")
    assert d.predicate == PNot(parse_pattern("occurs(award)"))
    with pytest.raises(StatementKindError):
        conformity_statements(fig("fig3").norms["n1"])


def test_joint_compliance_test():
    m = fig("fig4")
    ok = joint_compliance_test([obedience_statement(fig("fig1-contractnet").norms["n1"])],
                               fig("fig1-contractnet").mas, 6)
    assert ok.satisfiable and len(ok.witness) == 4
    taken = statement_for(m.norms["n4"])
    bad = joint_compliance_test([obedience_statement(m.norms["n1"]), taken], m.mas, 6)
    assert not bad.satisfiable and bad.witness is None and bad.bound == 6
    with pytest.raises(ValueError):
        joint_compliance_test([], m.mas, 6)


def test_fig3_contradiction():
    reports = detect_conflicts(fig("fig3"))
    assert len(reports) == 1
    r = reports[0]
    assert r.cls == CONTRADICTION
    assert r.minimal_sets == [frozenset({"n1", "n3"}), frozenset({"n2", "n3"})]
    assert r.witness == term("n1 & n2 & n3")
    assert "6" in r.explanation


def test_fig4_collisions():
    reports = detect_conflicts(fig("fig4"))
    assert [r.cls for r in reports] == [COLLISION, COLLISION]
    sets = {frozenset(r.minimal_sets[0]) if len(r.minimal_sets) == 1 else
            frozenset(map(frozenset, r.minimal_sets)) for r in reports}
    assert frozenset({"n3", "n4bar"}) in sets
    assert frozenset({frozenset({"n1", "n4"}), frozenset({"n2", "n4"})}) in sets
    bottom = term("n1 & n2 & n3 & n4 & n4bar")
    assert sum(bottom in r.subsumed for r in reports) == 1


def test_fig1_clean():
    a = analyse_conflicts(fig("fig1-contractnet"))
    assert a.clean and a.reports == ()


def test_fig2_unfulfillable_not_conflict():
    a = analyse_conflicts(fig("fig2-misbehaving"))
    assert a.reports == ()
    assert {frozenset(u.norms) for u in a.unfulfillable} == {
        frozenset({frozenset({"n1"})}), frozenset({frozenset({"n2"})})}


def test_complementary():
    norms = fig("fig4").norms
    assert complementary(norms, ["n4", "n4bar"])
    assert not complementary(norms, ["n1", "n4"])


@pytest.mark.parametrize("name", BUNDLED)
def test_oracle_equivalence(name):
    m = fig(name)
    a = analyse_conflicts(m)
    for r in a.reports:
        expected = oracle_cores(m, r.witness)
        assert set(r.minimal_sets) == {c for c in expected if len(c) >= 2}
        imperative = all(m.norms[n].imperative for c in r.minimal_sets for n in c)
        assert r.cls == (CONTRADICTION if imperative else COLLISION)
    for u in a.unfulfillable:
        assert set(u.norms) == oracle_cores(m, u.witness)


@pytest.mark.parametrize("name", BUNDLED)
def test_every_bottom_world_in_exactly_one_finding(name):
    m = fig(name)
    a = analyse_conflicts(m)
    cited = [w for f in a.reports + a.unfulfillable for w in f.witness_worlds]
    assert sorted(map(str, cited)) == sorted(map(str, m.bottom_worlds()))
    assert all(not m.labels[w] for w in cited)


@pytest.mark.parametrize("name", BUNDLED)
def test_minimality(name):
    m = fig(name)
    for r in detect_conflicts(m):
        assert all(len(c) >= 2 for c in r.minimal_sets)
        for core in r.minimal_sets:
            for drop in core:
                rest = [statement_for(m.norms[n]) for n in core - {drop}]
                assert joint_compliance_test(rest, m.mas, m.bound).satisfiable


def test_bound_is_part_of_the_verdict():
    # with too few steps nobody can bid, so the collision becomes unfulfillability
    m = load_model("fig4", bound=2).kelsenian
    a = analyse_conflicts(m)
    assert all(r.bound == 2 for r in a.reports)


@st.composite
def permission_models(draw):
    k = draw(st.integers(1, 3))
    norms, worlds = [], []
    for i in range(k):
        demand = parse_pattern(draw(st.sampled_from(
            ["occurs(bid)", "occurs(award)", "not occurs(bid by all)", "occurs(bid by P1)"])))
        context = draw(st.sampled_from([None, parse_pattern("occurs(announce)")]))
        pair = permission_pair(f"q{i}", f"q{i}bar", demand, context)
        norms.extend(pair)
        worlds.extend(LatticeTerm.nominal(n.id) for n in pair)
    ids = [n.id for n in norms]
    for _ in range(3):
        chosen = draw(st.lists(st.sampled_from(ids), min_size=2, max_size=4, unique=True))
        t = LatticeTerm.of([chosen])
        if t not in worlds:
            worlds.append(t)
    return norms, worlds


@given(permission_models())
@settings(max_examples=40, deadline=None)
def test_permissions_alone_never_contradict(case):
    norms, worlds = case
    m = build_kelsenian_model(norms, worlds, contract_net(), 4)
    assert all(r.cls != CONTRADICTION for r in detect_conflicts(m))
