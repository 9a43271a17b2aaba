import json
from importlib import resources

import pytest

from knormas.classical import validate_classical
from knormas.cli import main, run
from knormas.modelfile import ModelFileError, bundled_models, parse_model

KNM = ["fig1-contractnet", "fig2-misbehaving", "fig3", "fig4"]


def out(*argv):
    stdout, stderr, status = run(list(argv))
    return stdout, status


def test_bundled_listing():
    names = bundled_models()
    for n in KNM:
        assert n + ".knm" in names
    assert "chisholm.prf" in names


def test_validate_fig3():
    text, status = out("validate", "fig3")
    assert status == 0 and "valid" in text


@pytest.mark.parametrize("name", KNM + ["classical-demo", "no-excluded-middle"])
def test_all_bundled_models_validate(name):
    assert out("validate", name)[1] == 0


def test_validate_non_monotone(tmp_path):
    p = tmp_path / "bad.knm"
    p.write_text("model: intuitionistic\n[states]\nw v\n[order]\nw <= v\n[domain]\nw: d\nv: d\n"
                 "[valuation]\nw: p = d\nv: p =\n")
    text, status = out("validate", str(p))
    assert status == 1 and "valuation not monotone at (w,v) for p" in text


def test_missing_section(tmp_path):
    p = tmp_path / "bad.knm"
    p.write_text("model: kelsenian\n[mas]\nstates: s\ninitial: s\nactions: a\nagents: x\n[worlds]\nn1\n")
    stdout, stderr, status = run(["validate", str(p)])
    assert status == 2 and "missing section [norms]" in stderr


def test_parse_error_has_location(tmp_path):
    p = tmp_path / "bad.knm"
    text = resources.files("knormas").joinpath("models/fig3.knm").read_text()
    p.write_text(text.replace("n3 = prohibition", "n3 = power"))
    stdout, stderr, status = run(["lattice", str(p)])
    assert status == 2 and "bad.knm:" in stderr and "non-deontic" in stderr


def test_eval_figure_captions():
    assert out("eval", "fig3", "n3", "~p") == ("true\n", 0)
    assert out("eval", "fig3", "bottom", "p") == ("false\n", 0)
    assert out("eval", "fig3", "n1 & n2", "T") == ("true\n", 0)


def test_eval_other_semantics():
    assert out("eval", "classical-demo", "a", "<>p")[0] == "true\n"
    assert out("eval", "classical-demo", "w3", "[]p & q")[0] == "true\n"
    assert out("eval", "no-excluded-middle", "w:d", "p | ~p")[0] == "false\n"
    assert out("eval", "no-excluded-middle", "v", "p | ~p")[0] == "true\n"


@pytest.mark.parametrize("argv", [
    ("eval", "fig3", "n9", "p"),
    ("eval", "fig3", "n1", "p &"),
    ("eval", "fig3", "n1 & n3", "p"),
    ("lattice", "nope"),
    ("lattice", "classical-demo"),
    ("conflicts", "fig3", "--format", "dot"),
    ("lattice", "fig3", "--bound", "0"),
])
def test_usage_errors(argv):
    assert run(list(argv))[2] == 2


def test_lattice_fig3_text():
    text, status = out("lattice", "fig3")
    assert status == 0
    assert "worlds (5)" in text and "covering edges (4)" in text
    assert "n₃ ⊨ ¬p" in text and "n₁ ⊓ n₂ ⊓ n₃ ⊭ p" in text
    assert "bottom: n₁ ⊓ n₂ ⊓ n₃" in text


def test_lattice_single_norm():
    doc = json.loads(out("lattice", "fig1-contractnet", "--format", "json")[0])
    assert len(doc["worlds"]) == 1 and doc["edges"] == []


def test_lattice_dot_fig4():
    dot = out("lattice", "fig4", "--format", "dot")[0]
    assert dot.startswith("digraph lattice {")
    assert dot.count("->") == 28
    assert '"(n₁ ⊔ n₂) ⊓ n₄ ⊨ ⊥"' in dot
    assert '"n₃ ⊓ n̄₄ ⊨ ⊥"' in dot


def test_conflicts_exit_codes():
    assert out("conflicts", "fig1-contractnet") == ("no conflicts (traces of length <= 6)\n", 0)
    text, status = out("conflicts", "fig3")
    assert status == 1 and text.count("normative-contradiction") == 1
    doc = json.loads(out("conflicts", "fig4", "--format", "json")[0])
    assert [c["class"] for c in doc["conflicts"]] == ["normative-collision"] * 2
    assert all(c["bound"] == 6 for c in doc["conflicts"])


def test_bound_flag():
    doc = json.loads(out("conflicts", "fig4", "--format", "json", "--bound", "5")[0])
    assert doc["bound"] == 5


def test_env_default_format(monkeypatch):
    monkeypatch.setenv("KNORMAS_FORMAT", "json")
    assert json.loads(out("lattice", "fig3")[0])["bound"] == 6
    monkeypatch.setenv("KNORMAS_FORMAT", "text")
    assert out("lattice", "fig3", "--format", "json")[0].startswith("{")


def test_chisholm():
    text, status = out("chisholm")
    assert status == 0 and "O(q)" in text and "O(¬q)" in text and text.rstrip().endswith("accepted")
    text, status = out("chisholm", "--drop-premise", "4")
    assert status == 1 and "rejected at line 7" in text
    doc = json.loads(out("chisholm", "--json")[0])
    assert doc["accepted"] and len(doc["lines"]) == 12
    assert doc["lines"][11]["depends_on"] == [1, 2, 6, 7]


def test_traces():
    text, status = out("traces", "fig1-contractnet", "--bound", "4", "--world", "n1")
    assert status == 0
    assert "(I,recognize)(I,announce)(P1,bid)(P2,bid)" in text
    doc = json.loads(out("traces", "fig1-contractnet", "--bound", "1", "--format", "json")[0])
    assert len(doc["traces"]) == 2


@pytest.mark.parametrize("argv", [
    ("lattice", "fig4"), ("lattice", "fig4", "--format", "dot"), ("lattice", "fig3", "--format", "json"),
    ("conflicts", "fig4"), ("conflicts", "fig4", "--format", "json"), ("chisholm", "--json"),
    ("validate", "fig4"), ("traces", "fig3", "--bound", "4"),
])
def test_deterministic(argv):
    assert run(list(argv)) == run(list(argv))


def test_main_writes(capsys):
    assert main(["eval", "fig3", "n3", "~p"]) == 0
    assert capsys.readouterr().out == "true\n"


def test_modelfile_errors():
    with pytest.raises(ModelFileError, match="missing 'model:'"):
        parse_model("[worlds]\nw\n")
    with pytest.raises(ModelFileError, match="unknown model kind"):
        parse_model("model: fuzzy\n")
    with pytest.raises(ModelFileError, match="does not belong"):
        parse_model("model: classical\n[worlds]\nw\n[valuation]\nw: p=1\n[norms]\n")
    with pytest.raises(ModelFileError, match=":5:"):
        parse_model("model: classical\n[worlds]\nw\n[access]\nw => v\n[valuation]\nw: p=1\n")


def test_classical_partial_valuation_is_reported():
    lm = parse_model("model: classical\n[worlds]\nw v\n[valuation]\nw: p=1\n")
    assert [v.kind for v in validate_classical(lm.classical.model, {})] == ["partial-valuation"]


def test_label_mismatch_reported(tmp_path):
    text = resources.files("knormas").joinpath("models/fig3.knm").read_text()
    p = tmp_path / "m.knm"
    p.write_text(text.replace("n1 & n2 & n3 ; expect: bot", "n1 & n2 & n3 ; expect: top"))
    text, status = out("validate", str(p))
    assert status == 1 and "label-mismatch" in text
