import os
import pathlib

import pytest

import semunits

FIXTURES = pathlib.Path(
    os.environ.get("SEMUNITS_FIXTURES", pathlib.Path(__file__).resolve().parents[2] / "tests" / "fixtures")
)


def read(name):
    return (FIXTURES / name).read_text()


def process(name, seed=1):
    return semunits.process(read(name), read("schemas.sus"), read("catalog.txt"), seed=seed)


def test_fig7_is_one_statement_unit():
    g = process("fig07.trig")
    units = g.statement_units()
    assert len(units) == 1
    assert len(units[0]["triples"]) == 1
    assert g.summary()["statement_units"] == "1"


def test_fig16_three_contexts():
    g = process("fig16.trig")
    assert g.summary()["compound.ContextUnit"] == "3"
    contexts = [c for c in g.compound_units() if c["class"].endswith("ContextUnit")]
    assert len(contexts) == 3


def test_seeded_runs_are_identical():
    assert process("fig16.trig").trig() == process("fig16.trig").trig()
    assert semunits.mint_upri(seed=5) == semunits.mint_upri(seed=5)
    assert semunits.mint_upri() != semunits.mint_upri()


def test_thumb_default_is_retracted():
    rule = "has-part(?x, thumb) :- hand(?x), not lacks-part(?x, thumb).\n"
    (before,) = semunits.stable_models(rule + "hand(h).")
    assert "has-part(h, thumb)" in before
    (after,) = semunits.stable_models(rule + "hand(h).\nlacks-part(h, thumb).")
    assert "has-part(h, thumb)" not in after


def test_translation_and_alignment():
    g = process("worked_hand.trig")
    r = g.reason(read("rules.lp"), read("patterns.txt"))
    assert "owl:SubClassOf(fma:Hand, owl:SomeValuesFrom(has-part, Thumb))" in r["axioms"]
    report = semunits.align(g, process("worked_hand.trig", seed=2))
    assert report and all(line.split("\t")[3] == "1" for line in report.splitlines())


def test_policy_hides_locations():
    g = process("endangered.trig")
    public = g.visible(read("policy.txt"))
    curator = g.visible(read("policy.txt"), {"role": "curator"})
    assert "Sierra Morena" in public
    assert public.count(":locatedAt") < curator.count(":locatedAt")


def test_nanopublications_and_labels():
    g = process("fig09a.trig")
    trig = g.nanopublications("https://orcid.org/0000-0002-0000-0001", "2022-06-29", now="2026-01-01")
    assert "nschema#hasAssertion" in trig or "np:hasAssertion" in trig
    assert any("right hand" in label for _, label in g.labels())


def test_errors_raise():
    with pytest.raises(semunits.SemunitsError, match="blank"):
        semunits.process("_:b <http://example.org/p> <http://example.org/o> .", syntax="nquads")
    with pytest.raises(ValueError):
        semunits.process("", syntax="turtle")
