import json

import pytest

from fsrkit import proofs
from fsrkit.corpus import fsr_corpus, pa_corpus
from fsrkit.machine import apply, compile_lambda, pair, tup
from fsrkit.pole import Pole, member, test_poles as all_test_poles
from fsrkit.proofs import (EMPTY_POLE, Builder, Derivation, ExtractionError, Node,
                           axiom_contracts, axiom_realisers, check, extract,
                           extract_FSR, extract_PA, load_derivation, theory_name)
from fsrkit.semantics import eval_LR, realises_L, stage_models
from fsrkit.syntax import Num, Tatom, encode, parse_formula
from fsrkit.transforms import explicit_realiser

F = parse_formula


def single(conclusion, rule, schema=None):
    return Derivation([Node("n0", F(conclusion), rule, schema)])


def reflexivity_gen() -> Derivation:
    b = Builder("forall-refl")
    b.gen(b.add("x=x", "EqAxiom", "refl"), "x")
    return b.build()


# ---------------------------------------------------------------- checking


def test_one_node_propositional_axiom():
    assert check(single("0=0 -> (0=S(0) -> 0=0)", "PropAxiom", "K"), "PA")


def test_wrong_schema_is_reported_with_its_path():
    res = check(single("0=0 -> (0=S(0) -> 0=S(0))", "PropAxiom", "K"), "PA")
    assert not res and res.node == "n0" and res.path == ("n0",)


def test_mp_and_gen():
    assert check(reflexivity_gen(), "PA")
    b = Builder()
    b.identity(F("0=0"))
    assert check(b.build(), "PA")


def test_necr_needs_a_sentence():
    d = Derivation([
        Node("n0", F("x=x"), "EqAxiom", "refl"),
        Node("n1", Tatom(Num(0), Num(encode(F("x=x")))), "NECR", None, ("n0",)),
    ])
    res = check(d, "FSR")
    assert not res and res.node == "n1"


def test_reflection_is_for_L_sentences_only():
    A = F("Pole(0) -> Pole(0)")
    d = Derivation([
        Node("n0", F("0=0"), "EqAxiom", "refl"),
        Node("n1", Tatom(Num(0), Num(encode(A))), "NECR", None, ("n0",)),
        Node("n2", A, "Reflection", None, ("n1",)),
    ])
    # the premise is taken as given; only the Reflection node is under test
    with pytest.raises(proofs.SchemaMismatch, match="L-sentence"):
        proofs._check_node(d, d.by_id["n2"], "FSR+", {"n0", "n1"})
    top = Tatom(Num(0), Num(encode(F("0=0"))))
    ok = Derivation([d.nodes[0], Node("n1", top, "NECR", None, ("n0",)),
                     Node("n2", F("0=0"), "Reflection", None, ("n1",))])
    proofs._check_node(ok, ok.by_id["n2"], "FSR+", {"n0", "n1"})


def test_rules_are_scoped_by_theory():
    d = Derivation([Node("n0", EMPTY_POLE, "EmptyPole")])
    assert check(d, "FSR∅")
    assert not check(d, "FSR")
    assert theory_name("FSR0") == "FSR∅"
    with pytest.raises(ValueError):
        theory_name("ZF")


def test_corpus_derivations_check():
    assert len(pa_corpus()) == 25
    for d in pa_corpus():
        assert check(d, "PA"), d.name
    for d, theory in fsr_corpus():
        assert check(d, theory), d.name


def test_json_round_trip(tmp_path):
    d = reflexivity_gen()
    path = tmp_path / "d.json"
    path.write_text(json.dumps(d.to_json("PA")))
    back, theory = load_derivation(path)
    assert theory == "PA"
    assert [n.conclusion for n in back.nodes] == [n.conclusion for n in d.nodes]


def test_duplicate_ids_are_rejected():
    with pytest.raises(ValueError):
        Derivation([Node("n", F("0=0"), "EqAxiom", "refl"), Node("n", F("0=0"), "EqAxiom", "refl")])


# ---------------------------------------------------------------- extraction


def by_name(name):
    return next(d for d in pa_corpus() if d.name == name)


def test_extract_identity_on_a_true_equation():
    b = Builder()
    b.identity(F("0=0"))
    cert = extract_PA(b.build())
    assert realises_L(Pole.empty(), cert.code, F("0=0 -> 0=0")).is_true


def test_extract_universal_reflexivity():
    cert = extract_PA(reflexivity_gen())
    assert realises_L(Pole.empty(), cert.code, F("forall x. x=x"), bound=50).is_true


def test_extract_vacuous_implication():
    cert = extract_PA(by_name("identity-false-atom"))
    assert realises_L(Pole.empty(), cert.code, F("0=S(0) -> 0=S(0)")).is_true


def test_extraction_refuses_unchecked_derivations():
    with pytest.raises(ExtractionError):
        extract_PA(single("0=S(0)", "EqAxiom", "refl"))


def test_extraction_certificate_has_a_trace():
    cert = extract_PA(by_name("symmetry"))
    assert set(cert.trace) == {n.id for n in by_name("symmetry").nodes}
    assert json.loads(json.dumps(cert.to_json()))["realiser-code"] == str(cert.code)


# ---------------------------------------------------------------- axiom realisers


def test_pole_empty_realiser_is_never_refuted():
    contract = axiom_contracts()["rPoleEmpty"]
    for p in all_test_poles():
        assert not eval_LR(stage_models(p, 1, bound=8)[1], contract).is_false


def test_ax_pole_realiser_passes_a_hand_built_refuter_through():
    r = axiom_realisers()["rAxPole"]
    u = pair(compile_lambda("λa. 5"), 0)  # a member of seed {5}
    assert apply(r, u) == u
    assert member(Pole.seeded({5}), pair(r, u)).is_true
    w = tup(7, 8, 9)
    assert apply(r, w) == w and member(Pole.full(), pair(r, w)).is_true


def test_p1_realiser_on_empty_pole():
    m = stage_models(Pole.empty(), 2, bound=8)[2]
    assert eval_LR(m, axiom_contracts()["rP1"]).is_true


def test_contracts_hold_at_stable_stages():
    models = stage_models(Pole.empty(), 2, bound=8)
    for name, contract in axiom_contracts().items():
        assert eval_LR(models[2], contract).is_true, name


# ---------------------------------------------------------------- FSR extraction


def fsr(name):
    return next((d, t) for d, t in fsr_corpus() if d.name == name)


def test_necr_certificate_realises_the_T_atom():
    d, theory = fsr("NECR")
    cert = extract_FSR(d, theory)
    target = explicit_realiser(Num(cert.code), d.conclusion)
    for m in stage_models(Pole.empty(), 3, bound=6)[2:]:
        assert not eval_LR(m, target).is_false


def test_gcr_axiom_leaf_uses_the_axiom_realiser():
    d, theory = fsr("Imp")
    cert = extract(d, theory)
    assert "R_Imp" in cert.source and "R_Imp" in cert.params


def test_empty_pole_axiom_extracts_to_its_realiser():
    d, theory = fsr("EmptyPole")
    assert extract(d, theory).code == axiom_realisers()["rPoleEmpty"]


def test_fsr_extraction_rejects_other_theories():
    d, _ = fsr("EmptyPole")
    with pytest.raises(ExtractionError):
        extract_FSR(d, "FSR+")
