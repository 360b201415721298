import pytest

import linstate

PROG = "(term fg (let (x (geff deref star)) (case (return x) (a (geff flip star)) (b (return star)))))"

GOOD_COMODEL = """(comodel (model set) (state 2)
  (op deref ((star 0) ((inl star) 0)) ((star 1) ((inr star) 1)))
  (op flip ((star 0) (star 1)) ((star 1) (star 0))))"""

BAD_COMODEL = """(comodel (model set) (state 2)
  (op deref ((star 0) ((inl star) 0)) ((star 1) ((inl star) 1)))
  (op flip ((star 0) (star 1)) ((star 1) (star 0))))"""


def test_check_linear_identity():
    j = linstate.check("(term ecbv (llam (z S) z))")
    assert j == {"mode": "value", "type": "(lolli S S)"}


def test_check_program_with_effects():
    j = linstate.check(PROG, theory="bit-store")
    assert j == {"mode": "producer", "type": "unit"}


def test_snapback_is_a_linearity_error():
    snapback = ("(term ecbv (llam (z (tensor unit S)) (lettens (x s z)"
                " (lettens (y s2 (tens x s)) (tens y s)))))")
    with pytest.raises(linstate.LinstateError, match="LinearityViolation"):
        linstate.check(snapback)


def test_translate_sps_produces_enriched_judgement():
    image = linstate.translate(PROG, mode="sps", theory="bit-store")
    j = linstate.check(image, theory="bit-store")
    assert j["mode"] == "computation"
    assert j["type"] == "(tensor unit S)"


def test_translate_cps_produces_continuation_judgement():
    image = linstate.translate(PROG, mode="cps", theory="bit-store")
    j = linstate.check(image, theory="bit-store")
    assert j == {"mode": "computation", "type": "R"}


def test_roundtrip_readback_is_equal():
    r = linstate.roundtrip(PROG, theory="bit-store")
    assert r["verdict"] == "equal"
    assert linstate.check(r["readback"], theory="bit-store")["mode"] == "producer"


def test_untranslate_inverts_the_image():
    image = linstate.translate(PROG, mode="sps", theory="bit-store")
    normal = linstate.normalize(image)["term"]
    back = linstate.untranslate(normal, theory="bit-store")
    d = linstate.decide_equal(back, PROG, theory="bit-store")
    assert d["verdict"] == "equal"


def test_normalize_trace_names_rules():
    eta = "(term fg (context (f (parr unit unit))) (lam (x unit) (app f x)))"
    r = linstate.normalize(eta, trace=True)
    assert r["term"] == "(term fg (context (f (parr unit unit))) f)"
    assert [s["rule"] for s in r["steps"]] == ["eta-lam"]


def test_decide_equal_reports_a_witness():
    deref = "(term fg (geff deref star))"
    flipped = "(term fg (let (u (geff flip star)) (geff deref star)))"
    d = linstate.decide_equal(deref, flipped, theory="bit-store")
    assert d["verdict"] == "unequal"
    assert "star" in d["witness"]


def test_evaluate_at_state():
    assert linstate.evaluate(PROG, model="bit-store", state=0) == "(star, 1)"
    assert linstate.evaluate(PROG, model="bit-store", state=1) == "(star, 1)"


def test_evaluate_with_environment():
    open_term = ("(term fg (context (x (sum unit unit)))"
                 " (case (return x) (a (geff flip star)) (b (return star))))")
    got = linstate.evaluate(open_term, model="bit-store", state=0, env="((x (inl star)))")
    assert got == "(star, 1)"


def test_check_theory_verdicts():
    good = linstate.check_theory("bit-store", GOOD_COMODEL)
    assert good["ok"] and len(good["equations"]) == 4
    bad = linstate.check_theory("bit-store", BAD_COMODEL)
    assert not bad["ok"]
    failing = [e for e in bad["equations"] if not e["pass"]]
    assert failing and failing[0]["counterexample"]
