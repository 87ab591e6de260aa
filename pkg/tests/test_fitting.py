import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gjl.calculus import AxiomSchema as S, ConstantSpec, instance
from gjl.fitting import (
    GJModel,
    ModelClass,
    SignatureError,
    UnverifiableError,
    check_closure,
    classify,
    close_signature,
    entails,
    eval_box,
    eval_world,
    respects_cs,
)
from gjl.generate import random_formula, random_model
from gjl.goedel import ONE, ZERO, residuum, tnorm
from gjl.syntax import BOT, App, Atom, Bang, Const, Implies, Just, Query, Sum, Var, justification_pairs, neg

import oracles

x1, x2 = Var(1), Var(2)
c1 = Const(1)
p1, p2 = Atom(1), Atom(2)


def one_world(r, e_p1=ONE, evidence=None, sig=()):
    return GJModel(
        worlds=("w",),
        r={("w", "w"): r},
        evidence=evidence or {},
        valuation={("w", 1): e_p1},
        signature=frozenset(sig),
    )


def test_box_examples():
    assert eval_box(one_world(ZERO, F(1, 3)), "w", p1) == ONE
    assert eval_box(one_world(ONE, F(1, 2)), "w", p1) == F(1, 2)
    m = GJModel(("a", "b"), {("a", "a"): 1, ("a", "b"): 1}, valuation={("a", 1): 1, ("b", 1): F(1, 3)})
    assert eval_box(m, "a", p1) == F(1, 3)


def test_eval_world_examples():
    m = one_world(ONE, evidence={(x1, p1, "w"): 1}, sig={(x1, p1)})
    assert eval_world(m, "w", BOT) == ZERO
    assert eval_world(m, "w", Just(x1, p1)) == ONE


def test_eval_world_rejects_pairs_outside_signature():
    m = one_world(ONE)
    with pytest.raises(SignatureError):
        eval_world(m, "w", Just(x1, p1))


def test_eval_world_rejects_unknown_world():
    with pytest.raises(KeyError):
        eval_world(one_world(ONE), "nowhere", p1)


def test_closure_examples():
    sig = {(x1, Implies(p1, p2)), (x2, p1), (App(x1, x2), p2)}
    assert check_closure(one_world(ONE, sig=sig)) == []
    ev = {(x1, Implies(p1, p2), "w"): 1, (x2, p1, "w"): 1, (App(x1, x2), p2, "w"): F(1, 2)}
    viol = check_closure(one_world(ONE, evidence=ev, sig=sig))
    assert len(viol) == 1
    assert viol[0].instance.condition == "i"
    ev = {(x1, p1, "w"): F(1, 2), (x2, p1, "w"): F(3, 4), (Sum(x1, x2), p1, "w"): F(3, 4)}
    sig = {(x1, p1), (x2, p1), (Sum(x1, x2), p1)}
    assert check_closure(one_world(ONE, evidence=ev, sig=sig)) == []


def test_sum_violation_reported():
    ev = {(x1, p1, "w"): F(1, 2), (x2, p1, "w"): F(3, 4), (Sum(x1, x2), p1, "w"): F(2, 3)}
    sig = {(x1, p1), (x2, p1), (Sum(x1, x2), p1)}
    viol = check_closure(one_world(ONE, evidence=ev, sig=sig))
    assert [v.instance.condition for v in viol] == ["ii"]


def test_classify_full_evidence_single_world():
    sig = close_signature({(x1, p1), (Bang(x1), Just(x1, p1))})
    c = classify(one_world(ONE, sig=sig))
    assert c.classes == frozenset(ModelClass)
    assert c.crisp


def test_full_evidence_breaks_strong_evidence_on_false_bodies():
    # E(?x1, ~x1:p1) = 1 while e(w, ~x1:p1) = 0
    sig = close_signature({(x1, p1), (Query(x1), neg(Just(x1, p1)))})
    c = classify(one_world(ONE, sig=sig))
    assert not c.conditions["strong_evidence"]
    assert ModelClass.GLP in c.classes
    assert ModelClass.GJ45 not in c.classes


def test_classify_fuzzy_reflexivity():
    c = classify(one_world(F(1, 2)))
    assert not c.crisp
    assert ModelClass.GJT not in c.classes


def test_classify_empty_accessibility():
    sig = {(x1, p1), (Bang(x1), Just(x1, p1))}
    ok = one_world(ZERO, sig=sig)
    c = classify(ok)
    assert c.conditions["transitive"] and c.conditions["monotone"]
    assert ModelClass.GJ4 in c.classes
    bad = one_world(ZERO, evidence={(Bang(x1), Just(x1, p1), "w"): F(1, 2), (x1, p1, "w"): 1}, sig=sig)
    c = classify(bad)
    assert c.conditions["transitive"] and c.conditions["monotone"]
    assert not c.conditions["positive"]
    assert ModelClass.GJ4 not in c.classes


def test_respects_cs_examples():
    f = Implies(p1, p1)
    cs = ConstantSpec.finite([Just(c1, f)], "gj")
    assert respects_cs(one_world(ONE), ConstantSpec.empty("gj"))
    m = GJModel(("a", "b"), signature={(c1, f)})
    assert respects_cs(m, cs)
    m = GJModel(("a", "b"), evidence={(c1, f, "b"): F(1, 2)}, signature={(c1, f)})
    assert not respects_cs(m, cs)
    with pytest.raises(UnverifiableError):
        respects_cs(GJModel(("a",)), cs)


def test_entails_examples():
    m = random_model(random.Random(1), "gj", {(x1, Implies(p1, p2)), (x2, p1), (App(x1, x2), p2)})
    assert entails([m], [p1], p1, "leq") == (True, None)
    assert entails([m], [p1], p1, "one") == (True, None)
    j = instance(S.J, t=x1, s=x2, phi=p1, psi=p2)
    assert entails([m], [], j, "one")[0]


def test_entails_witness():
    m = one_world(ONE, e_p1=F(1, 2))
    ok, witness = entails([m], [], p1, "one")
    assert not ok and witness == (0, "w")


def _pairs(fs):
    return justification_pairs(fs)


model_seeds = st.integers(0, 10**6)


@settings(max_examples=60, deadline=None)
@given(model_seeds)
def test_eval_world_matches_oracle(seed):
    rng = random.Random(seed)
    f = random_formula(rng, 3, 3, 0.3)
    m = random_model(rng, rng.choice(list(ModelClass)), _pairs([f]))
    for w in m.worlds:
        assert eval_world(m, w, f) == oracles.world(m, w, f)


@settings(max_examples=60, deadline=None)
@given(model_seeds)
def test_k_lemma(seed):
    rng = random.Random(seed)
    a, b = random_formula(rng, 2, 3, 0.2), random_formula(rng, 2, 3, 0.2)
    m = random_model(rng, "gj", _pairs([a, b]))
    for w in m.worlds:
        assert tnorm(eval_box(m, w, Implies(a, b)), eval_box(m, w, a)) <= eval_box(m, w, b)


@settings(max_examples=40, deadline=None)
@given(model_seeds)
def test_factivity_on_reflexive_models(seed):
    rng = random.Random(seed)
    t, phi = Var(1), random_formula(rng, 2, 3, 0.2)
    m = random_model(rng, "gjt", {(t, phi)})
    for w in m.worlds:
        assert eval_world(m, w, Implies(Just(t, phi), phi)) == ONE


@settings(max_examples=40, deadline=None)
@given(model_seeds)
def test_positive_introspection_on_gj4(seed):
    rng = random.Random(seed)
    t, phi = Var(1), random_formula(rng, 2, 3, 0.2)
    f = instance(S.PI, t=t, phi=phi)
    m = random_model(rng, "gj4", _pairs([f]))
    assert all(eval_world(m, w, f) == ONE for w in m.worlds)


@settings(max_examples=40, deadline=None)
@given(model_seeds)
def test_negative_introspection_on_gj45(seed):
    rng = random.Random(seed)
    t, phi = Var(1), random_formula(rng, 2, 3, 0.2)
    f = instance(S.NI, t=t, phi=phi)
    m = random_model(rng, "gj45", _pairs([f]))
    assert all(eval_world(m, w, f) == ONE for w in m.worlds)


@settings(max_examples=60, deadline=None)
@given(model_seeds)
def test_strong_evidence_inequality_is_equality(seed):
    rng = random.Random(seed)
    m = random_model(rng, rng.choice(list(ModelClass)), _pairs([random_formula(rng, 2, 3, 0.4)]))
    for t, phi in m.signature:
        for w in m.worlds:
            e, v = m.E(t, phi, w), eval_world(m, w, Just(t, phi))
            assert (e <= v) == (e == v)


@settings(max_examples=60, deadline=None)
@given(model_seeds)
def test_leq_entailment_implies_one_entailment(seed):
    rng = random.Random(seed)
    prem = [random_formula(rng, 2, 2, 0.2) for _ in range(rng.randint(0, 2))]
    goal = random_formula(rng, 2, 2, 0.2)
    models = [random_model(rng, "gj", _pairs(prem + [goal])) for _ in range(3)]
    if entails(models, prem, goal, "leq")[0]:
        assert entails(models, prem, goal, "one")[0]


def test_residuum_box_with_null_accessibility():
    m = one_world(ZERO, e_p1=ZERO)
    assert eval_box(m, "w", p1) == residuum(ZERO, ZERO)
