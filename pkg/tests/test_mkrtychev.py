import random
from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from gjl.calculus import ConstantSpec
from gjl.fitting import eval_world
from gjl.generate import random_formula, random_mkrtychev_model
from gjl.goedel import ONE, ZERO
from gjl.mkrtychev import (
    GMModel,
    MkrtychevClass,
    classify_m,
    entails_m,
    eval_m,
    fitting_of_mkrtychev,
    respects_cs_m,
)
from gjl.syntax import BOT, Atom, Const, Implies, Just, Query, Var, justification_pairs, neg

import oracles

x1 = Var(1)
c1 = Const(1)
p1 = Atom(1)


def test_eval_m_examples():
    m = GMModel(evidence={(x1, p1): F(2, 3)}, signature={(x1, p1)})
    assert eval_m(m, BOT) == ZERO
    assert eval_m(m, Just(x1, p1)) == F(2, 3)


def test_factivity_on_gmt():
    m = GMModel(evidence={(x1, p1): F(1, 2)}, valuation={1: F(3, 4)}, signature={(x1, p1)})
    assert MkrtychevClass.GMT in classify_m(m).classes
    assert eval_m(m, Implies(Just(x1, p1), p1)) == ONE


def test_full_evidence_is_in_every_class():
    m = GMModel(signature={(x1, p1)}, evidence_default=ONE, valuation_default=ONE)
    assert classify_m(m).classes == frozenset(MkrtychevClass)


def test_evidence_above_value_is_not_factive():
    m = GMModel(evidence={(x1, p1): F(1, 2)}, valuation={1: F(1, 4)}, signature={(x1, p1)})
    assert MkrtychevClass.GMT not in classify_m(m).classes


def test_zero_evidence_demands_full_negative_evidence():
    key = (Query(x1), neg(Just(x1, p1)))
    low = GMModel(evidence={(x1, p1): ZERO, key: F(9, 10)}, signature={(x1, p1), key})
    assert not classify_m(low).conditions["negative"]
    high = GMModel(evidence={(x1, p1): ZERO, key: ONE}, signature={(x1, p1), key})
    assert classify_m(high).conditions["negative"]


def test_negative_class_needs_positive_condition():
    m = GMModel(evidence={(x1, p1): F(1, 2)}, evidence_default=ONE, signature={(x1, p1)})
    c = classify_m(m)
    assert MkrtychevClass.GM45 in c.classes and MkrtychevClass.GMT45 not in c.classes


def test_embedding_examples():
    m = GMModel(evidence={(x1, p1): F(1, 2)}, signature={(x1, p1)})
    fm = fitting_of_mkrtychev(m)
    assert eval_m(m, Just(x1, p1)) == eval_world(fm, "w", Just(x1, p1)) == F(1, 2)
    assert eval_m(m, BOT) == eval_world(fm, "w", BOT) == ZERO


def test_respects_cs_m_examples():
    f = Implies(p1, p1)
    cs = ConstantSpec.finite([Just(c1, f)], "gj")
    assert respects_cs_m(GMModel(), ConstantSpec.empty("gj"))
    assert respects_cs_m(GMModel(signature={(c1, f)}), cs)
    assert not respects_cs_m(GMModel(evidence={(c1, f): F(9, 10)}, signature={(c1, f)}), cs)


def test_entails_m_witness():
    m = GMModel(valuation={1: F(1, 2)})
    assert entails_m([m], [p1], p1) == (True, None)
    assert entails_m([GMModel(valuation={1: ONE}), m], [], p1, "one") == (False, 1)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_eval_m_matches_oracle_and_embedding(seed):
    rng = random.Random(seed)
    f = random_formula(rng, 3, 3, 0.35)
    m = random_mkrtychev_model(rng, rng.choice(list(MkrtychevClass)), justification_pairs([f]))
    assert eval_m(m, f) == oracles.world_free(m, f)
    assert eval_m(m, f) == eval_world(fitting_of_mkrtychev(m), "w", f)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_generated_models_land_in_requested_class(seed):
    rng = random.Random(seed)
    cls = rng.choice(list(MkrtychevClass))
    f = random_formula(rng, 2, 3, 0.4)
    m = random_mkrtychev_model(rng, cls, justification_pairs([f]))
    assert cls in classify_m(m).classes
