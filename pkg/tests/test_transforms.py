import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gjl.calculus import MP, Axiom, AxiomSchema as S, CalculusId, ConstantSpec, CSRule, Premise, check_derivation, derivation, instance
from gjl.generate import random_derivation
from gjl.syntax import App, Atom, Boxed, Const, Implies, Just, Var, star
from gjl.transforms import (
    LiftError,
    TransformError,
    apply_mp_with,
    deduction_transform,
    lift,
    translate_derivation,
)

x1, x2 = Var(1), Var(2)
p1, p2 = Atom(1), Atom(2)
TOTAL = ConstantSpec.total("gj")


def modus_ponens():
    return derivation(
        "gj", TOTAL, [p1, Implies(p1, p2)], [(p1, Premise(0)), (Implies(p1, p2), Premise(1)), (p2, MP(0, 1))]
    )


def test_deduction_on_single_premise():
    d = derivation("gj", None, [p1], [(p1, Premise(0))])
    e = deduction_transform(d, p1)
    assert e.premises == () and e.conclusion == Implies(p1, p1)
    assert check_derivation(e).ok


def test_deduction_through_modus_ponens():
    e = deduction_transform(modus_ponens(), Implies(p1, p2))
    res = check_derivation(e)
    assert res.ok
    assert e.premises == (p1,) and e.conclusion == Implies(Implies(p1, p2), p2)
    assert S.A5a in {s for _, s in res.schemas}


def test_deduction_round_trip():
    alpha = Implies(p1, p2)
    back = apply_mp_with(deduction_transform(modus_ponens(), alpha), alpha)
    assert check_derivation(back).ok and back.conclusion == p2


def test_deduction_rejects_bad_input():
    d = derivation("gj", None, [], [(p1, Premise(0))])
    with pytest.raises(TransformError):
        deduction_transform(d, p1)


def test_lift_premise_case():
    d = derivation("gj", TOTAL, [p1], [(p1, Premise(0))])
    t, e = lift(d, [x1])
    assert t == x1 and e.conclusion == Just(x1, p1)


def test_lift_modus_ponens():
    t, e = lift(modus_ponens(), [x1, x2])
    assert t == App(x2, x1)
    assert e.premises == (Just(x1, p1), Just(x2, Implies(p1, p2)))
    assert e.conclusion == Just(t, p2) and check_derivation(e).ok


def test_lift_single_axiom_uses_a_constant():
    ax = instance(S.A7, phi=p1)
    d = derivation("gj", TOTAL, [], [(ax, Axiom())])
    t, e = lift(d, [])
    assert isinstance(t, Const)
    assert e.conclusion == Just(t, ax) and isinstance(e.steps[-1].rule, CSRule)


def test_lift_needs_a_witness():
    ax = instance(S.A7, phi=p1)
    d = derivation("gj", ConstantSpec.empty("gj"), [], [(ax, Axiom())])
    with pytest.raises(LiftError):
        lift(d, [])


def test_translate_propositional_is_star_identity():
    d = derivation("gj", None, [p1, Implies(p1, p2)], modus_ponens().steps)
    tr = translate_derivation(d)
    assert tr.used_theorems == ()
    assert [s.formula for s in tr.derivation.steps] == [s.formula for s in d.steps]
    assert tr.derivation.calculus is CalculusId.G


def test_translate_records_application_and_cs_theorems():
    j = instance(S.J, t=x1, s=x2, phi=p1, psi=p2)
    csf = Just(Const(1), instance(S.A7, phi=p1))
    d = derivation("gj", TOTAL, [], [(j, Axiom()), (csf, CSRule())])
    tr = translate_derivation(d)
    assert star(j) in tr.used_theorems
    assert Implies(Boxed(Implies(p1, p2), x1), Implies(Boxed(p1, x2), Boxed(p2, App(x1, x2)))) == star(j)
    assert Boxed(instance(S.A7, phi=p1), Const(1)) in tr.used_theorems
    assert check_derivation(tr.derivation).ok


seeds = st.integers(0, 10**6)
calculi = st.sampled_from([c for c in CalculusId if c is not CalculusId.G])


@settings(max_examples=60, deadline=None)
@given(seeds, calculi)
def test_deduction_output_checks(seed, calc):
    rng = random.Random(seed)
    d = random_derivation(rng, calc, max_steps=6, n_premises=rng.randint(1, 2))
    alpha = d.premises[-1]
    e = deduction_transform(d, alpha)
    assert check_derivation(e).ok
    assert e.conclusion == Implies(alpha, d.conclusion)


@settings(max_examples=60, deadline=None)
@given(seeds, calculi)
def test_lift_output_checks(seed, calc):
    rng = random.Random(seed)
    d = random_derivation(rng, calc, max_steps=6)
    terms = [Var(i + 1) for i in range(len(d.premises))]
    t, e = lift(d, terms)
    assert check_derivation(e).ok
    assert e.conclusion == Just(t, d.conclusion)


@settings(max_examples=60, deadline=None)
@given(seeds, calculi)
def test_translation_checks_propositionally(seed, calc):
    rng = random.Random(seed)
    d = random_derivation(rng, calc, max_steps=8)
    tr = translate_derivation(d)
    assert check_derivation(tr.derivation).ok
    assert tr.derivation.conclusion == star(d.conclusion)
