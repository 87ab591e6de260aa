from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gjl.calculus import PROPOSITIONAL_SCHEMAS, SCHEMA_VARS, instance
from gjl.goedel import (
    ONE,
    ZERO,
    Assignment,
    eval_prop,
    eval_prop_set,
    format_value,
    iff_val,
    neg,
    oplus,
    parse_value,
    residuum,
    tnorm,
)
from gjl.syntax import Atom, Implies, Just, Var, parse_formula

import oracles
from strategies import prop_formulas, values

p1, p2 = Atom(1), Atom(2)


def test_tnorm_examples():
    assert tnorm(ONE, F(1, 2)) == F(1, 2)
    assert tnorm(F(1, 3), F(1, 2)) == F(1, 3)
    assert tnorm(ZERO, F(2, 3)) == ZERO


def test_residuum_examples():
    assert residuum(F(1, 2), F(1, 3)) == F(1, 3)
    assert residuum(F(1, 3), F(1, 2)) == ONE
    assert residuum(F(5, 7), F(5, 7)) == ONE


def test_derived_operations():
    assert neg(ZERO) == ONE
    assert neg(F(1, 9)) == ZERO
    assert oplus(F(1, 4), F(3, 4)) == F(3, 4)
    assert iff_val(F(1, 2), F(1, 2)) == ONE
    assert iff_val(F(1, 2), F(1, 3)) == F(1, 3)


def test_eval_prop_examples():
    assert eval_prop(Assignment({}), Implies(p1, p1)) == ONE
    a = Assignment({p1: F(1, 2), p2: F(1, 3)})
    assert eval_prop(a, Implies(p1, p2)) == F(1, 3)
    assert eval_prop(a, parse_formula("bot -> p1")) == ONE


def test_eval_prop_set_examples():
    assert eval_prop_set(Assignment({}), []) == ONE
    assert eval_prop_set(Assignment({p1: F(1, 2)}), [p1]) == F(1, 2)
    a = Assignment({p1: F(1, 2), p2: F(1, 4)})
    assert eval_prop_set(a, [p1, Implies(p1, p2)]) == F(1, 4)


def test_eval_prop_rejects_justification():
    with pytest.raises(TypeError):
        eval_prop(Assignment({}), Just(Var(1), p1))


@pytest.mark.parametrize("text,v", [("0", ZERO), ("1", ONE), ("3/4", F(3, 4)), ("2/4", F(1, 2))])
def test_value_text(text, v):
    assert parse_value(text) == v
    assert parse_value(format_value(v)) == v


@pytest.mark.parametrize("bad", ["5/4", "-1/2", "1/0", "0.5", "x"])
def test_value_text_rejects(bad):
    with pytest.raises(ValueError):
        parse_value(bad)


@given(values, values, values)
def test_adjunction(x, y, z):
    assert (tnorm(x, y) <= z) == (x <= residuum(y, z))


@given(values, values, values, values)
def test_monotonicity(x, x2, y, y2):
    x, x2 = sorted((x, x2))
    y, y2 = sorted((y, y2))
    assert tnorm(x, y) <= tnorm(x2, y2)
    assert residuum(x2, y) <= residuum(x, y2)


@given(prop_formulas, st.dictionaries(st.integers(1, 4), values), values)
def test_eval_prop_matches_oracle(f, raw, default):
    vals = {Atom(k): v for k, v in raw.items()}
    assert eval_prop(Assignment(vals, default), f) == oracles.prop(vals, default, f)


@pytest.mark.parametrize("schema", PROPOSITIONAL_SCHEMAS, ids=str)
@given(parts=st.tuples(prop_formulas, prop_formulas, prop_formulas), raw=st.lists(values, min_size=4, max_size=4))
def test_propositional_axioms_are_tautologies(schema, parts, raw):
    names = SCHEMA_VARS[schema][0]
    f = instance(schema, **dict(zip(names, parts)))
    a = Assignment({Atom(i + 1): v for i, v in enumerate(raw)})
    assert oracles.prop(a.values, a.default, f) == ONE
    assert eval_prop(a, f) == ONE
