"""Acceptance checks at full sample size.

Each check prints one line ``[PASS]`` or ``[FAIL]`` with its counts, runtime and
time limit, then asserts both correctness and the time limit.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from gjl.calculus import CalculusId, ConstantSpec, check_derivation
from gjl.canonical import build_fragment, strong_evidence_check, required_atoms, theorem_fragment, truth_lemma_check
from gjl.decide import ConsequenceQuery, check_leq_equals_one, conservativity_countermodel, decide_consequence, grid_oracle
from gjl.fitting import ModelClass, classify, close_signature, eval_box, eval_world
from gjl.generate import (
    induced_assignment,
    random_derivation,
    random_formula,
    random_instance,
    random_mkrtychev_model,
    random_model,
    random_star_formula,
    random_value,
)
from gjl.goedel import ONE, eval_prop, residuum, tnorm
from gjl.mkrtychev import MkrtychevClass, classify_m, entails_m, eval_m, fitting_of_mkrtychev
from gjl.syntax import BOT, And, Atom, Implies, Just, Var, justification_pairs, star, subformula_closure, unstar
from gjl.transforms import lift, translate_derivation

JUST_CALCULI = [c for c in CalculusId if c is not CalculusId.G]


@pytest.fixture
def report(capsys):
    def emit(name, failures, detail, elapsed, limit):
        ok = failures == 0 and elapsed < limit
        with capsys.disabled():
            tag = "PASS" if ok else "FAIL"
            print(f"\n[{tag}] {name}: {detail}, {failures} failures ({elapsed:.1f}s, limit {limit}s)")
        assert failures == 0, f"{name}: {failures} failures"
        assert elapsed < limit, f"{name}: {elapsed:.1f}s exceeds {limit}s"

    return emit


def test_residuum_adjunction(report):
    rng = random.Random(101)
    start = time.perf_counter()
    bad = 0
    for _ in range(100_000):
        x, y, z = random_value(rng), random_value(rng), random_value(rng)
        if (tnorm(x, y) <= z) != (x <= residuum(y, z)):
            bad += 1
    report("residuum adjunction", bad, "100000 triples", time.perf_counter() - start, 5)


def test_monotonicity_lemma(report):
    rng = random.Random(102)
    start = time.perf_counter()
    bad = 0
    for _ in range(100_000):
        x, x2 = sorted((random_value(rng), random_value(rng)))
        y, y2 = sorted((random_value(rng), random_value(rng)))
        clauses = (
            tnorm(x, y) <= tnorm(x2, y),
            tnorm(x, y) <= tnorm(x, y2),
            residuum(x2, y) <= residuum(x, y),
            residuum(x, y) <= residuum(x, y2),
        )
        bad += not all(clauses)
    report("t-norm monotonicity (4 clauses)", bad, "100000 tuples", time.perf_counter() - start, 5)


def test_axiom_validity(report):
    # 200 instances per schema, each evaluated at every world of 50 models
    # drawn from every class whose calculus has the schema; the instances of
    # one schema share a signature so one model serves a batch of 20
    rng = random.Random(103)
    start = time.perf_counter()
    bad = checked = 0
    schemas = CalculusId.GJT45.schemas
    for schema in schemas:
        classes = [c for c in ModelClass if schema in c.calculus.schemas]
        instances = [random_instance(rng, schema) for _ in range(200)]
        for lo in range(0, 200, 20):
            batch = instances[lo:lo + 20]
            sig = close_signature(justification_pairs(batch))
            for k in range(50):
                m = random_model(rng, classes[k % len(classes)], sig)
                for f in batch:
                    checked += 1
                    bad += any(eval_world(m, w, f) != ONE for w in m.worlds)
    detail = f"{len(schemas)} schemas x 200 instances x 50 models ({checked} instance-model pairs)"
    report("axiom validity", bad, detail, time.perf_counter() - start, 60)


def test_k_lemma(report):
    rng = random.Random(104)
    start = time.perf_counter()
    bad = 0
    for _ in range(10_000):
        a, b = random_formula(rng, 2, 3, 0.2), random_formula(rng, 2, 3, 0.2)
        m = random_model(rng, rng.choice(list(ModelClass)), justification_pairs([a, b]))
        w = rng.choice(m.worlds)
        if tnorm(eval_box(m, w, Implies(a, b)), eval_box(m, w, a)) > eval_box(m, w, b):
            bad += 1
    report("K inequality", bad, "10000 (model, world, phi, psi) tuples", time.perf_counter() - start, 30)


def test_soundness(report):
    rng = random.Random(105)
    start = time.perf_counter()
    bad = 0
    for calc in JUST_CALCULI:
        cls = ModelClass.of(calc)
        cs = ConstantSpec.total(calc)
        for _ in range(100):
            d = random_derivation(rng, calc, cs)
            if not check_derivation(d).ok:
                bad += 1
                continue
            pairs = justification_pairs(list(d.premises) + [s.formula for s in d.steps])
            for _ in range(20):
                m = random_model(rng, cls, pairs, cs=cs)
                for w in m.worlds:
                    lo = min([eval_world(m, w, p) for p in d.premises], default=ONE)
                    bad += lo > eval_world(m, w, d.conclusion)
    detail = f"{len(JUST_CALCULI)} calculi x 100 derivations x 20 models"
    report("soundness", bad, detail, time.perf_counter() - start, 120)


def test_star_bijection_and_translation(report):
    rng = random.Random(106)
    start = time.perf_counter()
    bad = 0
    for _ in range(10_000):
        f = random_formula(rng, 3, 3, 0.3, term_depth=2)
        g = random_star_formula(rng, 3, 3)
        bad += unstar(star(f)) != f
        bad += star(unstar(g)) != g
    for k in range(100):
        d = random_derivation(rng, JUST_CALCULI[k % len(JUST_CALCULI)])
        tr = translate_derivation(d)
        ok = check_derivation(tr.derivation).ok and tr.derivation.conclusion == star(d.conclusion)
        bad += not ok
    detail = "10000 round trips each way, 100 translated derivations"
    report("star bijection and translation", bad, detail, time.perf_counter() - start, 30)


def test_lifting(report):
    rng = random.Random(107)
    start = time.perf_counter()
    bad = 0
    for k in range(200):
        calc = JUST_CALCULI[k % len(JUST_CALCULI)]
        d = random_derivation(rng, calc, ConstantSpec.total(calc), max_steps=6)
        terms = [Var(i + 1) for i in range(len(d.premises))]
        t, e = lift(d, terms)
        ok = check_derivation(e).ok and e.conclusion == Just(t, d.conclusion)
        ok = ok and e.premises == tuple(Just(x, p) for x, p in zip(terms, d.premises))
        bad += not ok
    report("lifting", bad, "200 derivations of at most 6 steps", time.perf_counter() - start, 30)


def _formulas_up_to(depth, leaves):
    layers = [list(leaves)]
    for _ in range(depth):
        prev = layers[-1]
        layers.append(list(leaves) + [op(a, b) for op in (And, Implies) for a in prev for b in prev])
    return layers


def exhaustive_queries():
    """All queries over p1, p2 and bot: goals of depth at most 3 (counting an
    atom as depth 1) under no premise or one premise of depth at most 2."""
    layers = _formulas_up_to(2, [Atom(1), Atom(2), BOT])
    goals = layers[2]
    premise_sets = [()] + [(p,) for p in layers[1]]
    for prem, goal in itertools.product(premise_sets, goals):
        for mode in ("one", "leq"):
            yield ConsequenceQuery(prem, goal, mode)


def _agree(q):
    n = len(q.atoms())
    a = decide_consequence(q)
    b = grid_oracle(q, n + 1)
    if a.valid != b.valid:
        return False
    if a.valid:
        return True
    lo = min([eval_prop(a.countermodel, p) for p in q.premises], default=ONE)
    g = eval_prop(a.countermodel, q.goal)
    return (lo > g) if q.mode == "leq" else (lo == ONE and g < ONE)


def test_decision_equivalence(report):
    rng = random.Random(108)
    start = time.perf_counter()
    bad = exhaustive = 0
    for q in exhaustive_queries():
        exhaustive += 1
        bad += not _agree(q)
    sampled = 0
    while sampled < 10_000:
        prem = tuple(random_formula(rng, 3, 3, 0.0) for _ in range(rng.randint(0, 2)))
        q = ConsequenceQuery(prem, random_formula(rng, 3, 3, 0.0), rng.choice(("one", "leq")))
        if len(q.atoms()) != 3:
            continue
        sampled += 1
        bad += not _agree(q)
    detail = f"{exhaustive} exhaustive queries with at most 2 atoms, {sampled} random 3-atom queries"
    report("decide vs grid oracle", bad, detail, time.perf_counter() - start, 300)


def test_mode_collapse(report):
    rng = random.Random(109)
    start = time.perf_counter()
    queries = []
    for _ in range(1000):
        prem = tuple(random_formula(rng, 3, 3, 0.0) for _ in range(rng.randint(0, 3)))
        queries.append(ConsequenceQuery(prem, random_formula(rng, 3, 3, 0.0)))
    bad = len(check_leq_equals_one(queries))
    report("leq and one consequence agree", bad, "1000 random queries", time.perf_counter() - start, 60)


def test_truth_lemma_on_fragments(report):
    rng = random.Random(110)
    start = time.perf_counter()
    bad = assignments = formulas = evidence = 0
    while assignments < 100:
        cls = rng.choice(list(ModelClass))
        fs = [random_formula(rng, 3, 3, 0.35) for _ in range(3)]
        pairs = justification_pairs(fs)
        theorems, rel = theorem_fragment(pairs, cls.calculus)
        covered = subformula_closure(fs)
        for f in fs:
            rel = rel | required_atoms(f)
        m = random_model(rng, cls, pairs)
        evals = [induced_assignment(m, w, rel) for w in m.worlds]
        frag = build_fragment(evals, theorems, rel)
        assignments += len(evals)
        for w in frag.worlds:
            for f in covered:
                formulas += 1
                bad += not truth_lemma_check(frag, w, f)
            for t, body in frag.model.signature:
                evidence += 1
                bad += not strong_evidence_check(frag, w, t, body)
    detail = f"{assignments} assignments, {formulas} formula checks, {evidence} evidence checks"
    report("truth lemma and strong evidence", bad, detail, time.perf_counter() - start, 60)


def test_conservativity(report):
    rng = random.Random(111)
    start = time.perf_counter()
    bad = found = 0
    fitting_classes = {ModelClass.GJ, ModelClass.GJT, ModelClass.GJ4, ModelClass.GLP}
    while found < 100:
        prem = tuple(random_formula(rng, 2, 3, 0.0) for _ in range(rng.randint(0, 2)))
        goal = random_formula(rng, 3, 3, 0.0)
        res = decide_consequence(ConsequenceQuery(prem, goal))
        if res.valid:
            continue
        found += 1
        sig = close_signature(justification_pairs([random_formula(rng, 2, 3, 0.6) for _ in range(3)]))
        m = conservativity_countermodel(res.countermodel, "fitting", sig)
        c = classify(m)
        refuted = all(eval_world(m, "w", p) == ONE for p in prem) and eval_world(m, "w", goal) < ONE
        bad += not (fitting_classes <= c.classes and refuted)
        g = conservativity_countermodel(res.countermodel, "mkrtychev", sig)
        ok = MkrtychevClass.GM45 in classify_m(g).classes and not entails_m([g], prem, goal, "one")[0]
        bad += not ok
    detail = "100 non-consequences refuted in GJ, GJT, GJ4, GLP and GM45"
    report("conservativity", bad, detail, time.perf_counter() - start, 60)


def test_mkrtychev_embedding(report):
    rng = random.Random(112)
    start = time.perf_counter()
    bad = 0
    for _ in range(10_000):
        f = random_formula(rng, 3, 3, 0.35)
        m = random_mkrtychev_model(rng, rng.choice(list(MkrtychevClass)), justification_pairs([f]))
        bad += eval_m(m, f) != eval_world(fitting_of_mkrtychev(m), "w", f)
    report("Mkrtychev embedding", bad, "10000 random formulas", time.perf_counter() - start, 10)


def test_exhaustive_suite_size():
    layers = _formulas_up_to(2, [Atom(1), Atom(2), BOT])
    assert [len(x) for x in layers] == [3, 21, 885]
    assert Fraction(1) == ONE
