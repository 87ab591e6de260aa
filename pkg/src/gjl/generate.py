"""Seeded random generators for terms, formulas, derivations, assignments and models.

Model generators return models verified to lie in the requested class; they
repair a random draw by raising evidence values to satisfy lower-bound
conditions and, where strong evidence or factivity is required, capping them,
and fall back to a construction that is in the class by design.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Optional

from .calculus import (
    PATTERNS,
    SCHEMA_VARS,
    MP,
    Axiom,
    AxiomSchema,
    CalculusId,
    ConstantSpec,
    CSRule,
    Derivation,
    Premise,
    Step,
    calculus_id,
    instantiate,
    match,
)
from .fitting import GJModel, ModelClass, Pair, classify, close_signature, closure_instances, respects_cs
from .goedel import ONE, ZERO, Assignment, residuum, tnorm
from .mkrtychev import GMModel, MkrtychevClass, classify_m, respects_cs_m
from .syntax import (
    BOT,
    And,
    App,
    Atom,
    Bang,
    Bottom,
    Boxed,
    Const,
    Formula,
    Implies,
    Just,
    Query,
    Sum,
    Term,
    Var,
    justification_pairs,
    neg,
)

GRID = 12


def random_value(rng: random.Random, extremes: float = 0.3) -> Fraction:
    r = rng.random()
    if r < extremes / 2:
        return ZERO
    if r < extremes:
        return ONE
    return Fraction(rng.randint(0, GRID), GRID)


def random_term(rng: random.Random, depth: int = 1, n_vars: int = 2, n_consts: int = 2) -> Term:
    if depth <= 0 or rng.random() < 0.4:
        if rng.random() < 0.6:
            return Var(rng.randint(1, n_vars))
        return Const(rng.randint(1, n_consts))
    k = rng.randrange(4)
    if k == 0:
        return App(random_term(rng, depth - 1, n_vars, n_consts), random_term(rng, depth - 1, n_vars, n_consts))
    if k == 1:
        return Sum(random_term(rng, depth - 1, n_vars, n_consts), random_term(rng, depth - 1, n_vars, n_consts))
    if k == 2:
        return Bang(random_term(rng, depth - 1, n_vars, n_consts))
    return Query(random_term(rng, depth - 1, n_vars, n_consts))


def random_formula(
    rng: random.Random,
    depth: int = 2,
    n_atoms: int = 3,
    just: float = 0.2,
    term_depth: int = 1,
    boxed: bool = False,
) -> Formula:
    """Random formula; ``just`` is the chance of a ``t:phi`` node (a boxed atom if ``boxed``)."""
    if depth <= 0 or rng.random() < 0.25:
        if rng.random() < 0.1:
            return BOT
        return Atom(rng.randint(1, n_atoms))
    r = rng.random()
    if r < just:
        body = random_formula(rng, depth - 1, n_atoms, just, term_depth, False)
        t = random_term(rng, term_depth)
        return Boxed(body, t) if boxed else Just(t, body)
    sub = lambda: random_formula(rng, depth - 1, n_atoms, just, term_depth, boxed)  # noqa: E731
    if r < just + (1 - just) / 2:
        return Implies(sub(), sub())
    return And(sub(), sub())


def random_star_formula(rng: random.Random, depth: int = 2, n_atoms: int = 3, boxed: float = 0.2) -> Formula:
    return random_formula(rng, depth, n_atoms, boxed, boxed=True)


def random_assignment(rng: random.Random, atoms: Iterable[Formula], default=ONE) -> Assignment:
    return Assignment({a: random_value(rng) for a in atoms}, default=default)


# ------------------------------------------------------------------- instances


def _fill(rng: random.Random, schema: AxiomSchema, subst: dict, depth: int, n_atoms: int, just: float = 0.2) -> dict:
    fvars, tvars = SCHEMA_VARS[schema]
    out = dict(subst)
    for v in fvars:
        if v not in out:
            out[v] = random_formula(rng, depth, n_atoms, just)
    for v in tvars:
        if v not in out:
            out[v] = random_term(rng, 1)
    return out


def random_instance(
    rng: random.Random, schema: AxiomSchema, depth: int = 1, n_atoms: int = 3, just: float = 0.2
) -> Formula:
    return instantiate(PATTERNS[schema], _fill(rng, schema, {}, depth, n_atoms, just))


def random_cs_formula(rng: random.Random, cs: ConstantSpec, depth: int = 1) -> Optional[Formula]:
    """A member of ``cs``: a random chain of constants over an axiom for a total spec."""
    if cs.is_total:
        f = random_instance(rng, rng.choice(cs.calculus.schemas), depth)
        for _ in range(rng.choice((1, 1, 2))):
            f = Just(Const(rng.randint(1, 2)), f)
        return f
    if not cs.members:
        return None
    return rng.choice(sorted(cs.members, key=str))


# ----------------------------------------------------------------- derivations


def random_derivation(
    rng: random.Random,
    calc: CalculusId | str,
    cs: Optional[ConstantSpec] = None,
    max_steps: int = 8,
    n_premises: Optional[int] = None,
    depth: int = 1,
    n_atoms: int = 3,
) -> Derivation:
    """A random derivation that passes :func:`check_derivation`.

    Besides premises, axioms and (CS) steps it picks an earlier step and an
    axiom whose antecedent matches it, so that modus ponens fires often.
    """
    calc = calculus_id(calc)
    if cs is None:
        cs = ConstantSpec.total(calc) if calc is not CalculusId.G else ConstantSpec.empty(calc)
    if n_premises is None:
        n_premises = rng.randint(0, 2)
    just = 0.0 if calc is CalculusId.G else 0.3
    premises = tuple(random_formula(rng, depth + 1, n_atoms, just) for _ in range(n_premises))
    steps: list[Step] = []
    target = rng.randint(1, max_steps)
    while len(steps) < target:
        r = rng.random()
        room = target - len(steps)
        if premises and r < 0.2:
            k = rng.randrange(len(premises))
            steps.append(Step(premises[k], Premise(k)))
        elif r < 0.35 and calc is not CalculusId.G:
            f = random_cs_formula(rng, cs, depth)
            if f is not None:
                steps.append(Step(f, CSRule()))
        elif r < 0.75 and steps and room >= 2:
            i = rng.randrange(len(steps))
            x = steps[i].formula
            options = []
            for schema in calc.schemas:
                s = match(PATTERNS[schema].left, x)
                if s is not None:
                    options.append((schema, s))
            if options:
                schema, s = rng.choice(options)
                ax = instantiate(PATTERNS[schema], _fill(rng, schema, s, depth, n_atoms, just))
                steps.append(Step(ax, Axiom(schema)))
                steps.append(Step(ax.right, MP(i, len(steps) - 1)))
        elif r < 0.85 and steps:
            pairs = [
                (i, j)
                for j, sj in enumerate(steps)
                if isinstance(sj.formula, Implies)
                for i, si in enumerate(steps)
                if si.formula == sj.formula.left
            ]
            if pairs:
                i, j = rng.choice(pairs)
                steps.append(Step(steps[j].formula.right, MP(i, j)))
        else:
            schema = rng.choice(calc.schemas)
            steps.append(Step(random_instance(rng, schema, depth, n_atoms, just), Axiom(schema)))
    return Derivation(calc, cs, premises, tuple(steps))


def derivation_pairs(d: Derivation) -> set[Pair]:
    fs = [s.formula for s in d.steps] + list(d.premises)
    return justification_pairs(fs)


# ---------------------------------------------------------------- accessibility


def _max_min_closure(r: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(r)
    r = [row[:] for row in r]
    for k in range(n):
        for i in range(n):
            rik = r[i][k]
            if rik == 0:
                continue
            for j in range(n):
                x = rik if rik < r[k][j] else r[k][j]
                if x > r[i][j]:
                    r[i][j] = x
    return r


def random_accessibility(rng: random.Random, cls: ModelClass, n: int) -> list[list[Fraction]]:
    sparse = lambda: ZERO if rng.random() < 0.35 else random_value(rng)  # noqa: E731
    r = [[sparse() for _ in range(n)] for _ in range(n)]
    if cls in (ModelClass.GJ45, ModelClass.GJT45):
        for i in range(n):
            for j in range(i):
                r[i][j] = r[j][i]
    if cls in (ModelClass.GJT, ModelClass.GLP, ModelClass.GJT45):
        for i in range(n):
            r[i][i] = ONE
    if cls in (ModelClass.GJ4, ModelClass.GLP, ModelClass.GJ45, ModelClass.GJT45):
        r = _max_min_closure(r)
    return r


def random_partition(rng: random.Random, n: int) -> list[list[Fraction]]:
    label = [rng.randrange(max(1, n // 2 + 1)) for _ in range(n)]
    return [[ONE if label[i] == label[j] else ZERO for j in range(n)] for i in range(n)]


# ------------------------------------------------------------------ evaluation


class _Evaluator:
    """World-vector evaluation over a mutable evidence table, for the generators."""

    def __init__(self, r, val, ev, default):
        self.r, self.val, self.ev, self.default = r, val, ev, default
        self.n = len(r)
        self.memo: dict = {}

    def vec(self, f: Formula):
        got = self.memo.get(f)
        if got is not None:
            return got
        if isinstance(f, Bottom):
            out = [ZERO] * self.n
        elif isinstance(f, Atom):
            out = [self.val[w].get(f.index, ZERO) for w in range(self.n)]
        elif isinstance(f, And):
            out = list(map(tnorm, self.vec(f.left), self.vec(f.right)))
        elif isinstance(f, Implies):
            out = list(map(residuum, self.vec(f.left), self.vec(f.right)))
        else:
            e = self.ev.get((f.term, f.body)) or [self.default] * self.n
            out = list(map(tnorm, e, self.box(f.body)))
        self.memo[f] = out
        return out

    def box(self, f: Formula):
        key = ("box", f)
        got = self.memo.get(key)
        if got is not None:
            return got
        vals = self.vec(f)
        out = []
        for row in self.r:
            m = ONE
            for x, y in zip(row, vals):
                if x > y and y < m:
                    m = y
            out.append(m)
        self.memo[key] = out
        return out


class _Plan:
    """Constraint index for one signature, reused across models."""

    def __init__(self, sig: frozenset, cs: Optional[ConstantSpec]):
        self.sig = sig
        self.keys = sorted(sig, key=lambda p: (str(p[1]), str(p[0])))
        self.closure = []
        for inst in closure_instances(sig):
            k1, k2, k3 = inst.keys()
            if k3 in sig:
                self.closure.append((inst.condition, k1, k2, k3))
        self.pi = [(k, (Bang(k[0]), Just(*k))) for k in self.keys if (Bang(k[0]), Just(*k)) in sig]
        self.ni = [(k, (Query(k[0]), neg(Just(*k)))) for k in self.keys if (Query(k[0]), neg(Just(*k))) in sig]
        self.cs_keys = []
        if cs is not None:
            self.cs_keys = [k for k in self.keys if isinstance(k[0], Const) and Just(*k) in cs]


_PLANS: dict = {}


def _plan(sig: frozenset, cs: Optional[ConstantSpec]) -> _Plan:
    key = (sig, cs)
    got = _PLANS.get(key)
    if got is None:
        if len(_PLANS) > 256:
            _PLANS.clear()
        got = _PLANS[key] = _Plan(sig, cs)
    return got


def _raise(plan: _Plan, ev: dict, r, n: int, mono: bool, pi: bool, ni: bool) -> None:
    changed = True
    while changed:
        changed = False
        for k in plan.cs_keys:
            e = ev[k]
            for w in range(n):
                if e[w] != ONE:
                    e[w] = ONE
                    changed = True
        for cond, k1, k2, k3 in plan.closure:
            a, b, c = ev[k1], ev[k2], ev[k3]
            for w in range(n):
                lhs = tnorm(a[w], b[w]) if cond == "i" else max(a[w], b[w])
                if lhs > c[w]:
                    c[w] = lhs
                    changed = True
        if pi:
            for k1, k2 in plan.pi:
                a, c = ev[k1], ev[k2]
                for w in range(n):
                    if a[w] > c[w]:
                        c[w] = a[w]
                        changed = True
        if ni:
            for k1, k2 in plan.ni:
                a, c = ev[k1], ev[k2]
                for w in range(n):
                    if a[w] == ZERO and c[w] != ONE:
                        c[w] = ONE
                        changed = True
        if mono:
            for k in plan.keys:
                e = ev[k]
                for w in range(n):
                    for v in range(n):
                        x = tnorm(e[w], r[w][v])
                        if x > e[v]:
                            e[v] = x
                            changed = True


def _cap(plan: _Plan, ev: dict, r, val, n: int, factive: bool) -> bool:
    """Lower E(t,phi,w) to box(phi)(w) (or e(w,phi) if ``factive``); True if anything changed."""
    ctx = _Evaluator(r, val, ev, ONE)
    changed = False
    targets = {k: (ctx.vec(k[1]) if factive else ctx.box(k[1])) for k in plan.keys}
    for k, bound in targets.items():
        e = ev[k]
        for w in range(n):
            if e[w] > bound[w]:
                e[w] = bound[w]
                changed = True
    return changed


def _assemble(worlds, r, val, ev, sig) -> GJModel:
    n = len(worlds)
    return GJModel(
        worlds=worlds,
        r={(worlds[i], worlds[j]): r[i][j] for i in range(n) for j in range(n) if r[i][j] != ZERO},
        evidence={(t, phi, worlds[w]): ev[(t, phi)][w] for (t, phi) in ev for w in range(n) if ev[(t, phi)][w] != ONE},
        valuation={(worlds[w], p): x for w in range(n) for p, x in val[w].items()},
        signature=sig,
        r_default=ZERO,
        evidence_default=ONE,
        valuation_default=ZERO,
    )


def _modal_evidence(plan: _Plan, r, val, n: int) -> dict:
    """E(t,phi,w) = box(phi)(w) for every signature pair."""
    ev: dict = {}
    ctx = _Evaluator(r, val, ev, ONE)
    for k in sorted(plan.keys, key=lambda p: _size(p[1])):
        ev[k] = list(ctx.box(k[1]))
    return ev


def _size(f: Formula) -> int:
    if isinstance(f, (And, Implies)):
        return 1 + _size(f.left) + _size(f.right)
    if isinstance(f, Just):
        return 1 + _size(f.body)
    return 1


def _in_class(m: GJModel, cls: ModelClass, cs: Optional[ConstantSpec]) -> bool:
    if cls not in classify(m).classes:
        return False
    return cs is None or respects_cs(m, cs)


def random_model(
    rng: random.Random,
    cls: ModelClass | str,
    pairs: Iterable[Pair] = (),
    n_worlds: Optional[int] = None,
    cs: Optional[ConstantSpec] = None,
    n_atoms: int = 3,
    attempts: int = 4,
) -> GJModel:
    """A random well-formed model of class ``cls`` whose signature contains ``pairs``.

    The signature is closed with :func:`close_signature`.  If ``cs`` is given,
    every signature pair ``(c, phi)`` with ``c:phi`` in ``cs`` gets evidence 1.
    """
    cls = ModelClass(cls)
    sig = close_signature(pairs)
    plan = _plan(sig, cs)
    strong = cls in (ModelClass.GJ45, ModelClass.GJT45)
    intro = cls not in (ModelClass.GJ, ModelClass.GJT)
    for attempt in range(attempts + 1):
        n = n_worlds or rng.randint(1, 4)
        worlds = tuple(f"w{i + 1}" for i in range(n))
        val = [{p: random_value(rng) for p in range(1, n_atoms + 1)} for _ in range(n)]
        fallback = attempt == attempts
        if strong and (fallback or rng.random() < 0.4):
            r = random_partition(rng, n)
            ev = _modal_evidence(plan, r, val, n)
        else:
            if strong and cls is ModelClass.GJ45 and rng.random() < 0.3:
                r = [[ZERO] * n for _ in range(n)]
            else:
                r = random_accessibility(rng, cls, n)
            ev = {k: [random_value(rng, 0.5) for _ in range(n)] for k in plan.keys}
            for _ in range(12):
                _raise(plan, ev, r, n, mono=intro, pi=intro, ni=strong)
                if not strong or not _cap(plan, ev, r, val, n, factive=False):
                    break
        m = _assemble(worlds, r, val, ev, sig)
        if _in_class(m, cls, cs):
            return m
    raise RuntimeError(f"could not generate a {cls} model")  # pragma: no cover


def random_models(rng, cls, pairs, count, cs=None, **kw) -> list[GJModel]:
    pairs = close_signature(pairs)
    return [random_model(rng, cls, pairs, cs=cs, **kw) for _ in range(count)]


# --------------------------------------------------------- Mkrtychev models


def _m_in_class(m: GMModel, cls: MkrtychevClass, cs) -> bool:
    if cls not in classify_m(m).classes:
        return False
    return cs is None or respects_cs_m(m, cs)


def random_mkrtychev_model(
    rng: random.Random,
    cls: MkrtychevClass | str,
    pairs: Iterable[Pair] = (),
    cs: Optional[ConstantSpec] = None,
    n_atoms: int = 3,
    attempts: int = 4,
) -> GMModel:
    """A random well-formed world-free model of class ``cls``.

    The fallback sets ``E(t,phi) = e(phi)``, which satisfies every condition.
    """
    cls = MkrtychevClass(cls)
    sig = close_signature(pairs)
    plan = _plan(sig, cs)
    factive = cls in (MkrtychevClass.GMT, MkrtychevClass.GMLP, MkrtychevClass.GMT45)
    pi = cls not in (MkrtychevClass.GM, MkrtychevClass.GMT)
    ni = cls in (MkrtychevClass.GM45, MkrtychevClass.GMT45)
    empty = [[ZERO]]
    for attempt in range(attempts + 1):
        val = [{p: random_value(rng) for p in range(1, n_atoms + 1)}]
        if attempt == attempts:
            ev: dict = {}
            ctx = _Evaluator([[ONE]], val, ev, ONE)
            for k in sorted(plan.keys, key=lambda p: _size(p[1])):
                ev[k] = list(ctx.vec(k[1]))
        else:
            ev = {k: [random_value(rng, 0.5)] for k in plan.keys}
            for _ in range(12):
                _raise(plan, ev, empty, 1, mono=False, pi=pi, ni=ni)
                if not factive or not _cap(plan, ev, empty, val, 1, factive=True):
                    break
        m = GMModel(
            evidence={k: v[0] for k, v in ev.items() if v[0] != ONE},
            valuation=val[0],
            signature=sig,
            evidence_default=ONE,
            valuation_default=ZERO,
        )
        if _m_in_class(m, cls, cs):
            return m
    raise RuntimeError(f"could not generate a {cls} model")  # pragma: no cover


def induced_assignment(m: GJModel, w: str, atoms: Iterable[Formula]) -> Assignment:
    """Star assignment read off a world: ``p -> e(w,p)``, ``phi_t -> e(w, t:phi)``."""
    from .fitting import eval_world

    vals = {}
    for a in atoms:
        vals[a] = eval_world(m, w, a) if isinstance(a, Atom) else eval_world(m, w, Just(a.term, a.body))
    return Assignment(vals)
