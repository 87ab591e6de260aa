"""Derivation transformations: deduction theorem, internalization and star translation.

All constructions go through :class:`ProofBuilder`, which appends annotated
steps and reuses a step when its formula was already derived.  The
propositional lemmas are built only from the Goedel axioms, so they are
available in every calculus.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .calculus import (
    MP,
    AxiomSchema as S,
    Axiom,
    CalculusId,
    ConstantSpec,
    CSRule,
    Derivation,
    Premise,
    Step,
    check_derivation,
    instance,
    match_axiom,
)
from .syntax import And, App, Const, Formula, Implies, Just, Term, print_formula, star


class TransformError(ValueError):
    pass


class LiftError(TransformError):
    pass


class ProofBuilder:
    def __init__(self, calculus: CalculusId, cs: ConstantSpec, premises: Sequence[Formula] = ()):
        self.calculus = calculus
        self.cs = cs
        self.premises = tuple(premises)
        self.steps: list[Step] = []
        self._seen: dict[Formula, int] = {}

    def _add(self, f: Formula, rule) -> int:
        idx = self._seen.get(f)
        if idx is not None:
            return idx
        self.steps.append(Step(f, rule))
        self._seen[f] = len(self.steps) - 1
        return len(self.steps) - 1

    def formula(self, i: int) -> Formula:
        return self.steps[i].formula

    def premise(self, f: Formula) -> int:
        try:
            k = self.premises.index(f)
        except ValueError:
            raise TransformError(f"not a premise: {print_formula(f)}") from None
        return self._add(f, Premise(k))

    def axiom(self, schema: S, **subst) -> int:
        return self._add(instance(schema, **subst), Axiom(schema))

    def cs_step(self, f: Formula) -> int:
        return self._add(f, CSRule())

    def mp(self, minor: int, major: int) -> int:
        imp = self.formula(major)
        if not (isinstance(imp, Implies) and imp.left == self.formula(minor)):
            raise TransformError("modus ponens shape mismatch")
        return self._add(imp.right, MP(minor, major))

    # propositional lemmas; arguments and results are step indices

    def syll(self, ab: int, bc: int) -> int:
        """From A->B and B->C derive A->C."""
        a_b, b_c = self.formula(ab), self.formula(bc)
        ax = self.axiom(S.A1, phi=a_b.left, psi=a_b.right, chi=b_c.right)
        return self.mp(bc, self.mp(ab, ax))

    def identity(self, a: Formula) -> int:
        """A->A from (G4), (A2) and (A1)."""
        return self.syll(self.axiom(S.G4, phi=a), self.axiom(S.A2, phi=a, psi=a))

    def weaken(self, b: int, a: Formula) -> int:
        """From B derive A->B."""
        bf = self.formula(b)
        k = self.mp(self.axiom(S.A2, phi=bf, psi=a), self.axiom(S.A5b, phi=bf, psi=a, chi=bf))
        return self.mp(b, k)

    def uncurry(self, abc: int) -> int:
        """From A->(B->C) derive (A&B)->C."""
        f = self.formula(abc)
        return self.mp(abc, self.axiom(S.A5a, phi=f.left, psi=f.right.left, chi=f.right.right))

    def curry(self, abc: int) -> int:
        """From (A&B)->C derive A->(B->C)."""
        f = self.formula(abc)
        return self.mp(abc, self.axiom(S.A5b, phi=f.left.left, psi=f.left.right, chi=f.right))

    def pair(self, a: Formula, b: Formula) -> int:
        """A->(B->(A&B))."""
        return self.curry(self.identity(And(a, b)))

    def commute(self, a: Formula, b: Formula) -> int:
        return self.axiom(S.A3, phi=a, psi=b)

    def conj_mono_left(self, xa: int, y: Formula) -> int:
        """From X->A derive (X&Y)->(A&Y)."""
        a = self.formula(xa).right
        return self.uncurry(self.syll(xa, self.pair(a, y)))

    def conj_mono_right(self, yb: int, x: Formula) -> int:
        """From Y->B derive (X&Y)->(X&B)."""
        y, b = self.formula(yb).left, self.formula(yb).right
        step = self.syll(self.commute(x, y), self.conj_mono_left(yb, x))
        return self.syll(step, self.commute(b, x))

    def conj_intro(self, xa: int, xb: int) -> int:
        """From X->A and X->B derive X->(A&B)."""
        x = self.formula(xa).left
        a = self.formula(xa).right
        left = self.syll(self.axiom(S.G4, phi=x), self.conj_mono_left(xa, x))
        return self.syll(left, self.conj_mono_right(xb, a))

    def finish(self, idx: int) -> Derivation:
        """The derivation built so far, ending with step ``idx``."""
        steps = list(self.steps)
        if idx != len(steps) - 1:
            steps.append(steps[idx])
        return Derivation(self.calculus, self.cs, self.premises, tuple(steps))


def _require_valid(d: Derivation) -> None:
    res = check_derivation(d)
    if not res:
        raise TransformError(f"input derivation rejected at step {res.step}: {res.reason}")


def deduction_transform(d: Derivation, alpha: Formula) -> Derivation:
    """Turn a derivation from ``premises + [alpha]`` into one of ``alpha -> conclusion``.

    Every occurrence of ``alpha`` is discharged from the premise list; the
    remaining premises keep their order.
    """
    _require_valid(d)
    rest = tuple(p for p in d.premises if p != alpha)
    b = ProofBuilder(d.calculus, d.cs, rest)
    out: list[int] = []
    for st in d.steps:
        f, rule = st.formula, st.rule
        if isinstance(rule, Premise) and f == alpha:
            k = b.identity(alpha)
        elif isinstance(rule, Premise):
            k = b.weaken(b.premise(f), alpha)
        elif isinstance(rule, Axiom):
            schema = rule.schema or match_axiom(f, d.calculus)[0]
            k = b.weaken(b._add(f, Axiom(schema)), alpha)
        elif isinstance(rule, CSRule):
            k = b.weaken(b.cs_step(f), alpha)
        else:
            minor, major = out[rule.minor], out[rule.major]
            both = b.conj_intro(b.identity(alpha), minor)
            k = b.syll(both, b.uncurry(major))
        out.append(k)
    return b.finish(out[-1])


def _cs_witness(cs: ConstantSpec, f: Formula) -> Const:
    c = cs.witness(f)
    if c is None:
        raise LiftError(f"the constant specification has no constant for {print_formula(f)}")
    return c


def lift(d: Derivation, terms: Sequence[Term]) -> tuple[Term, Derivation]:
    """Internalize ``premises |- phi`` as ``t_i:premise_i |- t:phi``.

    ``terms`` are matched with ``d.premises`` position by position.  Axiom
    steps are justified by a constant from the constant specification, (CS)
    steps by a constant one level up, and modus ponens by application via (J).
    """
    if d.calculus is CalculusId.G:
        raise LiftError("the propositional calculus has no justification terms")
    if len(terms) != len(d.premises):
        raise LiftError(f"expected {len(d.premises)} terms, got {len(terms)}")
    _require_valid(d)
    lifted = tuple(Just(t, p) for t, p in zip(terms, d.premises))
    b = ProofBuilder(d.calculus, d.cs, lifted)
    out: list[tuple[Term, int]] = []
    for st in d.steps:
        f, rule = st.formula, st.rule
        if isinstance(rule, Premise):
            t = terms[rule.index]
            out.append((t, b.premise(Just(t, f))))
        elif isinstance(rule, (Axiom, CSRule)):
            c = _cs_witness(d.cs, f)
            out.append((c, b.cs_step(Just(c, f))))
        else:
            v, minor = out[rule.minor]
            u, major = out[rule.major]
            imp = d.steps[rule.major].formula
            j = b.axiom(S.J, t=u, s=v, phi=imp.left, psi=imp.right)
            out.append((App(u, v), b.mp(minor, b.mp(major, j))))
    t, last = out[-1]
    return t, b.finish(last)


@dataclass(frozen=True)
class Translation:
    derivation: Derivation
    used_theorems: tuple[Formula, ...]
    premise_count: int  # the first premise_count premises are the translated originals


def translate_derivation(d: Derivation) -> Translation:
    """Star-translate a derivation into the propositional calculus.

    Steps that are instances of propositional schemas stay axioms.  Other
    axiom steps and (CS) steps are theorems of the source calculus; their
    translations are collected in ``used_theorems`` and cited as premises.
    """
    _require_valid(d)
    base = tuple(star(p) for p in d.premises)
    used: list[Formula] = []
    steps = []
    for st in d.steps:
        g = star(st.formula)
        rule = st.rule
        if isinstance(rule, Axiom) or isinstance(rule, CSRule):
            m = match_axiom(g, CalculusId.G) if isinstance(rule, Axiom) else None
            if m is not None:
                rule = Axiom(m[0])
            else:
                if g not in used:
                    used.append(g)
                rule = Premise(len(base) + used.index(g))
        steps.append(Step(g, rule))
    out = Derivation(CalculusId.G, ConstantSpec.empty(CalculusId.G), base + tuple(used), tuple(steps))
    return Translation(out, tuple(used), len(base))


def apply_mp_with(d: Derivation, alpha: Formula) -> Derivation:
    """Re-derive the consequent of ``alpha -> phi`` by adding ``alpha`` as a premise."""
    imp = d.conclusion
    if not (isinstance(imp, Implies) and imp.left == alpha):
        raise TransformError("conclusion is not an implication from the given formula")
    premises = d.premises + (alpha,)
    steps = list(d.steps)
    steps.append(Step(alpha, Premise(len(premises) - 1)))
    steps.append(Step(imp.right, MP(len(steps) - 1, len(d.steps) - 1)))
    return Derivation(d.calculus, d.cs, premises, tuple(steps))
