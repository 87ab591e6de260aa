"""World-free (Mkrtychev) models ``<E, e>`` where ``e(t:phi) = E(t, phi)``."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

from .calculus import CalculusId, ConstantSpec, calculus_id
from .fitting import (
    ClosureViolation,
    GJModel,
    SignatureError,
    UnverifiableError,
    _closure_lhs,
    _cs_pairs_in_scope,
    closure_instances,
)
from .goedel import ONE, ZERO, format_value, neg, residuum, tnorm, value
from .syntax import And, Atom, Bang, Bottom, Formula, Implies, Just, Query, Term, print_formula, print_term
from .syntax import neg as neg_formula


class MkrtychevClass(str, enum.Enum):
    GM = "GM"
    GMT = "GMT"
    GM4 = "GM4"
    GMLP = "GMLP"
    GM45 = "GM45"
    GMT45 = "GMT45"

    def __str__(self):
        return self.value

    @classmethod
    def _missing_(cls, name):
        if isinstance(name, str):
            for c in cls:
                if c.value.lower() == name.lower():
                    return c
        return None

    @classmethod
    def of(cls, calc: CalculusId | str) -> "MkrtychevClass":
        return _BY_CALCULUS[calculus_id(calc)]


_BY_CALCULUS = {
    CalculusId.GJ: MkrtychevClass.GM,
    CalculusId.GJT: MkrtychevClass.GMT,
    CalculusId.GJ4: MkrtychevClass.GM4,
    CalculusId.GLP: MkrtychevClass.GMLP,
    CalculusId.GJ45: MkrtychevClass.GM45,
    CalculusId.GJT45: MkrtychevClass.GMT45,
}


@dataclass(frozen=True, eq=False)
class GMModel:
    evidence: Mapping[tuple[Term, Formula], object] = field(default_factory=dict)
    valuation: Mapping[int, object] = field(default_factory=dict)
    signature: frozenset = frozenset()
    evidence_default: object = ONE
    valuation_default: object = ZERO
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        set_("evidence", MappingProxyType({k: value(x) for k, x in self.evidence.items()}))
        set_("valuation", MappingProxyType({int(p): value(x) for p, x in self.valuation.items()}))
        set_("signature", frozenset(self.signature))
        set_("evidence_default", value(self.evidence_default))
        set_("valuation_default", value(self.valuation_default))

    def E(self, t: Term, phi: Formula):
        return self.evidence.get((t, phi), self.evidence_default)

    def val(self, p: int):
        return self.valuation.get(p, self.valuation_default)


def eval_m(m: GMModel, f: Formula):
    got = m._cache.get(f)
    if got is not None:
        return got
    if isinstance(f, Bottom):
        out = ZERO
    elif isinstance(f, Atom):
        out = m.val(f.index)
    elif isinstance(f, And):
        out = tnorm(eval_m(m, f.left), eval_m(m, f.right))
    elif isinstance(f, Implies):
        out = residuum(eval_m(m, f.left), eval_m(m, f.right))
    elif isinstance(f, Just):
        if (f.term, f.body) not in m.signature:
            raise SignatureError(f.term, f.body)
        out = m.E(f.term, f.body)
    else:
        raise TypeError(f"not a formula of the justification language: {f!r}")
    m._cache[f] = out
    return out


def eval_m_set(m: GMModel, fs: Iterable[Formula]):
    out = ONE
    for f in fs:
        out = tnorm(out, eval_m(m, f))
    return out


def check_closure_m(m: GMModel) -> list[ClosureViolation]:
    out = []
    for inst in closure_instances(m.signature):
        k1, k2, k3 = inst.keys()
        lhs = _closure_lhs(inst, m.E(*k1), m.E(*k2))
        if lhs > m.E(*k3):
            out.append(ClosureViolation(inst, None, lhs, m.E(*k3)))
    return out


@dataclass(frozen=True)
class MkrtychevClassification:
    classes: frozenset[MkrtychevClass]
    conditions: Mapping[str, bool]
    failures: Mapping[str, str]

    def __contains__(self, c) -> bool:
        return MkrtychevClass(c) in self.classes

    def names(self) -> list[str]:
        return [c.value for c in MkrtychevClass if c in self.classes]


def classify_m(m: GMModel) -> MkrtychevClassification:
    """Class membership from the closure conditions and the conditions

    ``factive``: E(t,phi) <= e(phi); ``positive``: E(t,phi) <= E(!t, t:phi);
    ``negative``: ~E(t,phi) <= E(?t, ~t:phi).  GMT45 requires all three since
    the negative-introspection class already includes the positive condition.
    """
    fail: dict[str, str] = {}
    viol = check_closure_m(m)
    if viol:
        fail["closure"] = str(viol[0])
    for t, phi in sorted(m.signature, key=lambda p: (print_term(p[0]), print_formula(p[1]))):
        e = m.E(t, phi)
        where = f"({print_term(t)}, {print_formula(phi)})"
        if "factive" not in fail:
            try:
                if e > eval_m(m, phi):
                    fail["factive"] = f"E{where} > e({print_formula(phi)})"
            except SignatureError as exc:
                fail["factive"] = f"cannot evaluate: {exc}"
        if "positive" not in fail and e > m.E(Bang(t), Just(t, phi)):
            fail["positive"] = f"E{where} > E(!t, t:phi)"
        if "negative" not in fail and neg(e) > m.E(Query(t), neg_formula(Just(t, phi))):
            fail["negative"] = f"~E{where} > E(?t, ~t:phi)"
    c = {k: k not in fail for k in ("closure", "factive", "positive", "negative")}
    out = set()
    if c["closure"]:
        out.add(MkrtychevClass.GM)
        if c["factive"]:
            out.add(MkrtychevClass.GMT)
        if c["positive"]:
            out.add(MkrtychevClass.GM4)
            if c["factive"]:
                out.add(MkrtychevClass.GMLP)
            if c["negative"]:
                out.add(MkrtychevClass.GM45)
                if c["factive"]:
                    out.add(MkrtychevClass.GMT45)
    return MkrtychevClassification(frozenset(out), MappingProxyType(c), MappingProxyType(fail))


def cs_report_m(m: GMModel, cs: ConstantSpec) -> list[str]:
    problems = []
    for c, phi in _cs_pairs_in_scope(m.signature, cs):
        if (c, phi) not in m.signature:
            raise UnverifiableError(
                f"cannot verify {print_formula(Just(c, phi))}: ({print_term(c)}, {print_formula(phi)}) "
                "is outside the model signature"
            )
        if m.E(c, phi) != ONE:
            problems.append(f"E({print_term(c)}, {print_formula(phi)}) = {format_value(m.E(c, phi))}")
    return problems


def respects_cs_m(m: GMModel, cs: ConstantSpec) -> bool:
    return not cs_report_m(m, cs)


def entails_m(
    models: Sequence[GMModel], premises: Iterable[Formula], goal: Formula, mode: str = "leq"
) -> tuple[bool, Optional[int]]:
    if mode not in ("leq", "one"):
        raise ValueError(f"unknown entailment mode {mode!r}")
    premises = list(premises)
    for i, m in enumerate(models):
        lo, g = eval_m_set(m, premises), eval_m(m, goal)
        if (lo > g) if mode == "leq" else (lo == ONE and g != ONE):
            return False, i
    return True, None


def fitting_of_mkrtychev(m: GMModel, world: str = "w") -> GJModel:
    """The single-world Fitting model with empty accessibility and the same E and e."""
    return GJModel(
        worlds=(world,),
        r={},
        evidence={(t, phi, world): x for (t, phi), x in m.evidence.items()},
        valuation={(world, p): x for p, x in m.valuation.items()},
        signature=m.signature,
        r_default=ZERO,
        evidence_default=m.evidence_default,
        valuation_default=m.valuation_default,
    )
