"""Finite fuzzy Fitting models: evaluation, closure checks and class membership.

An evidence function is stored as a finite map plus a default value.  The
closure conditions and class predicates are enforced over an explicit finite
signature of ``(term, formula)`` pairs; evaluating ``t:phi`` requires
``(t, phi)`` to be in the signature.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

from .calculus import CalculusId, ConstantSpec
from .goedel import ONE, ZERO, format_value, oplus, residuum, tnorm, value
from .syntax import (
    And,
    App,
    Atom,
    Bang,
    Bottom,
    Const,
    Formula,
    Implies,
    Just,
    Query,
    Sum,
    Term,
    justification_pairs,
    neg as neg_formula,
    print_formula,
    print_term,
)

Pair = tuple[Term, Formula]


class SignatureError(KeyError):
    """A justification subformula ``t:phi`` whose pair is outside the signature."""

    def __init__(self, term: Term, body: Formula):
        self.term, self.body = term, body
        super().__init__(f"({print_term(term)}, {print_formula(body)}) is not in the model signature")

    def __str__(self):
        return self.args[0]


class UnverifiableError(ValueError):
    pass


class ModelClass(str, enum.Enum):
    GJ = "GJ"
    GJT = "GJT"
    GJ4 = "GJ4"
    GLP = "GLP"
    GJ45 = "GJ45"
    GJT45 = "GJT45"

    def __str__(self):
        return self.value

    @property
    def calculus(self) -> CalculusId:
        return CalculusId(self.value.lower())

    @classmethod
    def _missing_(cls, name):
        if isinstance(name, str):
            for c in cls:
                if c.value.lower() == name.lower():
                    return c
        return None

    @classmethod
    def of(cls, calc: CalculusId | str) -> "ModelClass":
        from .calculus import calculus_id

        return cls(calculus_id(calc).value.upper())


# ------------------------------------------------------------------ signatures


def close_signature(pairs: Iterable[Pair]) -> frozenset[Pair]:
    """Smallest superset containing the pairs of all justification subformulas
    of its bodies and both summands of every sum key.

    With a closed signature every closure instance reported by
    :func:`closure_instances` has both of its left-hand keys in the signature.
    """
    sig = set(pairs)
    todo = list(sig)
    while todo:
        t, phi = todo.pop()
        new = list(justification_pairs([phi]))
        if isinstance(t, Sum):
            new += [(t.left, phi), (t.right, phi)]
        for p in new:
            if p not in sig:
                sig.add(p)
                todo.append(p)
    return frozenset(sig)


@dataclass(frozen=True)
class ClosureInstance:
    condition: str  # "i" or "ii"
    t: Term
    s: Term
    phi: Formula
    psi: Optional[Formula] = None

    def keys(self) -> tuple[Pair, Pair, Pair]:
        if self.condition == "i":
            return (self.t, Implies(self.phi, self.psi)), (self.s, self.phi), (App(self.t, self.s), self.psi)
        return (self.t, self.phi), (self.s, self.phi), (Sum(self.t, self.s), self.phi)

    def describe(self) -> str:
        if self.condition == "i":
            return (
                f"(i) t={print_term(self.t)} s={print_term(self.s)} "
                f"phi={print_formula(self.phi)} psi={print_formula(self.psi)}"
            )
        return f"(ii) t={print_term(self.t)} s={print_term(self.s)} phi={print_formula(self.phi)}"


def closure_instances(signature: Iterable[Pair]) -> list[ClosureInstance]:
    """Instances of closure conditions (i) and (ii) determined by the signature.

    Condition (i) is instantiated for every two pairs ``(t, phi->psi)`` and
    ``(s, phi)``; condition (ii) for every two pairs sharing a formula and for
    every sum key.  A key outside the signature takes the default value.
    """
    return list(_closure_instances(frozenset(signature)))


@functools.lru_cache(maxsize=256)
def _closure_instances(signature: frozenset) -> tuple[ClosureInstance, ...]:
    sig = set(signature)
    by_body: dict[Formula, list[Term]] = {}
    for t, phi in sig:
        by_body.setdefault(phi, []).append(t)
    out: set[ClosureInstance] = set()
    for t, body in sig:
        if isinstance(body, Implies):
            for s in by_body.get(body.left, ()):
                out.add(ClosureInstance("i", t, s, body.left, body.right))
        for s in by_body.get(body, ()):
            out.add(ClosureInstance("ii", t, s, body))
        if isinstance(t, Sum):
            out.add(ClosureInstance("ii", t.left, t.right, body))
    return tuple(sorted(out, key=lambda c: c.describe()))


# ----------------------------------------------------------------------- model


def _freeze(d) -> Mapping:
    return MappingProxyType(dict(d))


@dataclass(frozen=True, eq=False)
class GJModel:
    """A finite model ``<W, R, E, e>``; all maps are total through their defaults."""

    worlds: tuple[str, ...]
    r: Mapping[tuple[str, str], object] = field(default_factory=dict)
    evidence: Mapping[tuple[Term, Formula, str], object] = field(default_factory=dict)
    valuation: Mapping[tuple[str, int], object] = field(default_factory=dict)
    signature: frozenset = frozenset()
    r_default: object = ZERO
    evidence_default: object = ONE
    valuation_default: object = ZERO
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        worlds = tuple(str(w) for w in self.worlds)
        if not worlds:
            raise ValueError("a model needs at least one world")
        if len(set(worlds)) != len(worlds):
            raise ValueError("duplicate world ids")
        ws = set(worlds)
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        set_("worlds", worlds)
        r = {}
        for (w, v), x in self.r.items():
            if w not in ws or v not in ws:
                raise ValueError(f"R mentions unknown world in ({w}, {v})")
            r[(w, v)] = value(x)
        ev = {}
        for (t, phi, w), x in self.evidence.items():
            if w not in ws:
                raise ValueError(f"evidence mentions unknown world {w}")
            ev[(t, phi, w)] = value(x)
        val = {}
        for (w, p), x in self.valuation.items():
            if w not in ws:
                raise ValueError(f"valuation mentions unknown world {w}")
            val[(w, int(p))] = value(x)
        set_("r", _freeze(r))
        set_("evidence", _freeze(ev))
        set_("valuation", _freeze(val))
        set_("signature", frozenset(self.signature))
        set_("r_default", value(self.r_default))
        set_("evidence_default", value(self.evidence_default))
        set_("valuation_default", value(self.valuation_default))
        set_("_index", {w: i for i, w in enumerate(worlds)})
        set_("_rmat", tuple(tuple(r.get((w, v), self.r_default) for v in worlds) for w in worlds))
        # every value an evaluation produces is a model value, 0 or 1, so the
        # checks below compare integer numerators over one common denominator
        dens = {x.denominator for x in (*r.values(), *ev.values(), *val.values())}
        dens |= {self.r_default.denominator, self.evidence_default.denominator, self.valuation_default.denominator}
        scale = math.lcm(*dens)
        set_("_scale", scale)
        set_("_rlev", tuple(tuple(self.level(x) for x in row) for row in self._rmat))
        by_pair: dict = {}
        for (t, phi, w), x in ev.items():
            by_pair.setdefault((t, phi), {})[w] = x
        set_("_by_pair", by_pair)

    # lookups
    def world_index(self, w: str) -> int:
        try:
            return self._index[w]
        except KeyError:
            raise KeyError(f"unknown world {w!r}") from None

    def R(self, w: str, v: str):
        return self._rmat[self.world_index(w)][self.world_index(v)]

    def E(self, t: Term, phi: Formula, w: str):
        return self.evidence.get((t, phi, w), self.evidence_default)

    def val(self, w: str, p: int):
        return self.valuation.get((w, p), self.valuation_default)

    def _level_table(self, plan: "_SignaturePlan") -> list[tuple[int, ...]]:
        got = self._cache.get(plan)
        if got is None:
            default = self.level(self.evidence_default)
            got = []
            for key in plan.keys:
                row = self._by_pair.get(key)
                if row is None:
                    got.append((default,) * len(self.worlds))
                else:
                    got.append(tuple(self.level(row[w]) if w in row else default for w in self.worlds))
            self._cache[plan] = got
        return got

    def level(self, x) -> int:
        """``x`` as a numerator over the model's common denominator."""
        return x.numerator * (self._scale // x.denominator)

    def evidence_vector(self, t: Term, phi: Formula) -> tuple:
        """``E(t, phi, w)`` for every world, in world order."""
        key = ("E", t, phi)
        got = self._cache.get(key)
        if got is None:
            got = self._cache[key] = tuple(self.E(t, phi, w) for w in self.worlds)
        return got

    # evaluation over all worlds at once, memoized per formula
    def vector(self, f: Formula) -> tuple:
        got = self._cache.get(f)
        if got is not None:
            return got
        if isinstance(f, Bottom):
            out = (ZERO,) * len(self.worlds)
        elif isinstance(f, Atom):
            out = tuple(self.val(w, f.index) for w in self.worlds)
        elif isinstance(f, And):
            out = tuple(map(tnorm, self.vector(f.left), self.vector(f.right)))
        elif isinstance(f, Implies):
            out = tuple(map(residuum, self.vector(f.left), self.vector(f.right)))
        elif isinstance(f, Just):
            if (f.term, f.body) not in self.signature:
                raise SignatureError(f.term, f.body)
            box = self.box_vector(f.body)
            out = tuple(map(tnorm, self.evidence_vector(f.term, f.body), box))
        else:
            raise TypeError(f"not a formula of the justification language: {f!r}")
        self._cache[f] = out
        return out

    def box_vector(self, f: Formula) -> tuple:
        key = ("box", f)
        got = self._cache.get(key)
        if got is not None:
            return got
        vals = self.vector(f)
        out = []
        for row in self._rmat:
            m = ONE
            for x, y in zip(row, vals):
                if x > y and y < m:
                    m = y
            out.append(m)
        out = tuple(out)
        self._cache[key] = out
        return out


def eval_world(m: GJModel, w: str, f: Formula):
    return m.vector(f)[m.world_index(w)]


def eval_box(m: GJModel, w: str, f: Formula):
    """``inf_v R(w,v) => e(v,f)`` over the finite set of worlds."""
    return m.box_vector(f)[m.world_index(w)]


def eval_set(m: GJModel, w: str, fs: Iterable[Formula]):
    out = ONE
    for f in fs:
        out = tnorm(out, eval_world(m, w, f))
    return out


# ------------------------------------------------------------- closure report


@dataclass(frozen=True)
class ClosureViolation:
    instance: ClosureInstance
    world: Optional[str]
    lhs: object
    rhs: object

    def __str__(self):
        where = f" at {self.world}" if self.world is not None else ""
        return f"{self.instance.describe()}{where}: {format_value(self.lhs)} > {format_value(self.rhs)}"


def _closure_lhs(inst: ClosureInstance, a, b):
    return tnorm(a, b) if inst.condition == "i" else oplus(a, b)


@dataclass(frozen=True, eq=False)
class _SignaturePlan:
    """Evidence keys a signature's checks look up, numbered once per signature."""

    keys: tuple[Pair, ...]
    closure: tuple[tuple[ClosureInstance, int, int, int], ...]
    # (t, phi, own key, key of (!t, t:phi), key of (?t, ~t:phi)) in sorted order
    pairs: tuple[tuple[Term, Formula, int, int, int], ...]


@functools.lru_cache(maxsize=256)
def _signature_plan(signature: frozenset) -> _SignaturePlan:
    index: dict[Pair, int] = {}

    def k(p: Pair) -> int:
        return index.setdefault(p, len(index))

    closure = tuple((inst, *(k(x) for x in inst.keys())) for inst in _closure_instances(signature))
    pairs = tuple(
        (t, phi, k((t, phi)), k((Bang(t), Just(t, phi))), k((Query(t), neg_formula(Just(t, phi)))))
        for t, phi in _sorted_pairs(signature)
    )
    return _SignaturePlan(tuple(index), closure, pairs)


def check_closure(m: GJModel) -> list[ClosureViolation]:
    """Every violated closure instance over the signature; empty iff well-formed."""
    plan = _signature_plan(m.signature)
    lev = m._level_table(plan)
    out = []
    for inst, i1, i2, i3 in plan.closure:
        combine = min if inst.condition == "i" else max
        for i, (a, b, rhs) in enumerate(zip(lev[i1], lev[i2], lev[i3])):
            if combine(a, b) > rhs:
                k1, k2, k3 = inst.keys()
                w = m.worlds[i]
                out.append(ClosureViolation(inst, w, _closure_lhs(inst, m.E(*k1, w), m.E(*k2, w)), m.E(*k3, w)))
    return out


def is_well_formed(m: GJModel) -> bool:
    return not check_closure(m)


# -------------------------------------------------------------- classification


CONDITIONS = ("closure", "reflexive", "transitive", "monotone", "positive", "negative", "strong_evidence")


@dataclass(frozen=True)
class Classification:
    classes: frozenset[ModelClass]
    crisp: bool
    conditions: Mapping[str, bool]
    failures: Mapping[str, str]

    def __contains__(self, c) -> bool:
        return ModelClass(c) in self.classes if not isinstance(c, ModelClass) else c in self.classes

    def names(self) -> list[str]:
        return [c.value for c in ModelClass if c in self.classes]


def classes_from_conditions(c: Mapping[str, bool]) -> frozenset[ModelClass]:
    out = set()
    if c["closure"]:
        out.add(ModelClass.GJ)
        if c["reflexive"]:
            out.add(ModelClass.GJT)
        gj4 = c["monotone"] and c["transitive"] and c["positive"]
        if gj4:
            out.add(ModelClass.GJ4)
            if c["reflexive"]:
                out.add(ModelClass.GLP)
            if c["negative"] and c["strong_evidence"]:
                out.add(ModelClass.GJ45)
                if c["reflexive"]:
                    out.add(ModelClass.GJT45)
    return frozenset(out)


@functools.lru_cache(maxsize=256)
def _sorted_pairs(signature: frozenset) -> tuple[Pair, ...]:
    return tuple(sorted(signature, key=lambda p: (print_term(p[0]), print_formula(p[1]))))


def _check_conditions(m: GJModel) -> tuple[dict[str, bool], dict[str, str]]:
    fail: dict[str, str] = {}
    W = m.worlds
    viol = check_closure(m)
    if viol:
        fail["closure"] = str(viol[0])
    for w in W:
        if m.R(w, w) != ONE:
            fail["reflexive"] = f"R({w},{w}) = {format_value(m.R(w, w))}"
            break
    for w in W:
        for v in W:
            for u in W:
                if "transitive" not in fail and tnorm(m.R(w, v), m.R(v, u)) > m.R(w, u):
                    fail["transitive"] = f"R({w},{v}) min R({v},{u}) > R({w},{u})"
    rows = m._rlev
    top = m._scale
    plan = _signature_plan(m.signature)
    lev = m._level_table(plan)
    for t, phi, own, bang, query in plan.pairs:
        ev, pos, negv = lev[own], lev[bang], lev[query]
        for i, w in enumerate(W):
            e = ev[i]
            if "monotone" not in fail:
                for j, v in enumerate(W):
                    if min(e, rows[i][j]) > ev[j]:
                        fail["monotone"] = f"E({print_term(t)}, {print_formula(phi)}) from {w} to {v}"
                        break
            if "positive" not in fail and e > pos[i]:
                fail["positive"] = f"E({print_term(t)}, {print_formula(phi)}, {w}) > E(!t, t:phi, {w})"
            if "negative" not in fail and (top if e == 0 else 0) > negv[i]:
                fail["negative"] = f"~E({print_term(t)}, {print_formula(phi)}, {w}) > E(?t, ~t:phi, {w})"
        if "strong_evidence" not in fail:
            try:
                full = m.vector(Just(t, phi))
            except SignatureError as exc:
                fail["strong_evidence"] = f"cannot evaluate: {exc}"
            else:
                for w, e, x in zip(W, ev, full):
                    if e > m.level(x):
                        fail["strong_evidence"] = f"E({print_term(t)}, {print_formula(phi)}, {w}) > e({w}, t:phi)"
                        break
    return {c: c not in fail for c in CONDITIONS}, fail


def is_crisp(m: GJModel) -> bool:
    return all(x in (ZERO, ONE) for row in m._rmat for x in row)


def classify(m: GJModel) -> Classification:
    conds, fail = _check_conditions(m)
    return Classification(classes_from_conditions(conds), is_crisp(m), MappingProxyType(conds), MappingProxyType(fail))


# --------------------------------------------------------- constant specs


def _cs_pairs_in_scope(signature: Iterable[Pair], cs: ConstantSpec) -> list[Pair]:
    if cs.is_total:
        return [(t, phi) for t, phi in signature if isinstance(t, Const) and Just(t, phi) in cs]
    out = []
    for f in sorted(cs.members, key=print_formula):
        if not (isinstance(f, Just) and isinstance(f.term, Const)):
            raise ValueError(f"not a constant specification member: {print_formula(f)}")
        out.append((f.term, f.body))
    return out


def cs_report(m: GJModel, cs: ConstantSpec) -> list[str]:
    """Failures of CS-respect; raises :class:`UnverifiableError` for members outside the signature."""
    problems = []
    for c, phi in _cs_pairs_in_scope(m.signature, cs):
        if (c, phi) not in m.signature:
            raise UnverifiableError(
                f"cannot verify {print_formula(Just(c, phi))}: ({print_term(c)}, {print_formula(phi)}) "
                "is outside the model signature"
            )
        for w in m.worlds:
            if m.E(c, phi, w) != ONE:
                problems.append(f"E({print_term(c)}, {print_formula(phi)}, {w}) = {format_value(m.E(c, phi, w))}")
    return problems


def respects_cs(m: GJModel, cs: ConstantSpec) -> bool:
    return not cs_report(m, cs)


# ------------------------------------------------------------------ entailment


def entails(
    models: Sequence[GJModel], premises: Iterable[Formula], goal: Formula, mode: str = "leq"
) -> tuple[bool, Optional[tuple[int, str]]]:
    """Check ``premises |= goal`` at every world of every model.

    ``mode="leq"`` compares ``e(w, premises) <= e(w, goal)``; ``mode="one"``
    requires ``e(w, goal) = 1`` wherever all premises are 1.  On failure the
    witness is ``(model index, world)``.
    """
    if mode not in ("leq", "one"):
        raise ValueError(f"unknown entailment mode {mode!r}")
    premises = list(premises)
    for i, m in enumerate(models):
        for w in m.worlds:
            lo = eval_set(m, w, premises)
            g = eval_world(m, w, goal)
            bad = lo > g if mode == "leq" else (lo == ONE and g != ONE)
            if bad:
                return False, (i, w)
    return True, None
