"""Hilbert calculi for Goedel justification logic and a derivation checker.

Axiom schemas are stored as formula patterns over metavariables and matched
structurally.  The six calculi share the propositional axioms of Goedel logic
plus (J) and (+); the extensions add factivity (F), positive introspection (PI)
and negative introspection (NI).  ``CalculusId.G`` is the purely propositional
calculus, used to check star-translated derivations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

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
    parse_formula,
    parse_star_formula,
    print_formula,
)


# --------------------------------------------------------------- metavariables


@dataclass(frozen=True, eq=False, slots=True)
class MetaF(Formula):
    name: str


@dataclass(frozen=True, eq=False, slots=True)
class MetaT(Term):
    name: str


Subst = dict  # metavariable name -> Formula | Term


def match(pattern, obj, subst: Subst | None = None) -> Subst | None:
    """Extend ``subst`` so that ``pattern`` instantiates to ``obj``; None on failure."""
    subst = {} if subst is None else subst
    stack = [(pattern, obj)]
    while stack:
        p, o = stack.pop()
        if isinstance(p, (MetaF, MetaT)):
            if isinstance(p, MetaF) and not isinstance(o, Formula):
                return None
            if isinstance(p, MetaT) and not isinstance(o, Term):
                return None
            bound = subst.get(p.name)
            if bound is None:
                subst[p.name] = o
            elif bound != o:
                return None
            continue
        if type(p) is not type(o):
            return None
        if isinstance(p, (And, Implies, App, Sum)):
            stack.append((p.left, o.left))
            stack.append((p.right, o.right))
        elif isinstance(p, Just):
            stack.append((p.term, o.term))
            stack.append((p.body, o.body))
        elif isinstance(p, (Bang, Query)):
            stack.append((p.inner, o.inner))
        elif p != o:
            return None
    return subst


def instantiate(pattern, subst: Subst):
    if isinstance(pattern, (MetaF, MetaT)):
        return subst[pattern.name]
    if isinstance(pattern, (Bottom, Atom, Var, Const, Boxed)):
        return pattern
    if isinstance(pattern, (And, Implies, App, Sum)):
        return type(pattern)(instantiate(pattern.left, subst), instantiate(pattern.right, subst))
    if isinstance(pattern, Just):
        return Just(instantiate(pattern.term, subst), instantiate(pattern.body, subst))
    if isinstance(pattern, (Bang, Query)):
        return type(pattern)(instantiate(pattern.inner, subst))
    raise TypeError(f"cannot instantiate {pattern!r}")


# -------------------------------------------------------------------- schemas


class AxiomSchema(str, enum.Enum):
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A5a = "A5a"
    A5b = "A5b"
    A6 = "A6"
    A7 = "A7"
    G4 = "G4"
    J = "J"
    Plus1 = "Plus1"
    Plus2 = "Plus2"
    F = "F"
    PI = "PI"
    NI = "NI"

    def __str__(self):
        return self.value


_P, _Q, _R = MetaF("phi"), MetaF("psi"), MetaF("chi")
_T, _S = MetaT("t"), MetaT("s")


def _imp(*fs):
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Implies(f, out)
    return out


def _negf(f):
    return Implies(f, BOT)


PATTERNS: dict[AxiomSchema, Formula] = {
    AxiomSchema.A1: _imp(_imp(_P, _Q), _imp(_Q, _R), _imp(_P, _R)),
    AxiomSchema.A2: _imp(And(_P, _Q), _P),
    AxiomSchema.A3: _imp(And(_P, _Q), And(_Q, _P)),
    AxiomSchema.A5a: _imp(_imp(_P, _Q, _R), _imp(And(_P, _Q), _R)),
    AxiomSchema.A5b: _imp(_imp(And(_P, _Q), _R), _imp(_P, _Q, _R)),
    AxiomSchema.A6: _imp(_imp(_imp(_P, _Q), _R), _imp(_imp(_Q, _P), _R), _R),
    AxiomSchema.A7: _imp(BOT, _P),
    AxiomSchema.G4: _imp(_P, And(_P, _P)),
    AxiomSchema.J: _imp(Just(_T, _imp(_P, _Q)), Just(_S, _P), Just(App(_T, _S), _Q)),
    AxiomSchema.Plus1: _imp(Just(_T, _P), Just(Sum(_T, _S), _P)),
    AxiomSchema.Plus2: _imp(Just(_S, _P), Just(Sum(_T, _S), _P)),
    AxiomSchema.F: _imp(Just(_T, _P), _P),
    AxiomSchema.PI: _imp(Just(_T, _P), Just(Bang(_T), Just(_T, _P))),
    AxiomSchema.NI: _imp(_negf(Just(_T, _P)), Just(Query(_T), _negf(Just(_T, _P)))),
}

# metavariables each schema mentions, formula ones then term ones
SCHEMA_VARS: dict[AxiomSchema, tuple[tuple[str, ...], tuple[str, ...]]] = {
    AxiomSchema.A1: (("phi", "psi", "chi"), ()),
    AxiomSchema.A2: (("phi", "psi"), ()),
    AxiomSchema.A3: (("phi", "psi"), ()),
    AxiomSchema.A5a: (("phi", "psi", "chi"), ()),
    AxiomSchema.A5b: (("phi", "psi", "chi"), ()),
    AxiomSchema.A6: (("phi", "psi", "chi"), ()),
    AxiomSchema.A7: (("phi",), ()),
    AxiomSchema.G4: (("phi",), ()),
    AxiomSchema.J: (("phi", "psi"), ("t", "s")),
    AxiomSchema.Plus1: (("phi",), ("t", "s")),
    AxiomSchema.Plus2: (("phi",), ("t", "s")),
    AxiomSchema.F: (("phi",), ("t",)),
    AxiomSchema.PI: (("phi",), ("t",)),
    AxiomSchema.NI: (("phi",), ("t",)),
}

PROPOSITIONAL_SCHEMAS = (
    AxiomSchema.A1,
    AxiomSchema.A2,
    AxiomSchema.A3,
    AxiomSchema.A5a,
    AxiomSchema.A5b,
    AxiomSchema.A6,
    AxiomSchema.A7,
    AxiomSchema.G4,
)
_BASE = PROPOSITIONAL_SCHEMAS + (AxiomSchema.J, AxiomSchema.Plus1, AxiomSchema.Plus2)


class CalculusId(str, enum.Enum):
    G = "g"
    GJ = "gj"
    GJT = "gjt"
    GJ4 = "gj4"
    GLP = "glp"
    GJ45 = "gj45"
    GJT45 = "gjt45"

    def __str__(self):
        return self.value

    @property
    def schemas(self) -> tuple[AxiomSchema, ...]:
        return _SCHEMAS[self]


_F, _PI, _NI = AxiomSchema.F, AxiomSchema.PI, AxiomSchema.NI
_SCHEMAS = {
    CalculusId.G: PROPOSITIONAL_SCHEMAS,
    CalculusId.GJ: _BASE,
    CalculusId.GJT: _BASE + (_F,),
    CalculusId.GJ4: _BASE + (_PI,),
    CalculusId.GLP: _BASE + (_F, _PI),
    CalculusId.GJ45: _BASE + (_PI, _NI),
    CalculusId.GJT45: _BASE + (_F, _PI, _NI),
}

JUSTIFICATION_CALCULI = tuple(c for c in CalculusId if c is not CalculusId.G)


def calculus_id(name: str | CalculusId) -> CalculusId:
    if isinstance(name, CalculusId):
        return name
    key = name.strip().lower().replace("_cs", "").replace("-", "")
    if key == "gj0":
        key = "gj"
    try:
        return CalculusId(key)
    except ValueError:
        raise ValueError(f"unknown calculus {name!r}; choose from {[c.value for c in CalculusId]}")


def match_schema(f: Formula, schema: AxiomSchema) -> Subst | None:
    return match(PATTERNS[schema], f)


def match_axiom(f: Formula, calc: CalculusId | str) -> Optional[tuple[AxiomSchema, Subst]]:
    """First schema of ``calc`` (in declaration order) that ``f`` instantiates."""
    for schema in calculus_id(calc).schemas:
        s = match(PATTERNS[schema], f)
        if s is not None:
            return schema, s
    return None


def is_axiom(f: Formula, calc: CalculusId | str) -> bool:
    return match_axiom(f, calc) is not None


def instance(schema: AxiomSchema, **subst) -> Formula:
    return instantiate(PATTERNS[schema], subst)


# ---------------------------------------------------- constant specifications


def constant_chain(f: Formula) -> tuple[list[Const], Formula]:
    """Split ``c_n:...:c_1:phi`` into ``[c_n, ..., c_1]`` and ``phi`` (maximal peeling)."""
    consts = []
    while isinstance(f, Just) and isinstance(f.term, Const):
        consts.append(f.term)
        f = f.body
    return consts, f


class CSError(ValueError):
    pass


@dataclass(frozen=True)
class ConstantSpec:
    """A constant specification for ``calculus``.

    ``members is None`` means the total (intensional) specification: every
    ``c_n:...:c_1:A`` with ``A`` an axiom and ``n >= 1``.  Otherwise it is the
    finite set ``members``.
    """

    calculus: CalculusId
    members: Optional[frozenset[Formula]] = None

    @classmethod
    def total(cls, calc: CalculusId | str) -> "ConstantSpec":
        return cls(calculus_id(calc), None)

    @classmethod
    def finite(cls, members: Iterable[Formula], calc: CalculusId | str) -> "ConstantSpec":
        return cls(calculus_id(calc), frozenset(members))

    @classmethod
    def empty(cls, calc: CalculusId | str) -> "ConstantSpec":
        return cls(calculus_id(calc), frozenset())

    @property
    def is_total(self) -> bool:
        return self.members is None

    def is_cs_shaped(self, f: Formula) -> bool:
        """``f`` is ``c_n:...:c_1:A`` for an axiom ``A`` of the calculus and some ``n >= 1``."""
        body = f
        depth = 0
        while isinstance(body, Just) and isinstance(body.term, Const):
            body = body.body
            depth += 1
            if is_axiom(body, self.calculus):
                return True
        return False

    def __contains__(self, f: Formula) -> bool:
        if self.members is None:
            return self.is_cs_shaped(f)
        return f in self.members

    def validate(self) -> list[str]:
        """Problems with a finite specification: bad shape or missing prefixes."""
        if self.members is None:
            return []
        problems = []
        for f in sorted(self.members, key=print_formula):
            if not self.is_cs_shaped(f):
                problems.append(f"not of the form c:...:c:axiom: {print_formula(f)}")
                continue
            g = f.body
            while isinstance(g, Just) and isinstance(g.term, Const) and self.is_cs_shaped(g):
                if g not in self.members:
                    problems.append(f"not downward closed: {print_formula(f)} lacks {print_formula(g)}")
                g = g.body
        return problems

    def witness(self, f: Formula) -> Optional[Const]:
        """A constant ``c`` with ``c:f`` in the specification, if any."""
        if self.members is None:
            return Const(1) if (is_axiom(f, self.calculus) or self.is_cs_shaped(f)) else None
        found = [m.term for m in self.members if isinstance(m, Just) and m.body == f]
        return min(found, key=lambda c: c.index) if found else None

    def appropriate_for(self, axioms: Iterable[Formula], bound: int = 3) -> list[str]:
        """Check axiomatic appropriateness restricted to ``axioms`` and nesting up to ``bound``.

        Extendability of every chain is not decidable for an arbitrary finite
        set, so chains are only followed ``bound`` levels deep.
        """
        if self.members is None:
            return []
        problems = []
        for ax in axioms:
            f = ax
            for level in range(1, bound + 1):
                c = self.witness(f)
                if c is None:
                    problems.append(f"no constant justifies (level {level}): {print_formula(f)}")
                    break
                f = Just(c, f)
        return problems


# ----------------------------------------------------------------- derivations


@dataclass(frozen=True)
class Premise:
    index: int


@dataclass(frozen=True)
class Axiom:
    schema: Optional[AxiomSchema] = None


@dataclass(frozen=True)
class CSRule:
    pass


@dataclass(frozen=True)
class MP:
    """Modus ponens from step ``minor`` (psi) and step ``major`` (psi -> phi); 0-based."""

    minor: int
    major: int


Rule = Union[Premise, Axiom, CSRule, MP]


@dataclass(frozen=True)
class Step:
    formula: Formula
    rule: Rule


@dataclass(frozen=True)
class Derivation:
    calculus: CalculusId
    cs: ConstantSpec
    premises: tuple[Formula, ...]
    steps: tuple[Step, ...]

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula

    def __len__(self):
        return len(self.steps)


def derivation(calc, cs, premises, steps) -> Derivation:
    calc = calculus_id(calc)
    if cs is None:
        cs = ConstantSpec.empty(calc)
    return Derivation(calc, cs, tuple(premises), tuple(s if isinstance(s, Step) else Step(*s) for s in steps))


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    step: Optional[int] = None  # 1-based number of the first failing step
    reason: str = ""
    schemas: tuple[tuple[int, AxiomSchema], ...] = field(default=())

    def __bool__(self):
        return self.ok


class DerivationError(ValueError):
    pass


def check_derivation(d: Derivation) -> CheckResult:
    """Verify every step; report the first failure (1-based step number)."""
    if not d.steps:
        return CheckResult(False, None, "empty derivation")
    schemas = []
    for k, st in enumerate(d.steps):
        f, rule = st.formula, st.rule
        n = k + 1
        if isinstance(rule, Premise):
            if not 0 <= rule.index < len(d.premises):
                return CheckResult(False, n, f"premise index {rule.index} out of range")
            if d.premises[rule.index] != f:
                return CheckResult(False, n, f"formula differs from premise {rule.index}")
        elif isinstance(rule, Axiom):
            if rule.schema is not None:
                if rule.schema not in d.calculus.schemas:
                    return CheckResult(False, n, f"schema {rule.schema} is not part of {d.calculus}")
                if match_schema(f, rule.schema) is None:
                    return CheckResult(False, n, f"not an instance of {rule.schema}")
                schemas.append((n, rule.schema))
            else:
                m = match_axiom(f, d.calculus)
                if m is None:
                    return CheckResult(False, n, f"not an axiom of {d.calculus}")
                schemas.append((n, m[0]))
        elif isinstance(rule, CSRule):
            if d.calculus is CalculusId.G:
                return CheckResult(False, n, "the propositional calculus has no (CS) rule")
            if f not in d.cs:
                return CheckResult(False, n, "formula is not in the constant specification")
        elif isinstance(rule, MP):
            i, j = rule.minor, rule.major
            if not (0 <= i < k and 0 <= j < k):
                return CheckResult(False, n, f"modus ponens must cite earlier steps (got {i + 1}, {j + 1})")
            major = d.steps[j].formula
            if not (isinstance(major, Implies) and major.left == d.steps[i].formula and major.right == f):
                return CheckResult(False, n, f"steps {i + 1} and {j + 1} do not yield this formula by modus ponens")
        else:
            return CheckResult(False, n, f"unknown rule {rule!r}")
    return CheckResult(True, schemas=tuple(schemas))


# ------------------------------------------------------------ derivation files


def _parse_rule(text: str, lineno: int) -> Rule:
    parts = text.split()
    if not parts:
        raise DerivationError(f"line {lineno}: missing justification")
    head = parts[0].lower()
    try:
        if head == "premise" and len(parts) == 2:
            return Premise(int(parts[1]) - 1)
        if head == "axiom" and len(parts) <= 2:
            return Axiom(AxiomSchema(parts[1]) if len(parts) == 2 else None)
        if head == "cs" and len(parts) == 1:
            return CSRule()
        if head == "mp" and len(parts) == 3:
            return MP(int(parts[1]) - 1, int(parts[2]) - 1)
    except ValueError as exc:
        raise DerivationError(f"line {lineno}: {exc}") from None
    raise DerivationError(f"line {lineno}: cannot read justification {text.strip()!r}")


def parse_derivation(
    text: str,
    calculus: CalculusId | str | None = None,
    cs: ConstantSpec | str | None = None,
    star: bool = False,
) -> Derivation:
    """Read a derivation file.

    Steps are ``formula ; premise <i> | axiom [<schema>] | cs | mp <i> <j>``
    with 1-based numbers.  Directives: ``@calculus <id>``, ``@premise <formula>``,
    ``@cs total|none`` and ``@cs-member <formula>``.  Arguments override the
    ``@calculus`` and ``@cs`` directives.
    """
    parse = parse_star_formula if star else parse_formula
    file_calc = None
    file_cs_mode = None
    members = []
    premises = []
    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("@"):
            key, _, arg = line[1:].partition(" ")
            arg = arg.strip()
            if key == "calculus":
                file_calc = arg
            elif key == "premise":
                premises.append(parse(arg))
            elif key == "cs":
                file_cs_mode = arg.lower()
            elif key == "cs-member":
                members.append(parse_formula(arg))
            else:
                raise DerivationError(f"line {lineno}: unknown directive @{key}")
            continue
        if ";" not in line:
            raise DerivationError(f"line {lineno}: expected 'formula ; justification'")
        ftext, _, rtext = line.rpartition(";")
        steps.append(Step(parse(ftext), _parse_rule(rtext, lineno)))
    calc = calculus_id(calculus or file_calc or "gj")
    if isinstance(cs, ConstantSpec):
        spec = cs
    else:
        mode = cs or file_cs_mode or ("finite" if members else "none")
        if mode == "total":
            spec = ConstantSpec.total(calc)
        elif mode in ("none", "empty"):
            spec = ConstantSpec.finite(members, calc)
        elif mode == "finite":
            spec = ConstantSpec.finite(members, calc)
        else:
            raise DerivationError(f"unknown constant specification mode {mode!r}")
    return Derivation(calc, spec, tuple(premises), tuple(steps))


def format_rule(rule: Rule) -> str:
    if isinstance(rule, Premise):
        return f"premise {rule.index + 1}"
    if isinstance(rule, Axiom):
        return "axiom" if rule.schema is None else f"axiom {rule.schema.value}"
    if isinstance(rule, CSRule):
        return "cs"
    return f"mp {rule.minor + 1} {rule.major + 1}"


def format_derivation(d: Derivation) -> str:
    lines = [f"@calculus {d.calculus.value}"]
    if d.cs.is_total:
        lines.append("@cs total")
    else:
        lines.extend(f"@cs-member {print_formula(m)}" for m in sorted(d.cs.members, key=print_formula))
    lines.extend(f"@premise {print_formula(p)}" for p in d.premises)
    lines.extend(f"{print_formula(s.formula)} ; {format_rule(s.rule)}" for s in d.steps)
    return "\n".join(lines) + "\n"
