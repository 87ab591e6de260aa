"""Propositional Goedel consequence: decision by finite chains, a grid oracle, countermodels.

The Goedel connectives only select or compare values, and the value of a
formula is always one of its atom values, 0 or 1.  Any order-preserving map of
[0,1] fixing 0 and 1 therefore commutes with evaluation.  So if a query with n
atoms fails under some assignment, it also fails after squeezing the atom
values onto the chain ``0 < 1/(n+1) < ... < n/(n+1) < 1``: at most n distinct
values in (0,1) need to stay distinct.  ``decide_consequence`` enumerates that
chain; ``grid_oracle`` enumerates an arbitrary grid with exact rationals and
shares no code with it.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import kernels
from .fitting import GJModel
from .goedel import ONE, Assignment, eval_prop, eval_prop_set
from .mkrtychev import GMModel
from .syntax import And, Atom, Bottom, Boxed, Formula, Implies, atom_sort_key, star_atoms

DEFAULT_ATOM_CAP = 8
MODES = ("leq", "one")


class AtomCapError(ValueError):
    pass


def atom_cap() -> int:
    raw = os.environ.get("GJL_ATOM_CAP")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise AtomCapError(f"GJL_ATOM_CAP must be an integer, got {raw!r}") from None
    return DEFAULT_ATOM_CAP


@dataclass(frozen=True)
class ConsequenceQuery:
    premises: tuple[Formula, ...]
    goal: Formula
    mode: str = "one"

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        for f in self.premises + (self.goal,):
            if not _is_star(f):
                raise TypeError("consequence queries take propositional (star) formulas")

    def atoms(self) -> list[Formula]:
        out: set[Formula] = set()
        for f in self.premises + (self.goal,):
            out |= star_atoms(f)
        return sorted(out, key=atom_sort_key)

    def with_mode(self, mode: str) -> "ConsequenceQuery":
        return ConsequenceQuery(self.premises, self.goal, mode)


def _is_star(f: Formula) -> bool:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (And, Implies)):
            stack.extend((g.left, g.right))
        elif not isinstance(g, (Bottom, Atom, Boxed)):
            return False
    return True


@dataclass(frozen=True)
class Decision:
    valid: bool
    countermodel: Optional[Assignment] = None
    atoms: tuple[Formula, ...] = ()

    def __bool__(self):
        return self.valid


def _check_cap(n: int, cap: Optional[int]) -> None:
    cap = atom_cap() if cap is None else cap
    if n > cap:
        raise AtomCapError(f"query has {n} atoms, above the cap of {cap} (set GJL_ATOM_CAP to raise it)")


def compile_query(premises: Sequence[Formula], goal: Formula, atoms: Sequence[Formula]):
    """Node arrays for the kernel: shared subformulas become one node."""
    pos = {a: i for i, a in enumerate(atoms)}
    index: dict[Formula, int] = {}
    ops: list[int] = []
    args_a: list[int] = []
    args_b: list[int] = []

    def node(f: Formula) -> int:
        got = index.get(f)
        if got is not None:
            return got
        if isinstance(f, Bottom):
            op, x, y = 0, 0, 0
        elif isinstance(f, (Atom, Boxed)):
            op, x, y = 1, pos[f], 0
        else:
            x, y = node(f.left), node(f.right)
            op = 2 if isinstance(f, And) else 3
        ops.append(op)
        args_a.append(x)
        args_b.append(y)
        index[f] = len(ops) - 1
        return index[f]

    roots = [node(p) for p in premises]
    g = node(goal)
    return ops, args_a, args_b, roots, g


def decide_consequence(q: ConsequenceQuery, cap: Optional[int] = None, backend: Optional[str] = None) -> Decision:
    """Decide ``q`` over the chain with ``n+2`` levels for ``n`` atoms.

    Assignments are enumerated with the first atom (in sorted order) most
    significant and levels ascending; the first refuting one is returned.
    """
    atoms = q.atoms()
    n = len(atoms)
    _check_cap(n, cap)
    ops, a, b, roots, g = compile_query(q.premises, q.goal, atoms)
    top = n + 1
    hit = kernels.scan(ops, a, b, roots, g, n, top, 0 if q.mode == "leq" else 1, backend=backend)
    if hit is None:
        return Decision(True, None, tuple(atoms))
    cm = Assignment({x: Fraction(k, top) for x, k in zip(atoms, hit)})
    return Decision(False, cm, tuple(atoms))


def grid_oracle(q: ConsequenceQuery, levels: int, cap: Optional[int] = None) -> Decision:
    """Exhaustive check over the grid ``{0, 1/levels, ..., 1}`` using exact evaluation."""
    if levels < 1:
        raise ValueError("levels must be at least 1")
    atoms = q.atoms()
    _check_cap(len(atoms), cap)
    grid = [Fraction(k, levels) for k in range(levels + 1)]
    for combo in itertools.product(grid, repeat=len(atoms)):
        v = Assignment(dict(zip(atoms, combo)))
        lo = eval_prop_set(v, q.premises)
        g = eval_prop(v, q.goal)
        if (lo > g) if q.mode == "leq" else (lo == ONE and g < ONE):
            return Decision(False, v, tuple(atoms))
    return Decision(True, None, tuple(atoms))


@dataclass(frozen=True)
class ModeDisagreement:
    query: ConsequenceQuery
    leq: bool
    one: bool


def check_leq_equals_one(queries: Iterable[ConsequenceQuery], cap: Optional[int] = None) -> list[ModeDisagreement]:
    """Decide each query in both modes; returns the disagreements (expected: none)."""
    out = []
    for q in queries:
        x = decide_consequence(q.with_mode("leq"), cap).valid
        y = decide_consequence(q.with_mode("one"), cap).valid
        if x != y:
            out.append(ModeDisagreement(q, x, y))
    return out


def conservativity_countermodel(
    e_hat: Assignment, kind: str = "fitting", signature: Iterable = ()
) -> GJModel | GMModel:
    """Single-world model with full evidence agreeing with ``e_hat`` on plain atoms.

    ``kind="fitting"`` gives ``W={w}``, ``R(w,w)=1``, ``E=1`` everywhere;
    ``kind="mkrtychev"`` gives the world-free model with ``E=1``.
    """
    plain = {a.index: v for a, v in e_hat.values.items() if isinstance(a, Atom)}
    sig = frozenset(signature)
    if kind == "fitting":
        return GJModel(
            worlds=("w",),
            r={("w", "w"): ONE},
            evidence={},
            valuation={("w", p): v for p, v in plain.items()},
            signature=sig,
            r_default=0,
            evidence_default=ONE,
            valuation_default=e_hat.default,
        )
    if kind == "mkrtychev":
        return GMModel(
            evidence={},
            valuation=plain,
            signature=sig,
            evidence_default=ONE,
            valuation_default=e_hat.default,
        )
    raise ValueError(f"unknown model kind {kind!r}")
