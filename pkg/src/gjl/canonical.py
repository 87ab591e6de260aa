"""Finite fragments of the canonical Fitting and Mkrtychev models.

A fragment takes finitely many star assignments as worlds.  Accessibility is
crisp and is decided by comparing ``v(phi_t) <= w(phi*)`` over a declared
finite set of relevant star atoms only, so it can be coarser than the
accessibility of the full canonical model.  Statements about a fragment are
only made for formulas whose star atoms are all relevant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .calculus import (
    AxiomSchema as S,
    CalculusId,
    ConstantSpec,
    calculus_id,
    instance,
)
from .fitting import GJModel, close_signature, eval_world
from .goedel import ONE, ZERO, Assignment, eval_prop, format_value
from .mkrtychev import GMModel
from .syntax import (
    App,
    Atom,
    Bang,
    Boxed,
    Const,
    Formula,
    Implies,
    Just,
    Query,
    Sum,
    atom_sort_key,
    neg,
    print_formula,
    star,
    star_atoms,
    subformula_closure,
)


class FragmentError(ValueError):
    pass


class FragmentTooSmall(FragmentError):
    pass


@dataclass(frozen=True)
class CanonicalFragment:
    model: GJModel
    evaluations: tuple[Assignment, ...]
    relevant_atoms: frozenset
    theorems_checked: frozenset

    @property
    def worlds(self) -> tuple[str, ...]:
        return self.model.worlds

    def assignment(self, world: str) -> Assignment:
        return self.evaluations[self.model.world_index(world)]


def _validate(v: Assignment, theorems: Iterable[Formula], where: str) -> None:
    for th in theorems:
        x = eval_prop(v, th)
        if x != ONE:
            raise FragmentError(f"{where} gives {format_value(x)} to theorem {print_formula(th)}")


def _common_default(evals: Sequence[Assignment], fallback):
    ds = {v.default for v in evals}
    return ds.pop() if len(ds) == 1 else fallback


def build_fragment(
    evals: Sequence[Assignment],
    theorems: Iterable[Formula] = (),
    relevant_atoms: Optional[Iterable[Formula]] = None,
) -> CanonicalFragment:
    """Fragment with one world per assignment.

    ``relevant_atoms`` defaults to the star atoms of the theorems together with
    the atoms each assignment mentions explicitly.  Every assignment must give
    value 1 to every theorem.
    """
    evals = tuple(evals)
    if not evals:
        raise FragmentError("a fragment needs at least one assignment")
    theorems = frozenset(theorems)
    names = tuple(f"v{i + 1}" for i in range(len(evals)))
    for name, v in zip(names, evals):
        _validate(v, theorems, f"assignment {name}")
    if relevant_atoms is None:
        rel: set[Formula] = set()
        for th in theorems:
            rel |= star_atoms(th)
        for v in evals:
            rel |= set(v.values)
    else:
        rel = set(relevant_atoms)
    for a in rel:
        if not isinstance(a, (Atom, Boxed)):
            raise FragmentError(f"not a star atom: {print_formula(a)}")
    boxed = sorted((a for a in rel if isinstance(a, Boxed)), key=atom_sort_key)
    plain = sorted((a for a in rel if isinstance(a, Atom)), key=atom_sort_key)
    starred = {a: star(a.body) for a in boxed}
    r = {}
    for nv, v in zip(names, evals):
        for nw, w in zip(names, evals):
            ok = all(v[a] <= eval_prop(w, starred[a]) for a in boxed)
            r[(nv, nw)] = ONE if ok else ZERO
    evidence = {(a.term, a.body, n): v[a] for n, v in zip(names, evals) for a in boxed}
    valuation = {(n, a.index): v[a] for n, v in zip(names, evals) for a in plain}
    model = GJModel(
        worlds=names,
        r=r,
        evidence=evidence,
        valuation=valuation,
        signature=frozenset((a.term, a.body) for a in boxed),
        r_default=ZERO,
        evidence_default=_common_default(evals, ONE),
        valuation_default=_common_default(evals, ZERO),
    )
    return CanonicalFragment(model, evals, frozenset(rel), theorems)


def required_atoms(f: Formula) -> set[Formula]:
    """Star atoms a fragment must cover to evaluate ``f`` faithfully."""
    out: set[Formula] = set()
    for g in subformula_closure([f]):
        if isinstance(g, Atom):
            out.add(g)
        elif isinstance(g, Just):
            out.add(Boxed(g.body, g.term))
    return out


def truth_lemma_check(frag: CanonicalFragment, world: str, f: Formula) -> bool:
    """Whether ``e(world, f)`` in the fragment equals ``v(f*)`` for the world's assignment.

    Raises :class:`FragmentTooSmall` when some star atom needed by ``f`` is not
    relevant in the fragment.
    """
    missing = required_atoms(f) - frag.relevant_atoms
    if missing:
        names = ", ".join(print_formula(a) for a in sorted(missing, key=atom_sort_key))
        raise FragmentTooSmall(f"fragment too small for {print_formula(f)}: missing {names}")
    v = frag.assignment(world)
    return eval_world(frag.model, world, f) == eval_prop(v, star(f))


def strong_evidence_check(frag: CanonicalFragment, world: str, t, body: Formula) -> bool:
    """``E(t, body, world) = e(world, t:body)`` in the fragment."""
    f = Just(t, body)
    missing = required_atoms(f) - frag.relevant_atoms
    if missing:
        raise FragmentTooSmall(f"fragment too small for {print_formula(f)}")
    return frag.model.E(t, body, world) == eval_world(frag.model, world, f)


def build_mkrtychev_canonical(
    v: Assignment, theorems: Iterable[Formula] = (), relevant_atoms: Optional[Iterable[Formula]] = None
) -> GMModel:
    """World-free model ``E(t,phi) = v(phi_t)``, ``e(p) = v(p)``.

    The signature is the boxed atoms among ``relevant_atoms`` (by default the
    theorems' atoms and the atoms ``v`` mentions); outside it ``E`` and ``e``
    fall back to ``v``'s default, exactly as ``v`` does.
    """
    theorems = frozenset(theorems)
    _validate(v, theorems, "assignment")
    if relevant_atoms is None:
        rel: set[Formula] = set(v.values)
        for th in theorems:
            rel |= star_atoms(th)
    else:
        rel = set(relevant_atoms)
    boxed = [a for a in rel if isinstance(a, Boxed)]
    return GMModel(
        evidence={(a.term, a.body): v[a] for a in boxed},
        valuation={a.index: v[a] for a in rel if isinstance(a, Atom)},
        signature=frozenset((a.term, a.body) for a in boxed),
        evidence_default=v.default,
        valuation_default=v.default,
    )


# ------------------------------------------------------------ theorem fragments


def theorem_fragment(
    pairs: Iterable[tuple], calc: CalculusId | str = CalculusId.GJ, cs: Optional[ConstantSpec] = None
) -> tuple[frozenset, frozenset]:
    """Star-translated theorems of ``calc`` relating the given justification pairs.

    The pair set is first closed (see :func:`close_signature`).  Returned are
    the theorems and the relevant star atoms: the boxed atoms of all pairs and
    every plain atom inside them.  Instances are emitted for (J) and (+) when
    all their pairs are present, for (F) on every pair, for (PI)/(NI) when the
    introspection pair is present, and ``phi_c`` for each pair ``(c, phi)``
    with ``c:phi`` in ``cs``.
    """
    calc = calculus_id(calc)
    sig = close_signature(pairs)
    schemas = set(calc.schemas)
    th: set[Formula] = set()
    by_body: dict[Formula, list] = {}
    for t, phi in sig:
        by_body.setdefault(phi, []).append(t)
    for t, phi in sig:
        if isinstance(phi, Implies):
            for s in by_body.get(phi.left, ()):
                if (App(t, s), phi.right) in sig:
                    th.add(star(instance(S.J, t=t, s=s, phi=phi.left, psi=phi.right)))
        if isinstance(t, Sum):
            th.add(star(instance(S.Plus1, t=t.left, s=t.right, phi=phi)))
            th.add(star(instance(S.Plus2, t=t.left, s=t.right, phi=phi)))
        if S.F in schemas:
            th.add(star(instance(S.F, t=t, phi=phi)))
        if S.PI in schemas and (Bang(t), Just(t, phi)) in sig:
            th.add(star(instance(S.PI, t=t, phi=phi)))
        if S.NI in schemas and (Query(t), neg(Just(t, phi))) in sig:
            th.add(star(instance(S.NI, t=t, phi=phi)))
        if cs is not None and isinstance(t, Const) and Just(t, phi) in cs:
            th.add(Boxed(phi, t))
    rel: set[Formula] = set()
    for t, phi in sig:
        rel |= required_atoms(Just(t, phi))
    return frozenset(th), frozenset(rel)
