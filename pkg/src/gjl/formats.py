"""Text formats for models and assignments.

Model files are split into sections, each introduced by a ``name:`` line
(content may follow the colon on the same line)::

    worlds: w1 w2
    R:
    w1 w2 1/2            # world world value
    E:
    x1 p1 -> p2 w1 3/4   # term formula world value
    e:
    w1 p1 1/2            # world atom value
    defaults: 0 1 0      # R, E and e defaults
    signature:
    x1 p1 -> p2          # term formula

World-free models omit ``worlds:`` and ``R:``, drop the world column and give
two defaults (E and e).  Without a ``signature:`` section the signature is the
set of pairs listed under ``E:``.  ``#`` starts a comment everywhere.
"""

from __future__ import annotations

import re
from typing import Iterable

from .fitting import GJModel
from .goedel import Assignment, format_value, parse_value
from .mkrtychev import GMModel
from .syntax import (
    Atom,
    Boxed,
    atom_sort_key,
    parse_formula,
    parse_star_formula,
    parse_term_prefix,
    print_formula,
    print_term,
)

_SECTION_RE = re.compile(r"^(worlds|R|E|e|defaults|signature)\s*:(.*)$")
_ATOM_RE = re.compile(r"^p([1-9][0-9]*)$")


class FormatError(ValueError):
    pass


def _sections(text: str) -> dict[str, list[tuple[int, str]]]:
    out: dict[str, list[tuple[int, str]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION_RE.match(line)
        if m:
            current = m.group(1)
            if current in out:
                raise FormatError(f"line {lineno}: section {current}: appears twice")
            out[current] = []
            rest = m.group(2).strip()
            if rest:
                out[current].append((lineno, rest))
            continue
        if current is None:
            raise FormatError(f"line {lineno}: content before the first section")
        out[current].append((lineno, line))
    return out


def _value(tok: str, lineno: int):
    try:
        return parse_value(tok)
    except ValueError as exc:
        raise FormatError(f"line {lineno}: {exc}") from None


def _atom_index(tok: str, lineno: int) -> int:
    m = _ATOM_RE.match(tok)
    if not m:
        raise FormatError(f"line {lineno}: expected an atom pN, got {tok!r}")
    return int(m.group(1))


def _pair(text: str, lineno: int):
    try:
        t, rest = parse_term_prefix(text)
        return t, parse_formula(rest)
    except ValueError as exc:
        raise FormatError(f"line {lineno}: {exc}") from None


def _split_tail(line: str, k: int, lineno: int) -> tuple[str, list[str]]:
    parts = line.rsplit(None, k)
    if len(parts) != k + 1:
        raise FormatError(f"line {lineno}: too few fields")
    return parts[0], parts[1:]


def _defaults(sec, count: int) -> list:
    if not sec:
        return []
    toks = " ".join(line for _, line in sec).split()
    if len(toks) != count:
        raise FormatError(f"line {sec[0][0]}: defaults: expects {count} values")
    return [_value(t, sec[0][0]) for t in toks]


def parse_model(text: str) -> GJModel:
    sec = _sections(text)
    if "worlds" not in sec:
        raise FormatError("missing worlds: section")
    worlds = " ".join(line for _, line in sec["worlds"]).split()
    r = {}
    for lineno, line in sec.get("R", []):
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"line {lineno}: R: lines are 'world world value'")
        r[(parts[0], parts[1])] = _value(parts[2], lineno)
    evidence = {}
    for lineno, line in sec.get("E", []):
        head, (w, v) = _split_tail(line, 2, lineno)
        t, phi = _pair(head, lineno)
        evidence[(t, phi, w)] = _value(v, lineno)
    valuation = {}
    for lineno, line in sec.get("e", []):
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"line {lineno}: e: lines are 'world atom value'")
        valuation[(parts[0], _atom_index(parts[1], lineno))] = _value(parts[2], lineno)
    if "signature" in sec:
        signature = {_pair(line, lineno) for lineno, line in sec["signature"]}
    else:
        signature = {(t, phi) for (t, phi, _) in evidence}
    kw = {}
    d = _defaults(sec.get("defaults"), 3)
    if d:
        kw = dict(r_default=d[0], evidence_default=d[1], valuation_default=d[2])
    try:
        return GJModel(tuple(worlds), r, evidence, valuation, frozenset(signature), **kw)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def parse_mkrtychev_model(text: str) -> GMModel:
    sec = _sections(text)
    for bad in ("worlds", "R"):
        if bad in sec:
            raise FormatError(f"section {bad}: does not belong in a world-free model")
    evidence = {}
    for lineno, line in sec.get("E", []):
        head, (v,) = _split_tail(line, 1, lineno)
        evidence[_pair(head, lineno)] = _value(v, lineno)
    valuation = {}
    for lineno, line in sec.get("e", []):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: e: lines are 'atom value'")
        valuation[_atom_index(parts[0], lineno)] = _value(parts[1], lineno)
    if "signature" in sec:
        signature = {_pair(line, lineno) for lineno, line in sec["signature"]}
    else:
        signature = set(evidence)
    kw = {}
    d = _defaults(sec.get("defaults"), 2)
    if d:
        kw = dict(evidence_default=d[0], valuation_default=d[1])
    return GMModel(evidence, valuation, frozenset(signature), **kw)


def _pair_key(p):
    return (print_term(p[0]), print_formula(p[1]))


def format_model(m: GJModel) -> str:
    lines = ["worlds: " + " ".join(m.worlds), "R:"]
    for (w, v), x in sorted(m.r.items(), key=lambda kv: (m.world_index(kv[0][0]), m.world_index(kv[0][1]))):
        lines.append(f"{w} {v} {format_value(x)}")
    lines.append("E:")
    for (t, phi, w), x in sorted(m.evidence.items(), key=lambda kv: (_pair_key(kv[0][:2]), m.world_index(kv[0][2]))):
        lines.append(f"{print_term(t)} {print_formula(phi)} {w} {format_value(x)}")
    lines.append("e:")
    for (w, p), x in sorted(m.valuation.items(), key=lambda kv: (m.world_index(kv[0][0]), kv[0][1])):
        lines.append(f"{w} p{p} {format_value(x)}")
    lines.append(
        "defaults: "
        + " ".join(format_value(x) for x in (m.r_default, m.evidence_default, m.valuation_default))
    )
    lines.append("signature:")
    for t, phi in sorted(m.signature, key=_pair_key):
        lines.append(f"{print_term(t)} {print_formula(phi)}")
    return "\n".join(lines) + "\n"


def format_mkrtychev_model(m: GMModel) -> str:
    lines = ["E:"]
    for (t, phi), x in sorted(m.evidence.items(), key=lambda kv: _pair_key(kv[0])):
        lines.append(f"{print_term(t)} {print_formula(phi)} {format_value(x)}")
    lines.append("e:")
    for p, x in sorted(m.valuation.items()):
        lines.append(f"p{p} {format_value(x)}")
    lines.append("defaults: " + " ".join(format_value(x) for x in (m.evidence_default, m.valuation_default)))
    lines.append("signature:")
    for t, phi in sorted(m.signature, key=_pair_key):
        lines.append(f"{print_term(t)} {print_formula(phi)}")
    return "\n".join(lines) + "\n"


def parse_assignment(text: str) -> Assignment:
    """Lines ``atom value`` with ``atom`` either ``pN`` or a braced star atom ``{t:phi}``;
    an optional ``default: value`` line (default 1)."""
    values = {}
    default = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("default:"):
            default = _value(line[len("default:"):].strip(), lineno)
            continue
        head, (v,) = _split_tail(line, 1, lineno)
        try:
            atom = parse_star_formula(head)
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
        if not isinstance(atom, (Atom, Boxed)):
            raise FormatError(f"line {lineno}: expected an atom, got {head!r}")
        values[atom] = _value(v, lineno)
    return Assignment(values) if default is None else Assignment(values, default)


def format_assignment(a: Assignment) -> str:
    keys = sorted(a.values, key=atom_sort_key)
    body = "".join(f"{print_formula(k)} {format_value(a[k])}\n" for k in keys)
    return body + f"default: {format_value(a.default)}\n"


def format_countermodel(a: Assignment, atoms: Iterable = None) -> str:
    """``atom -> value`` lines in atom order."""
    keys = sorted(a.values if atoms is None else atoms, key=atom_sort_key)
    return "".join(f"{print_formula(k)} -> {format_value(a[k])}\n" for k in keys)
