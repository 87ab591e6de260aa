"""Command-line interface: ``gjl <command> ...``.

Exit codes: 0 success (or valid), 1 a negative answer (countermodel, failed
check, violated condition), 2 usage, parse or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .calculus import (
    ConstantSpec,
    calculus_id,
    check_derivation,
    format_derivation,
    parse_derivation,
)
from .canonical import FragmentTooSmall, build_fragment, truth_lemma_check
from .decide import ConsequenceQuery, conservativity_countermodel, decide_consequence
from .fitting import (
    SignatureError,
    UnverifiableError,
    check_closure,
    classify,
    cs_report,
    eval_world,
)
from .formats import (
    format_countermodel,
    format_model,
    format_mkrtychev_model,
    parse_assignment,
    parse_model,
    parse_mkrtychev_model,
)
from .goedel import format_value
from .mkrtychev import check_closure_m, classify_m, cs_report_m, eval_m
from .syntax import (
    And,
    Boxed,
    Formula,
    Implies,
    Just,
    is_propositional,
    parse_formula,
    parse_lines,
    parse_star_formula,
    parse_term,
    print_formula,
    print_term,
)
from .transforms import deduction_transform, lift, translate_derivation


class CLIError(Exception):
    pass


class Output:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: list[str] = []
        self.data: dict = {}

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def put(self, key, val) -> None:
        self.data[key] = val

    def render(self) -> str:
        if self.fmt == "json":
            return json.dumps(self.data, indent=2, sort_keys=True) + "\n"
        return "".join(line + "\n" for line in self.lines)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc.strerror}") from None


def _to_star(f: Formula) -> Formula:
    """Star-translate, leaving braced star atoms as they are."""
    if isinstance(f, (And, Implies)):
        return type(f)(_to_star(f.left), _to_star(f.right))
    if isinstance(f, Just):
        return Boxed(f.body, f.term)
    return f


def _cs(args, calc) -> Optional[ConstantSpec]:
    mode = getattr(args, "cs", None)
    if mode is None:
        return None
    if mode == "total":
        return ConstantSpec.total(calc)
    if mode == "none":
        return ConstantSpec.empty(calc)
    return ConstantSpec.finite(parse_lines(_read(mode)), calc)


def _yes(b: bool) -> str:
    return "yes" if b else "no"


# ---------------------------------------------------------------- commands


def cmd_parse(args, out: Output) -> int:
    texts = list(args.formula or [])
    if args.file:
        texts += [ln.split("#", 1)[0].strip() for ln in _read(args.file).splitlines()]
        texts = [t for t in texts if t]
    items = []
    for text in texts:
        f = parse_star_formula(text) if args.star else parse_formula(text)
        shown = print_formula(_to_star(f)) if args.translate else print_formula(f)
        out.line(shown)
        items.append({"input": text, "formula": shown})
    out.put("formulas", items)
    return 0


def cmd_eval_model(args, out: Output) -> int:
    m = parse_model(_read(args.model))
    f = parse_formula(args.formula)
    worlds = [args.world] if args.world else list(m.worlds)
    res = {}
    for w in worlds:
        v = format_value(eval_world(m, w, f))
        res[w] = v
        out.line(v if args.world else f"{w}: {v}")
    out.put("formula", print_formula(f))
    out.put("values", res)
    return 0


def cmd_eval_mkrtychev(args, out: Output) -> int:
    m = parse_mkrtychev_model(_read(args.model))
    f = parse_formula(args.formula)
    v = format_value(eval_m(m, f))
    out.line(v)
    out.put("formula", print_formula(f))
    out.put("value", v)
    return 0


def cmd_check_model(args, out: Output) -> int:
    calc = calculus_id(args.calculus)
    cs = _cs(args, calc)
    if args.mkrtychev:
        m = parse_mkrtychev_model(_read(args.model))
        viol = check_closure_m(m)
        cs_problems = cs_report_m(m, cs) if cs is not None else []
    else:
        m = parse_model(_read(args.model))
        viol = check_closure(m)
        cs_problems = cs_report(m, cs) if cs is not None else []
    problems = [f"closure {v}" for v in viol] + [f"cs {p}" for p in cs_problems]
    for p in problems:
        out.line(p)
    if not problems:
        out.line("OK")
    out.put("ok", not problems)
    out.put("problems", problems)
    return 1 if problems else 0


def cmd_classify(args, out: Output) -> int:
    if args.mkrtychev:
        c = classify_m(parse_mkrtychev_model(_read(args.model)))
        out.line("classes: " + " ".join(c.names()))
    else:
        c = classify(parse_model(_read(args.model)))
        out.line("classes: " + " ".join(c.names()))
        out.line(f"crisp: {_yes(c.crisp)}")
        out.put("crisp", c.crisp)
    for name, ok in c.conditions.items():
        out.line(f"{name}: {_yes(ok)}" + ("" if ok else f" ({c.failures[name]})"))
    out.put("classes", c.names())
    out.put("conditions", dict(c.conditions))
    return 0


def _load_derivation(args):
    calc = args.calculus
    d = parse_derivation(_read(args.proof), calculus=calc, star=getattr(args, "star", False))
    if args.cs is not None:
        d = type(d)(d.calculus, _cs(args, d.calculus), d.premises, d.steps)
    return d


def cmd_check_proof(args, out: Output) -> int:
    d = _load_derivation(args)
    res = check_derivation(d)
    if not res:
        out.line(f"FAIL step {res.step}: {res.reason}" if res.step else f"FAIL: {res.reason}")
        out.put("ok", False)
        out.put("step", res.step)
        out.put("reason", res.reason)
        return 1
    out.line(f"OK ({len(d.steps)} steps)")
    for n, schema in res.schemas:
        out.line(f"step {n}: {schema}")
    out.put("ok", True)
    out.put("steps", len(d.steps))
    out.put("axioms", {str(n): str(s) for n, s in res.schemas})
    return 0


def cmd_deduce(args, out: Output) -> int:
    d = _load_derivation(args)
    if args.discharge is not None:
        alpha = parse_formula(args.discharge)
    elif d.premises:
        alpha = d.premises[-1]
    else:
        raise CLIError("the derivation has no premise to discharge")
    e = deduction_transform(d, alpha)
    text = format_derivation(e)
    out.lines.extend(text.splitlines())
    out.put("derivation", text)
    out.put("conclusion", print_formula(e.conclusion))
    return 0


def cmd_lift(args, out: Output) -> int:
    d = _load_derivation(args)
    if args.terms:
        terms = [parse_term(t.strip()) for t in args.terms.split(",")]
    else:
        terms = [parse_term(f"x{i + 1}") for i in range(len(d.premises))]
    t, e = lift(d, terms)
    text = format_derivation(e)
    out.line(f"# term: {print_term(t)}")
    out.lines.extend(text.splitlines())
    out.put("term", print_term(t))
    out.put("derivation", text)
    return 0


def cmd_translate(args, out: Output) -> int:
    d = _load_derivation(args)
    tr = translate_derivation(d)
    text = format_derivation(tr.derivation)
    out.line(f"# premises 1-{tr.premise_count}: translated premises; the rest: used theorems")
    out.lines.extend(text.splitlines())
    out.put("derivation", text)
    out.put("used_theorems", [print_formula(f) for f in tr.used_theorems])
    return 0


def _query(args) -> ConsequenceQuery:
    premises = [_to_star(parse_star_formula(p)) for p in (args.premise or [])]
    if args.premises_file:
        premises += [_to_star(parse_star_formula(ln.split("#", 1)[0])) for ln in _read(args.premises_file).splitlines() if ln.split("#", 1)[0].strip()]
    return ConsequenceQuery(tuple(premises), _to_star(parse_star_formula(args.goal)), args.mode)


def cmd_decide(args, out: Output) -> int:
    q = _query(args)
    res = decide_consequence(q, cap=args.cap)
    out.put("valid", res.valid)
    if res.valid:
        out.line("valid")
        return 0
    text = format_countermodel(res.countermodel, res.atoms)
    out.lines.extend(text.splitlines())
    out.put("countermodel", {print_formula(a): format_value(res.countermodel[a]) for a in res.atoms})
    return 1


def cmd_countermodel(args, out: Output) -> int:
    q = _query(args)
    for f in q.premises + (q.goal,):
        if not is_propositional(f):
            raise CLIError("countermodels are built for queries over plain atoms only")
    res = decide_consequence(q, cap=args.cap)
    out.put("valid", res.valid)
    if res.valid:
        out.line("valid: no countermodel exists")
        return 1
    sig = set()
    for text in args.signature or []:
        sig.add((parse_term(text.split(" ", 1)[0]), parse_formula(text.split(" ", 1)[1])))
    m = conservativity_countermodel(res.countermodel, args.kind, sig)
    text = format_model(m) if args.kind == "fitting" else format_mkrtychev_model(m)
    out.lines.extend(text.splitlines())
    out.put("model", text)
    return 0


def cmd_truth_lemma(args, out: Output) -> int:
    evals = [parse_assignment(_read(p)) for p in args.assignment]
    theorems = [_to_star(parse_star_formula(ln.split("#", 1)[0])) for p in (args.theorems or []) for ln in _read(p).splitlines() if ln.split("#", 1)[0].strip()]
    frag = build_fragment(evals, theorems)
    formulas = [parse_formula(f) for f in args.formula]
    all_ok = True
    results = []
    for w in frag.worlds:
        for f in formulas:
            ok = truth_lemma_check(frag, w, f)
            all_ok &= ok
            v = format_value(eval_world(frag.model, w, f))
            out.line(f"{w} {print_formula(f)}: {'ok' if ok else 'MISMATCH'} {v}")
            results.append({"world": w, "formula": print_formula(f), "ok": ok, "value": v})
    out.put("results", results)
    out.put("ok", all_ok)
    return 0 if all_ok else 1


# ------------------------------------------------------------------ parser


def _add_query_flags(p):
    p.add_argument("--premise", action="append", help="premise formula (repeatable)")
    p.add_argument("--premises-file", help="file with one premise per line")
    p.add_argument("--goal", required=True, help="goal formula")
    p.add_argument("--mode", choices=("leq", "one"), default="one", help="consequence relation (default: one)")
    p.add_argument("--cap", type=int, default=None, help="atom cap (default: $GJL_ATOM_CAP or 8)")


def _add_proof_flags(p):
    p.add_argument("proof", help="derivation file ('-' for stdin)")
    p.add_argument("--calculus", help="override the @calculus directive")
    p.add_argument("--cs", help="constant specification: total, none, or a file of members")
    p.add_argument("--star", action="store_true", help="formulas may contain braced star atoms")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gjl", description="Goedel justification logic toolkit")
    ap.add_argument("--version", action="version", version=f"gjl {__version__}")
    ap.add_argument("--format", choices=("lines", "json"), default="lines", help="output format")
    sub = ap.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="sub_format", choices=("lines", "json"), help=argparse.SUPPRESS)

    p = sub.add_parser("parse", parents=[common], help="parse and re-print formulas")
    p.add_argument("file", nargs="?", help="file with one formula per line")
    p.add_argument("--formula", action="append")
    p.add_argument("--star", action="store_true", help="accept braced star atoms")
    p.add_argument("--translate", action="store_true", help="print the star translation")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval-model", parents=[common], help="evaluate a formula in a Fitting model")
    p.add_argument("model")
    p.add_argument("--formula", required=True)
    p.add_argument("--world", help="world id (default: every world)")
    p.set_defaults(func=cmd_eval_model)

    p = sub.add_parser("eval-mkrtychev", parents=[common], help="evaluate a formula in a world-free model")
    p.add_argument("model")
    p.add_argument("--formula", required=True)
    p.set_defaults(func=cmd_eval_mkrtychev)

    p = sub.add_parser("check-model", parents=[common], help="check closure conditions and constant-specification respect")
    p.add_argument("model")
    p.add_argument("--mkrtychev", action="store_true", help="the file holds a world-free model")
    p.add_argument("--calculus", default="gj")
    p.add_argument("--cs", help="total, none, or a file of members")
    p.set_defaults(func=cmd_check_model)

    p = sub.add_parser("classify", parents=[common], help="report model classes and conditions")
    p.add_argument("model")
    p.add_argument("--mkrtychev", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("check-proof", parents=[common], help="check a derivation")
    _add_proof_flags(p)
    p.set_defaults(func=cmd_check_proof)

    p = sub.add_parser("deduce", parents=[common], help="apply the deduction theorem")
    _add_proof_flags(p)
    p.add_argument("--discharge", help="premise to discharge (default: the last one)")
    p.set_defaults(func=cmd_deduce)

    p = sub.add_parser("lift", parents=[common], help="internalize a derivation")
    _add_proof_flags(p)
    p.add_argument("--terms", help="comma-separated terms for the premises (default x1,x2,...)")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("translate", parents=[common], help="star-translate a derivation")
    _add_proof_flags(p)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("decide", parents=[common], help="decide propositional Goedel consequence")
    _add_query_flags(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("countermodel", parents=[common], help="single-world countermodel for a non-consequence")
    _add_query_flags(p)
    p.add_argument("--kind", choices=("fitting", "mkrtychev"), default="fitting")
    p.add_argument("--signature", action="append", help="signature pair 'term formula' (repeatable)")
    p.set_defaults(func=cmd_countermodel)

    p = sub.add_parser("truth-lemma", parents=[common], help="check the truth lemma on a canonical fragment")
    p.add_argument("--assignment", action="append", required=True, help="assignment file (one per world)")
    p.add_argument("--theorems", action="append", help="file of star-translated theorems")
    p.add_argument("--formula", action="append", required=True)
    p.set_defaults(func=cmd_truth_lemma)
    return ap


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(getattr(args, "sub_format", None) or args.format)
    try:
        code = args.func(args, out)
    except FragmentTooSmall as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except (CLIError, ValueError, TypeError, KeyError, SignatureError, UnverifiableError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        stderr.write(f"error: {msg}\n")
        return 2
    stdout.write(out.render())
    return code


def main() -> None:
    sys.exit(run())
