"""Command-line front end: one query per invocation, one JSON report on stdout.

Files are grammar / BPDA / 2-tape automaton JSON; ``corpus:NAME`` may be
given instead of a path.  Exit status is 0 for any answered query and 2 for
bad input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import corpus
from .cfl import Cfg, count_derivations, words_up_to
from .ops import adherence_member, count_decompositions, delta_limit_member, omega_power_bpda
from .pda import Bpda, accepts_lasso, count_runs_bounded, is_empty
from .relations import TwoTapeBa, accepting_computation, classify_computations
from .words import FormatError, LassoWord, parse_lasso


class InputError(Exception):
    pass


def _load(source: str, cls, kind: str):
    if source.startswith("corpus:"):
        try:
            entry = corpus.get(source[len("corpus:") :])
        except KeyError as exc:
            raise InputError(str(exc)) from None
        if entry.kind != kind:
            raise InputError(f"corpus entry {entry.name!r} is a {entry.kind}, not a {kind}")
        return entry.obj
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None
    try:
        return cls.loads(text)
    except (FormatError, ValueError) as exc:
        raise InputError(f"{source}: {exc}") from None


def _lasso(text: str) -> LassoWord:
    try:
        return parse_lasso(text)
    except (FormatError, ValueError) as exc:
        raise InputError(str(exc)) from None


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


# -- subcommand handlers -------------------------------------------------------


def cmd_member_lasso(args) -> dict:
    a = _load(args.bpda, Bpda, "bpda")
    w = _lasso(args.lasso)
    return {"verdict": accepts_lasso(a, w)}


def cmd_empty(args) -> dict:
    a = _load(args.bpda, Bpda, "bpda")
    empty, wit = is_empty(a)
    return {"empty": empty, "witness": None if wit is None else str(wit)}


def cmd_count_runs(args) -> dict:
    a = _load(args.bpda, Bpda, "bpda")
    w = _lasso(args.lasso)
    return count_runs_bounded(a, w, args.steps, args.stack).to_json()


def cmd_adherence(args) -> dict:
    g = _load(args.grammar, Cfg, "grammar")
    return adherence_member(g, _lasso(args.lasso)).to_json()


def cmd_delta_limit(args) -> dict:
    g = _load(args.grammar, Cfg, "grammar")
    return delta_limit_member(g, _lasso(args.lasso)).to_json()


def cmd_omega_power_member(args) -> dict:
    g = _load(args.grammar, Cfg, "grammar")
    return {"verdict": accepts_lasso(omega_power_bpda(g), _lasso(args.lasso))}


def cmd_decompose(args) -> dict:
    g = _load(args.grammar, Cfg, "grammar")
    return count_decompositions(g, _lasso(args.lasso), args.bound).to_json()


def cmd_rel_member(args) -> dict:
    t = _load(args.rel, TwoTapeBa, "relation")
    comp = accepting_computation(t, _lasso(args.input), _lasso(args.output))
    if comp is None:
        return {"verdict": False}
    stem, cycle = comp
    return {"verdict": True, "computation": {"stem": stem, "cycle": cycle}}


def cmd_rel_classify(args) -> dict:
    t = _load(args.rel, TwoTapeBa, "relation")
    return classify_computations(t, _lasso(args.input), _lasso(args.output)).to_json()


def cmd_parse_count(args) -> dict:
    g = _load(args.grammar, Cfg, "grammar")
    if not g.terminals.covers(args.word):
        raise InputError(f"word {args.word!r} uses letters outside the grammar's terminals")
    return count_derivations(g, args.word, args.cap).to_json()


def _random_lasso(rng: random.Random, letters: str) -> LassoWord:
    u = "".join(rng.choice(letters) for _ in range(rng.randint(0, 6)))
    v = "".join(rng.choice(letters) for _ in range(rng.randint(1, 4)))
    return LassoWord(u, v)


def cmd_corpus(args) -> dict:
    if args.action == "list":
        return {
            "entries": [
                {"name": n, "kind": corpus.get(n).kind, "description": corpus.get(n).anchor} for n in corpus.names()
            ]
        }
    if args.action == "dump":
        if not args.name:
            raise InputError("corpus dump needs an entry name")
        try:
            return corpus.get(args.name).to_json()
        except KeyError as exc:
            raise InputError(str(exc)) from None
    # check: grammars against their predicates, closed forms on random lassos
    rng = random.Random(args.seed)
    failures = []
    checked = 0
    for n in corpus.names():
        e = corpus.get(n)
        if e.kind != "grammar" or e.checker is None:
            continue
        g = e.obj
        produced = words_up_to(g, args.length)
        for x in produced:
            checked += 1
            if not e.checker(x):
                failures.append({"entry": n, "word": x, "problem": "generated but outside the definition"})
    pairs = [
        ("C", "Adh_C", adherence_member, "ab"),
        ("L1", "Adh_L1", adherence_member, "abcd"),
        ("L1", "delta_L1", delta_limit_member, "abcd"),
        ("V", "delta_V", delta_limit_member, "abc"),
    ]
    for gname, form, decide, letters in pairs:
        g = corpus.get(gname).obj
        for _ in range(args.samples):
            w = _random_lasso(rng, letters)
            checked += 1
            got = decide(g, w).verdict
            if got != corpus.reference_check(form, w):
                failures.append({"entry": gname, "closed_form": form, "lasso": str(w), "decided": got})
    return {"checked": checked, "failures": failures, "ok": not failures}


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="omegamb", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("member-lasso", help="does the BPDA accept the lasso word")
    s.add_argument("--bpda", required=True)
    s.add_argument("--lasso", required=True)
    s.set_defaults(func=cmd_member_lasso)

    s = sub.add_parser("empty", help="emptiness of a BPDA, with a witness lasso")
    s.add_argument("--bpda", required=True)
    s.set_defaults(func=cmd_empty)

    s = sub.add_parser("count-runs", help="bounded count of accepting runs on a lasso")
    s.add_argument("--bpda", required=True)
    s.add_argument("--lasso", required=True)
    s.add_argument("--steps", type=_positive, default=256)
    s.add_argument("--stack", type=_positive, default=24)
    s.set_defaults(func=cmd_count_runs)

    for name, func, text in (
        ("adherence", cmd_adherence, "lasso membership in Adh(L(G))"),
        ("delta-limit", cmd_delta_limit, "lasso membership in L(G)^δ"),
        ("omega-power-member", cmd_omega_power_member, "lasso membership in L(G)^ω"),
    ):
        s = sub.add_parser(name, help=text)
        s.add_argument("--grammar", required=True)
        s.add_argument("--lasso", required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("decompose", help="factorizations of a lasso into words of L(G)")
    s.add_argument("--grammar", required=True)
    s.add_argument("--lasso", required=True)
    s.add_argument("--bound", type=_positive, default=16)
    s.set_defaults(func=cmd_decompose)

    for name, func, text in (
        ("rel-member", cmd_rel_member, "is the lasso pair in the relation"),
        ("rel-classify", cmd_rel_classify, "cardinality class of accepting computations"),
    ):
        s = sub.add_parser(name, help=text)
        s.add_argument("--rel", required=True)
        s.add_argument("--in", dest="input", required=True)
        s.add_argument("--out", dest="output", required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("parse-count", help="number of leftmost derivations of a word")
    s.add_argument("--grammar", required=True)
    s.add_argument("--word", required=True)
    s.add_argument("--cap", type=_positive, default=64)
    s.set_defaults(func=cmd_parse_count)

    s = sub.add_parser("corpus", help="list, dump or self-check the reference corpus")
    s.add_argument("action", choices=["list", "dump", "check"])
    s.add_argument("name", nargs="?")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=int, default=50, help="random lassos per closed form (check)")
    s.add_argument("--length", type=int, default=8, help="enumeration length (check)")
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    query = {k: v for k, v in vars(args).items() if k != "func"}
    start = time.perf_counter()
    try:
        result = args.func(args)
    except InputError as exc:
        print(f"omegamb: {exc}", file=sys.stderr)
        return 2
    report = {"query": query, **result, "timing_ms": round((time.perf_counter() - start) * 1000, 3)}
    print(json.dumps(report, ensure_ascii=False))
    return 0


if __name__ == "__main__":
    sys.exit(main())
