"""Context-free grammars over finite words.

Grammars are immutable values.  Everything here is exact: derivation counts
are computed with arbitrary precision and an explicit infinity, and the
language operations (reduction, prefix closure, intersection with a DFA)
are the classical constructions.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .graph import tarjan
from .words import Alphabet, Dfa, FormatError

INF = float("inf")
DEFAULT_CAP = 64


@dataclass(frozen=True)
class Rule:
    lhs: str
    rhs: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "rhs", tuple(self.rhs))

    def __str__(self):
        return f"{self.lhs} -> {' '.join(self.rhs) or 'λ'}"


@dataclass(frozen=True)
class Cfg:
    terminals: Alphabet
    nonterminals: tuple[str, ...]
    start: str
    rules: tuple[Rule, ...]

    def __post_init__(self):
        terms = self.terminals if isinstance(self.terminals, Alphabet) else Alphabet(tuple(self.terminals))
        nts = tuple(self.nonterminals)
        rules = tuple(r if isinstance(r, Rule) else Rule(r[0], tuple(r[1])) for r in self.rules)
        object.__setattr__(self, "terminals", terms)
        object.__setattr__(self, "nonterminals", nts)
        object.__setattr__(self, "rules", rules)
        if len(set(nts)) != len(nts):
            raise ValueError("duplicate nonterminals")
        clash = set(nts) & set(terms)
        if clash:
            raise ValueError(f"symbols used as both terminal and nonterminal: {sorted(clash)}")
        if self.start not in nts:
            raise ValueError(f"start symbol {self.start!r} is not a declared nonterminal")
        declared = set(nts) | set(terms)
        for r in rules:
            if r.lhs not in nts:
                raise ValueError(f"rule {r}: lhs is not a nonterminal")
            for s in r.rhs:
                if s not in declared:
                    raise ValueError(f"rule {r}: undeclared symbol {s!r}")

    def is_terminal(self, s: str) -> bool:
        return s in self.terminals

    def rules_for(self, a: str) -> list[Rule]:
        return [r for r in self.rules if r.lhs == a]

    def to_json(self) -> dict:
        return {
            "terminals": list(self.terminals),
            "nonterminals": list(self.nonterminals),
            "start": self.start,
            "rules": [{"lhs": r.lhs, "rhs": list(r.rhs)} for r in self.rules],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> Cfg:
        try:
            return cls(
                tuple(data["terminals"]),
                tuple(data["nonterminals"]),
                data["start"],
                tuple(Rule(r["lhs"], tuple(r["rhs"])) for r in data["rules"]),
            )
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed grammar JSON: {exc}") from exc

    @classmethod
    def loads(cls, text: str) -> Cfg:
        try:
            return cls.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FormatError(f"grammar is not valid JSON: {exc}") from exc


def grammar(terminals: str, start: str, productions: Mapping[str, Iterable]) -> Cfg:
    """Compact builder: ``productions`` maps a nonterminal to alternatives.

    Each alternative is a sequence of symbols or a whitespace-separated
    string of symbols; ``""`` is the empty word.
    """
    rules = []
    for lhs, alts in productions.items():
        for alt in alts:
            rules.append(Rule(lhs, tuple(alt.split() if isinstance(alt, str) else alt)))
    nts = [start] + [a for a in productions if a != start]
    return Cfg(tuple(terminals), tuple(nts), start, tuple(rules))


@dataclass(frozen=True)
class ParseCount:
    """Derivation count: ``exact``, ``more_than`` (cap exceeded) or ``infinite``."""

    kind: str
    value: int = 0
    witness: tuple = field(default=(), compare=False)

    @classmethod
    def exact(cls, k: int) -> ParseCount:
        return cls("exact", k)

    @classmethod
    def more_than(cls, cap: int) -> ParseCount:
        return cls("more_than", cap)

    @classmethod
    def infinite(cls, witness: tuple) -> ParseCount:
        return cls("infinite", 0, tuple(witness))

    @property
    def positive(self) -> bool:
        return self.kind != "exact" or self.value > 0

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind != "infinite":
            out["value"] = self.value
        else:
            out["cycle"] = list(self.witness)
        return out

    def __str__(self):
        if self.kind == "exact":
            return f"Exact({self.value})"
        if self.kind == "more_than":
            return f"MoreThan({self.value})"
        return "Infinite"


# -- reduction ---------------------------------------------------------------


def productive(g: Cfg) -> set[str]:
    prod: set[str] = set()
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            if r.lhs not in prod and all(g.is_terminal(s) or s in prod for s in r.rhs):
                prod.add(r.lhs)
                changed = True
    return prod


@lru_cache(maxsize=256)
def reduce(g: Cfg) -> Cfg:
    """Drop unproductive and unreachable nonterminals."""
    prod = productive(g)
    if g.start not in prod:
        return Cfg(g.terminals, (g.start,), g.start, ())
    rules = [r for r in g.rules if r.lhs in prod and all(g.is_terminal(s) or s in prod for s in r.rhs)]
    reach = {g.start}
    todo = [g.start]
    while todo:
        a = todo.pop()
        for r in rules:
            if r.lhs == a:
                for s in r.rhs:
                    if not g.is_terminal(s) and s not in reach:
                        reach.add(s)
                        todo.append(s)
    nts = tuple(a for a in g.nonterminals if a in reach)
    return Cfg(g.terminals, nts, g.start, tuple(r for r in rules if r.lhs in reach))


# -- binarized form used by the counting chart and the DFA product -----------


@dataclass
class _Binary:
    terminals: frozenset
    symbols: list  # nonterminals, original then helpers
    origin: dict  # helper -> original lhs
    eps: dict  # A -> number of A -> λ rules
    term: dict  # (A, a) -> multiplicity
    unit: list  # (A, B)
    binary: list  # (A, B, C)
    nullcount: dict = field(default_factory=dict)
    null_cycles: list = field(default_factory=list)
    same_span: dict = field(default_factory=dict)  # A -> [(B, weight)]
    order: list = field(default_factory=list)  # same-span SCCs, sinks first
    cyclic: list = field(default_factory=list)
    by_left: dict = field(default_factory=dict)
    by_right: dict = field(default_factory=dict)
    null_then: dict = field(default_factory=dict)  # letter -> [(A, count)]


def _mul(a, b):
    if a == 0 or b == 0:
        return 0
    return a * b


@lru_cache(maxsize=256)
def _binarize(g: Cfg) -> _Binary:
    """Rules of length <= 2 in bijection with the original derivations."""
    terms = frozenset(g.terminals)
    b = _Binary(terms, list(g.nonterminals), {}, {}, {}, [], [])
    for a in g.nonterminals:
        b.origin[a] = a
    for idx, r in enumerate(g.rules):
        rhs = r.rhs
        if not rhs:
            b.eps[r.lhs] = b.eps.get(r.lhs, 0) + 1
        elif len(rhs) == 1:
            if rhs[0] in terms:
                b.term[(r.lhs, rhs[0])] = b.term.get((r.lhs, rhs[0]), 0) + 1
            else:
                b.unit.append((r.lhs, rhs[0]))
        else:
            prev = rhs[0]
            for m in range(1, len(rhs) - 1):
                h = ("#", idx, m)
                b.symbols.append(h)
                b.origin[h] = r.lhs
                b.binary.append((h, prev, rhs[m]))
                prev = h
            b.binary.append((r.lhs, prev, rhs[-1]))

    # number of derivations of the empty word from each symbol
    nullable: set = set(b.eps)
    changed = True
    while changed:
        changed = False
        for a, x in b.unit:
            if a not in nullable and x in nullable:
                nullable.add(a)
                changed = True
        for a, x, y in b.binary:
            if a not in nullable and x in nullable and y in nullable:
                nullable.add(a)
                changed = True
    nsucc: dict = {a: [] for a in nullable}
    for a, x in b.unit:
        if a in nullable and x in nullable:
            nsucc[a].append(x)
    for a, x, y in b.binary:
        if a in nullable and x in nullable and y in nullable:
            nsucc[a] += [x, y]
    E: dict = {}
    for comp in tarjan(list(nullable), lambda a: nsucc[a]):
        if len(comp) > 1 or comp[0] in nsucc[comp[0]]:
            for a in comp:
                E[a] = INF
            b.null_cycles.append(tuple(comp))
            continue
        (a,) = comp
        total = b.eps.get(a, 0)
        for p, x in b.unit:
            if p == a:
                total += E.get(x, 0)
        for p, x, y in b.binary:
            if p == a:
                total += _mul(E.get(x, 0), E.get(y, 0))
        E[a] = total
    b.nullcount = E

    same: dict = {a: [] for a in b.symbols}
    for a, x in b.unit:
        same[a].append((x, 1))
    for a, x, y in b.binary:
        if x not in terms and E.get(y, 0):
            same[a].append((x, E[y]))
        if y not in terms and E.get(x, 0):
            same[a].append((y, E[x]))
    b.same_span = same
    b.order = tarjan(list(b.symbols), lambda a: [x for x, _ in same[a]])
    b.cyclic = [len(c) > 1 or any(x == c[0] for x, _ in same[c[0]]) for c in b.order]
    for a, x, y in b.binary:
        b.by_left.setdefault(x, []).append((a, y))
        b.by_right.setdefault(y, []).append((a, x))
        if y in terms and E.get(x, 0):
            b.null_then.setdefault(y, []).append((a, E[x]))
        if x in terms and E.get(y, 0):
            b.null_then.setdefault(x, []).append((a, E[y]))
    return b


def _chart(g: Cfg, w: str):
    """All-span derivation counts; returns ``(chart, cycles)``.

    ``chart[i][j]`` maps each symbol deriving ``w[i:j]`` to its count (possibly
    INF); empty spans are implicit and given by the nullable counts.
    """
    b = _binarize(g)
    n = len(w)
    cycles: list = list(b.null_cycles)
    chart = [[None] * (n + 1) for _ in range(n + 1)]
    # split[i][j]: chart cell plus the letter itself on length-1 spans
    split = [[None] * (n + 1) for _ in range(n + 1)]
    by_left = b.by_left

    for length in range(1, n + 1):
        for i in range(0, n - length + 1):
            j = i + length
            c: dict = {}
            if length == 1:
                t = w[i]
                for (a, x), k in b.term.items():
                    if x == t:
                        c[a] = c.get(a, 0) + k
                # a -> x t or a -> t x with x deriving λ
                for a, k in b.null_then.get(t, ()):
                    c[a] = c.get(a, 0) + k
            for p in range(i + 1, j):
                right = split[p][j]
                for x, lv in split[i][p].items():
                    for a, y in by_left.get(x, ()):
                        rv = right.get(y)
                        if rv:
                            c[a] = c.get(a, 0) + _mul(lv, rv)
            if not c:
                chart[i][j] = {}
                split[i][j] = {w[i]: 1} if length == 1 else {}
                continue
            cell: dict = {}
            for comp, cyc in zip(b.order, b.cyclic):
                if cyc:
                    live = any(
                        c.get(a, 0) or any(wt and cell.get(x, 0) for x, wt in b.same_span[a])
                        for a in comp
                    )
                    if live:
                        for a in comp:
                            cell[a] = INF
                        cycles.append(tuple(comp))
                    continue
                (a,) = comp
                total = c.get(a, 0)
                for x, wt in b.same_span[a]:
                    total += _mul(wt, cell.get(x, 0))
                if total:
                    cell[a] = total
            chart[i][j] = cell
            split[i][j] = {**cell, w[i]: 1} if length == 1 else cell
    return chart, cycles


def _origin_names(g: Cfg, comp) -> tuple:
    b = _binarize(g)
    seen = []
    for s in comp:
        name = b.origin.get(s, s)
        if name not in seen:
            seen.append(name)
    return tuple(seen)


def count_derivations(g: Cfg, w: str, cap: int = DEFAULT_CAP) -> ParseCount:
    """Number of distinct leftmost derivations of ``w`` in ``g``."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if not g.terminals.covers(w):
        return ParseCount.exact(0)
    b = _binarize(g)
    if w:
        chart, cycles = _chart(g, w)
        total = chart[0][len(w)].get(g.start, 0)
    else:
        cycles = list(b.null_cycles)
        total = b.nullcount.get(g.start, 0)
    if total == INF:
        return ParseCount.infinite(_origin_names(g, cycles[0]) if cycles else ())
    if total > cap:
        return ParseCount.more_than(cap)
    return ParseCount.exact(int(total))


def accepts(g: Cfg, w: str) -> bool:
    return count_derivations(g, w, 1).positive


def prefix_lengths(g: Cfg, s: str) -> list[int]:
    """Lengths ``l`` with ``s[:l]`` in L(g), in increasing order."""
    if not g.terminals.covers(s):
        cut = next(i for i, a in enumerate(s) if a not in g.terminals)
        s = s[:cut]
    b = _binarize(g)
    out = [0] if b.nullcount.get(g.start, 0) else []
    if s:
        chart, _ = _chart(g, s)
        out += [l for l in range(1, len(s) + 1) if chart[0][l].get(g.start, 0)]
    return out


# -- language enumeration ----------------------------------------------------


def words_up_to(g: Cfg, n: int) -> set[str]:
    """All words of L(g) of length at most ``n``."""
    lang: dict = {a: set() for a in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            acc = {""}
            for s in r.rhs:
                part = {s} if g.is_terminal(s) else lang[s]
                acc = {x + y for x in acc for y in part if len(x) + len(y) <= n}
                if not acc:
                    break
            new = acc - lang[r.lhs]
            if new:
                lang[r.lhs] |= new
                changed = True
    return lang[g.start]


def shortest_words(g: Cfg) -> dict[str, str]:
    """A shortest terminal word for every productive nonterminal."""
    best: dict[str, str] = {}
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            if all(g.is_terminal(s) or s in best for s in r.rhs):
                w = "".join(s if g.is_terminal(s) else best[s] for s in r.rhs)
                if r.lhs not in best or len(w) < len(best[r.lhs]):
                    best[r.lhs] = w
                    changed = True
    return best


def shortest_nonempty_words(g: Cfg) -> dict[str, str]:
    short = shortest_words(g)
    best: dict[str, str] = {}
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            if not all(g.is_terminal(s) or s in short for s in r.rhs):
                continue
            for j, s in enumerate(r.rhs):
                if g.is_terminal(s):
                    mid = s
                elif s in best:
                    mid = best[s]
                else:
                    continue
                w = "".join(
                    mid if k == j else (x if g.is_terminal(x) else short[x])
                    for k, x in enumerate(r.rhs)
                )
                if r.lhs not in best or len(w) < len(best[r.lhs]):
                    best[r.lhs] = w
                    changed = True
    return best


@dataclass(frozen=True)
class PumpWitness:
    """``outer_left . inner_left^k . middle . inner_right^k . outer_right`` is in L for all k."""

    outer_left: str
    inner_left: str
    middle: str
    inner_right: str
    outer_right: str

    def word(self, k: int) -> str:
        return self.outer_left + self.inner_left * k + self.middle + self.inner_right * k + self.outer_right

    def to_json(self) -> dict:
        return {
            "outer_left": self.outer_left,
            "inner_left": self.inner_left,
            "middle": self.middle,
            "inner_right": self.inner_right,
            "outer_right": self.outer_right,
        }


def is_infinite(g: Cfg) -> tuple[bool, PumpWitness | None]:
    """Whether L(g) is infinite, with a pumping family of members when it is."""
    g = reduce(g)
    if not g.rules:
        return False, None
    short = shortest_words(g)
    nonempty = shortest_nonempty_words(g)
    # edge (A, B, rule, position); grows when the siblings can produce a letter
    edges: dict = {a: [] for a in g.nonterminals}
    for r in g.rules:
        for m, s in enumerate(r.rhs):
            if g.is_terminal(s):
                continue
            others = r.rhs[:m] + r.rhs[m + 1 :]
            grows = any(g.is_terminal(x) or x in nonempty for x in others)
            edges[r.lhs].append((s, r, m, grows))
    comps = tarjan(list(g.nonterminals), lambda a: [e[0] for e in edges[a]])
    comp_of = {a: i for i, c in enumerate(comps) for a in c}
    pivot = None
    for a in g.nonterminals:
        for e in edges[a]:
            if e[3] and comp_of[e[0]] == comp_of[a]:
                pivot = (a, e)
                break
        if pivot:
            break
    if pivot is None:
        return False, None

    def context(r: Rule, m: int, grow: bool) -> tuple[str, str]:
        words = [x if g.is_terminal(x) else short[x] for x in r.rhs]
        if grow and not any(words[k] for k in range(len(words)) if k != m):
            k = next(k for k, x in enumerate(r.rhs) if k != m and (g.is_terminal(x) or x in nonempty))
            words[k] = r.rhs[k] if g.is_terminal(r.rhs[k]) else nonempty[r.rhs[k]]
        return "".join(words[:m]), "".join(words[m + 1 :])

    def path(src, dst, members=None):
        prev = {src: None}
        q = deque([src])
        while q:
            a = q.popleft()
            if a == dst:
                break
            for e in edges[a]:
                if members is not None and e[0] not in members:
                    continue
                if e[0] not in prev:
                    prev[e[0]] = (a, e)
                    q.append(e[0])
        steps = []
        a = dst
        while prev[a] is not None:
            p, e = prev[a]
            steps.append(e)
            a = p
        return steps[::-1]

    def fold(steps, first=None):
        left, right = "", ""
        seq = ([first] if first else []) + steps
        for k, e in enumerate(seq):
            l, r = context(e[1], e[2], grow=first is not None and k == 0)
            left += l
            right = r + right
        return left, right

    a, e = pivot
    members = set(comps[comp_of[a]])
    inner_left, inner_right = fold(path(e[0], a, members), first=e)
    outer_left, outer_right = fold(path(g.start, a))
    return True, PumpWitness(outer_left, inner_left, short[a], inner_right, outer_right)


def max_word_length(g: Cfg) -> int | None:
    """Length of the longest word of L(g), None when L(g) is empty or infinite."""
    g = reduce(g)
    if not g.rules or is_infinite(g)[0]:
        return None
    longest: dict[str, int] = {}
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            if all(g.is_terminal(s) or s in longest for s in r.rhs):
                n = sum(1 if g.is_terminal(s) else longest[s] for s in r.rhs)
                if n > longest.get(r.lhs, -1):
                    longest[r.lhs] = n
                    changed = True
    return longest[g.start]


def finite_language(g: Cfg) -> set[str]:
    n = max_word_length(g)
    if n is None:
        if reduce(g).rules:
            raise ValueError("language is infinite")
        return set()
    return words_up_to(reduce(g), n)


# -- constructions -------------------------------------------------------------


def _fresh_suffix(names: Iterable[str], mark: str) -> str:
    names = set(names)
    suffix = mark
    while any(n + suffix in names for n in names):
        suffix += mark
    return suffix


@lru_cache(maxsize=256)
def prefix_closure(g: Cfg) -> Cfg:
    """Grammar of LF(L(g)); the empty language stays empty."""
    g = reduce(g)
    if not g.rules:
        return g
    sfx = _fresh_suffix(g.nonterminals, "'")
    prime = {a: a + sfx for a in g.nonterminals}
    rules = list(g.rules)
    for a in g.nonterminals:
        rules.append(Rule(prime[a], ()))
    for r in g.rules:
        for m, s in enumerate(r.rhs):
            last = s if g.is_terminal(s) else prime[s]
            rules.append(Rule(prime[r.lhs], r.rhs[:m] + (last,)))
    nts = tuple(prime[a] for a in g.nonterminals) + g.nonterminals
    out = Cfg(g.terminals, nts, prime[g.start], tuple(dict.fromkeys(rules)))
    return reduce(out)


def intersect_dfa(g: Cfg, d: Dfa) -> Cfg:
    """Grammar for L(g) ∩ L(d) (triple construction over live DFA states)."""
    b = _binarize(g)
    live = d.live_states()
    terms = b.terminals

    def name(p, x, q):
        x = f"#{x[1]}.{x[2]}" if isinstance(x, tuple) else x
        return f"<{p}|{x}|{q}>"

    facts: set = set()
    by_start: dict = {}
    by_end: dict = {}
    todo: list = []

    def add(t):
        if t in facts:
            return
        facts.add(t)
        by_start.setdefault((t[0], t[1]), []).append(t)
        by_end.setdefault((t[1], t[2]), []).append(t)
        todo.append(t)

    for p in live:
        for a in terms:
            q = d.step(p, a)
            if q in live:
                add((p, a, q))
        for a in b.eps:
            add((p, a, p))
    unit_of: dict = {}
    for a, x in b.unit:
        unit_of.setdefault(x, []).append(a)
    for a, t in b.term:
        unit_of.setdefault(t, []).append(a)
    while todo:
        p, x, q = todo.pop()
        for a in unit_of.get(x, ()):
            add((p, a, q))
        for a, y in b.by_left.get(x, ()):
            for _, _, r in list(by_start.get((q, y), ())):
                add((p, a, r))
        for a, y in b.by_right.get(x, ()):
            for o, _, _ in list(by_end.get((y, p), ())):
                add((o, a, q))

    def sym(p, x, q):
        return x if x in terms else name(p, x, q)

    rules = []
    for p, a, q in facts:
        if a in terms:
            continue
        lhs = name(p, a, q)
        if p == q:
            rules += [Rule(lhs, ())] * b.eps.get(a, 0)
        for (x, t), k in b.term.items():
            if x == a and d.step(p, t) == q:
                rules += [Rule(lhs, (t,))] * k
        for x, y in b.unit:
            if x == a and (p, y, q) in facts:
                rules.append(Rule(lhs, (sym(p, y, q),)))
        for x, y, z in b.binary:
            if x != a:
                continue
            for _, _, r in by_start.get((p, y), ()):
                if (r, z, q) in facts:
                    rules.append(Rule(lhs, (sym(p, y, r), sym(r, z, q))))
    start = "<start>"
    while start in {name(*t) for t in facts}:
        start = "<" + start + ">"
    for f in d.finals:
        if (d.initial, g.start, f) in facts:
            rules.append(Rule(start, (name(d.initial, g.start, f),)))
    nts = [start] + sorted({r.lhs for r in rules if r.lhs != start})
    return reduce(Cfg(g.terminals, tuple(nts), start, tuple(rules)))
