"""Operations turning finitary languages into ω-languages.

* δ-limit ``W^δ``: ω-words with infinitely many prefixes in W.
* adherence ``Adh(W)``: ω-words all of whose prefixes are prefixes of W.
* ω-power ``V^ω``: infinite concatenations of non-empty words of V.

Membership of a lasso word in the first two is exact: the prefixes of
``u.v^ω`` form a regular language, so "infinitely many prefixes in W" is
infiniteness of a context-free language.  Adherence reduces to the δ-limit
of the prefix closure, since a prefix-closed set containing infinitely many
prefixes of an ω-word contains all of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm

from .cfl import (
    Cfg,
    PumpWitness,
    Rule,
    accepts,
    finite_language,
    intersect_dfa,
    is_infinite,
    max_word_length,
    prefix_closure,
    prefix_lengths,
    reduce,
)
from .graph import FINITE, Analyzer, Graph, canonical_lasso
from .pda import Bpda, Transition
from .words import LassoWord, prefix_dfa, prefix_of


@dataclass
class DeltaLimitResult:
    verdict: bool
    pump: PumpWitness | None = None
    prefixes: list = field(default_factory=list)

    def to_json(self) -> dict:
        if self.verdict:
            return {"verdict": True, "pump": self.pump.to_json()}
        return {"verdict": False, "prefixes_in_language": self.prefixes}


@dataclass
class AdherenceResult:
    verdict: bool
    refutation: str | None = None
    pump: PumpWitness | None = None

    def to_json(self) -> dict:
        if self.verdict:
            return {"verdict": True, "pump": self.pump.to_json()}
        return {"verdict": False, "refutation": self.refutation}


def prefixes_in(g: Cfg, w: LassoWord) -> Cfg:
    """Grammar for the set of finite prefixes of ``w`` that lie in L(g)."""
    letters = set(g.terminals) | w.alphabet()
    return reduce(intersect_dfa(g, prefix_dfa(w, letters)))


def delta_limit_member(g: Cfg, w: LassoWord) -> DeltaLimitResult:
    h = prefixes_in(g, w)
    inf, pump = is_infinite(h)
    if inf:
        return DeltaLimitResult(True, pump)
    return DeltaLimitResult(False, None, sorted(finite_language(h), key=len))


def adherence_member(g: Cfg, w: LassoWord) -> AdherenceResult:
    res = delta_limit_member(prefix_closure(g), w)
    if res.verdict:
        return AdherenceResult(True, None, res.pump)
    # the prefixes of w inside LF(W) are exactly those up to some length
    n = len(res.prefixes[-1]) + 1 if res.prefixes else 0
    return AdherenceResult(False, prefix_of(w, n))


# -- substitution ----------------------------------------------------------------


def substitute(outer: Cfg, images: dict) -> Cfg:
    """Grammar of the image of L(outer) under ``a -> L(images[a])``.

    Nonterminals of the image of ``a`` are renamed ``a:N``.
    """
    missing = [a for a in outer.terminals if a not in images]
    if missing:
        raise ValueError(f"no image for letters {missing}")
    terminals = []
    for a in outer.terminals:
        for t in images[a].terminals:
            if t not in terminals:
                terminals.append(t)
    names = {}
    rules = []
    nts = list(outer.nonterminals)
    for a in outer.terminals:
        img = images[a]
        for n in img.nonterminals:
            new = f"{a}:{n}"
            while new in nts or new in terminals:
                new += "'"
            names[(a, n)] = new
            nts.append(new)
        for r in img.rules:
            rhs = tuple(s if img.is_terminal(s) else names[(a, s)] for s in r.rhs)
            rules.append(Rule(names[(a, r.lhs)], rhs))
    clash = set(outer.nonterminals) & set(terminals)
    if clash:
        raise ValueError(f"outer nonterminals clash with image terminals: {sorted(clash)}")
    for r in outer.rules:
        rhs = tuple(names[(s, images[s].start)] if outer.is_terminal(s) else s for s in r.rhs)
        rules.append(Rule(r.lhs, rhs))
    return Cfg(tuple(terminals), tuple(nts), outer.start, tuple(rules))


# -- ω-power -------------------------------------------------------------------


def _fresh(base: str, taken) -> str:
    name = base
    while name in taken:
        name += "'"
    return name


def omega_power_bpda(g: Cfg) -> Bpda:
    """BPDA for ``L(g)^ω``.

    The stack holds the unread part of a leftmost derivation of the current
    factor above a bottom marker.  State ``b`` (the only final state) is
    entered exactly at factor boundaries; ``w0`` and ``w1`` mean "no letter of
    the current factor read yet" and "at least one read", which keeps empty
    factors out.  Runs therefore correspond one-to-one to factorizations
    together with a leftmost derivation of each factor.
    """
    symbols = set(g.nonterminals) | set(g.terminals)
    bottom = _fresh("⊥", symbols)
    b, w0, w1 = "b", "w0", "w1"
    trans = [Transition(b, None, bottom, w0, (g.start, bottom))]
    for r in g.rules:
        for q in (w0, w1):
            trans.append(Transition(q, None, r.lhs, q, r.rhs))
    for a in g.terminals:
        trans.append(Transition(w0, a, a, w1, ()))
        trans.append(Transition(w1, a, a, w1, ()))
    trans.append(Transition(w1, None, bottom, b, (bottom,)))
    gamma = (bottom,) + g.nonterminals + tuple(g.terminals)
    return Bpda((b, w0, w1), g.terminals, gamma, tuple(trans), b, bottom, frozenset({b}))


def suffix_bpda(g: Cfg, tail: str) -> Bpda:
    """BPDA for ``L(g) . tail^ω`` with the same expand/match discipline.

    Its accepting runs on ``x . tail^ω`` correspond one-to-one to the leftmost
    derivations of ``x`` when ``tail`` does not occur in L(g)'s words.
    """
    if len(tail) != 1:
        raise ValueError("tail must be a single letter")
    symbols = set(g.nonterminals) | set(g.terminals)
    bottom = _fresh("⊥", symbols)
    s, w, f = "s", "w", "f"
    trans = [Transition(s, None, bottom, w, (g.start, bottom))]
    trans += [Transition(w, None, r.lhs, w, r.rhs) for r in g.rules]
    trans += [Transition(w, a, a, w, ()) for a in g.terminals]
    trans.append(Transition(w, None, bottom, f, (bottom,)))
    trans.append(Transition(f, tail, bottom, f, (bottom,)))
    letters = tuple(g.terminals) + ((tail,) if tail not in g.terminals else ())
    gamma = (bottom,) + g.nonterminals + tuple(g.terminals)
    return Bpda((s, w, f), letters, gamma, tuple(trans), s, bottom, frozenset({f}))


# -- decompositions --------------------------------------------------------------


@dataclass(frozen=True)
class FactorLasso:
    """A factorization of a lasso word: factor lengths ``stem . cycle^ω``."""

    stem: tuple
    cycle: tuple

    def cuts(self, n: int) -> list[int]:
        """Cut positions (ends of factors) up to ``n``."""
        out, pos = [], 0
        for l in self.stem:
            pos += l
            if pos > n:
                return out
            out.append(pos)
        while True:
            for l in self.cycle:
                pos += l
                if pos > n:
                    return out
                out.append(pos)

    def factors(self, w: LassoWord, k: int) -> list[str]:
        out, pos = [], 0
        lengths = list(self.stem)
        while len(lengths) < k:
            lengths += self.cycle
        for l in lengths[:k]:
            out.append(w.factor(pos, l))
            pos += l
        return out

    def to_json(self) -> dict:
        return {"stem": list(self.stem), "cycle": list(self.cycle)}


@dataclass(frozen=True)
class FactorCertificate:
    """Two factor cycles at one phase, neither a prefix of the other."""

    phase: int
    path: tuple
    cycle_a: tuple
    cycle_b: tuple

    def problems(self, g: Cfg, w: LassoWord) -> list[str]:
        out = []
        pos = 0
        for l in self.path:
            if l < 1 or not accepts(g, w.factor(pos, l)):
                out.append(f"path factor at {pos} of length {l} is not in the language")
            pos += l
        if w.phase(pos) != self.phase:
            out.append("path does not reach the certified phase")
        for name, cyc in (("cycle_a", self.cycle_a), ("cycle_b", self.cycle_b)):
            if not cyc:
                out.append(f"{name} is empty")
                continue
            p = self.phase
            for l in cyc:
                if l < 1 or not accepts(g, w.factor(p, l)):
                    out.append(f"{name} factor at phase {p} of length {l} is not in the language")
                p = w.phase(p + l)
            if p != self.phase:
                out.append(f"{name} does not return to phase {self.phase}")
        n = min(len(self.cycle_a), len(self.cycle_b))
        if tuple(self.cycle_a[:n]) == tuple(self.cycle_b[:n]):
            out.append("one cycle is a prefix of the other")
        return out

    def verify(self, g: Cfg, w: LassoWord) -> bool:
        return not self.problems(g, w)

    def to_json(self) -> dict:
        return {
            "phase": self.phase,
            "path": list(self.path),
            "cycle_a": list(self.cycle_a),
            "cycle_b": list(self.cycle_b),
        }


@dataclass
class DecompositionReport:
    lower_bound: int
    exhaustive_within_bounds: bool
    uncountable_certificate: FactorCertificate | None
    factorizations: list

    def to_json(self) -> dict:
        cert = self.uncountable_certificate
        return {
            "lower_bound": self.lower_bound,
            "exhaustive": self.exhaustive_within_bounds,
            "certificate": None if cert is None else cert.to_json(),
            "factorizations": [f.to_json() for f in self.factorizations],
        }


def factor_graph(g: Cfg, w: LassoWord, bound: int) -> tuple[Graph, bool]:
    """Phases of ``w`` linked by factors in L(g) of length ``<= bound``.

    The flag says whether some reachable phase also starts a longer factor.
    """
    graph = Graph(0)
    longer = False
    todo, seen = [0], {0}
    while todo:
        p = todo.pop()
        for l in prefix_lengths(g, w.factor(p, bound)):
            if l == 0:
                continue
            q = w.phase(p + l)
            graph.add_edge(p, l, q, {"cut"})
            if q not in seen:
                seen.add(q)
                todo.append(q)
        h = prefixes_in(g, w.suffix(p))
        if h.rules:
            longest = max_word_length(h)
            if longest is None or longest > bound:
                longer = True
    return graph, longer


def count_decompositions(g: Cfg, w: LassoWord, bound: int, limit: int = 256) -> DecompositionReport:
    """Lower bound on the factorizations of ``w`` into words of L(g) minus λ.

    Factorizations are compared by their sets of cut positions.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    graph, longer = factor_graph(g, w, bound)
    an = Analyzer(graph, {"cut"})
    res = an.classify()

    def lengths(edges):
        return tuple(e.label for e in edges)

    if res.kind == FINITE:
        found, _ = an.lassos(max_len=2 * len(graph.out) + 2, limit=max(limit, res.count))
        facts = sorted({FactorLasso(lengths(s), lengths(c)) for s, c in found}, key=lambda f: (len(f.stem) + len(f.cycle), f.stem, f.cycle))
        return DecompositionReport(res.count, not longer, None, facts)
    found, _ = an.lassos(max_len=4 * w.span + 8, limit=limit)
    cert = None
    if res.certificate is not None:
        pc = res.certificate
        cert = FactorCertificate(pc.node, lengths(pc.path), lengths(pc.cycle_a), lengths(pc.cycle_b))
        found.add(canonical_lasso(pc.path, pc.cycle_a))
        found.add(canonical_lasso(pc.path, pc.cycle_b))
        if not cert.verify(g, w):
            cert = None
    facts = sorted({FactorLasso(lengths(s), lengths(c)) for s, c in found}, key=lambda f: (len(f.stem) + len(f.cycle), f.stem, f.cycle))
    return DecompositionReport(len(facts), False, cert, facts)


def distinct_cuts(f1: FactorLasso, f2: FactorLasso, w: LassoWord) -> bool:
    """Whether two factorizations of ``w`` have different cut-position sets.

    Both cut sequences are ultimately periodic with period dividing a common
    multiple, so comparing a window past both stems and covering that
    multiple decides it.
    """
    n1, n2 = sum(f1.stem), sum(f2.stem)
    p = lcm(sum(f1.cycle), sum(f2.cycle), len(w.period))
    n = max(n1, n2) + 2 * p
    return f1.cuts(n) != f2.cuts(n)
