"""Two-tape Büchi automata and the relations they accept.

A transition reads a finite word on each tape.  A computation is accepted on
a pair of ω-words when it spells both of them, visits a final state
infinitely often and advances each tape infinitely often.  For lasso pairs
the computations are the infinite paths of a finite product graph on
(state, phase1, phase2), which makes acceptance and the exact cardinality
class decidable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .degrees import DegreeBound, DegreeLabel
from .graph import COUNTABLE, FINITE, Analyzer, Graph
from .words import Alphabet, FormatError, LassoWord

FINAL, IN, OUT = "F", "I", "O"
REQUIRED = frozenset({FINAL, IN, OUT})


@dataclass(frozen=True)
class RelTransition:
    src: str
    input: str
    output: str
    dst: str

    def __str__(self):
        return f"{self.src} --{self.input or 'λ'}/{self.output or 'λ'}--> {self.dst}"


@dataclass(frozen=True)
class TwoTapeBa:
    """Transitions are identified by their position: equal labels are still distinct."""

    states: tuple
    input_alphabet: Alphabet
    output_alphabet: Alphabet
    transitions: tuple
    initial_state: str
    final_states: frozenset

    def __post_init__(self):
        for name in ("input_alphabet", "output_alphabet"):
            val = getattr(self, name)
            if not isinstance(val, Alphabet):
                object.__setattr__(self, name, Alphabet(tuple(val)))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "final_states", frozenset(self.final_states))
        ks = set(self.states)
        if len(ks) != len(self.states):
            raise ValueError("duplicate states")
        if self.initial_state not in ks:
            raise ValueError(f"initial state {self.initial_state!r} not declared")
        if not self.final_states <= ks:
            raise ValueError("final states must be declared states")
        for t in self.transitions:
            if t.src not in ks or t.dst not in ks:
                raise ValueError(f"transition {t}: undeclared state")
            if not self.input_alphabet.covers(t.input) or not self.output_alphabet.covers(t.output):
                raise ValueError(f"transition {t}: letter outside the tape alphabets")

    def to_json(self) -> dict:
        return {
            "states": list(self.states),
            "input_alphabet": list(self.input_alphabet),
            "output_alphabet": list(self.output_alphabet),
            "initial_state": self.initial_state,
            "final_states": [q for q in self.states if q in self.final_states],
            "transitions": [
                {"from": t.src, "input": t.input, "output": t.output, "to": t.dst} for t in self.transitions
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> TwoTapeBa:
        try:
            return cls(
                tuple(data["states"]),
                tuple(data["input_alphabet"]),
                tuple(data["output_alphabet"]),
                tuple(RelTransition(t["from"], t["input"], t["output"], t["to"]) for t in data["transitions"]),
                data["initial_state"],
                frozenset(data["final_states"]),
            )
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed 2-tape automaton JSON: {exc}") from exc

    @classmethod
    def loads(cls, text: str) -> TwoTapeBa:
        try:
            return cls.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FormatError(f"2-tape automaton is not valid JSON: {exc}") from exc


@dataclass(frozen=True)
class CardinalityClass:
    kind: str  # Finite | CountablyInfinite | Uncountable
    k: int | None = None

    def degree(self) -> DegreeLabel:
        if self.kind == FINITE:
            return DegreeLabel.finite(self.k)
        if self.kind == COUNTABLE:
            return DegreeLabel.countable()
        return DegreeLabel.continuum()

    def to_json(self) -> dict:
        out = {"class": self.kind}
        if self.kind == FINITE:
            out["k"] = self.k
        return out

    def __str__(self):
        return f"Finite({self.k})" if self.kind == FINITE else self.kind


def product_graph(t: TwoTapeBa, w1: LassoWord, w2: LassoWord) -> Graph:
    """Edges are labelled by transition indices and marked F / I / O."""
    start = (t.initial_state, 0, 0)
    g = Graph(start)
    by_src: dict = {}
    for i, tr in enumerate(t.transitions):
        by_src.setdefault(tr.src, []).append((i, tr))
    todo, seen = [start], {start}
    while todo:
        node = todo.pop()
        q, p1, p2 = node
        for i, tr in by_src.get(q, ()):
            n1 = w1.advance(p1, tr.input)
            n2 = w2.advance(p2, tr.output)
            if n1 is None or n2 is None:
                continue
            marks = set()
            if tr.dst in t.final_states:
                marks.add(FINAL)
            if tr.input:
                marks.add(IN)
            if tr.output:
                marks.add(OUT)
            dst = (tr.dst, n1, n2)
            g.add_edge(node, i, dst, marks)
            if dst not in seen:
                seen.add(dst)
                todo.append(dst)
    return g


def _analyzer(t: TwoTapeBa, w1: LassoWord, w2: LassoWord) -> Analyzer:
    return Analyzer(product_graph(t, w1, w2), REQUIRED)


def _on_tapes(t: TwoTapeBa, w1: LassoWord, w2: LassoWord) -> bool:
    return t.input_alphabet.covers(w1.prefix + w1.period) and t.output_alphabet.covers(w2.prefix + w2.period)


def accepting_computation(t: TwoTapeBa, w1: LassoWord, w2: LassoWord) -> tuple[list[int], list[int]] | None:
    """An accepting computation as transition indices ``stem, cycle``, if any."""
    if not _on_tapes(t, w1, w2):
        return None
    wit = _analyzer(t, w1, w2).witness()
    if wit is None:
        return None
    stem, cycle = wit
    return [e.label for e in stem], [e.label for e in cycle]


def accepts_pair(t: TwoTapeBa, w1: LassoWord, w2: LassoWord) -> bool:
    return accepting_computation(t, w1, w2) is not None


def classify_computations(t: TwoTapeBa, w1: LassoWord, w2: LassoWord) -> CardinalityClass:
    if not _on_tapes(t, w1, w2):
        return CardinalityClass(FINITE, 0)
    res = _analyzer(t, w1, w2).classify()
    if res.kind == FINITE:
        return CardinalityClass(FINITE, res.count)
    return CardinalityClass(res.kind)


def degree_scan(t: TwoTapeBa, pairs: Sequence[tuple[LassoWord, LassoWord]]) -> DegreeBound:
    """Largest per-pair class over ``pairs``; only ever a lower bound on the degree."""
    if not pairs:
        raise ValueError("degree_scan needs at least one pair")
    return DegreeBound(max(classify_computations(t, a, b).degree() for a, b in pairs))


# -- computation coding ----------------------------------------------------------


@dataclass(frozen=True)
class Computation:
    """A finite computation prefix: initial state and transitions taken."""

    initial: str
    transitions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "transitions", tuple(self.transitions))
        q = self.initial
        for tr in self.transitions:
            if tr.src != q:
                raise ValueError(f"transition {tr} does not continue from state {q!r}")
            q = tr.dst


class ComputationCoding:
    """Writes ``q0 u1 e v1 q1 u2 e v2 q2 ...`` over states, both alphabets and a marker.

    State names or the marker that collide with tape letters get primes
    appended.
    """

    def __init__(self, t: TwoTapeBa):
        letters = set(t.input_alphabet) | set(t.output_alphabet)
        marker = "e"
        while marker in letters or marker in t.states:
            marker += "'"
        self.marker = marker
        taken = letters | {marker}
        self.state_token = {}
        for q in t.states:
            tok = str(q)
            while tok in taken:
                tok += "'"
            self.state_token[q] = tok
            taken.add(tok)
        self.state_of = {v: k for k, v in self.state_token.items()}

    def encode(self, c: Computation) -> tuple[str, ...]:
        out = [self.state_token[c.initial]]
        for tr in c.transitions:
            out += list(tr.input)
            out.append(self.marker)
            out += list(tr.output)
            out.append(self.state_token[tr.dst])
        return tuple(out)

    def decode(self, tokens: Sequence[str]) -> Computation | None:
        if not tokens or tokens[0] not in self.state_of:
            return None
        q = self.state_of[tokens[0]]
        initial, trans = q, []
        i, n = 1, len(tokens)
        while i < n:
            j = i
            while j < n and tokens[j] != self.marker:
                j += 1
            if j == n:
                return None
            k = j + 1
            while k < n and tokens[k] not in self.state_of:
                k += 1
            if k == n:
                return None
            dst = self.state_of[tokens[k]]
            trans.append(RelTransition(q, "".join(tokens[i:j]), "".join(tokens[j + 1 : k]), dst))
            q = dst
            i = k + 1
        return Computation(initial, tuple(trans))


def encode_computation_prefix(c: Computation, t: TwoTapeBa | None = None) -> str:
    """The computation prefix as one word, e.g. ``q0aebq1``."""
    if t is not None:
        return "".join(ComputationCoding(t).encode(c))
    out = [str(c.initial)]
    for tr in c.transitions:
        out.append(f"{tr.input}e{tr.output}{tr.dst}")
    return "".join(out)


def simple_2ba(
    states: Iterable[str],
    input_alphabet: str,
    output_alphabet: str,
    transitions: Iterable[tuple[str, str, str, str]],
    initial: str,
    finals: Iterable[str],
) -> TwoTapeBa:
    return TwoTapeBa(
        tuple(states),
        tuple(input_alphabet),
        tuple(output_alphabet),
        tuple(RelTransition(*tr) for tr in transitions),
        initial,
        frozenset(finals),
    )
