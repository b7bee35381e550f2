"""Büchi pushdown automata on ultimately periodic words.

A configuration is a state plus a stack written top-first.  A run is an
infinite sequence of (state, stack, flag) triples where the flag is 1 when
the step consumed a letter; it is accepting when it reads the whole input
and passes through a final state infinitely often.

Exact questions (emptiness, lasso membership) are answered by saturating
pop summaries and looking for a good cycle among stack heads.  Counting runs
on a given lasso is done on the explicit configuration graph truncated at a
stack height and a step depth, so those answers are lower bounds.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Sequence

from .degrees import Claim
from .graph import FINITE, Analyzer, Graph, canonical_lasso
from .words import Alphabet, FormatError, LassoWord

FINAL = "F"
CONSUMES = "C"
REQUIRED = frozenset({FINAL, CONSUMES})


@dataclass(frozen=True)
class Transition:
    """``(src, letter, top) -> (dst, push)``; ``letter`` None is a λ-move."""

    src: object
    letter: str | None
    top: str
    dst: object
    push: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "push", tuple(self.push))

    @property
    def consumes(self) -> bool:
        return self.letter is not None

    def __str__(self):
        a = "λ" if self.letter is None else self.letter
        return f"({self.src},{a},{self.top})->({self.dst},{''.join(map(str, self.push)) or 'λ'})"


@dataclass(frozen=True)
class Config:
    state: object
    stack: tuple

    @property
    def top(self):
        return self.stack[0] if self.stack else None

    def __str__(self):
        return f"({self.state},{''.join(map(str, self.stack)) or 'λ'})"


@dataclass(frozen=True)
class Bpda:
    states: tuple
    input_alphabet: Alphabet
    stack_alphabet: tuple
    transitions: tuple
    initial_state: object
    initial_stack: str
    final_states: frozenset

    def __post_init__(self):
        sig = self.input_alphabet
        if not isinstance(sig, Alphabet):
            sig = Alphabet(tuple(sig))
        states = tuple(self.states)
        gamma = tuple(self.stack_alphabet)
        trans = tuple(dict.fromkeys(self.transitions))
        object.__setattr__(self, "input_alphabet", sig)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "stack_alphabet", gamma)
        object.__setattr__(self, "transitions", trans)
        object.__setattr__(self, "final_states", frozenset(self.final_states))
        for name, xs in (("states", states), ("stack symbols", gamma)):
            if len(set(xs)) != len(xs):
                raise ValueError(f"duplicate {name}")
        ks, gs = set(states), set(gamma)
        if self.initial_state not in ks:
            raise ValueError(f"initial state {self.initial_state!r} not declared")
        if self.initial_stack not in gs:
            raise ValueError(f"initial stack symbol {self.initial_stack!r} not declared")
        if not self.final_states <= ks:
            raise ValueError("final states must be declared states")
        for t in trans:
            if t.src not in ks or t.dst not in ks:
                raise ValueError(f"transition {t}: undeclared state")
            if t.letter is not None and t.letter not in sig:
                raise ValueError(f"transition {t}: letter not in input alphabet")
            if t.top not in gs or any(y not in gs for y in t.push):
                raise ValueError(f"transition {t}: undeclared stack symbol")
        index: dict = {}
        for t in trans:
            index.setdefault((t.src, t.top), []).append(t)
        object.__setattr__(self, "_index", index)

    def moves(self, state, top) -> list[Transition]:
        return self._index.get((state, top), [])

    @property
    def initial_config(self) -> Config:
        return Config(self.initial_state, (self.initial_stack,))

    def to_json(self) -> dict:
        return {
            "states": list(self.states),
            "input_alphabet": list(self.input_alphabet),
            "stack_alphabet": list(self.stack_alphabet),
            "initial_state": self.initial_state,
            "initial_stack": self.initial_stack,
            "final_states": [q for q in self.states if q in self.final_states],
            "transitions": [
                {"from": t.src, "input": t.letter, "top": t.top, "to": t.dst, "push": list(t.push)}
                for t in self.transitions
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> Bpda:
        try:
            trans = tuple(
                Transition(t["from"], t["input"], t["top"], t["to"], tuple(t["push"]))
                for t in data["transitions"]
            )
            return cls(
                tuple(data["states"]),
                tuple(data["input_alphabet"]),
                tuple(data["stack_alphabet"]),
                trans,
                data["initial_state"],
                data["initial_stack"],
                frozenset(data["final_states"]),
            )
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed BPDA JSON: {exc}") from exc

    @classmethod
    def loads(cls, text: str) -> Bpda:
        try:
            return cls.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FormatError(f"BPDA is not valid JSON: {exc}") from exc


def apply(t: Transition, c: Config) -> Config:
    return Config(t.dst, t.push + c.stack[1:])


def step(a: Bpda, c: Config, letter: str | None) -> set[tuple[Config, int]]:
    """One-step successors of ``c`` reading ``letter`` (None for λ)."""
    if not c.stack:
        return set()
    return {
        (apply(t, c), 0 if letter is None else 1)
        for t in a.moves(c.state, c.top)
        if t.letter == letter
    }


def _marks(a: Bpda, t: Transition) -> frozenset:
    m = set()
    if t.dst in a.final_states:
        m.add(FINAL)
    if t.consumes:
        m.add(CONSUMES)
    return frozenset(m)


# -- emptiness ---------------------------------------------------------------


def _summaries(a: Bpda) -> dict:
    """``S[(p, Z)][(q, marks)] = word``: from ``(p, Zσ)`` reach ``(q, σ)`` reading word.

    The stack never dips below ``σ`` before the final step; marks record a
    final-state visit and letter consumption along the way.
    """
    S: dict = {}
    changed = True
    while changed:
        changed = False
        for t in a.transitions:
            frontier = {(t.dst, _marks(a, t)): t.letter or ""}
            for y in t.push:
                nxt: dict = {}
                for (q, f), w in frontier.items():
                    for (r, g), w2 in S.get((q, y), {}).items():
                        key = (r, f | g)
                        if key not in nxt or len(w + w2) < len(nxt[key]):
                            nxt[key] = w + w2
                frontier = nxt
                if not frontier:
                    break
            target = S.setdefault((t.src, t.top), {})
            for key, w in frontier.items():
                if key not in target:
                    target[key] = w
                    changed = True
    return S


def head_graph(a: Bpda) -> Graph:
    """Graph on stack heads ``(state, top)`` whose accepting paths are the accepting runs.

    Every infinite run has infinitely many steps whose pushed symbol is never
    popped; those steps, with the finished sub-computations between them
    collapsed into summaries, form a path here.  Edge labels are the words read.
    """
    S = _summaries(a)
    g = Graph((a.initial_state, a.initial_stack))
    todo = [g.initial]
    seen = {g.initial}
    while todo:
        p, z = todo.pop()
        for t in a.moves(p, z):
            frontier = {(t.dst, _marks(a, t)): t.letter or ""}
            for y in t.push:
                for (q, f), w in frontier.items():
                    dst = (q, y)
                    g.add_edge((p, z), w, dst, f)
                    if dst not in seen:
                        seen.add(dst)
                        todo.append(dst)
                nxt: dict = {}
                for (q, f), w in frontier.items():
                    for (r, h), w2 in S.get((q, y), {}).items():
                        key = (r, f | h)
                        if key not in nxt:
                            nxt[key] = w + w2
                frontier = nxt
    return g


def is_empty(a: Bpda) -> tuple[bool, LassoWord | None]:
    """Whether L(a) is empty; otherwise also an accepted lasso word."""
    wit = Analyzer(head_graph(a), REQUIRED).witness()
    if wit is None:
        return True, None
    stem, cycle = wit
    return False, LassoWord("".join(e.label for e in stem), "".join(e.label for e in cycle))


def lasso_product(a: Bpda, w: LassoWord) -> Bpda:
    """BPDA whose runs are the runs of ``a`` that read a prefix of ``w``."""
    phases = range(w.span)
    trans = []
    for t in a.transitions:
        for p in phases:
            if t.letter is None:
                trans.append(Transition((t.src, p), None, t.top, (t.dst, p), t.push))
            elif w.letter(p) == t.letter:
                trans.append(Transition((t.src, p), t.letter, t.top, (t.dst, w.next_phase(p)), t.push))
    states = tuple((q, p) for q in a.states for p in phases)
    finals = frozenset((q, p) for q in a.final_states for p in phases)
    return Bpda(
        states, a.input_alphabet, a.stack_alphabet, tuple(trans), (a.initial_state, 0), a.initial_stack, finals
    )


def accepts_lasso(a: Bpda, w: LassoWord) -> bool:
    if not a.input_alphabet.covers(w.prefix + w.period):
        return False
    return not is_empty(lasso_product(a, w))[0]


# -- bounded run exploration ----------------------------------------------------


@dataclass(frozen=True)
class RunStep:
    config: Config
    flag: int

    def __str__(self):
        return f"({self.config.state},{''.join(map(str, self.config.stack))},{self.flag})"


@dataclass(frozen=True)
class RunLasso:
    """Accepting run ``stem . cycle^ω``; ``input_phase`` is the lasso phase where the cycle starts."""

    stem: tuple
    cycle: tuple
    input_phase: int

    def steps(self, n: int) -> list[RunStep]:
        out = list(self.stem)
        while len(out) < n:
            out += self.cycle
        return out[:n]

    def to_json(self) -> dict:
        return {
            "stem": [str(s) for s in self.stem],
            "cycle": [str(s) for s in self.cycle],
            "input_phase": self.input_phase,
        }


@dataclass(frozen=True)
class Certificate:
    """Two closed walks at a (configuration, phase) node that cannot be confused.

    Neither cycle is a prefix of the other, so any infinite sequence of cycle
    choices spells a different run; with the marked cycle chosen infinitely
    often every such run is accepting.
    """

    node: tuple  # (Config, phase)
    path: tuple  # transitions from the initial configuration to node
    cycle_a: tuple
    cycle_b: tuple
    accepting_cycle: str = "a"

    def to_json(self) -> dict:
        cfg, phase = self.node
        return {
            "node": {"state": cfg.state, "stack": list(cfg.stack), "phase": phase},
            "path": [str(t) for t in self.path],
            "cycle_a": [str(t) for t in self.cycle_a],
            "cycle_b": [str(t) for t in self.cycle_b],
            "accepting_cycle": self.accepting_cycle,
        }


@dataclass
class AmbiguityReport:
    lower_bound: int
    exhaustive_within_bounds: bool
    uncountable_certificate: Certificate | None
    label_claim: Claim
    runs: list = field(default_factory=list)
    truncated: bool = False

    def to_json(self) -> dict:
        return {
            "lower_bound": self.lower_bound,
            "exhaustive": self.exhaustive_within_bounds,
            "truncated": self.truncated,
            "label_claim": str(self.label_claim),
            "certificate": None if self.uncountable_certificate is None else self.uncountable_certificate.to_json(),
            "runs": [r.to_json() for r in self.runs],
        }


def explore(a: Bpda, w: LassoWord, step_bound: int, stack_bound: int) -> tuple[Graph, bool]:
    """Configuration graph on nodes ``(state, stack, phase)`` within the bounds.

    Returns the graph and whether anything was cut off by a bound.
    """
    start = (a.initial_state, (a.initial_stack,), 0)
    g = Graph(start)
    depth = {start: 0}
    q = deque([start])
    cut = False
    while q:
        node = q.popleft()
        state, stack, phase = node
        moves = a.moves(state, stack[0])
        if depth[node] >= step_bound:
            cut = cut or bool(moves)
            continue
        for t in moves:
            if t.letter is None:
                nphase = phase
            elif w.letter(phase) == t.letter:
                nphase = w.next_phase(phase)
            else:
                continue
            nstack = t.push + stack[1:]
            if not nstack:
                continue
            if len(nstack) > stack_bound:
                cut = True
                continue
            dst = (t.dst, nstack, nphase)
            g.add_edge(node, t, dst, _marks(a, t))
            if dst not in depth:
                depth[dst] = depth[node] + 1
                q.append(dst)
    return g, cut


def _run_lasso(stem, cycle) -> RunLasso:
    def steps(edges):
        return tuple(RunStep(Config(e.src[0], e.src[1]), 1 if e.label.consumes else 0) for e in edges)

    start = cycle[0].src
    return RunLasso(steps(stem), steps(cycle), start[2])


def count_runs_bounded(
    a: Bpda, w: LassoWord, step_bound: int, stack_bound: int, limit: int = 256
) -> AmbiguityReport:
    """Lower bound on the accepting runs of ``a`` on ``w``.

    Runs are searched inside the configuration graph truncated at
    ``stack_bound`` symbols and ``step_bound`` steps from the start.  When that
    region has finitely many accepting runs the count is exact for the region
    and ``exhaustive_within_bounds`` is set.
    """
    if step_bound < 1 or stack_bound < 1:
        raise ValueError("bounds must be >= 1")
    g, cut = explore(a, w, step_bound, stack_bound)
    an = Analyzer(g, REQUIRED)
    res = an.classify()
    if res.kind == FINITE:
        found, _ = an.lassos(max_len=len(g.out) * 2 + 2, limit=max(limit, res.count))
        runs = sorted((_run_lasso(s, c) for s, c in found), key=lambda r: (len(r.stem) + len(r.cycle), str(r.to_json())))
        return AmbiguityReport(res.count, True, None, Claim.at_least(res.count), runs, cut)
    found, _ = an.lassos(max_len=min(step_bound, 4 * w.span + 16), limit=limit)
    cert = None
    if res.certificate is not None:
        pc = res.certificate
        node = pc.node
        cert = Certificate(
            (Config(node[0], node[1]), node[2]),
            tuple(e.label for e in pc.path),
            tuple(e.label for e in pc.cycle_a),
            tuple(e.label for e in pc.cycle_b),
        )
        found.add(canonical_lasso(pc.path, pc.cycle_a))
        found.add(canonical_lasso(pc.path, pc.cycle_b))
        if not verify_certificate(a, w, cert):
            cert = None
    runs = [_run_lasso(s, c) for s, c in found]
    claim = Claim.uncountable() if cert is not None else Claim.at_least(len(runs))
    return AmbiguityReport(len(runs), False, cert, claim, runs, cut)


# -- certificates ----------------------------------------------------------------


def replay(a: Bpda, w: LassoWord, config: Config, phase: int, transitions: Iterable[Transition]):
    """Follow ``transitions`` from ``(config, phase)``; list of visited nodes, or a diagnostic string."""
    trail = [(config, phase)]
    for i, t in enumerate(transitions):
        if t not in a.transitions:
            return f"step {i}: {t} is not a transition"
        if not config.stack or t.src != config.state or t.top != config.top:
            return f"step {i}: {t} does not apply to {config}"
        if t.letter is not None:
            if w.letter(phase) != t.letter:
                return f"step {i}: {t} reads {t.letter!r} but the input has {w.letter(phase)!r}"
            phase = w.next_phase(phase)
        config = apply(t, config)
        if not config.stack:
            return f"step {i}: stack emptied"
        trail.append((config, phase))
    return trail


def certificate_problems(a: Bpda, w: LassoWord, c: Certificate) -> list[str]:
    problems = []
    try:
        config, phase = c.node
        path = replay(a, w, a.initial_config, 0, c.path)
        if isinstance(path, str):
            return [f"path: {path}"]
        if path[-1] != (config, phase):
            problems.append("path does not end at the certified node")
        for name, cyc in (("cycle_a", c.cycle_a), ("cycle_b", c.cycle_b)):
            if not cyc:
                problems.append(f"{name} is empty")
                continue
            trail = replay(a, w, config, phase, cyc)
            if isinstance(trail, str):
                problems.append(f"{name}: {trail}")
                continue
            if trail[-1] != (config, phase):
                problems.append(f"{name} does not return to the node")
            if not any(t.consumes for t in cyc):
                problems.append(f"{name} reads no input")
        a_, b_ = tuple(c.cycle_a), tuple(c.cycle_b)
        n = min(len(a_), len(b_))
        if a_[:n] == b_[:n]:
            problems.append("one cycle is a prefix of the other")
        marked = {"a": a_, "b": b_}.get(c.accepting_cycle)
        if marked is None:
            problems.append(f"unknown accepting cycle marker {c.accepting_cycle!r}")
        elif not any(t.dst in a.final_states for t in marked):
            problems.append("marked cycle never enters a final state")
    except (TypeError, ValueError, AttributeError) as exc:
        problems.append(f"malformed certificate: {exc}")
    return problems


def verify_certificate(a: Bpda, w: LassoWord, c: Certificate) -> bool:
    return not certificate_problems(a, w, c)


def run_prefixes(a: Bpda, w: LassoWord, c: Certificate, k: int) -> list[list[RunStep]]:
    """The ``2**k`` run prefixes ``path . x1 ... xk`` with each ``xi`` a certificate cycle."""
    out = []
    for choice in product((c.cycle_a, c.cycle_b), repeat=k):
        ts = list(c.path) + [t for cyc in choice for t in cyc]
        trail = replay(a, w, a.initial_config, 0, ts)
        if isinstance(trail, str):
            raise ValueError(trail)
        out.append([RunStep(cfg, 1 if t.consumes else 0) for (cfg, _), t in zip(trail, ts)])
    return out


# -- run coding -----------------------------------------------------------------


class RunCoding:
    """Letters for writing runs as words: states, stack symbols and the flags 0/1.

    Names that collide across the three groups get primes appended, states
    first, so the coding is deterministic and decodable.
    """

    def __init__(self, a: Bpda):
        self.bpda = a
        taken = {"0", "1"}
        self.state_token = {}
        for q in a.states:
            tok = str(q)
            while tok in taken:
                tok += "'"
            self.state_token[q] = tok
            taken.add(tok)
        self.stack_token = {}
        for z in a.stack_alphabet:
            tok = str(z)
            while tok in taken:
                tok += "'"
            self.stack_token[z] = tok
            taken.add(tok)
        self.state_of = {v: k for k, v in self.state_token.items()}
        self.stack_of = {v: k for k, v in self.stack_token.items()}

    def encode(self, steps: Iterable[RunStep]) -> tuple[str, ...]:
        out: list[str] = []
        for s in steps:
            out.append(self.state_token[s.config.state])
            out += [self.stack_token[z] for z in s.config.stack]
            out.append(str(s.flag))
        return tuple(out)

    def decode(self, tokens: Sequence[str]) -> list[RunStep] | None:
        """Inverse of :meth:`encode`; None unless ``tokens`` is a whole number of steps."""
        steps = []
        i, n = 0, len(tokens)
        while i < n:
            q = self.state_of.get(tokens[i])
            if q is None:
                return None
            i += 1
            stack = []
            while i < n and tokens[i] in self.stack_of:
                stack.append(self.stack_of[tokens[i]])
                i += 1
            if i == n or tokens[i] not in ("0", "1") or not stack:
                return None
            steps.append(RunStep(Config(q, tuple(stack)), int(tokens[i])))
            i += 1
        return steps

    def in_r_prime(self, u: str, x: Sequence[str]) -> bool:
        if len(u) != len(x) or not x or x[-1] != "1":
            return False
        steps = self.decode(x)
        if not steps or steps[0].config != self.bpda.initial_config:
            return False
        read = []
        for s, nxt in zip(steps, steps[1:]):
            letter = None
            for t in self.bpda.moves(s.config.state, s.config.top):
                if (t.letter is None) == (s.flag == 0) and apply(t, s.config) == nxt.config:
                    letter = t.letter or ""
                    break
            if letter is None:
                return False
            read.append(letter)
        return u.startswith("".join(read))

    def in_r_second(self, u: str, x: Sequence[str]) -> bool:
        return len(u) == len(x) > 0 and self.state_of.get(x[-1]) in self.bpda.final_states


def encode_run_prefix(steps: Iterable[RunStep], coding: RunCoding | None = None) -> str:
    """The run prefix as a word ``q1 γ1 ε1 q2 γ2 ε2 ...`` (tokens concatenated)."""
    if coding is not None:
        return "".join(coding.encode(steps))
    return "".join(f"{s.config.state}{''.join(map(str, s.config.stack))}{s.flag}" for s in steps)


def in_R_prime(a: Bpda, u: str, x: Sequence[str]) -> bool:
    return RunCoding(a).in_r_prime(u, x)


def in_R_second(a: Bpda, u: str, x: Sequence[str]) -> bool:
    return RunCoding(a).in_r_second(u, x)


@dataclass
class CodingCheck:
    prime_hits: list
    second_hits: list
    stem_length: int
    cycle_length: int
    ok: bool
    reason: str = ""


def check_run_coding(a: Bpda, w: LassoWord, run: RunLasso) -> CodingCheck:
    """Check that R' and R'' fire infinitely often along an accepting run lasso.

    The coded run is ``stem . cycle^ω`` on tokens, so hits recur with the
    cycle's token length.  Hits are collected over the stem and two cycle
    periods; the second period must repeat the first shifted by one period
    and contain at least one hit of each kind.
    """
    coding = RunCoding(a)
    stem = coding.encode(run.stem)
    cyc = coding.encode(run.cycle)
    x = stem + cyc + cyc
    n = len(x)
    sigma = w.factor(0, n)
    prime = [k for k in range(1, n + 1) if coding.in_r_prime(sigma[:k], x[:k])]
    second = [k for k in range(1, n + 1) if coding.in_r_second(sigma[:k], x[:k])]
    s, c = len(stem), len(cyc)
    for name, hits in (("R'", prime), ("R''", second)):
        first = [k - s for k in hits if s < k <= s + c]
        again = [k - s - c for k in hits if s + c < k <= s + 2 * c]
        if not again:
            return CodingCheck(prime, second, s, c, False, f"{name} never fires in the cycle")
        if first != again:
            return CodingCheck(prime, second, s, c, False, f"{name} hits are not periodic")
    return CodingCheck(prime, second, s, c, True)
