"""Alphabets, finite words and ultimately periodic omega-words.

Finite words are plain ``str`` values whose characters are the letters.
Ultimately periodic words ``u.v^omega`` are :class:`LassoWord` values, kept
in a canonical form so that two lassos denote the same omega-word exactly
when they compare equal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator


class FormatError(ValueError):
    """Raised for malformed textual or JSON input."""


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of single-character letters."""

    letters: tuple[str, ...]

    def __post_init__(self):
        letters = tuple(self.letters)
        if not letters:
            raise ValueError("alphabet must be non-empty")
        for a in letters:
            if not isinstance(a, str) or len(a) != 1:
                raise ValueError(f"letter {a!r} is not a single character")
        if len(set(letters)) != len(letters):
            raise ValueError(f"duplicate letters in {letters!r}")
        object.__setattr__(self, "letters", letters)

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __contains__(self, a) -> bool:
        return a in self.letters

    def __len__(self) -> int:
        return len(self.letters)

    def covers(self, word: str) -> bool:
        return all(a in self.letters for a in word)


def primitive_root(v: str) -> str:
    """Shortest word ``r`` with ``v = r^k``."""
    n = len(v)
    for d in range(1, n + 1):
        if n % d == 0 and v[:d] * (n // d) == v:
            return v[:d]
    return v


@dataclass(frozen=True, order=True)
class LassoWord:
    """The omega-word ``prefix . period^omega``, always stored canonically.

    The period is primitive and the prefix is as short as possible, so
    structural equality is equality of the denoted omega-words.
    """

    prefix: str
    period: str

    def __post_init__(self):
        u, v = self.prefix, self.period
        if not v:
            raise ValueError("period of a lasso word must be non-empty")
        v = primitive_root(v)
        while u and u[-1] == v[-1]:
            u = u[:-1]
            v = v[-1] + v[:-1]
        object.__setattr__(self, "prefix", u)
        object.__setattr__(self, "period", v)

    @property
    def loop_start(self) -> int:
        return len(self.prefix)

    @property
    def span(self) -> int:
        """Number of distinct positions, ``|u| + |v|``."""
        return len(self.prefix) + len(self.period)

    def letter(self, i: int) -> str:
        u, v = self.prefix, self.period
        if i < len(u):
            return u[i]
        return v[(i - len(u)) % len(v)]

    def phase(self, i: int) -> int:
        """Normalize an absolute position to ``[0, |u|+|v|)``."""
        if i < self.span:
            return i
        return len(self.prefix) + (i - len(self.prefix)) % len(self.period)

    def next_phase(self, p: int) -> int:
        return p + 1 if p + 1 < self.span else len(self.prefix)

    def advance(self, p: int, word: str) -> int | None:
        """Phase reached after reading ``word`` from phase ``p``, or None on mismatch."""
        for a in word:
            if self.letter(p) != a:
                return None
            p = self.next_phase(p)
        return p

    def factor(self, p: int, n: int) -> str:
        return "".join(self.letter(p + i) for i in range(n))

    def suffix(self, p: int) -> LassoWord:
        """The omega-word read from absolute position ``p`` on."""
        p = self.phase(p)
        if p < len(self.prefix):
            return LassoWord(self.prefix[p:], self.period)
        k = p - len(self.prefix)
        return LassoWord("", self.period[k:] + self.period[:k])

    def alphabet(self) -> set[str]:
        return set(self.prefix) | set(self.period)

    def __str__(self) -> str:
        return f"{self.prefix}({self.period})"


def canonicalize(prefix: str, period: str) -> LassoWord:
    return LassoWord(prefix, period)


_LASSO_RE = re.compile(r"^([^()]*)\(([^()]+)\)$")


def parse_lasso(text: str) -> LassoWord:
    """Parse the ``u(v)`` syntax, e.g. ``abbcc(d)``."""
    m = _LASSO_RE.match(text.strip())
    if not m:
        raise FormatError(f"malformed lasso {text!r}; expected u(v) with non-empty v")
    return LassoWord(m.group(1), m.group(2))


def prefix_of(w: LassoWord, n: int) -> str:
    if n < 0:
        raise ValueError("prefix length must be >= 0")
    return w.factor(0, n)


@dataclass(frozen=True)
class Dfa:
    """Deterministic finite automaton; missing transitions reject."""

    alphabet: tuple[str, ...]
    states: tuple
    initial: object
    finals: frozenset
    delta: dict = field(hash=False, compare=False)

    def step(self, q, a):
        return self.delta.get((q, a))

    def run(self, word: Iterable[str]):
        q = self.initial
        for a in word:
            q = self.delta.get((q, a))
            if q is None:
                return None
        return q

    def accepts(self, word: Iterable[str]) -> bool:
        q = self.run(word)
        return q is not None and q in self.finals

    def live_states(self) -> set:
        """States from which some final state is reachable."""
        back: dict = {}
        for (q, _a), r in self.delta.items():
            back.setdefault(r, set()).add(q)
        live = set(self.finals)
        todo = list(live)
        while todo:
            r = todo.pop()
            for q in back.get(r, ()):
                if q not in live:
                    live.add(q)
                    todo.append(q)
        return live


def prefix_dfa(w: LassoWord, alphabet: Iterable[str] | None = None) -> Dfa:
    """DFA accepting exactly the finite prefixes of ``w``.

    States ``0..|u|+|v|`` count letters read (the last one folds back to
    ``|u|+1``); state ``|u|+|v|+1`` is the sink.
    """
    letters = tuple(sorted(set(alphabet) | w.alphabet())) if alphabet else tuple(sorted(w.alphabet()))
    m = w.span
    sink = m + 1
    delta = {}
    for i in range(m + 1):
        nxt = i + 1 if i < m else len(w.prefix) + 1
        for a in letters:
            delta[(i, a)] = nxt if a == w.letter(i) else sink
    for a in letters:
        delta[(sink, a)] = sink
    return Dfa(letters, tuple(range(m + 2)), 0, frozenset(range(m + 1)), delta)
