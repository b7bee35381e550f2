"""Reference languages and automata with direct membership predicates.

Every grammar here is written straight from a set-builder definition, and
each entry carries a predicate for that definition so the grammar can be
checked by enumeration.  ``reference_check`` evaluates closed forms of
adherences, δ-limits and ω-powers directly on lasso words.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .cfl import Cfg, grammar
from .ops import omega_power_bpda, substitute, suffix_bpda
from .pda import Bpda, Transition
from .relations import TwoTapeBa, simple_2ba
from .words import LassoWord

# -- direct predicates on finite words -----------------------------------------


def in_D(x: str) -> bool:
    """u d v with u, v over {0,1} and |v| = 2|u| or 2|u| + 1."""
    if x.count("d") != 1 or not set(x) <= set("01d"):
        return False
    u, v = x.split("d")
    return len(v) in (2 * len(u), 2 * len(u) + 1)


@lru_cache(maxsize=None)
def in_gW(x: str) -> bool:
    """x in (0.D)* 1.D."""
    if not x:
        return False
    if x[0] == "1":
        return in_D(x[1:])
    if x[0] != "0":
        return False
    return any(in_D(x[1:j]) and in_gW(x[j:]) for j in range(2, len(x)))


def _abc(x: str):
    m = re.fullmatch(r"(a+)(b+)(c+)", x)
    return None if m is None else tuple(len(g) for g in m.groups())


def in_V1(x: str) -> bool:
    n = _abc(x)
    return n is not None and n[0] == n[1]


def in_V2(x: str) -> bool:
    n = _abc(x)
    return n is not None and n[1] == n[2]


def in_V(x: str) -> bool:
    return in_V1(x) or in_V2(x)


def in_L1(x: str) -> bool:
    m = re.fullmatch(r"([abc]+)(d+)", x)
    if m is None:
        return False
    body, k = m.group(1), len(m.group(2))
    if k % 2 == 0:
        return in_V1(body)
    return k >= 3 and in_V2(body)


def in_Lp(x: str) -> bool:
    return bool(x) and set(x) <= set("ab") and x == x[::-1]


def in_C(x: str) -> bool:
    return any(in_Lp(x[:i]) and in_Lp(x[i:]) for i in range(1, len(x)))


@lru_cache(maxsize=None)
def in_Vstar(x: str) -> bool:
    if not x:
        return True
    return any(in_V(x[:i]) and in_Vstar(x[i:]) for i in range(3, len(x) + 1))


def in_Lstar(x: str) -> bool:
    return x in ("a", "b", "c") or in_Vstar(x)


def in_W(x: str) -> bool:
    return re.fullmatch(r"0*1", x) is not None


# -- decoder for g(W) -------------------------------------------------------------


@dataclass(frozen=True)
class GwDecomposition:
    """``x = 0 u1 d v1 ... 0 un d vn 1 u(n+1) d v(n+1)``."""

    n: int
    parts: tuple  # ((u1, v1), ..., (u(n+1), v(n+1)))

    def word(self) -> str:
        marks = ["0"] * self.n + ["1"]
        return "".join(m + u + "d" + v for m, (u, v) in zip(marks, self.parts))


def decode_gW(x: str) -> GwDecomposition | None:
    """Right-to-left decoding; None exactly when ``x`` is not in g(W).

    The last block's v is everything after the last d; its length fixes |u|
    (|v| is 2|u| or 2|u|+1), the letter before u must be the block marker,
    and the rest is decoded the same way.
    """
    if not set(x) <= set("01d"):
        return None
    parts = []
    end = len(x)
    while end > 0:
        k = x.rfind("d", 0, end)
        if k < 0:
            return None
        v = x[k + 1 : end]
        m = len(v) // 2
        start = k - m
        if start < 1:
            return None
        u = x[start:k]
        if "d" in u:
            return None
        marker = "1" if not parts else "0"
        if x[start - 1] != marker:
            return None
        parts.append((u, v))
        end = start - 1
    if not parts:
        return None
    parts.reverse()
    return GwDecomposition(len(parts) - 1, tuple(parts))


# -- grammars --------------------------------------------------------------------

_D_RULES = {"D": ["X D X X", "d", "d X"], "X": ["0", "1"]}
_V_RULES = {
    "E": ["a E b", "a b"],
    "C": ["c C", "c"],
    "A": ["a A", "a"],
    "F": ["b F c", "b c"],
}
_P_RULES = {"P": ["a P a", "b P b", "a", "b", "a a", "b b"]}


def _build_grammars() -> dict[str, Cfg]:
    G = {}
    G["D"] = grammar("01d", "D", _D_RULES)
    G["W"] = grammar("01", "W", {"W": ["0 W", "1"]})
    images = {a: grammar("01d", "G", {"G": [f"{a} D"], **_D_RULES}) for a in "01"}
    G["gW"] = substitute(G["W"], images)
    G["V1"] = grammar("abc", "S", {"S": ["E C"], **_V_RULES})
    G["V2"] = grammar("abc", "S", {"S": ["A F"], **_V_RULES})
    G["V"] = grammar("abc", "S", {"S": ["E C", "A F"], **_V_RULES})
    G["L1"] = grammar(
        "abcd",
        "S",
        {
            "S": ["S1", "S2"],
            "S1": ["E C P2"],
            "S2": ["A F P1"],
            "P2": ["d d P2", "d d"],
            "P1": ["d P2"],
            **_V_RULES,
        },
    )
    G["Lp"] = grammar("ab", "P", _P_RULES)
    G["C"] = grammar("ab", "S", {"S": ["P P"], **_P_RULES})
    G["Lstar"] = grammar(
        "abc",
        "L",
        {"L": ["Vs", "a", "b", "c"], "Vs": ["", "V Vs"], "V": ["E C", "A F"], **_V_RULES},
    )
    return G


def anbn_c_bpda() -> Bpda:
    """Deterministic BPDA for {a^n b^n : n >= 1} . c^ω."""
    T = Transition
    trans = (
        T("q0", "a", "Z", "q0", ("A", "Z")),
        T("q0", "a", "A", "q0", ("A", "A")),
        T("q0", "b", "A", "q1", ()),
        T("q1", "b", "A", "q1", ()),
        T("q1", "c", "Z", "f", ("Z",)),
        T("f", "c", "Z", "f", ("Z",)),
    )
    return Bpda(("q0", "q1", "f"), tuple("abc"), ("Z", "A"), trans, "q0", "Z", frozenset({"f"}))


def _relations() -> dict[str, TwoTapeBa]:
    R = {}
    R["T_id"] = simple_2ba(["q"], "ab", "ab", [("q", "a", "a", "q"), ("q", "b", "b", "q")], "q", ["q"])
    R["T_all"] = simple_2ba(
        ["q"], "ab", "ab", [("q", x, y, "q") for x in "ab" for y in "ab"], "q", ["q"]
    )
    R["T_double"] = simple_2ba(["q"], "a", "a", [("q", "a", "a", "q"), ("q", "a", "a", "q")], "q", ["q"])
    return R


# -- registry --------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    kind: str  # grammar | bpda | relation
    obj: object
    anchor: str
    checker: Callable | None = None

    def to_json(self) -> dict:
        return self.obj.to_json()


@lru_cache(maxsize=1)
def _registry() -> dict[str, CorpusEntry]:
    G = _build_grammars()
    entries = [
        CorpusEntry("D", "grammar", G["D"], "D = {u d v : u,v in {0,1}*, |v| = 2|u| or 2|u|+1}", in_D),
        CorpusEntry("W", "grammar", G["W"], "W = 0*1", in_W),
        CorpusEntry("gW", "grammar", G["gW"], "g(W) with g(a) = a.D, W = 0*1", in_gW),
        CorpusEntry("V1", "grammar", G["V1"], "V1 = {a^n b^n c^p : n,p >= 1}", in_V1),
        CorpusEntry("V2", "grammar", G["V2"], "V2 = {a^n b^p c^p : n,p >= 1}", in_V2),
        CorpusEntry("V", "grammar", G["V"], "V = V1 ∪ V2, one branch per part", in_V),
        CorpusEntry(
            "L1",
            "grammar",
            G["L1"],
            "L1 = {a^n b^n c^p d^2i} ∪ {a^n b^p c^p d^(2i+1)}, n,p,i >= 1",
            in_L1,
        ),
        CorpusEntry("Lp", "grammar", G["Lp"], "non-empty palindromes over {a,b}", in_Lp),
        CorpusEntry("C", "grammar", G["C"], "C = {u v : u, v non-empty palindromes over {a,b}}", in_C),
        CorpusEntry("Lstar", "grammar", G["Lstar"], "L = V* ∪ {a, b, c}", in_Lstar),
        CorpusEntry("Vd", "bpda", suffix_bpda(G["V"], "d"), "V . d^ω by expand/match on the V grammar"),
        CorpusEntry("anbn_c", "bpda", anbn_c_bpda(), "{a^n b^n : n >= 1} . c^ω, deterministic"),
        CorpusEntry("gW_omega", "bpda", omega_power_bpda(G["gW"]), "g(W)^ω by expand/match on the g(W) grammar"),
    ]
    for name, t in _relations().items():
        anchor = {
            "T_id": "identity relation on {a,b}^ω",
            "T_all": "all pairs in {a,b}^ω × {a,b}^ω",
            "T_double": "identity on a^ω through two equal self-loops",
        }[name]
        entries.append(CorpusEntry(name, "relation", t, anchor))
    return {e.name: e for e in entries}


def names() -> list[str]:
    return list(_registry())


def get(name: str) -> CorpusEntry:
    try:
        return _registry()[name]
    except KeyError:
        raise KeyError(f"unknown corpus entry {name!r}; known: {', '.join(names())}") from None


# -- closed forms on lasso words ---------------------------------------------------


def _adh_L1(w: LassoWord) -> bool:
    u, v = w.prefix, w.period
    if v == "a":
        return u == ""
    if v == "b":
        return re.fullmatch(r"a+", u) is not None
    if v == "c":
        m = re.fullmatch(r"(a+)(b+)", u)
        return m is not None and len(m.group(1)) == len(m.group(2))
    if v == "d":
        return in_V(u)
    return False


def _delta_L1(w: LassoWord) -> bool:
    return w.period == "d" and in_V(w.prefix)


def _delta_V(w: LassoWord) -> bool:
    m = re.fullmatch(r"(a+)(b+)", w.prefix)
    return w.period == "c" and m is not None and len(m.group(1)) == len(m.group(2))


def _over(letters: str) -> Callable[[LassoWord], bool]:
    return lambda w: set(w.prefix + w.period) <= set(letters)


CLOSED_FORMS: dict[str, Callable[[LassoWord], bool]] = {
    "Adh_L1": _adh_L1,
    "Adh_C": _over("ab"),
    "delta_L1": _delta_L1,
    "delta_V": _delta_V,
    "Lstar_omega": _over("abc"),
}


def reference_check(name: str, w: LassoWord) -> bool:
    try:
        check = CLOSED_FORMS[name]
    except KeyError:
        raise KeyError(f"unknown closed form {name!r}; known: {', '.join(CLOSED_FORMS)}") from None
    return check(w)
