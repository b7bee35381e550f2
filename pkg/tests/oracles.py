"""Brute-force reference implementations used only by the tests.

None of these share code with the package beyond its data types; they are
deliberately naive so that disagreements point at the real algorithms.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from omegamb.cfl import Cfg, Rule
from omegamb.corpus import in_D, in_gW
from omegamb.pda import Bpda, Transition
from omegamb.relations import RelTransition, TwoTapeBa
from omegamb.words import LassoWord


# -- grammars ------------------------------------------------------------------


def derivation_trees(g: Cfg, w: str, height: int) -> int:
    """Number of derivation trees of ``w`` with height at most ``height``.

    Trees and leftmost derivations are in bijection, and the bounded counts
    increase to the true count, staying bounded exactly when it is finite.
    """
    rules = {}
    for r in g.rules:
        rules.setdefault(r.lhs, []).append(r.rhs)
    terms = set(g.terminals)

    @lru_cache(maxsize=None)
    def sym(x: str, i: int, j: int, h: int) -> int:
        if x in terms:
            return 1 if j == i + 1 and w[i] == x else 0
        if h == 0:
            return 0
        return sum(seq(rhs, 0, i, j, h - 1) for rhs in rules.get(x, ()))

    @lru_cache(maxsize=None)
    def seq(rhs: tuple, k: int, i: int, j: int, h: int) -> int:
        if k == len(rhs):
            return 1 if i == j else 0
        return sum(sym(rhs[k], i, m, h) * seq(rhs, k + 1, m, j, h) for m in range(i, j + 1))

    return sym(g.start, 0, len(w), height)


def random_grammar(rng: random.Random, max_nts: int = 4, max_rules: int = 7, letters: str = "ab") -> Cfg:
    nts = [f"N{i}" for i in range(rng.randint(1, max_nts))]
    symbols = nts + list(letters)
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        lhs = rng.choice(nts)
        k = rng.choices([0, 1, 2, 3], weights=[1, 4, 5, 3])[0]
        rules.append(Rule(lhs, tuple(rng.choice(symbols) for _ in range(k))))
    return Cfg(tuple(letters), tuple(nts), nts[0], tuple(rules))


def all_words(letters: str, max_len: int):
    for n in range(max_len + 1):
        for t in itertools.product(letters, repeat=n):
            yield "".join(t)


# -- g(W) ----------------------------------------------------------------------


def gw_blocks(max_len: int, marker: str):
    """Words ``marker u d v`` in marker.D of length at most ``max_len``."""
    for m in range(max_len):
        for extra in (0, 1):
            lv = 2 * m + extra
            if 2 + m + lv > max_len:
                continue
            for u in itertools.product("01", repeat=m):
                for v in itertools.product("01", repeat=lv):
                    yield marker + "".join(u) + "d" + "".join(v)


def gw_words(max_len: int) -> list[str]:
    """All words of g(W) = (0D)*1D of length at most ``max_len``, by construction."""
    out = []

    def rec(prefix: str, room: int):
        for b in gw_blocks(room, "1"):
            out.append(prefix + b)
        for b in gw_blocks(room - 2, "0"):
            rec(prefix + b, room - len(b))

    rec("", max_len)
    return out


def gw_factorizations(x: str) -> list[list[tuple[str, str]]]:
    """Every way to read ``x`` as 0u1dv1 ... 1u(n+1)dv(n+1) with each u d v in D."""
    results = []

    def rec(pos: int, parts: list):
        if pos == len(x):
            return
        marker = x[pos]
        for end in range(pos + 2, len(x) + 1):
            block = x[pos + 1 : end]
            if not in_D(block):
                continue
            u, v = block.split("d")
            if marker == "1" and end == len(x):
                results.append(parts + [(u, v)])
            elif marker == "0":
                rec(end, parts + [(u, v)])

    rec(0, [])
    return results


def code_factorizations(x: str) -> int:
    """Number of ways to split ``x`` into words of g(W)."""

    @lru_cache(maxsize=None)
    def ways(i: int) -> int:
        if i == len(x):
            return 1
        return sum(ways(j) for j in range(i + 1, len(x) + 1) if in_gW(x[i:j]))

    return ways(0)


# -- lassos --------------------------------------------------------------------


def random_lasso(rng: random.Random, letters: str, max_u: int = 6, max_v: int = 4) -> LassoWord:
    u = "".join(rng.choice(letters) for _ in range(rng.randint(0, max_u)))
    v = "".join(rng.choice(letters) for _ in range(rng.randint(1, max_v)))
    return LassoWord(u, v)


def structured_lasso(rng: random.Random, letters: str = "abcd") -> LassoWord:
    """Lassos of the shape a^i b^j c^k d^l (...), which hit the interesting cases."""
    if rng.random() < 0.35:
        return random_lasso(rng, letters)
    runs = [(x, rng.randint(0, 3)) for x in letters[:-1]]
    u = "".join(x * n for x, n in runs)
    v = rng.choice([letters[-1], letters[-2], "a", "b", letters[-1] * 2, rng.choice(letters) + rng.choice(letters)])
    if len(u) > 6:
        u = u[:6]
    return LassoWord(u, v)


def prefix_hits(member, w: LassoWord, window: int) -> list[int]:
    return [n for n in range(window + 1) if member(w.factor(0, n))]


# -- BPDAs ---------------------------------------------------------------------


def random_bpda(rng: random.Random) -> Bpda:
    states = ["p", "q", "r"][: rng.randint(1, 3)]
    gamma = ["Z", "A"][: rng.randint(1, 2)]
    letters = ("a", "b")
    trans = []
    for _ in range(rng.randint(1, 8)):
        letter = rng.choice([None, "a", "b", "a"])
        push = tuple(rng.choice(gamma) for _ in range(rng.choices([0, 1, 2], weights=[2, 3, 2])[0]))
        trans.append(Transition(rng.choice(states), letter, rng.choice(gamma), rng.choice(states), push))
    finals = [q for q in states if rng.random() < 0.5]
    return Bpda(tuple(states), letters, tuple(gamma), tuple(trans), states[0], "Z", frozenset(finals))


def bpda_has_accepting_lasso(a: Bpda, stack_bound: int = 6) -> bool:
    """Search configurations (state, stack) with bounded stack for a reachable
    cycle that enters a final state and reads a letter."""
    start = (a.initial_state, (a.initial_stack,))

    def succ(node):
        q, stack = node
        for t in a.transitions:
            if t.src == q and stack and stack[0] == t.top:
                ns = t.push + stack[1:]
                if ns and len(ns) <= stack_bound:
                    yield t, (t.dst, ns)

    reach = {start}
    todo = [start]
    while todo:
        n = todo.pop()
        for _, m in succ(n):
            if m not in reach:
                reach.add(m)
                todo.append(m)
    for n in reach:
        # can n return to itself through a final entry and a letter?
        seen = {(n, False, False)}
        todo = [(n, False, False)]
        while todo:
            m, f, c = todo.pop()
            for t, k in succ(m):
                st = (k, f or t.dst in a.final_states, c or t.letter is not None)
                if st[0] == n and st[1] and st[2]:
                    return True
                if st not in seen:
                    seen.add(st)
                    todo.append(st)
    return False


# -- 2-tape automata -------------------------------------------------------------


def random_2ba(rng: random.Random) -> TwoTapeBa:
    states = ["p", "q", "r"][: rng.randint(1, 3)]
    trans = []
    for _ in range(rng.randint(1, 6)):
        inp = "".join(rng.choice("ab") for _ in range(rng.choices([0, 1, 2], weights=[2, 5, 1])[0]))
        out = "".join(rng.choice("ab") for _ in range(rng.choices([0, 1, 2], weights=[2, 5, 1])[0]))
        trans.append(RelTransition(rng.choice(states), inp, out, rng.choice(states)))
    finals = [q for q in states if rng.random() < 0.6]
    return TwoTapeBa(tuple(states), ("a", "b"), ("a", "b"), tuple(trans), states[0], frozenset(finals))


def pair_from_walk(rng: random.Random, t: TwoTapeBa):
    """A lasso pair spelled by a random stem and an accepting closed walk of ``t``, if one is found."""
    by_src = {}
    for tr in t.transitions:
        by_src.setdefault(tr.src, []).append(tr)
    q = t.initial_state
    walk = []
    for _ in range(rng.randint(0, 3)):
        if q not in by_src:
            return None
        tr = rng.choice(by_src[q])
        walk.append(tr)
        q = tr.dst
    stem = list(walk)
    cyc = []
    start = q
    for _ in range(6):
        if q not in by_src:
            return None
        tr = rng.choice(by_src[q])
        cyc.append(tr)
        q = tr.dst
        if q == start:
            break
    if q != start or not any(tr.dst in t.final_states for tr in cyc):
        return None
    u1, v1 = "".join(x.input for x in stem), "".join(x.input for x in cyc)
    u2, v2 = "".join(x.output for x in stem), "".join(x.output for x in cyc)
    if not v1 or not v2:
        return None
    return LassoWord(u1, v1), LassoWord(u2, v2)


def _canon(stem: tuple, cycle: tuple):
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle[:d] * (n // d) == cycle:
            cycle = cycle[:d]
            break
    stem = list(stem)
    while stem and stem[-1] == cycle[-1]:
        stem.pop()
        cycle = (cycle[-1],) + cycle[:-1]
    return tuple(stem), cycle


def pair_graph(t: TwoTapeBa, w1: LassoWord, w2: LassoWord) -> dict:
    """Reachable nodes (state, phase1, phase2) with edges (index, dst, marks)."""

    def adv(w, p, word):
        for a in word:
            if w.letter(p) != a:
                return None
            p = p + 1 if p + 1 < len(w.prefix) + len(w.period) else len(w.prefix)
        return p

    start = (t.initial_state, 0, 0)
    out = {}
    todo = [start]
    while todo:
        node = todo.pop()
        if node in out:
            continue
        q, p1, p2 = node
        out[node] = []
        for i, tr in enumerate(t.transitions):
            if tr.src != q:
                continue
            n1, n2 = adv(w1, p1, tr.input), adv(w2, p2, tr.output)
            if n1 is None or n2 is None:
                continue
            marks = frozenset(
                m for m, on in (("F", tr.dst in t.final_states), ("I", tr.input), ("O", tr.output)) if on
            )
            dst = (tr.dst, n1, n2)
            out[node].append((i, dst, marks))
            todo.append(dst)
    return out


def accepting_lassos(g: dict, start, max_stem: int, max_cycle: int, cap: int = 400, budget: int = 300_000):
    """Distinct accepting computations ``stem . cycle^ω`` within the bounds.

    Returns the canonical index lassos and whether the enumeration finished
    without hitting ``cap`` or ``budget``.
    """
    found: set = set()
    steps = 0

    def cycles(node, path, at, marks):
        nonlocal steps
        for i, dst, m in g[at]:
            steps += 1
            if steps > budget or len(found) > cap:
                return
            nm = marks | m
            if dst == node and nm >= {"F", "I", "O"}:
                yield path + (i,)
            if len(path) + 1 < max_cycle:
                yield from cycles(node, path + (i,), dst, nm)

    def stems(node, path):
        nonlocal steps
        for cyc in cycles(node, (), node, frozenset()):
            found.add(_canon(path, cyc))
        if len(path) < max_stem:
            for i, dst, _ in g[node]:
                steps += 1
                if steps > budget or len(found) > cap:
                    return
                stems(dst, path + (i,))

    stems(start, ())
    return found, steps <= budget and len(found) <= cap


def recurrent_path_count(g: dict, n: int) -> int:
    """Largest number of length-``n`` paths from one node that stay inside a single
    closed-walk component meeting every mark.

    Components that are simple cycles give exactly one path; a component with two
    different cycles gives exponentially many.
    """
    reach = {}
    for x in g:
        seen, todo = {x}, [x]
        while todo:
            y = todo.pop()
            for _, z, _ in g[y]:
                if z not in seen:
                    seen.add(z)
                    todo.append(z)
        reach[x] = seen
    best = 0
    for x in g:
        comp = {y for y in reach[x] if x in reach[y]}
        inner = [(y, i, z, m) for y in comp for i, z, m in g[y] if z in comp]
        if not inner or not set().union(*(m for *_, m in inner)) >= {"F", "I", "O"}:
            continue
        counts = {y: 1 for y in comp}
        for _ in range(n):
            counts = {y: sum(counts[z] for _, z, _ in g[y] if z in comp) for y in comp}
        best = max(best, counts[x])
    return best
