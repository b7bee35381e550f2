"""Infinite paths in finite labelled graphs with generalized Buchi acceptance.

Every omega-level count in the package reduces to the same question: given a
finite graph explored from one initial node, whose edges carry acceptance
marks, how many infinite paths see every mark infinitely often?  The answer
is always finite, countably infinite or continuum, and :func:`analyze`
decides which, with explicit witnesses.

An edge is a triple ``(label, dst, marks)``; paths are sequences of
``Edge`` records.  Two paths are equal iff their edge sequences are.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator

FINITE = "Finite"
COUNTABLE = "CountablyInfinite"
UNCOUNTABLE = "Uncountable"


@dataclass(frozen=True)
class Edge:
    src: Hashable
    label: Hashable
    dst: Hashable
    marks: frozenset


class Graph:
    """Adjacency-list graph; successors are added explicitly by explorers."""

    def __init__(self, initial):
        self.initial = initial
        self.out: dict = {initial: []}

    def add_node(self, n) -> bool:
        if n in self.out:
            return False
        self.out[n] = []
        return True

    def add_edge(self, src, label, dst, marks=frozenset()):
        self.add_node(dst)
        self.out[src].append(Edge(src, label, dst, frozenset(marks)))

    @property
    def nodes(self):
        return self.out.keys()

    def edges(self) -> Iterator[Edge]:
        for es in self.out.values():
            yield from es


def tarjan(nodes: Iterable, succ) -> list[list]:
    """Strongly connected components, sinks first (reverse topological order)."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    comps: list[list] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            pushed = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    pushed = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if pushed:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def bfs_path(graph: Graph, src, targets, allowed=None) -> list[Edge] | None:
    """Shortest edge path from ``src`` to any node in ``targets``."""
    if src in targets:
        return []
    prev = {src: None}
    q = deque([src])
    while q:
        n = q.popleft()
        for e in graph.out[n]:
            if allowed is not None and e.dst not in allowed:
                continue
            if e.dst in prev:
                continue
            prev[e.dst] = e
            if e.dst in targets:
                path = []
                m = e.dst
                while prev[m] is not None:
                    path.append(prev[m])
                    m = prev[m].src
                return path[::-1]
            q.append(e.dst)
    return None


def canonical_lasso(stem, cycle) -> tuple[tuple, tuple]:
    """Normal form of the infinite path ``stem . cycle^omega``."""
    stem, cycle = list(stem), list(cycle)
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle[:d] * (n // d) == cycle:
            cycle = cycle[:d]
            break
    while stem and stem[-1] == cycle[-1]:
        stem.pop()
        cycle = [cycle[-1]] + cycle[:-1]
    return tuple(stem), tuple(cycle)


@dataclass(frozen=True)
class PathCertificate:
    """Two closed walks at ``node``, neither a prefix of the other, both accepting."""

    node: Hashable
    path: tuple
    cycle_a: tuple
    cycle_b: tuple


@dataclass
class Analysis:
    kind: str
    count: int | None
    good: set
    accepting_sccs: list
    certificate: PathCertificate | None
    witness: tuple[tuple, tuple] | None


class Analyzer:
    """Classifies the accepting infinite paths of ``graph`` from its initial node."""

    def __init__(self, graph: Graph, required: Iterable):
        self.graph = graph
        self.required = frozenset(required)
        out = graph.out
        self.sccs = tarjan(list(out), lambda n: [e.dst for e in out[n]])
        self.comp_of = {}
        for i, c in enumerate(self.sccs):
            for n in c:
                self.comp_of[n] = i
        self.internal = []
        for i, c in enumerate(self.sccs):
            self.internal.append([e for n in c for e in out[n] if self.comp_of[e.dst] == i])
        self.accepting = set()
        for i, es in enumerate(self.internal):
            if es and self.required <= frozenset().union(*(e.marks for e in es)):
                self.accepting.add(i)
        self.good = self._good_nodes()

    def _good_nodes(self) -> set:
        good = set()
        # sccs are sink-first, so successors are decided before predecessors
        for i, c in enumerate(self.sccs):
            if i in self.accepting or any(
                e.dst in good for n in c for e in self.graph.out[n]
            ):
                good.update(c)
        return good

    def _tour(self, i: int, start) -> list[Edge]:
        """Closed walk at ``start`` inside SCC ``i`` covering every required mark."""
        members = set(self.sccs[i])
        walk: list[Edge] = []
        cur = start
        for m in sorted(self.required, key=str):
            e = next(e for e in self.internal[i] if m in e.marks)
            walk += bfs_path(self.graph, cur, {e.src}, members)
            walk.append(e)
            cur = e.dst
        walk += bfs_path(self.graph, cur, {start}, members)
        if not walk:
            # no marks required: any internal cycle will do
            e = next(e for e in self.internal[i] if e.src == start)
            walk = [e] + bfs_path(self.graph, e.dst, {start}, members)
        return walk

    def witness(self) -> tuple[list[Edge], list[Edge]] | None:
        if not self.accepting:
            return None
        targets = {n for i in self.accepting for n in self.sccs[i]}
        stem = bfs_path(self.graph, self.graph.initial, targets)
        if stem is None:
            return None
        node = stem[-1].dst if stem else self.graph.initial
        return stem, self._tour(self.comp_of[node], node)

    def certificate(self) -> PathCertificate | None:
        for i in sorted(self.accepting):
            for n in self.sccs[i]:
                outs = [e for e in self.internal[i] if e.src == n]
                if len(outs) < 2:
                    continue
                members = set(self.sccs[i])
                tour = self._tour(i, n)
                a = [outs[0]] + bfs_path(self.graph, outs[0].dst, {n}, members) + tour
                b = [outs[1]] + bfs_path(self.graph, outs[1].dst, {n}, members) + tour
                path = bfs_path(self.graph, self.graph.initial, {n})
                return PathCertificate(n, tuple(path), tuple(a), tuple(b))
        return None

    def classify(self) -> Analysis:
        wit = self.witness()
        if not self.good or wit is None:
            return Analysis(FINITE, 0, set(), [], None, None)
        cert = self.certificate()
        acc = [self.sccs[i] for i in sorted(self.accepting)]
        if cert is not None:
            return Analysis(UNCOUNTABLE, None, self.good, acc, cert, wit)
        for i, c in enumerate(self.sccs):
            if not self.internal[i] or c[0] not in self.good:
                continue
            if i not in self.accepting:
                return Analysis(COUNTABLE, None, self.good, acc, None, wit)
            for n in c:
                for e in self.graph.out[n]:
                    if self.comp_of[e.dst] != i and e.dst in self.good:
                        return Analysis(COUNTABLE, None, self.good, acc, None, wit)
        counts: dict = {}
        for i, c in enumerate(self.sccs):
            if c[0] not in self.good:
                continue
            if self.internal[i]:
                for n in c:
                    counts[n] = 1
                continue
            (n,) = c
            counts[n] = sum(counts[e.dst] for e in self.graph.out[n] if e.dst in self.good)
        return Analysis(FINITE, counts[self.graph.initial], self.good, acc, None, wit)

    def lassos(self, max_len: int, limit: int, budget: int = 200_000) -> tuple[set, bool]:
        """Distinct accepting lasso paths with ``|stem| + |cycle| <= max_len``.

        Returns the canonical lassos found and whether the search completed
        (neither ``limit`` nor the expansion ``budget`` was hit).
        """
        found: set = set()
        if self.graph.initial not in self.good:
            return found, True
        path_nodes = [self.graph.initial]
        path_edges: list[Edge] = []
        positions: dict = {self.graph.initial: [0]}
        stack = [iter(self.graph.out[self.graph.initial])]
        steps = 0
        while stack:
            if len(found) >= limit or steps >= budget:
                return found, False
            e = next(stack[-1], None)
            if e is None:
                stack.pop()
                if path_edges:
                    path_edges.pop()
                    n = path_nodes.pop()
                    positions[n].pop()
                continue
            if e.dst not in self.good:
                continue
            steps += 1
            path_edges.append(e)
            path_nodes.append(e.dst)
            seen_at = positions.get(e.dst, ())
            if seen_at:
                # close the simple cycle back to the latest visit
                i = seen_at[-1]
                cyc = path_edges[i:]
                if self.required <= frozenset().union(*(x.marks for x in cyc)):
                    found.add(canonical_lasso(path_edges[:i], cyc))
            positions.setdefault(e.dst, []).append(len(path_edges))
            # a node may repeat once on the path, so stems can contain a loop
            if len(path_edges) < max_len and len(positions[e.dst]) <= 2:
                stack.append(iter(self.graph.out[e.dst]))
            else:
                path_edges.pop()
                n = path_nodes.pop()
                positions[n].pop()
        return found, True


def analyze(graph: Graph, required: Iterable) -> Analysis:
    return Analyzer(graph, required).classify()
