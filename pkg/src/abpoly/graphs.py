"""Graphs, stable sets, replications, colorings, and Kempe equivalence.

The harness at the bottom ties three views of one graph together: quadratic
generation for the stable-set configuration, the same for its reflection
closure, and Kempe connectivity of colorings across replications.  All three
are decided by bounded sweeps whose bounds are part of the report.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import BudgetExceeded, InvariantViolation
from .fibers import PointConfiguration, QuadGenCertificate, quad_generation_check, reflections
from .polytopes import AntiBlockingPolytope, build_anti_blocking
from .vectors import Vec

STABLE_SET_VERTEX_CAP = 20
COLORING_VERTEX_CAP = 12
COLORING_STATE_CAP = 2_000_000


@dataclass(frozen=True)
class Graph:
    """A simple graph on vertices 1..n."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        for e in self.edges:
            i, j = e
            if not (1 <= i < j <= self.n):
                raise InvariantViolation(f"bad edge {e} on {self.n} vertices")

    @classmethod
    def of(cls, n: int, edges) -> "Graph":
        norm = frozenset((min(i, j), max(i, j)) for i, j in edges)
        for i, j in norm:
            if i == j:
                raise InvariantViolation(f"loop at vertex {i}")
        return cls(n, norm)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj = [set() for _ in range(self.n + 1)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return tuple(frozenset(s) for s in adj)

    @cached_property
    def adjacency_masks(self) -> tuple[int, ...]:
        """Bit v-1 of masks[v] set when v is adjacent to that vertex."""
        masks = [0] * (self.n + 1)
        for i, j in self.edges:
            masks[i] |= 1 << (j - 1)
            masks[j] |= 1 << (i - 1)
        return tuple(masks)

    def to_json_dict(self):
        return {"n": self.n, "edges": sorted(map(list, self.edges))}


def stable_sets(g: Graph) -> list[frozenset[int]]:
    """Every vertex subset without an internal edge, the empty set included."""
    if g.n > STABLE_SET_VERTEX_CAP:
        raise InvariantViolation(f"stable set enumeration capped at {STABLE_SET_VERTEX_CAP} vertices")
    adj = g.adjacency
    out: list[frozenset[int]] = []
    chosen: set[int] = set()

    def rec(v: int) -> None:
        if v > g.n:
            out.append(frozenset(chosen))
            return
        rec(v + 1)
        if not (adj[v] & chosen):
            chosen.add(v)
            rec(v + 1)
            chosen.discard(v)

    rec(1)
    return out


def indicator(subset, n: int) -> Vec:
    return tuple(1 if v in subset else 0 for v in range(1, n + 1))


def stable_config(g: Graph) -> PointConfiguration:
    """The stable-set indicator vectors of g as a point configuration."""
    return PointConfiguration.of([indicator(s, g.n) for s in stable_sets(g)])


def stable_set_polytope(g: Graph) -> AntiBlockingPolytope:
    """The convex hull of all stable-set indicator vectors."""
    return build_anti_blocking([indicator(s, g.n) for s in stable_sets(g)])


def replication(g: Graph, a) -> Graph:
    """Blow each vertex i up into a clique of a_i vertices, joining along edges.

    Blobs take consecutive labels in increasing vertex order; a zero entry
    deletes the vertex, the all-ones vector returns the graph unchanged.
    """
    a = tuple(a)
    if len(a) != g.n:
        raise InvariantViolation("replication vector length must match the vertex count")
    if any(x < 0 for x in a):
        raise InvariantViolation("replication entries must be nonnegative")
    start = {}
    total = 0
    for v in range(1, g.n + 1):
        start[v] = total + 1
        total += a[v - 1]
    blob = {v: range(start[v], start[v] + a[v - 1]) for v in range(1, g.n + 1)}
    edges = set()
    for v in range(1, g.n + 1):
        for x, y in itertools.combinations(blob[v], 2):
            edges.add((x, y))
    for i, j in g.edges:
        for x in blob[i]:
            for y in blob[j]:
                edges.add((min(x, y), max(x, y)))
    return Graph.of(total, edges)


def _max_clique(g: Graph) -> int:
    adj = g.adjacency
    best = 0
    order = sorted(range(1, g.n + 1), key=lambda v: -len(adj[v]))

    def rec(candidates: list[int], size: int) -> None:
        nonlocal best
        if size > best:
            best = size
        for idx, v in enumerate(candidates):
            if size + len(candidates) - idx <= best:
                return
            rec([w for w in candidates[idx + 1 :] if w in adj[v]], size + 1)

    rec(order, 0)
    return best


def _colorable(g: Graph, k: int) -> bool:
    if g.n == 0:
        return True
    if k == 0:
        return False
    adj = g.adjacency
    order = sorted(range(1, g.n + 1), key=lambda v: -len(adj[v]))
    colors = {}

    def rec(idx: int, used: int) -> bool:
        if idx == g.n:
            return True
        v = order[idx]
        taken = {colors[w] for w in adj[v] if w in colors}
        for c in range(1, min(used + 1, k) + 1):
            if c not in taken:
                colors[v] = c
                if rec(idx + 1, max(used, c)):
                    return True
                del colors[v]
        return False

    return rec(0, 0)


def chromatic_number(g: Graph) -> int:
    """Exact chromatic number; zero for the graph without vertices."""
    if g.n > COLORING_VERTEX_CAP:
        raise InvariantViolation(f"chromatic number capped at {COLORING_VERTEX_CAP} vertices")
    if g.n == 0:
        return 0
    k = max(_max_clique(g), 1)
    while not _colorable(g, k):
        k += 1
    return k


@dataclass(frozen=True)
class Coloring:
    """A proper assignment of colors 1..k to the vertices of a graph."""

    graph: Graph
    k: int
    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.assignment) != self.graph.n:
            raise InvariantViolation("assignment length must match the vertex count")
        for c in self.assignment:
            if not (1 <= c <= self.k):
                raise InvariantViolation(f"color {c} outside 1..{self.k}")
        for i, j in self.graph.edges:
            if self.assignment[i - 1] == self.assignment[j - 1]:
                raise InvariantViolation(f"edge ({i},{j}) is monochromatic")

    def color_of(self, v: int) -> int:
        return self.assignment[v - 1]


def kempe_switch(coloring: Coloring, i: int, j: int, component_rep: int) -> Coloring:
    """Swap colors i and j on the two-color component containing the given vertex."""
    if i == j:
        raise InvariantViolation("need two distinct colors")
    f = coloring.assignment
    if f[component_rep - 1] not in (i, j):
        raise InvariantViolation(f"vertex {component_rep} is colored {f[component_rep - 1]}, not {i} or {j}")
    adj = coloring.graph.adjacency
    comp = {component_rep}
    stack = [component_rep]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in comp and f[w - 1] in (i, j):
                comp.add(w)
                stack.append(w)
    g = list(f)
    for v in comp:
        g[v - 1] = j if f[v - 1] == i else i
    return Coloring(coloring.graph, coloring.k, tuple(g))


def proper_colorings(g: Graph, k: int, cap: int = COLORING_STATE_CAP):
    """All proper k-colorings as tuples, in lexicographic order."""
    adj = g.adjacency
    out: list[tuple[int, ...]] = []
    partial = [0] * g.n

    def rec(v: int) -> None:
        if v > g.n:
            out.append(tuple(partial))
            if len(out) > cap:
                raise BudgetExceeded(f"more than {cap} proper {k}-colorings")
            return
        taken = {partial[w - 1] for w in adj[v] if w < v}
        for c in range(1, k + 1):
            if c not in taken:
                partial[v - 1] = c
                rec(v + 1)
        partial[v - 1] = 0

    rec(1)
    return out


def _kempe_neighbors(f: tuple[int, ...], k: int, masks, n: int):
    """Colorings one Kempe switch away, components found by bitmask flooding."""
    by_color = [0] * (k + 1)
    for v in range(n):
        by_color[f[v]] |= 1 << v
    for i in range(1, k):
        mi = by_color[i]
        for j in range(i + 1, k + 1):
            inplay = mi | by_color[j]
            rest = inplay
            while rest:
                low = rest & -rest
                comp = low
                frontier = low
                while frontier:
                    nxt = 0
                    m = frontier
                    while m:
                        bit = m & -m
                        m ^= bit
                        nxt |= masks[bit.bit_length()] & inplay & ~comp
                    comp |= nxt
                    frontier = nxt
                rest &= ~comp
                g = list(f)
                m = comp
                while m:
                    bit = m & -m
                    m ^= bit
                    v = bit.bit_length() - 1
                    g[v] = j if f[v] == i else i
                yield tuple(g)


def _graph_components(g: Graph) -> list[Graph]:
    """Connected components, each relabeled onto 1..m in increasing vertex order."""
    adj = g.adjacency
    unseen = set(range(1, g.n + 1))
    comps = []
    while unseen:
        root = min(unseen)
        comp = {root}
        stack = [root]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w in comp:
                    continue
                comp.add(w)
                stack.append(w)
        unseen -= comp
        order = sorted(comp)
        relabel = {v: i + 1 for i, v in enumerate(order)}
        edges = [(relabel[i], relabel[j]) for i, j in g.edges if i in comp and j in comp]
        comps.append(Graph.of(len(order), edges))
    return comps


def _kempe_connected_search(g: Graph, k: int, cap: int) -> bool:
    colorings = proper_colorings(g, k, cap=cap)
    total = len(colorings)
    seen = {colorings[0]}
    queue = [colorings[0]]
    masks = g.adjacency_masks
    n = g.n
    while queue:
        f = queue.pop()
        for nxt in _kempe_neighbors(f, k, masks, n):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen) == total


_kempe_memo: dict[tuple, bool | None] = {}
_chromatic_memo: dict[tuple, int] = {}


def kempe_equivalent_all(g: Graph, k: int, cap: int = COLORING_STATE_CAP) -> bool:
    """Whether every proper k-coloring is reachable from every other by switches.

    A switch never crosses a connected component of the graph and the
    coloring space of a disjoint union is the product of the parts, so the
    question factors over components; each connected part is settled by a
    search from its lexicographically first coloring.  Raises when no
    coloring exists or a component's state space exceeds the cap.
    """
    if g.n == 0:
        return True
    if not _colorable(g, k):
        raise InvariantViolation(f"no proper {k}-coloring exists")
    comps = _graph_components(g)
    if len(comps) == 1:
        return _kempe_connected_search(g, k, cap)
    result = True
    for comp in comps:
        key = (canonical_graph_key(comp), k, "kempe")
        got = _kempe_memo.get(key)
        if got is None:
            got = _kempe_connected_search(comp, k, cap)
            _kempe_memo[key] = got
        result = result and got
    return result


def canonical_graph_key(g: Graph):
    """A labeling-independent key: the least edge code over degree-respecting relabelings."""
    degs = tuple(len(g.adjacency[v]) for v in range(1, g.n + 1))
    groups: dict[int, list[int]] = {}
    for v in range(1, g.n + 1):
        groups.setdefault(degs[v - 1], []).append(v)
    keys = sorted(groups)
    best = None
    for perm_parts in itertools.product(
        *[itertools.permutations(groups[d]) for d in keys]
    ):
        relabel = {}
        pos = 1
        for d, part in zip(keys, perm_parts):
            for v in part:
                relabel[v] = pos
                pos += 1
        code = tuple(
            sorted(
                (min(relabel[i], relabel[j]), max(relabel[i], relabel[j]))
                for i, j in g.edges
            )
        )
        if best is None or code < best:
            best = code
    return (g.n, best)


@dataclass(frozen=True)
class HarnessCell:
    """One (replication vector, color count) probe of Kempe connectivity."""

    a: Vec
    vertices: int
    chromatic: int
    k: int
    equivalent: bool | None  # None when the state space cap was hit

    def to_json_dict(self):
        return {
            "a": list(self.a),
            "vertices": self.vertices,
            "chromatic": self.chromatic,
            "k": self.k,
            "equivalent": self.equivalent,
            "budget_exceeded": self.equivalent is None,
        }


@dataclass(frozen=True)
class HarnessReport:
    """Joint verdicts for one graph: reflected ideal, plain ideal, Kempe sweeps."""

    graph: Graph
    d_max: int
    a_budget: int
    k_extra: int
    reflected_quadratic: QuadGenCertificate
    plain_quadratic: QuadGenCertificate
    cells: tuple[HarnessCell, ...]

    @property
    def condition_reflected(self) -> bool:
        return self.reflected_quadratic.certified

    @property
    def condition_plain(self) -> bool:
        return self.plain_quadratic.certified

    @property
    def condition_kempe(self) -> bool | None:
        budget_hit = any(c.equivalent is None for c in self.cells)
        if any(c.equivalent is False for c in self.cells):
            return False
        return None if budget_hit else True

    @property
    def budget_exceeded(self) -> bool:
        return any(c.equivalent is None for c in self.cells)

    @property
    def consistent(self) -> bool:
        verdicts = {self.condition_reflected, self.condition_plain}
        if self.condition_kempe is not None:
            verdicts.add(self.condition_kempe)
        return len(verdicts) == 1

    def first_kempe_witness(self) -> HarnessCell | None:
        for c in self.cells:
            if c.equivalent is False:
                return c
        return None

    def to_json_dict(self):
        return {
            "graph": self.graph.to_json_dict(),
            "bounds": {
                "d_max": self.d_max,
                "a_budget": self.a_budget,
                "k_extra": self.k_extra,
            },
            "reflected_ideal": self.reflected_quadratic.to_json_dict(),
            "plain_ideal": self.plain_quadratic.to_json_dict(),
            "kempe": self.condition_kempe,
            "consistent": self.consistent,
            "budget_exceeded": self.budget_exceeded,
            "cells": [c.to_json_dict() for c in self.cells],
        }


def _replication_vectors(n: int, budget: int):
    """All nonnegative integer vectors of length n with coordinate sum <= budget."""
    def rec(prefix, left):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in range(left + 1):
            yield from rec(prefix + [v], left - v)

    yield from rec([], budget)


def theorem_equivalence_harness(
    g: Graph, a_budget: int = 6, k_extra: int = 2, d_max: int = 4, jobs: int = 1
) -> HarnessReport:
    """Probe the three-way equivalence for one graph, within explicit bounds.

    Verdict one: the reflected stable-set configuration has all fibers of
    degree <= d_max connected.  Verdict two: the same for the plain
    configuration.  Verdict three: all k-colorings of every replication with
    coordinate sum <= a_budget are Kempe equivalent, for k up to the
    chromatic number plus k_extra.  Kempe results are memoized by the
    relabeling-independent graph key, since distinct replication vectors
    often produce the same graph.
    """
    cfg = stable_config(g)
    plain = quad_generation_check(cfg, d_max, jobs=jobs)
    refl = quad_generation_check(reflections(cfg), d_max, jobs=jobs)

    cells = []
    for a in sorted(_replication_vectors(g.n, a_budget)):
        ga = replication(g, a)
        key = canonical_graph_key(ga)
        chi = _chromatic_memo.get(key)
        if chi is None:
            chi = chromatic_number(ga)
            _chromatic_memo[key] = chi
        for k in range(chi, chi + k_extra + 1):
            memo_key = (key, k)
            if memo_key in _kempe_memo:
                result = _kempe_memo[memo_key]
            else:
                try:
                    result = kempe_equivalent_all(ga, k)
                except BudgetExceeded:
                    result = None
                _kempe_memo[memo_key] = result
            cells.append(HarnessCell(a, ga.n, chi, k, result))
    return HarnessReport(g, d_max, a_budget, k_extra, refl, plain, tuple(cells))


def all_graphs_up_to_isomorphism(n: int) -> list[Graph]:
    """Every graph on exactly n labeled vertices, one per isomorphism class."""
    all_edges = list(itertools.combinations(range(1, n + 1), 2))
    seen = set()
    out = []
    for bits in range(1 << len(all_edges)):
        edges = frozenset(e for i, e in enumerate(all_edges) if bits >> i & 1)
        g = Graph(n, edges)
        key = canonical_graph_key(g)
        if key not in seen:
            seen.add(key)
            out.append(g)
    return out
