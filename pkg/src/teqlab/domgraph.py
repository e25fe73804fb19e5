"""Captains, domination graphs and the structures built on them."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .core import Tournament, bits, in_masks, source_in
from .solutions import is_triangle_free_of_double


class StructureViolation(RuntimeError):
    """A domination graph that is neither a spiked odd cycle nor a caterpillar forest."""

    def __init__(self, message: str, edges):
        super().__init__(message)
        self.edges = edges


class NotAForest(ValueError):
    pass


@dataclass(frozen=True)
class DominationGraph:
    n: int
    captain_of: tuple[Optional[int], ...]

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for v, u in enumerate(self.captain_of) if u is not None]

    def slaves(self, u: int) -> list[int]:
        return [v for v, c in enumerate(self.captain_of) if c == u]

    def neighbors(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.arcs():
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def edges(self) -> set[frozenset]:
        return {frozenset(a) for a in self.arcs()}

    def is_empty(self) -> bool:
        return all(c is None for c in self.captain_of)

    def directed_cycles(self) -> list[list[int]]:
        """Every directed cycle; in-degree at most one means at most one per component."""
        cycles = []
        on_cycle: set[int] = set()
        for start in range(self.n):
            path = []
            index = {}
            v: Optional[int] = start
            while v is not None and v not in index and v not in on_cycle:
                index[v] = len(path)
                path.append(v)
                v = self.captain_of[v]
            if v is not None and v in index:
                # Walking captains runs against the arcs; reverse to get arc order.
                cyc = path[index[v]:][::-1]
                k = cyc.index(min(cyc))
                cyc = cyc[k:] + cyc[:k]
                on_cycle.update(cyc)
                cycles.append(cyc)
        return cycles

    def export_arcs(self) -> str:
        return "".join(f"{u}>{v}\n" for u, v in self.arcs())


def domination_graph(t: Tournament) -> DominationGraph:
    ins = in_masks(t)
    return DominationGraph(t.n, tuple(source_in(t, inn) if inn else None for inn in ins))


def is_subgraph(small: DominationGraph, members: list[int], big: DominationGraph) -> bool:
    """Every arc of ``small`` (labels indexing ``members``) is an arc of ``big``."""
    return all(big.captain_of[members[v]] == members[u] for u, v in small.arcs())


# -- Fisher structure ---------------------------------------------------------


@dataclass(frozen=True)
class StructureVerdict:
    kind: str  # "empty", "spiked-odd-cycle" or "caterpillar-forest"
    cycle: tuple[int, ...] = ()
    spines: tuple[tuple[int, ...], ...] = field(default_factory=tuple)

    def export(self) -> str:
        if self.kind == "spiked-odd-cycle":
            return f"{self.kind} cycle={','.join(map(str, self.cycle))}"
        if self.kind == "caterpillar-forest":
            return f"{self.kind} spines=" + ";".join(",".join(map(str, s)) for s in self.spines)
        return self.kind


def _components(adj: list[set[int]]) -> list[list[int]]:
    seen = set()
    comps = []
    for s in range(len(adj)):
        if s in seen:
            continue
        comp = []
        todo = [s]
        seen.add(s)
        while todo:
            v = todo.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        comps.append(sorted(comp))
    return comps


def _path_order(vertices: list[int], adj: list[set[int]]) -> Optional[list[int]]:
    """Order ``vertices`` as a path in ``adj`` restricted to them, or None if they do not form one."""
    vs = set(vertices)
    deg = {v: len(adj[v] & vs) for v in vertices}
    if len(vertices) == 1:
        return list(vertices)
    ends = [v for v in vertices if deg[v] == 1]
    if len(ends) != 2 or any(d > 2 for d in deg.values()):
        return None
    order = [min(ends)]
    prev = None
    while len(order) < len(vertices):
        nxt = [w for w in adj[order[-1]] & vs if w != prev]
        if len(nxt) != 1:
            return None
        prev = order[-1]
        order.append(nxt[0])
    return order


def _cycle_order(vertices: list[int], adj: list[set[int]]) -> Optional[list[int]]:
    vs = set(vertices)
    if len(vertices) < 3 or any(len(adj[v] & vs) != 2 for v in vertices):
        return None
    order = [min(vertices)]
    prev = None
    while True:
        nxt = sorted(w for w in adj[order[-1]] & vs if w != prev)
        prev = order[-1]
        if nxt[0] == order[0] and len(order) == len(vertices):
            break
        if nxt[0] in order:
            if len(nxt) > 1 and nxt[1] not in order:
                order.append(nxt[1])
                continue
            return None
        order.append(nxt[0])
        if len(order) > len(vertices):
            return None
    return order if len(order) == len(vertices) else None


def classify(g: DominationGraph) -> StructureVerdict:
    """Classify the undirected domination graph and re-check the witness."""
    if g.is_empty():
        return StructureVerdict("empty")
    adj = g.neighbors()
    comps = [c for c in _components(adj) if len(c) > 1]
    n_edges = len(g.edges())
    cyclic = [c for c in comps if sum(len(adj[v]) for v in c) // 2 >= len(c)]
    if not cyclic:
        spines = []
        for comp in comps:
            core = [v for v in comp if len(adj[v]) > 1]
            if not core:
                # A single edge: either end may serve as the one-vertex spine.
                core = [comp[0]]
            spine = _path_order(core, adj)
            if spine is None:
                raise StructureViolation("tree is not a caterpillar", sorted(map(tuple, map(sorted, g.edges()))))
            spines.append(tuple(spine))
        return StructureVerdict("caterpillar-forest", spines=tuple(spines))
    if len(comps) != 1:
        raise StructureViolation(
            "cycle present alongside another nontrivial component",
            sorted(map(tuple, map(sorted, g.edges()))),
        )
    comp = comps[0]
    if n_edges != len(comp):
        raise StructureViolation("component has more than one cycle", sorted(map(tuple, map(sorted, g.edges()))))
    core = [v for v in comp if len(adj[v]) > 1]
    cyc = _cycle_order(core, adj)
    if cyc is None or len(cyc) % 2 == 0:
        raise StructureViolation("not a spiked odd cycle", sorted(map(tuple, map(sorted, g.edges()))))
    return StructureVerdict("spiked-odd-cycle", cycle=tuple(cyc))


# -- tri-captains -------------------------------------------------------------


def tri_captain(t: Tournament, v: int, within: Optional[int] = None, check_unique: bool = False) -> Optional[int]:
    """The directed triangle among ``v``'s in-neighbours that no other in-neighbour beats twice.

    ``within`` restricts the host to ``t[within]`` (``v`` must lie in it).
    """
    within = t.vertices if within is None else within
    inn = within & ~t.out[v] & ~(1 << v)
    found = None
    for a, b, c in itertools.combinations(list(bits(inn)), 3):
        if is_triangle_free_of_double(t, a, b, c, inn):
            s = 1 << a | 1 << b | 1 << c
            if not check_unique:
                return s
            if found is not None:
                raise AssertionError(f"two tri-captains for vertex {v}: {found:b}, {s:b}")
            found = s
    return found


# -- brooms, siblings, arc parity --------------------------------------------


@dataclass(frozen=True)
class Broom:
    head: int
    center: int
    leaves: tuple[int, ...]


def find_brooms(g: DominationGraph, k: int) -> list[Broom]:
    if k < 1:
        raise ValueError("broom order must be at least 1")
    found = []
    for v, u in enumerate(g.captain_of):
        if u is None:
            continue
        leaves = g.slaves(v)
        if len(leaves) == k:
            found.append(Broom(u, v, tuple(leaves)))
    return found


def _is_forest(adj: list[set[int]]) -> bool:
    edges = sum(len(a) for a in adj) // 2
    return edges == len(adj) - len(_components(adj))


def _distances(adj: list[set[int]], s: int) -> dict[int, int]:
    dist = {s: 0}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def are_siblings(g: DominationGraph, v: int, u: int) -> bool:
    if v == u:
        raise ValueError("siblings must be distinct vertices")
    adj = g.neighbors()
    if not _is_forest(adj):
        raise NotAForest("undirected domination graph is not a forest")
    dv = _distances(adj, v)
    if u not in dv:
        return False
    du = _distances(adj, u)
    return all((dv[w] - du[w]) % 2 == 0 for w in dv if w not in (v, u))


def arc_parity(t: Tournament, a: int, b: int, c: int, d: int) -> str:
    if a == b or c == d:
        raise ValueError("arc pairs need distinct endpoints")
    return "aligned" if t.beats(a, b) == t.beats(c, d) else "opposed"
