"""Tournament equilibrium set and minimal retentive sets.

A set ``A`` is retentive when every member ``v`` with a nonempty
in-neighbourhood has ``teq(T[N-(v)]) <= A``.  Drawing an arc from ``v`` to every
member of ``teq(T[N-(v)])`` gives the requirement digraph; retentive sets are
exactly its nonempty closed sets, so the minimal ones are its sink strongly
connected components.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Optional

from .core import (
    Tournament,
    bits,
    in_masks,
    serialize,
    source_in,
    subtournament,
)
from .iso import canonical_form

BRUTEFORCE_MAX_N = 8


class TauCache:
    """Memo of teq for canonical tournaments: canonical code -> teq mask in canonical positions.

    Entries for equal keys are equal, so concurrent last-writer-wins updates are harmless.
    """

    def __init__(self, enabled: bool = True):
        self.enabled = enabled
        self.table: dict[tuple[int, int], int] = {}
        self.hits = 0
        self.misses = 0

    def clear(self) -> None:
        self.table.clear()
        self.hits = self.misses = 0

    def __len__(self) -> int:
        return len(self.table)


default_cache = TauCache()


def _resolve(cache) -> TauCache:
    if cache is None:
        return default_cache
    if cache is False:
        return TauCache(enabled=False)
    return cache


def tau_of_subset(t: Tournament, s: int, cache: Optional[TauCache] = None) -> int:
    """teq of ``t[s]`` as a mask in ``t``'s labels."""
    cache = _resolve(cache)
    if s & (s - 1) == 0:
        return s
    src = source_in(t, s)
    if src is not None:
        return 1 << src
    members = list(bits(s))
    if len(members) == 3:
        # No source among three vertices means a directed triangle.
        return s
    sub = subtournament(t, s)
    if not cache.enabled:
        local = _tau_local(sub, cache)
        return _lift(members, local)
    code, order = canonical_form(sub)
    key = (sub.n, code)
    canon = cache.table.get(key)
    if canon is None:
        cache.misses += 1
        # Compute on the canonical relabelling so the stored mask is in canonical positions.
        perm = [0] * sub.n
        for pos, v in enumerate(order):
            perm[v] = pos
        local = _tau_local(sub, cache)
        canon = 0
        for v in bits(local):
            canon |= 1 << perm[v]
        cache.table[key] = canon
    else:
        cache.hits += 1
    result = 0
    for pos in bits(canon):
        result |= 1 << members[order[pos]]
    return result


def _lift(members, local: int) -> int:
    m = 0
    for k in bits(local):
        m |= 1 << members[k]
    return m


def _tau_local(t: Tournament, cache: TauCache) -> int:
    union = 0
    for s in _sink_components(_requirements(t, cache)):
        union |= s
    return union


def _requirements(t: Tournament, cache: TauCache) -> list[int]:
    return [tau_of_subset(t, inn, cache) if inn else 0 for inn in in_masks(t)]


def closure(req: list[int], start: int) -> int:
    """Smallest set containing ``start`` (a mask) that is closed under the requirement arcs."""
    seen = frontier = start
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= req[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen


def _sink_components(req: list[int]) -> list[int]:
    n = len(req)
    reach = [closure(req, 1 << v) for v in range(n)]
    sinks = []
    done = 0
    for v in range(n):
        if done >> v & 1:
            continue
        c = reach[v]
        if all(reach[u] == c for u in bits(c)):
            sinks.append(c)
            done |= c
    sinks.sort(key=lambda m: (m.bit_count(), m))
    return sinks


@dataclass(frozen=True)
class RequirementDigraph:
    n: int
    arcs: tuple[int, ...]

    def targets(self, v: int) -> list[int]:
        return list(bits(self.arcs[v]))

    def sink_components(self) -> list[int]:
        return _sink_components(list(self.arcs))

    def is_closed(self, s: int) -> bool:
        return all(self.arcs[v] & ~s == 0 for v in bits(s))


def requirement_digraph(t: Tournament, cache: Optional[TauCache] = None) -> RequirementDigraph:
    return RequirementDigraph(t.n, tuple(_requirements(t, _resolve(cache))))


@dataclass(frozen=True)
class RetentiveAnalysis:
    minimal_sets: tuple[int, ...]
    teq: int

    @property
    def schwartz_ok(self) -> bool:
        return len(self.minimal_sets) == 1

    def to_record(self, code: str) -> dict:
        return {
            "code": code,
            "minimal_sets": [list(bits(s)) for s in self.minimal_sets],
            "teq": list(bits(self.teq)),
            "schwartz": self.schwartz_ok,
        }


def teq(t: Tournament, cache: Optional[TauCache] = None) -> RetentiveAnalysis:
    """All minimal retentive sets of ``t`` and their union.

    ``cache=False`` disables memoisation (for differential testing).
    """
    graph = requirement_digraph(t, cache)
    sets = graph.sink_components()
    union = 0
    for s in sets:
        union |= s
    return RetentiveAnalysis(tuple(sets), union)


def analysis_line(t: Tournament, cache: Optional[TauCache] = None) -> str:
    return json.dumps(teq(t, cache).to_record(serialize(t)), separators=(",", ":"))


def is_retentive(t: Tournament, s: int, cache: Optional[TauCache] = None) -> bool:
    if s == 0 or s & ~t.vertices:
        return False
    cache = _resolve(cache)
    ins = in_masks(t)
    return all(ins[v] == 0 or tau_of_subset(t, ins[v], cache) & ~s == 0 for v in bits(s))


# -- independent oracle -------------------------------------------------------


def minimal_retentive_sets_bruteforce(t: Tournament) -> list[int]:
    """Inclusion-minimal retentive sets, by testing every nonempty subset against the definition.

    Recurses into itself for in-neighbourhoods; shares no code with ``teq``.
    """
    if t.n > BRUTEFORCE_MAX_N:
        raise ValueError(f"brute force refused for n={t.n} > {BRUTEFORCE_MAX_N}")
    return _bf_minimal(t, {})


def _bf_tau(t: Tournament, memo: dict) -> int:
    key = serialize(t)
    if key not in memo:
        u = 0
        for s in _bf_minimal(t, memo):
            u |= s
        memo[key] = u
    return memo[key]


def _bf_minimal(t: Tournament, memo: dict) -> list[int]:
    n = t.n
    need = []
    for v in range(n):
        inn = [u for u in range(n) if u != v and t.beats(u, v)]
        if not inn:
            need.append(None)
            continue
        sub = subtournament(t, sum(1 << u for u in inn))
        local = _bf_tau(sub, memo)
        need.append({inn[k] for k in range(len(inn)) if local >> k & 1})
    found: list[frozenset] = []
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            a = frozenset(combo)
            if any(f <= a for f in found):
                continue
            if all(need[v] is None or need[v] <= a for v in a):
                found.append(a)
    masks = [sum(1 << v for v in f) for f in found]
    return sorted(masks, key=lambda m: (m.bit_count(), m))


# -- size-three characterisation ---------------------------------------------


def is_minimal_retentive_triple(t: Tournament, a: int, b: int, c: int) -> bool:
    if len({a, b, c}) != 3:
        raise ValueError("triple needs three distinct vertices")
    return is_triangle_free_of_double(t, a, b, c, t.vertices)


def is_triangle_free_of_double(t: Tournament, a: int, b: int, c: int, within: int) -> bool:
    """``{a,b,c}`` is a directed triangle and no other vertex of ``within`` beats two of them."""
    s = 1 << a | 1 << b | 1 << c
    if sorted((t.out[x] & s).bit_count() for x in (a, b, c)) != [1, 1, 1]:
        return False
    for w in bits(within & ~s):
        if (t.out[w] & s).bit_count() >= 2:
            return False
    return True


def minimal_triples(t: Tournament, within: Optional[int] = None) -> list[int]:
    within = t.vertices if within is None else within
    found = []
    for a, b, c in itertools.combinations(list(bits(within)), 3):
        if is_triangle_free_of_double(t, a, b, c, within):
            found.append(1 << a | 1 << b | 1 << c)
    return found


def count_size3_minimal_sets(t: Tournament) -> int:
    return len(minimal_triples(t))
