"""Canonical labelling and isomorph-free enumeration of tournaments.

The canonical key of a tournament is the lexicographically smallest
upper-triangle code over all relabellings.  It is found by building the
labelling one position at a time: once positions ``0..i-1`` are fixed, the
remaining vertices sit in an ordered partition whose cells occupy contiguous
position ranges, and row ``i`` of the code is minimised by taking the vertex
for position ``i`` from the first cell and placing its in-neighbours ahead of
its out-neighbours inside every cell.  All branches that tie on the minimal
row are carried forward together; branches reaching the same partition are
merged because the rest of the code depends on nothing else.
"""

from __future__ import annotations

import logging
from typing import Iterator, Optional

from .core import Tournament, _from_int_code, bits, is_irreducible, parse, relabel

log = logging.getLogger(__name__)

MAX_ENUM_N = 10
LONG_RUN_N = 9


def canonical_form(t: Tournament) -> tuple[int, list[int]]:
    """Return ``(code, order)``: the minimal code as an integer and a vertex order realising it.

    ``order[k]`` is the original vertex placed at canonical position ``k``.
    """
    n = t.n
    out = t.out
    code = 0
    # Each state: (cells, chosen-prefix); cells are nonzero masks in position order.
    states: dict[tuple[int, ...], list[int]] = {((1 << n) - 1,): []}
    for i in range(n - 1):
        best = -1
        nxt: dict[tuple[int, ...], list[int]] = {}
        for cells, chosen in states.items():
            first = cells[0]
            for p in bits(first):
                op = out[p]
                row = 0
                new_cells = []
                rest = first & ~(1 << p)
                for k, cell in enumerate(cells):
                    if k == 0:
                        cell = rest
                        if not cell:
                            continue
                    o = cell & op
                    inn = cell ^ o
                    row = (row << cell.bit_count()) | ((1 << o.bit_count()) - 1)
                    if inn:
                        new_cells.append(inn)
                    if o:
                        new_cells.append(o)
                if best < 0 or row < best:
                    best = row
                    nxt = {}
                if row == best:
                    key = tuple(new_cells)
                    if key not in nxt:
                        nxt[key] = chosen + [p]
        code = (code << (n - 1 - i)) | best
        states = nxt
    cells, chosen = next(iter(states.items()))
    order = chosen + [cells[0].bit_length() - 1]
    return code, order


def code_string(code: int, n: int) -> str:
    m = n * (n - 1) // 2
    return format(code, f"0{m}b") if m else ""


def canonical_key(t: Tournament) -> str:
    code, _ = canonical_form(t)
    return code_string(code, t.n)


def canonical_labeling(t: Tournament) -> list[int]:
    """``perm`` with ``perm[v]`` = canonical position of ``v``."""
    _, order = canonical_form(t)
    perm = [0] * t.n
    for pos, v in enumerate(order):
        perm[v] = pos
    return perm


def canonical_tournament(t: Tournament) -> Tournament:
    code, _ = canonical_form(t)
    return _from_int_code(t.n, code)


def is_isomorphic(a: Tournament, b: Tournament) -> bool:
    if a.n != b.n or sorted(a.scores()) != sorted(b.scores()):
        return False
    return canonical_form(a)[0] == canonical_form(b)[0]


def _drop_last(code: str, n: int) -> str:
    """Upper-triangle code of the first ``n - 1`` vertices of an ``n``-vertex code."""
    parts = []
    k = 0
    for i in range(n):
        length = n - 1 - i
        parts.append(code[k:k + length - 1])
        k += length
    return "".join(parts)


def _children(parent_key: str, n: int, parent_cache: dict) -> list[str]:
    """Canonical keys of the ``n``-vertex tournaments whose canonical parent is ``parent_key``."""
    parent = parse(parent_key) if n > 2 else Tournament(1, (0,))
    seen = set()
    kept = []
    full = (1 << (n - 1)) - 1
    for ext in range(1 << (n - 1)):
        # ext bit j set: new vertex beats old vertex j.
        out = [row | ((~ext >> v & 1) << (n - 1)) for v, row in enumerate(parent.out)]
        out.append(ext & full)
        child = Tournament.__new__(Tournament)
        object.__setattr__(child, "n", n)
        object.__setattr__(child, "out", tuple(out))
        key = canonical_key(child)
        if key in seen:
            continue
        seen.add(key)
        sub = _drop_last(key, n)
        canon_parent = parent_cache.get(sub)
        if canon_parent is None:
            canon_parent = canonical_key(parse(sub)) if n > 2 else ""
            parent_cache[sub] = canon_parent
        if canon_parent == parent_key:
            kept.append(key)
    return kept


def _children_job(args):
    parent_key, n = args
    return _children(parent_key, n, {})


def enumerate_keys(n: int, jobs: int = 1, allow_long: bool = True) -> list[str]:
    """Canonical keys of all tournaments on ``n`` vertices, ascending."""
    if not 1 <= n <= MAX_ENUM_N:
        raise ValueError(f"enumeration supports 1 <= n <= {MAX_ENUM_N}, got {n}")
    if n >= LONG_RUN_N and not allow_long:
        raise ValueError(f"enumerating n={n} is a long run; enable it explicitly")
    level = [""]
    for m in range(2, n + 1):
        if jobs > 1 and len(level) > 1:
            from multiprocessing import Pool

            with Pool(jobs) as pool:
                parts = pool.map(_children_job, [(k, m) for k in level], chunksize=8)
        else:
            cache: dict = {}
            parts = [_children(k, m, cache) for k in level]
        level = sorted(key for part in parts for key in part)
        log.debug("n=%d: %d classes", m, len(level))
    return level


def enumerate_tournaments(
    n: int, irreducible: bool = False, jobs: int = 1, allow_long: bool = True
) -> Iterator[Tournament]:
    """One representative (in canonical labelling) per isomorphism class, ascending by code."""
    for key in enumerate_keys(n, jobs=jobs, allow_long=allow_long):
        t = parse(key) if n > 1 else Tournament(1, (0,))
        if irreducible and not is_irreducible(t):
            continue
        yield t


def key_of(t: Tournament) -> str:
    return canonical_key(t)


def random_relabel(t: Tournament, rng) -> Tournament:
    perm = list(range(t.n))
    rng.shuffle(perm)
    return relabel(t, perm)


def find_isomorphism(a: Tournament, b: Tournament) -> Optional[list[int]]:
    """A bijection ``f`` (list) with ``a.beats(u, v) == b.beats(f[u], f[v])``, or None."""
    if a.n != b.n:
        return None
    ca, oa = canonical_form(a)
    cb, ob = canonical_form(b)
    if ca != cb:
        return None
    f = [0] * a.n
    for pos in range(a.n):
        f[oa[pos]] = ob[pos]
    return f
