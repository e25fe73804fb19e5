"""Tournaments stored as per-vertex out-neighbour bit masks.

Vertex sets are plain ``int`` bit masks throughout the package: bit ``i`` set
means vertex ``i`` is a member.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

MAX_N = 16


class FormatError(ValueError):
    """Raised for malformed upper-triangle codes."""


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def popcount(mask: int) -> int:
    return mask.bit_count()


@dataclass(frozen=True)
class Tournament:
    n: int
    out: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise ValueError(f"tournament size must be in 1..{MAX_N}, got {self.n}")
        if len(self.out) != self.n:
            raise ValueError("need one out-neighbour mask per vertex")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.out):
            if row & ~full or row >> i & 1:
                raise ValueError(f"bad out-neighbour mask for vertex {i}")
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if (self.out[i] >> j & 1) == (self.out[j] >> i & 1):
                    raise ValueError(f"pair ({i},{j}) is not oriented exactly once")

    @property
    def vertices(self) -> int:
        return (1 << self.n) - 1

    def beats(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def out_degree(self, v: int) -> int:
        return self.out[v].bit_count()

    def in_degree(self, v: int) -> int:
        return self.n - 1 - self.out[v].bit_count()

    def scores(self) -> list[int]:
        return [row.bit_count() for row in self.out]

    def __str__(self) -> str:
        return serialize(self)


def _trusted(n: int, out: Sequence[int]) -> Tournament:
    # Skips validation; callers guarantee a well-formed relation.
    t = object.__new__(Tournament)
    object.__setattr__(t, "n", n)
    object.__setattr__(t, "out", tuple(out))
    return t


def from_arcs(n: int, arcs: Iterable[tuple[int, int]]) -> Tournament:
    """Build a tournament from ``(winner, loser)`` pairs covering every pair once."""
    out = [0] * n
    for u, v in arcs:
        out[u] |= 1 << v
    return Tournament(n, tuple(out))


def from_relation(n: int, beats) -> Tournament:
    """Build a tournament from a predicate ``beats(i, j)`` evaluated for i < j."""
    out = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if beats(i, j):
                out[i] |= 1 << j
            else:
                out[j] |= 1 << i
    return _trusted(n, out)


def transitive(n: int) -> Tournament:
    """The transitive tournament with ``i`` beating ``j`` whenever ``i < j``."""
    return from_relation(n, lambda i, j: True)


def rotational(n: int, jumps: Iterable[int]) -> Tournament:
    """Circulant tournament on Z_n: ``i`` beats ``j`` iff ``(j - i) % n`` is a jump.

    ``jumps`` must contain exactly one of ``d`` and ``n - d`` for each ``d``.
    """
    s = {d % n for d in jumps}
    out = [0] * n
    for i in range(n):
        for d in s:
            out[i] |= 1 << ((i + d) % n)
    return Tournament(n, tuple(out))


def random_tournament(n: int, rng: random.Random) -> Tournament:
    code = rng.getrandbits(n * (n - 1) // 2) if n > 1 else 0
    return _from_int_code(n, code)


def _from_int_code(n: int, code: int) -> Tournament:
    # Bit k of the integer (counting from the most significant pair) is the
    # k-th character of the text code.
    m = n * (n - 1) // 2
    out = [0] * n
    k = m - 1
    for i in range(n):
        for j in range(i + 1, n):
            if code >> k & 1:
                out[i] |= 1 << j
            else:
                out[j] |= 1 << i
            k -= 1
    return _trusted(n, out)


def size_from_code_length(length: int) -> int:
    n = (1 + math.isqrt(1 + 8 * length)) // 2
    if n * (n - 1) // 2 != length or n < 1:
        raise FormatError(f"code length {length} is not a triangular number")
    return n


def parse(code: str, complement: bool = False) -> Tournament:
    """Read an upper-triangle code: character for pair (i, j), i < j, is '1' iff i beats j.

    The empty string is rejected (it would encode the 1-vertex tournament as
    well as the empty one); use ``transitive(1)`` for a single vertex.
    """
    code = code.strip()
    if not code:
        raise FormatError("empty code")
    bad = set(code) - {"0", "1"}
    if bad:
        raise FormatError(f"illegal character(s) {''.join(sorted(bad))!r} in code")
    n = size_from_code_length(len(code))
    if n > MAX_N:
        raise FormatError(f"tournament size {n} exceeds {MAX_N}")
    value = int(code, 2)
    if complement:
        value ^= (1 << len(code)) - 1
    return _from_int_code(n, value)


def serialize(t: Tournament) -> str:
    out = t.out
    return "".join(
        "1" if out[i] >> j & 1 else "0" for i in range(t.n) for j in range(i + 1, t.n)
    )


def read_codes(lines: Iterable[str], complement: bool = False) -> Iterator[tuple[int, Tournament]]:
    """Parse one code per line, yielding ``(line_number, tournament)``; blank lines are skipped."""
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        try:
            yield lineno, parse(line, complement=complement)
        except FormatError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None


def _check_vertex(t: Tournament, v: int) -> None:
    if not 0 <= v < t.n:
        raise IndexError(f"vertex {v} out of range for a {t.n}-vertex tournament")


def out_neighbors(t: Tournament, v: int) -> int:
    _check_vertex(t, v)
    return t.out[v]


def in_neighbors(t: Tournament, v: int) -> int:
    _check_vertex(t, v)
    return t.vertices & ~t.out[v] & ~(1 << v)


def in_masks(t: Tournament) -> list[int]:
    full = t.vertices
    return [full & ~row & ~(1 << v) for v, row in enumerate(t.out)]


def subtournament(t: Tournament, s: int) -> Tournament:
    """Induced subtournament on ``s``, relabelled 0..|s|-1 in increasing index order."""
    if s == 0:
        raise ValueError("cannot induce a subtournament on the empty set")
    if s & ~t.vertices:
        raise ValueError("vertex set not contained in the tournament")
    members = list(bits(s))
    out = []
    for v in members:
        row = t.out[v] & s
        packed = 0
        for k, w in enumerate(members):
            if row >> w & 1:
                packed |= 1 << k
        out.append(packed)
    return _trusted(len(members), out)


def lift(members: Sequence[int], local: int) -> int:
    """Map a vertex set of ``subtournament(t, s)`` back to host labels; ``members`` lists ``s``."""
    m = 0
    for k in bits(local):
        m |= 1 << members[k]
    return m


def relabel(t: Tournament, perm: Sequence[int]) -> Tournament:
    """Return the tournament in which ``perm[v]`` plays the role of ``v``."""
    out = [0] * t.n
    for v in range(t.n):
        row = 0
        for w in bits(t.out[v]):
            row |= 1 << perm[w]
        out[perm[v]] = row
    return _trusted(t.n, out)


def source(t: Tournament) -> Optional[int]:
    for v, row in enumerate(t.out):
        if row.bit_count() == t.n - 1:
            return v
    return None


def source_in(t: Tournament, s: int) -> Optional[int]:
    """The vertex of ``s`` beating all other members of ``s``, if any."""
    for v in bits(s):
        if (s & ~t.out[v]) == 1 << v:
            return v
    return None


def reach(t: Tournament, v: int, within: Optional[int] = None) -> int:
    """Vertices reachable from ``v`` along dominance arcs, staying inside ``within``."""
    within = t.vertices if within is None else within
    seen = frontier = 1 << v
    while frontier:
        nxt = 0
        for u in bits(frontier):
            nxt |= t.out[u]
        frontier = nxt & within & ~seen
        seen |= frontier
    return seen


def is_irreducible(t: Tournament) -> bool:
    if t.n == 1:
        return True
    full = t.vertices
    # Strongly connected iff every vertex reaches all others from vertex 0 and back.
    if reach(t, 0) != full:
        return False
    back = frontier = 1
    while frontier:
        nxt = 0
        for u in bits(frontier):
            nxt |= full & ~t.out[u] & ~(1 << u)
        frontier = nxt & ~back
        back |= frontier
    return back == full


def is_transitive_on(t: Tournament, s: int) -> bool:
    """True iff ``t[s]`` is acyclic, i.e. the scores inside ``s`` are all distinct."""
    seen = 0
    for v in bits(s):
        d = (t.out[v] & s).bit_count()
        if seen >> d & 1:
            return False
        seen |= 1 << d
    return True


def is_locally_transitive(t: Tournament) -> bool:
    ins = in_masks(t)
    return all(
        is_transitive_on(t, ins[v]) and is_transitive_on(t, t.out[v]) for v in range(t.n)
    )


def dominates_set(t: Tournament, a: int, b: int) -> bool:
    """``A > B``: every vertex of mask ``a`` beats every vertex of mask ``b``."""
    return all(b & ~t.out[u] == 0 for u in bits(a))
