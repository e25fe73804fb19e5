"""Census of retentive tournaments, Schwartz sweeps, lemma audits and conjecture checks."""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import (
    Tournament,
    bits,
    in_masks,
    is_irreducible,
    is_locally_transitive,
    parse,
    relabel,
    serialize,
    source,
    subtournament,
)
from .domgraph import (
    StructureViolation,
    classify,
    domination_graph,
    is_subgraph,
    tri_captain,
)
from .iso import LONG_RUN_N, canonical_key, enumerate_keys
from .solutions import (
    RetentiveAnalysis,
    TauCache,
    default_cache,
    is_retentive,
    minimal_retentive_sets_bruteforce,
    minimal_triples,
    requirement_digraph,
    tau_of_subset,
    teq,
)

log = logging.getLogger(__name__)

FULL_MODE_MAX_N = 8
SCHWARTZ_MAX_N = 9


# -- locally bounded retentive sets -------------------------------------------


def is_locally_bounded_retentive(t: Tournament, s: int, c: int, cache: Optional[TauCache] = None) -> bool:
    if s == 0:
        raise ValueError("retentive sets are nonempty")
    ins = in_masks(t)
    for v in bits(s):
        if not ins[v]:
            continue
        tau = tau_of_subset(t, ins[v], cache)
        if tau & ~s or tau.bit_count() > c:
            return False
    return True


def fast_3bounded_check(t: Tournament, s: int) -> bool:
    """Captain-or-tri-captain test for ``s`` being 3-locally bounded retentive.

    A member with no in-neighbours imposes no requirement and passes.
    """
    if s == 0:
        raise ValueError("retentive sets are nonempty")
    g = domination_graph(t)
    for v in bits(s):
        inn = t.vertices & ~t.out[v] & ~(1 << v)
        if not inn:
            continue
        cap = g.captain_of[v]
        if cap is not None:
            if not s >> cap & 1:
                return False
            continue
        tri = tri_captain(t, v)
        if tri is None or tri & ~s:
            return False
    return True


def _bounded_candidates(t: Tournament, req: list[int], captain_exempt: bool) -> int:
    good = 0
    for v in range(t.n):
        size = req[v].bit_count()
        if captain_exempt and size <= 1:
            good |= 1 << v
        elif size <= 3 and t.in_degree(v) <= 5:
            good |= 1 << v
    return good


def _closure(req: list[int], start: int) -> int:
    seen = frontier = start
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= req[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen


def lemma12_witness(
    t: Tournament, cache: Optional[TauCache] = None, captain_exempt: bool = False
) -> Optional[int]:
    """Smallest proper 3-locally bounded retentive set whose members have in-degree <= 5, if any.

    With ``captain_exempt`` the in-degree bound applies only to members whose
    in-neighbourhood has a three-vertex teq.
    Every closed set inside the admissible vertices contains the closure of one
    of its members, so single-vertex closures suffice.
    """
    req = list(requirement_digraph(t, cache).arcs)
    good = _bounded_candidates(t, req, captain_exempt)
    full = t.vertices
    best = None
    for v in bits(good):
        c = _closure(req, 1 << v)
        if c & ~good == 0 and c != full:
            if best is None or (c.bit_count(), c) < (best.bit_count(), best):
                best = c
    return best


def lemma12_filter(t: Tournament, cache: Optional[TauCache] = None, captain_exempt: bool = False) -> bool:
    """True when ``t`` is eliminated: it cannot be induced by a minimal retentive set."""
    return lemma12_witness(t, cache, captain_exempt) is not None


def _admissible(t: Tournament, s: int, captain_exempt: bool) -> bool:
    if captain_exempt:
        g = domination_graph(t)
        return all(g.captain_of[v] is not None or t.in_degree(v) <= 5 for v in bits(s))
    return all(t.in_degree(v) <= 5 for v in bits(s))


def lemma12_filter_fast(t: Tournament, captain_exempt: bool = False) -> bool:
    """The same elimination test, using only the captain-or-tri-captain shortcut over all subsets."""
    full = t.vertices
    for s in range(1, full):
        if _admissible(t, s, captain_exempt) and fast_3bounded_check(t, s):
            return True
    return False


def lemma12_filter_bruteforce(
    t: Tournament, cache: Optional[TauCache] = None, captain_exempt: bool = False
) -> bool:
    """Enumerate every proper nonempty subset and test the definition directly."""
    full = t.vertices
    ins = in_masks(t)
    for s in range(1, full):
        if not is_locally_bounded_retentive(t, s, 3, cache):
            continue
        if captain_exempt:
            ok = all(
                tau_of_subset(t, ins[v], cache).bit_count() <= 1 or t.in_degree(v) <= 5
                for v in bits(s)
                if ins[v]
            )
        else:
            ok = all(t.in_degree(v) <= 5 for v in bits(s))
        if ok:
            return True
    return False


def has_spanning_violation_cycle(t: Tournament) -> bool:
    """A directed cycle of the domination digraph that leaves some vertex uncovered."""
    for cyc in domination_graph(t).directed_cycles():
        if len(cyc) < t.n:
            return True
    return False


# -- census -------------------------------------------------------------------


@dataclass
class FilterReport:
    n: int
    mode: str
    rule: str = "captain-exempt"
    total: int = 0
    survivors: list[str] = field(default_factory=list)
    eliminated_by: dict[str, int] = field(default_factory=dict)

    def check_accounting(self) -> bool:
        return self.total == len(self.survivors) + sum(self.eliminated_by.values())

    def header(self) -> str:
        parts = [f"n={self.n}", f"mode={self.mode}", f"rule={self.rule}", f"total={self.total}", f"survivors={len(self.survivors)}"]
        parts += [f"eliminated[{k}]={v}" for k, v in sorted(self.eliminated_by.items())]
        return "# beta " + " ".join(parts)

    def dumps(self) -> str:
        return self.header() + "\n" + "".join(k + "\n" for k in self.survivors)


def _census_one(key: str, mode: str, captain_exempt: bool, cache: TauCache) -> str:
    """Return the elimination reason for one canonical key, or '' if it survives."""
    t = parse(key)
    if not is_irreducible(t):
        return "reducible"
    if lemma12_filter(t, cache, captain_exempt):
        return "lemma12"
    if mode == "full":
        a = teq(t, cache)
        if a.minimal_sets != (t.vertices,):
            return "teq"
    return ""


def _census_chunk(args):
    keys, mode, captain_exempt = args
    cache = TauCache()
    return [_census_one(k, mode, captain_exempt, cache) for k in keys]


def beta_census(
    n: int,
    mode: str = "full",
    jobs: int = 1,
    allow_long: bool = False,
    keys: Optional[Iterable[str]] = None,
    cache: Optional[TauCache] = None,
    captain_exempt: bool = True,
) -> FilterReport:
    """Count tournaments of size ``n`` surviving the retentiveness filters.

    ``filter-only`` applies irreducibility and the bounded-retentive-subset
    elimination; ``full`` additionally keeps only tournaments whose unique
    minimal retentive set is the whole vertex set.  With ``captain_exempt``
    (the default) members with a captain are not held to the in-degree bound,
    which is the rule that yields 395 survivors at n=8 and 30596 at n=9.
    ``keys`` replaces the built-in enumeration with external canonical codes.
    """
    if not 4 <= n <= 10:
        raise ValueError(f"census supports 4 <= n <= 10, got {n}")
    if mode not in ("full", "filter-only"):
        raise ValueError(f"unknown census mode {mode!r}")
    if mode == "full" and n > FULL_MODE_MAX_N:
        raise ValueError(f"full mode supports n <= {FULL_MODE_MAX_N}")
    if n >= LONG_RUN_N and not allow_long:
        raise ValueError(f"n={n} is a long run; pass allow_long=True")
    if keys is None:
        keys = enumerate_keys(n, jobs=jobs)
    keys = sorted(set(keys))
    report = FilterReport(n, mode, rule="captain-exempt" if captain_exempt else "all-members")
    # Reducible classes are never examined; total counts irreducible classes only.
    if jobs > 1:
        from multiprocessing import Pool

        size = max(1, len(keys) // (jobs * 8))
        chunks = [(keys[i:i + size], mode, captain_exempt) for i in range(0, len(keys), size)]
        with Pool(jobs) as pool:
            reasons = [r for part in pool.map(_census_chunk, chunks) for r in part]
    else:
        cache = default_cache if cache is None else cache
        reasons = [_census_one(k, mode, captain_exempt, cache) for k in keys]
    for key, reason in zip(keys, reasons):
        if reason == "reducible":
            continue
        report.total += 1
        if reason:
            report.eliminated_by[reason] = report.eliminated_by.get(reason, 0) + 1
        else:
            report.survivors.append(key)
    for reason in ("lemma12", "teq") if mode == "full" else ("lemma12",):
        report.eliminated_by.setdefault(reason, 0)
    return report


# -- lemma audits -------------------------------------------------------------


def audit(t: Tournament, a: Optional[RetentiveAnalysis] = None, cache: Optional[TauCache] = None) -> list[str]:
    """Structural facts every analysis must satisfy; returns human-readable violations."""
    a = teq(t, cache) if a is None else a
    bad = []
    sets = a.minimal_sets
    if not sets or not a.teq:
        bad.append("teq is empty")
    union = 0
    for s in sets:
        union |= s
    if union != a.teq:
        bad.append("teq is not the union of the minimal sets")
    for r1, r2 in itertools.combinations(sets, 2):
        if r1 & r2:
            bad.append(f"minimal sets {r1:b} and {r2:b} intersect")
    src = source(t)
    if src is not None and sets != (1 << src,):
        bad.append("source is not the unique minimal set")
    for r in sets:
        if r.bit_count() == 1 and src is None:
            bad.append("singleton minimal set without a source")
        if r.bit_count() in (2, 4):
            bad.append(f"minimal set of size {r.bit_count()}")
        if not is_irreducible(subtournament(t, r)):
            bad.append(f"minimal set {r:b} induces a reducible subtournament")
        bad += audit_minimal_set(t, r, cache)
    if a.teq.bit_count() == 3 and len(sets) != 1:
        bad.append("teq of size three split over several minimal sets")
    if len(minimal_triples(t)) > 1:
        bad.append("more than one minimal triple")
    return bad


def audit_minimal_set(t: Tournament, r: int, cache: Optional[TauCache] = None) -> list[str]:
    """Facts tying a minimal retentive set ``r`` to the domination digraph of ``t``."""
    bad = []
    members = list(bits(r))
    sub = subtournament(t, r)
    dsub = domination_graph(sub)
    dt = domination_graph(t)
    if not is_subgraph(dsub, members, dt):
        bad.append(f"domination digraph of T[{r:b}] is not a subgraph of that of T")
    for cyc in dsub.directed_cycles():
        if len(cyc) < len(members):
            bad.append(f"directed domination cycle leaves part of {r:b} uncovered")
    for u, v in dsub.arcs():
        hu, hv = members[u], members[v]
        both = ~t.out[hu] & ~t.out[hv] & t.vertices & ~(1 << hu | 1 << hv)
        if both:
            bad.append(f"vertex beats both ends of domination arc {hu}>{hv}")
    ins = in_masks(t)
    for v in members:
        inn_r = ins[v] & r
        if inn_r.bit_count() > 5:
            continue
        tri = tri_captain(t, v, within=r)
        if tri is not None and tau_of_subset(t, ins[v], cache) != tri:
            bad.append(f"tri-captain of {v} inside {r:b} is not the teq of its in-neighbourhood")
    return bad


def lemma4_violations(t: Tournament, cache: Optional[TauCache] = None) -> list[int]:
    """Vertices where 'has captain u' and 'teq of in-neighbourhood is the sole set {u}' disagree."""
    g = domination_graph(t)
    bad = []
    for v, inn in enumerate(in_masks(t)):
        if not inn:
            continue
        sub = subtournament(t, inn)
        local = teq(sub, cache).minimal_sets
        members = list(bits(inn))
        cap = g.captain_of[v]
        single = len(local) == 1 and local[0].bit_count() == 1
        if (cap is not None) != single or (single and members[local[0].bit_length() - 1] != cap):
            bad.append(v)
    return bad


def classify_ok(t: Tournament) -> bool:
    try:
        classify(domination_graph(t))
    except StructureViolation:
        return False
    return True


# -- Schwartz sweeps ----------------------------------------------------------


@dataclass
class CoexistenceRecord:
    tournament: str
    sizes: list[int]
    classes: list[str]
    minimal_sets: list[list[int]]
    audit: list[str]

    def dumps(self) -> str:
        sets = ";".join(",".join(map(str, s)) for s in self.minimal_sets)
        return f"{self.tournament} sizes={','.join(map(str, self.sizes))} sets={sets} classes={','.join(self.classes)}"


def coexistence_record(t: Tournament, a: RetentiveAnalysis, cache: Optional[TauCache] = None) -> CoexistenceRecord:
    sets = list(a.minimal_sets)
    return CoexistenceRecord(
        tournament=serialize(t),
        sizes=[s.bit_count() for s in sets],
        classes=[canonical_key(subtournament(t, s)) for s in sets],
        minimal_sets=[list(bits(s)) for s in sets],
        audit=audit(t, a, cache),
    )


def schwartz_exhaustive(
    n: int, allow_long: bool = False, keys: Optional[Iterable[str]] = None, cache: Optional[TauCache] = None
) -> list[CoexistenceRecord]:
    if not 1 <= n <= SCHWARTZ_MAX_N:
        raise ValueError(f"exhaustive Schwartz check supports n <= {SCHWARTZ_MAX_N}")
    if n >= LONG_RUN_N and not allow_long:
        raise ValueError(f"n={n} is a long run; pass allow_long=True")
    if keys is None:
        keys = enumerate_keys(n)
    found = []
    for key in keys:
        t = parse(key) if n > 1 else Tournament(1, (0,))
        a = teq(t, cache)
        if not a.schwartz_ok:
            found.append(coexistence_record(t, a, cache))
    return found


# -- theorem verifiers --------------------------------------------------------


@dataclass
class Verdict:
    passed: bool
    checked: int
    counterexamples: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed


def circular_tournament(n: int, rng: random.Random) -> Tournament:
    """Points at random angles; ``i`` beats ``j`` when ``j`` lies less than half a turn ahead."""
    while True:
        angles = [rng.random() * 2 * math.pi for _ in range(n)]
        diffs = [
            (angles[j] - angles[i]) % (2 * math.pi) for i in range(n) for j in range(n) if i != j
        ]
        if all(abs(d - math.pi) > 1e-9 and d > 1e-9 for d in diffs):
            break
    out = [0] * n
    for i in range(n):
        for j in range(n):
            if i != j and (angles[j] - angles[i]) % (2 * math.pi) < math.pi:
                out[i] |= 1 << j
    return Tournament(n, tuple(out))


def random_locally_transitive(n: int, rng: random.Random, steps: int = 8, max_tries: int = 1000) -> Tournament:
    for _ in range(max_tries):
        t = circular_tournament(n, rng)
        # Random arc reversals, each kept only if local transitivity survives.
        for _ in range(steps):
            if n < 2:
                break
            i, j = rng.sample(range(n), 2)
            out = list(t.out)
            out[i] ^= 1 << j
            out[j] ^= 1 << i
            cand = Tournament(n, tuple(out))
            if is_locally_transitive(cand):
                t = cand
        perm = list(range(n))
        rng.shuffle(perm)
        t = relabel(t, perm)
        if is_locally_transitive(t):
            return t
    raise RuntimeError(f"no locally transitive tournament of size {n} after {max_tries} tries")


def verify_locally_transitive(trials: int = 1000, n_max: int = 12, seed: int = 0, cache=None) -> Verdict:
    rng = random.Random(seed)
    bad = []
    for _ in range(trials):
        n = rng.randint(1, n_max)
        t = random_locally_transitive(n, rng)
        if not teq(t, cache).schwartz_ok:
            bad.append(serialize(t))
    return Verdict(not bad, trials, bad)


def has_hamiltonian_domcycle(t: Tournament) -> bool:
    return any(len(c) == t.n for c in domination_graph(t).directed_cycles())


def verify_hamiltonian_domcycle(n_max: int = 7, cache=None) -> Verdict:
    if n_max > 8:
        raise ValueError("Hamiltonian domination-cycle sweep supports n_max <= 8")
    bad = []
    checked = 0
    for n in range(1, n_max + 1):
        for key in enumerate_keys(n):
            t = parse(key) if n > 1 else Tournament(1, (0,))
            if n < 3 or not has_hamiltonian_domcycle(t):
                continue
            checked += 1
            if teq(t, cache).minimal_sets != (t.vertices,):
                bad.append(key)
    return Verdict(not bad, checked, bad)


# -- conjectures --------------------------------------------------------------


def conjecture_counterexamples(t: Tournament, a: RetentiveAnalysis) -> dict[int, bool]:
    """Which of the three conjectures ``t`` refutes, given its analysis ``a``."""
    sets = a.minimal_sets
    hits = {1: False, 2: False, 3: False}
    if any(s.bit_count() == 3 for s in sets) and len(sets) != 1:
        hits[1] = True
    g = domination_graph(t)
    for cyc in g.directed_cycles():
        if sets != (sum(1 << v for v in cyc),):
            hits[2] = True
    captains = 0
    for c in g.captain_of:
        if c is not None:
            captains |= 1 << c
    if captains & ~a.teq:
        hits[3] = True
    return hits


def check_conjectures(n_max: int = 7, verify: bool = True, cache=None) -> dict[int, list[str]]:
    """Counterexample codes per conjecture over all tournaments up to ``n_max``.

    With ``verify`` each hit is recomputed by the brute-force oracle; a hit the
    oracle does not confirm raises, since it would be an engine bug.
    """
    if n_max > 8:
        raise ValueError("conjecture sweep supports n_max <= 8")
    found: dict[int, list[str]] = {1: [], 2: [], 3: []}
    for n in range(1, n_max + 1):
        for key in enumerate_keys(n):
            t = parse(key) if n > 1 else Tournament(1, (0,))
            a = teq(t, cache)
            hits = conjecture_counterexamples(t, a)
            if not any(hits.values()):
                continue
            if verify:
                sets = tuple(minimal_retentive_sets_bruteforce(t))
                union = 0
                for s in sets:
                    union |= s
                again = conjecture_counterexamples(t, RetentiveAnalysis(sets, union))
                if again != hits:
                    raise RuntimeError(f"oracle disagrees on conjecture certificate {key}")
            for k, hit in hits.items():
                if hit:
                    found[k].append(key)
    return found


def is_retentive_set(t: Tournament, s: int, cache=None) -> bool:
    return is_retentive(t, s, cache)
