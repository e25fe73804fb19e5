import random

import pytest

from teqlab.analysis import (
    FilterReport,
    audit,
    beta_census,
    check_conjectures,
    circular_tournament,
    coexistence_record,
    conjecture_counterexamples,
    fast_3bounded_check,
    has_hamiltonian_domcycle,
    has_spanning_violation_cycle,
    is_locally_bounded_retentive,
    lemma12_filter,
    lemma12_filter_bruteforce,
    lemma12_filter_fast,
    lemma12_witness,
    random_locally_transitive,
    schwartz_exhaustive,
    verify_hamiltonian_domcycle,
    verify_locally_transitive,
)
from teqlab.core import (
    bits,
    from_arcs,
    is_irreducible,
    is_locally_transitive,
    parse,
    random_tournament,
    rotational,
    transitive,
)
from teqlab.iso import canonical_key, enumerate_keys, random_relabel
from teqlab.solutions import RetentiveAnalysis, minimal_retentive_sets_bruteforce, teq

from .conftest import classes, classes_upto

CYCLE3 = parse("010")
APEX = from_arcs(4, [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)])


def test_locally_bounded_examples():
    assert is_locally_bounded_retentive(CYCLE3, 0b111, 1)
    assert is_locally_bounded_retentive(transitive(3), 0b001, 3)
    assert not is_locally_bounded_retentive(APEX, 0b1111, 1)
    assert is_locally_bounded_retentive(APEX, 0b1111, 3)
    with pytest.raises(ValueError):
        is_locally_bounded_retentive(CYCLE3, 0, 3)


def test_fast_check_examples():
    assert fast_3bounded_check(CYCLE3, 0b111)
    # Vertex 3 has no captain; its in-neighbours form a tri-captain.
    assert fast_3bounded_check(APEX, 0b1111)
    assert not fast_3bounded_check(CYCLE3, 0b011)


def test_fast_check_matches_definition_exhaustive():
    mismatches = []
    for t in classes_upto(7):
        for s in range(1, t.vertices + 1):
            if all(t.in_degree(v) <= 5 for v in bits(s)):
                if fast_3bounded_check(t, s) != is_locally_bounded_retentive(t, s, 3):
                    mismatches.append((str(t), s))
    assert mismatches == []


@pytest.mark.parametrize("captain_exempt", [False, True])
def test_lemma12_three_routes_agree(captain_exempt):
    for t in classes_upto(7):
        a = lemma12_filter(t, captain_exempt=captain_exempt)
        assert a == lemma12_filter_bruteforce(t, captain_exempt=captain_exempt)
        assert a == lemma12_filter_fast(t, captain_exempt=captain_exempt)


def test_lemma12_routes_agree_on_sample_n8():
    rng = random.Random(5)
    keys = rng.sample(enumerate_keys(8), 150)
    for key in keys:
        t = parse(key)
        for ce in (False, True):
            assert lemma12_filter(t, captain_exempt=ce) == lemma12_filter_bruteforce(t, captain_exempt=ce)


def test_lemma12_eliminates_size6_with_triangle():
    # Find a size-6 irreducible class with a size-3 minimal retentive set whose
    # members all have in-degree at most 5 (always true at n=6).
    found = None
    for t in classes(6):
        if not is_irreducible(t):
            continue
        sets = teq(t).minimal_sets
        if any(s.bit_count() == 3 for s in sets):
            found = t
            break
    assert found is not None
    assert lemma12_filter(found)
    w = lemma12_witness(found)
    assert w.bit_count() == 3 and is_locally_bounded_retentive(found, w, 3)


def test_size6_survivors():
    report = beta_census(6, "full")
    assert len(report.survivors) == 2
    for key in report.survivors:
        t = parse(key)
        assert not lemma12_filter(t)
        assert not lemma12_filter(t, captain_exempt=True)
        assert is_locally_bounded_retentive(t, t.vertices, 3)


def test_size5_eliminations_explained():
    survivors = set(beta_census(5, "full").survivors)
    assert len(survivors) == 2
    for t in classes(5):
        key = str(t)
        if key in survivors:
            assert teq(t).minimal_sets == (t.vertices,)
            continue
        assert not is_irreducible(t) or has_spanning_violation_cycle(t) or lemma12_filter(t)
        # Anything irreducible and eliminated must also fail the whole-set check.
        assert teq(t).minimal_sets != (t.vertices,)


def test_census_accounting_and_modes():
    for n in (4, 5, 6, 7):
        full = beta_census(n, "full")
        loose = beta_census(n, "filter-only")
        assert full.check_accounting() and loose.check_accounting()
        assert set(full.survivors) <= set(loose.survivors)
        assert full.total == sum(1 for t in classes(n) if is_irreducible(t))


def test_census_is_deterministic():
    assert beta_census(7, "full").dumps() == beta_census(7, "full").dumps()


def test_census_rejects_bad_arguments():
    with pytest.raises(ValueError):
        beta_census(3)
    with pytest.raises(ValueError):
        beta_census(9, "filter-only")
    with pytest.raises(ValueError):
        beta_census(9, "full", allow_long=True)
    with pytest.raises(ValueError):
        beta_census(6, "partial")


def test_census_external_keys_and_complement():
    # Feeding the enumeration back in (any labelling) reproduces the report.
    rng = random.Random(9)
    keys = [canonical_key(random_relabel(t, rng)) for t in classes(6)]
    assert beta_census(6, "full", keys=keys).survivors == beta_census(6, "full").survivors


def test_report_dump_format():
    r = FilterReport(6, "full", total=3, survivors=["a", "b"], eliminated_by={"lemma12": 1})
    assert r.dumps().splitlines() == [
        "# beta n=6 mode=full rule=captain-exempt total=3 survivors=2 eliminated[lemma12]=1",
        "a",
        "b",
    ]
    assert r.check_accounting()


@pytest.mark.parametrize("n", range(1, 8))
def test_schwartz_small(n):
    assert schwartz_exhaustive(n) == []


def test_coexistence_record_on_synthetic_analysis():
    # A fabricated two-set analysis exercises the record and audit plumbing.
    t = transitive(4)
    fake = RetentiveAnalysis((0b0001, 0b0010), 0b0011)
    rec = coexistence_record(t, fake)
    assert rec.sizes == [1, 1]
    assert rec.minimal_sets == [[0], [1]]
    assert rec.audit  # the fabricated second singleton is not a source
    assert rec.dumps().startswith(str(t) + " sizes=1,1")


def test_circular_tournaments_are_locally_transitive():
    rng = random.Random(4)
    for _ in range(200):
        t = circular_tournament(rng.randint(1, 12), rng)
        assert is_locally_transitive(t)


def test_random_locally_transitive_valid():
    rng = random.Random(8)
    for _ in range(200):
        assert is_locally_transitive(random_locally_transitive(rng.randint(1, 12), rng))


def test_locally_transitive_verifier():
    v = verify_locally_transitive(trials=200, n_max=12, seed=1)
    assert v.passed and v.checked == 200
    assert verify_locally_transitive(trials=50, seed=3).counterexamples == []


def test_rotational_five():
    t = rotational(5, [1, 2])
    assert is_locally_transitive(t)
    assert teq(t).minimal_sets == (0b11111,)


def test_transitive_locally_transitive_pass():
    for n in range(1, 10):
        assert teq(transitive(n)).schwartz_ok


def test_hamiltonian_domcycle():
    assert has_hamiltonian_domcycle(CYCLE3)
    for n in range(1, 8):
        assert not has_hamiltonian_domcycle(transitive(n))
    v = verify_hamiltonian_domcycle(6)
    assert v.passed and v.checked >= 1


def test_conjecture_checks_on_cycle():
    assert conjecture_counterexamples(CYCLE3, teq(CYCLE3)) == {1: False, 2: False, 3: False}
    # A fabricated analysis that leaves a captain out of teq trips the third check.
    fake = RetentiveAnalysis((0b010,), 0b010)
    assert conjecture_counterexamples(CYCLE3, fake)[3]


def test_conjectures_small_sweep():
    found = check_conjectures(6)
    assert found == {1: [], 2: [], 3: []}


def test_no_triangle_with_another_minimal_set_n8():
    for key in enumerate_keys(8):
        sets = teq(parse(key)).minimal_sets
        if any(s.bit_count() == 3 for s in sets):
            assert len(sets) == 1


@pytest.mark.parametrize("n", range(1, 8))
def test_audit_exhaustive(n):
    for t in classes(n):
        assert audit(t) == []


def test_audit_random_n10():
    rng = random.Random(12)
    for _ in range(300):
        t = random_tournament(rng.randint(8, 10), rng)
        assert audit(t) == []


def test_audit_detects_fabricated_violations():
    t = transitive(3)
    assert audit(t, RetentiveAnalysis((0b110,), 0b110))
    assert audit(CYCLE3, RetentiveAnalysis((0b011, 0b110), 0b111))


def test_lemma12_witness_is_proper_and_retentive():
    for t in classes_upto(7):
        for ce in (False, True):
            w = lemma12_witness(t, captain_exempt=ce)
            if w is None:
                continue
            assert 0 < w < t.vertices
            assert is_locally_bounded_retentive(t, w, 3)


def test_bruteforce_certificates_small():
    for t in classes(5):
        sets = minimal_retentive_sets_bruteforce(t)
        assert conjecture_counterexamples(t, RetentiveAnalysis(tuple(sets), sum(sets))) == {
            1: False,
            2: False,
            3: False,
        }
