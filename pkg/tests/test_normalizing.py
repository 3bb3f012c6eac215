"""Decision-procedure tests backed by brute-force referees.

The referee for a single map is plain and strategy-free: build the full
closure of the conjugate set (no rank pruning, no R-class reasoning)
and test every product a*g directly.  A slower pure-python closure
cross-checks a sample of those referees in turn.
"""

import os
import random
from itertools import product

import pytest

from normgroups.catalog import catalog, catalog_labels
from normgroups.groups import PermutationGroup
from normgroups.normalizing import (
    KNOWN_FAILING_MAPS,
    M12_WITNESS_G,
    M12_WITNESS_MAP,
    STATUS_NORMALIZING,
    STATUS_NOT,
    ConjugacySweep,
    SweepCacheMismatch,
    check_pair,
    classify,
    conjugacy_orbit_reps,
    exists_section_mapper,
    is_a_normalizing,
    is_class_normalizing,
    is_k_normalizing,
    is_normalizing,
    m12_witness_check,
    structural_filters,
)
from normgroups.semigroups import TransSemigroup
from normgroups.transform import Permutation, Transformation, is_section


def conjugate_set(group, a):
    return {a.conjugated_by(g) for g in group.elements()}


def referee_a_normalizing(group, a) -> bool:
    # unpruned closure of the conjugates, then direct membership
    sgp = TransSemigroup(sorted(conjugate_set(group, a)))
    return all(sgp.contains(a * g) for g in group.elements())


def python_closure(gens):
    gens = sorted(set(gens))
    elems = set(gens)
    frontier = list(gens)
    while frontier:
        fresh = []
        for s in frontier:
            for g in gens:
                p = s * g
                if p not in elems:
                    elems.add(p)
                    fresh.append(p)
        frontier = fresh
    return elems


def all_singular(n):
    for images in product(range(n), repeat=n):
        t = Transformation(images)
        if not t.is_permutation():
            yield t


# -- single-map verdicts ---------------------------------------------------


def test_matches_referee_exhaustive_degree_4():
    for label in catalog_labels(4):
        group = catalog(label, 4)
        for rep in conjugacy_orbit_reps(group):
            verdict = is_a_normalizing(group, rep)
            assert verdict.status in (STATUS_NORMALIZING, STATUS_NOT)
            assert verdict.normalizing == referee_a_normalizing(group, rep), (
                label,
                rep.one_based(),
            )


@pytest.mark.slow
def test_matches_referee_degree_5():
    rng = random.Random(71)
    for label in catalog_labels(5):
        group = catalog(label, 5)
        reps = list(conjugacy_orbit_reps(group))
        if len(reps) > 120:
            reps = rng.sample(reps, 120)
        for rep in reps:
            verdict = is_a_normalizing(group, rep)
            assert verdict.normalizing == referee_a_normalizing(group, rep), (
                label,
                rep.one_based(),
            )


def test_referee_against_python_closure():
    rng = random.Random(93)
    group = catalog("C5", 5)
    reps = list(conjugacy_orbit_reps(group))
    for rep in rng.sample(reps, 20):
        conj = sorted(conjugate_set(group, rep))
        closure = python_closure(conj)
        sgp = TransSemigroup(conj)
        assert set(sgp.elements()) == closure
        want = all((rep * g) in closure for g in group.elements())
        assert referee_a_normalizing(group, rep) == want


def test_verdict_invariant_under_relabeling():
    rng = random.Random(17)
    cases = [
        ("C5", 5, (1, 1, 3, 4, 1)),
        ("D(2*5)", 5, (1, 1, 1, 2, 3)),
        ("AGL(1,5)", 5, (1, 1, 3, 4, 1)),
        ("A4", 4, (1, 1, 2, 3)),
    ]
    for label, n, images in cases:
        group = catalog(label, n)
        a = Transformation.from_one_based(images)
        base = is_a_normalizing(group, a).status
        for _ in range(4):
            perm = list(range(n))
            rng.shuffle(perm)
            p = Permutation(perm)
            moved = is_a_normalizing(group.conjugated_by(p), a.conjugated_by(p))
            assert moved.status == base


def test_published_degree_5_failures():
    v = is_a_normalizing(catalog("C5", 5), Transformation.parse("1,1,3,4,1"))
    assert v.status == STATUS_NOT
    assert v.witness is not None
    # witness must replay to the same failure through the pair check
    pair = check_pair(catalog("C5", 5), v.map, v.witness.g)
    assert pair.status == STATUS_NOT


def test_shortcut_failures_are_non_conjugates():
    # no rotation of the adjacent pair {1,2} fits inside {1,3,5}, so no
    # element maps this map's image onto a kernel section: products of
    # two or more conjugates drop rank and the conjugate test decides
    group = PermutationGroup([Permutation.parse("(1 2 3 4 5 6)", 6)], label="C6")
    a = Transformation.from_one_based((1, 3, 5, 5, 5, 5))
    assert exists_section_mapper(group, a) is None
    v = is_a_normalizing(group, a)
    assert v.status == STATUS_NOT
    assert v.trace == ("shortcut",)
    assert v.witness.reason == "conjugate-mismatch"
    assert (a * v.witness.g) not in conjugate_set(group, a)


def test_exists_section_mapper_matches_brute_force():
    rng = random.Random(29)
    for label, n in (("AGL(1,5)", 5), ("PSL(2,5)", 6)):
        group = catalog(label, n)
        elems = group.elements()
        for _ in range(30):
            images = [rng.randrange(n) for _ in range(n)]
            a = Transformation(images)
            if a.is_permutation():
                continue
            kernel = a.kernel()
            found = None
            for h in elems:
                moved = [h.images[p] for p in a.image()]
                if is_section(moved, kernel):
                    found = h
                    break
            got = exists_section_mapper(group, a)
            assert (got is None) == (found is None), a.one_based()
            if got is not None:
                assert is_section([got.images[p] for p in a.image()], kernel)


def test_degree_mismatch_and_permutation_rejected():
    group = catalog("A4", 4)
    with pytest.raises(ValueError):
        is_a_normalizing(group, Transformation.parse("1,1,3,4,1"))
    with pytest.raises(ValueError):
        is_a_normalizing(group, Transformation.parse("2,1,3,4"))
    with pytest.raises(ValueError):
        check_pair(group, Transformation.parse("1,1,2,3"), Permutation.parse("(1 2 3 4 5)"))


def test_check_pair_rejects_foreign_permutation():
    group = catalog("C5", 5)
    with pytest.raises(ValueError):
        check_pair(group, Transformation.parse("1,1,3,4,1"), Permutation.parse("(1 2)", 5))


# -- conjugation-orbit enumeration -----------------------------------------


def naive_orbit_partition(group, n):
    elems = group.elements()
    seen = set()
    orbits = []
    for t in all_singular(n):
        if t in seen:
            continue
        orbit = {t.conjugated_by(g) for g in elems}
        seen |= orbit
        orbits.append(orbit)
    return orbits


@pytest.mark.parametrize("label,n", [("trivial", 3), ("S3", 3), ("A4", 4), ("S4", 4)])
def test_sweep_matches_naive_partition(label, n):
    group = catalog(label, n)
    naive = {
        (min(t.encode() for t in orbit), len(orbit))
        for orbit in naive_orbit_partition(group, n)
    }
    swept = {(rep.encode(), size) for rep, size in ConjugacySweep(group)}
    assert swept == naive


@pytest.mark.parametrize("label,n", [("A4", 4), ("C5", 5), ("AGL(1,5)", 5), ("PSL(2,5)", 6)])
def test_orbit_sizes_account_for_every_singular_map(label, n):
    group = catalog(label, n)
    sweep = ConjugacySweep(group)
    total = sum(size for _, size in sweep)
    assert total == n**n - _factorial(n)
    assert sweep.singular_seen == total
    assert sweep.bitmap.popcount() == n**n
    assert sweep.complete


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def test_orbit_sizes_divide_group_order():
    group = catalog("AGL(1,5)", 5)
    for _, size in ConjugacySweep(group):
        assert group.order() % size == 0


def test_rank_filter_selects_subset():
    group = catalog("A4", 4)
    whole = {rep.encode() for rep in conjugacy_orbit_reps(group)}
    by_rank = {}
    for k in (1, 2, 3):
        by_rank[k] = {rep.encode() for rep in conjugacy_orbit_reps(group, rank=k)}
        assert by_rank[k] <= whole
        assert all(Transformation.decode(4, e).rank == k for e in by_rank[k])
    assert set().union(*by_rank.values()) == whole


def test_reps_are_orbit_minima_in_ascending_order():
    group = catalog("C5", 5)
    encs = [rep.encode() for rep in conjugacy_orbit_reps(group)]
    assert encs == sorted(encs)
    elems = group.elements()
    rng = random.Random(3)
    for enc in rng.sample(encs, 25):
        t = Transformation.decode(5, enc)
        assert min(t.conjugated_by(g).encode() for g in elems) == enc


def test_sweep_degree_and_rank_guards():
    with pytest.raises(ValueError):
        ConjugacySweep(PermutationGroup([], degree=10, label="trivial"))
    with pytest.raises(ValueError):
        ConjugacySweep(catalog("A4", 4), rank=4)
    with pytest.raises(ValueError):
        ConjugacySweep(catalog("A4", 4), rank=0)


def test_cache_roundtrip_resume_and_mismatch(tmp_path):
    group = catalog("PSL(2,5)", 6)
    path = str(tmp_path / "partial.sweep")
    sweep = ConjugacySweep(group)
    stream = iter(sweep)
    first = [next(stream)[0].encode() for _ in range(40)]
    sweep.meta["checked"] = 40
    sweep.save(path)

    loaded = ConjugacySweep.load(path, group)
    assert loaded.cursor == sweep.cursor
    assert loaded.orbits == 40
    assert loaded.meta == {"checked": 40}
    rest = [rep.encode() for rep, _ in loaded]
    fresh = [rep.encode() for rep, _ in ConjugacySweep(group)]
    assert first + rest == fresh

    with pytest.raises(SweepCacheMismatch):
        ConjugacySweep.load(path, catalog("PGL(2,5)", 6))
    with pytest.raises(SweepCacheMismatch):
        ConjugacySweep.load(path, group, rank=2)


# -- sweeping decisions ------------------------------------------------------


def test_trivial_group_is_normalizing_analytically():
    v = is_normalizing(catalog("trivial", 7))
    assert v.status == STATUS_NORMALIZING
    assert v.trace == ("analytic",)


def test_rank_one_always_normalizing():
    group = catalog("C5", 5)
    v = is_k_normalizing(group, 1)
    assert v.status == STATUS_NORMALIZING
    assert v.trace == ("analytic",)
    # the analytic claim, checked directly: constants resist everything
    for rep in conjugacy_orbit_reps(group, rank=1):
        assert referee_a_normalizing(group, rep)


def test_k_normalizing_matches_per_rank_referee():
    group = catalog("C5", 5)
    for k in (2, 3, 4):
        want = all(
            referee_a_normalizing(group, rep)
            for rep in conjugacy_orbit_reps(group, rank=k)
        )
        got = is_k_normalizing(group, k)
        assert got.normalizing == want, k
        if not want:
            assert got.map is not None and got.map.rank == k


def test_k_normalizing_range_check():
    with pytest.raises(ValueError):
        is_k_normalizing(catalog("C5", 5), 5)
    with pytest.raises(ValueError):
        is_k_normalizing(catalog("C5", 5), 0)


def test_symmetric_and_alternating_normalizing():
    for n in (4, 5):
        for label in (f"S{n}", f"A{n}"):
            v = is_normalizing(catalog(label, n))
            assert v.status == STATUS_NORMALIZING, label


def test_degree_5_classification_verdicts():
    expected = {
        "trivial": STATUS_NORMALIZING,
        "C5": STATUS_NOT,
        "D(2*5)": STATUS_NOT,
        "AGL(1,5)": STATUS_NORMALIZING,
        "A5": STATUS_NORMALIZING,
        "S5": STATUS_NORMALIZING,
    }
    for label, want in expected.items():
        v = is_normalizing(catalog(label, 5))
        assert v.status == want, label
        if want == STATUS_NOT:
            assert not referee_a_normalizing(catalog(label, 5), v.map)


def test_failing_verdict_reports_least_failing_representative():
    group = catalog("D(2*5)", 5)
    v = is_normalizing(group)
    assert v.status == STATUS_NOT
    for rep in conjugacy_orbit_reps(group):
        if rep.encode() == v.map.encode():
            break
        assert referee_a_normalizing(group, rep), rep.one_based()


@pytest.mark.slow
def test_worker_counts_agree():
    group = catalog("PSL(2,5)", 6)
    serial = is_normalizing(group, workers=1)
    parallel = is_normalizing(group, workers=3)
    assert (serial.status, serial.checked) == (parallel.status, parallel.checked)

    failing = catalog("D(2*5)", 5)
    one = is_normalizing(failing, workers=1)
    two = is_normalizing(failing, workers=2)
    assert one.map == two.map
    assert one.witness.g == two.witness.g
    assert one.checked == two.checked


@pytest.mark.slow
def test_resume_preserves_verdict(tmp_path):
    group = catalog("PSL(2,5)", 6)
    path = str(tmp_path / "resume.sweep")
    fresh = is_normalizing(group)

    sweep = ConjugacySweep(group)
    stream = iter(sweep)
    checker_reps = [next(stream) for _ in range(100)]
    assert len(checker_reps) == 100
    sweep.meta.update(checked=100, inconclusive=[])
    sweep.save(path)
    resumed = is_normalizing(group, cache_path=path)
    assert resumed.status == fresh.status
    assert resumed.checked == fresh.checked


def test_progress_callback_fires():
    seen = []
    v = is_normalizing(
        catalog("A4", 4), progress=seen.append, progress_interval=0.0
    )
    assert v.status == STATUS_NORMALIZING
    assert seen
    assert seen[-1].singular_total == 4**4 - 24
    assert seen[-1].group == "A4"


# -- class-level checks and fixtures ----------------------------------------


def test_class_check_is_labeling_independent():
    # the catalog's D(2*5) saves this literal map but fails a relabel of it
    group = catalog("D(2*5)", 5)
    a = Transformation.parse("1,1,1,3,2")
    assert is_a_normalizing(group, a).status == STATUS_NORMALIZING
    v = is_class_normalizing(group, a)
    assert v.status == STATUS_NOT
    shape = lambda t: sorted(len(c) for c in t.kernel().classes())
    assert shape(v.map) == shape(a)
    assert v.map.rank == a.rank


def test_class_check_conjugation_invariance():
    rng = random.Random(5)
    group = catalog("C5", 5)
    a = Transformation.parse("1,1,3,4,1")
    base = is_class_normalizing(group, a).status
    perm = list(range(5))
    rng.shuffle(perm)
    p = Permutation(perm)
    assert is_class_normalizing(group.conjugated_by(p), a).status == base


@pytest.mark.parametrize(
    "n,label",
    [(n, label) for (n, label) in sorted(KNOWN_FAILING_MAPS) if n <= 7],
)
def test_known_failing_maps_small_degrees(n, label):
    group = catalog(label, n)
    a = Transformation.from_one_based(KNOWN_FAILING_MAPS[(n, label)])
    v = is_class_normalizing(group, a)
    assert v.status == STATUS_NOT
    replay = check_pair(group, v.map, v.witness.g)
    assert replay.status == STATUS_NOT


@pytest.mark.slow
@pytest.mark.parametrize(
    "n,label",
    [(n, label) for (n, label) in sorted(KNOWN_FAILING_MAPS) if n >= 8],
)
def test_known_failing_maps_large_degrees(n, label):
    group = catalog(label, n)
    a = Transformation.from_one_based(KNOWN_FAILING_MAPS[(n, label)])
    v = is_class_normalizing(group, a)
    assert v.status == STATUS_NOT


def test_m12_witness_is_reproduced_verbatim():
    v = m12_witness_check()
    assert v.status == STATUS_NOT
    assert v.map.one_based() == M12_WITNESS_MAP
    assert v.witness.g == Permutation.parse(M12_WITNESS_G, 12)
    assert v.trace == ("shortcut",)

    group = catalog("M12", 12)
    a = Transformation.from_one_based(M12_WITNESS_MAP)
    # no element of M12 maps the 6-point image onto a kernel section,
    # so conjugate-set membership is the whole fight and it fails
    assert exists_section_mapper(group, a) is None
    general = is_a_normalizing(group, a)
    assert general.status == STATUS_NOT
    assert general.trace == ("shortcut",)
    assert (a * v.witness.g) not in conjugate_set(group, a)


# -- structural filters -------------------------------------------------------


def test_filters_trivial_group():
    report = structural_filters(catalog("trivial", 5))
    assert report.passed
    assert report.checks[0].name == "trivial"


def test_filters_pass_for_degree_5_candidates():
    for label in ("C5", "D(2*5)", "AGL(1,5)", "A5", "S5"):
        report = structural_filters(catalog(label, 5))
        assert report.passed, label
        assert report.first_rejection is None
        assert report.witness_maps() == ()


def test_intransitive_group_fails_with_valid_witness():
    group = PermutationGroup([Permutation.parse("(1 2 3)", 5)], label="C3@5")
    report = structural_filters(group)
    assert report.first_rejection == "transitive"
    (witness,) = [c.witness_map for c in report.checks if c.name == "transitive"]
    assert is_a_normalizing(group, witness).status == STATUS_NOT


def test_imprimitive_group_fails_with_valid_witness():
    group = PermutationGroup([Permutation.parse("(1 2 3 4)", 4)], label="C4")
    report = structural_filters(group)
    assert report.first_rejection == "primitive"
    names = [c.name for c in report.checks]
    assert names[0] == "transitive" and report.checks[0].passed
    (witness,) = [c.witness_map for c in report.checks if c.name == "primitive"]
    assert witness.rank == 2
    assert is_a_normalizing(group, witness).status == STATUS_NOT


def test_homogeneity_failure_gives_shortcut_witness():
    group = PermutationGroup([Permutation.parse("(1 2 3 4 5 6)", 6)], label="C6")
    report = structural_filters(group)
    failing = [c for c in report.checks if not c.passed and "homogeneous" in c.name]
    assert failing
    for check in failing:
        witness = check.witness_map
        assert witness is not None
        # the pairing that failed is the one a section mapper would need
        assert exists_section_mapper(group, witness) is None
        assert is_a_normalizing(group, witness).status == STATUS_NOT


def test_every_failed_filter_witness_actually_fails():
    suite = [
        PermutationGroup([Permutation.parse("(1 2)", 4)], label="C2@4"),
        PermutationGroup([Permutation.parse("(1 2 3)", 6)], label="C3@6"),
        PermutationGroup(
            [Permutation.parse("(1 2)", 6), Permutation.parse("(3 4 5 6)", 6)],
            label="C2xC4",
        ),
        PermutationGroup(
            [Permutation.parse("(1 2 3 4 5 6)", 6), Permutation.parse("(2 6)(3 5)", 6)],
            label="D12",
        ),
        PermutationGroup(
            [Permutation.parse("(1 2)(3 4)", 4), Permutation.parse("(1 3)(2 4)", 4)],
            label="V4",
        ),
    ]
    for group in suite:
        report = structural_filters(group)
        assert not report.passed, group.label
        for witness in report.witness_maps():
            assert is_a_normalizing(group, witness).status == STATUS_NOT, group.label


# -- classification -----------------------------------------------------------


def test_classify_degree_4():
    report = classify(4)
    assert report.matches_expected
    assert set(report.normalizing_labels) == {"trivial", "A4", "S4"}


@pytest.mark.slow
def test_classify_degree_5():
    report = classify(5)
    assert report.matches_expected
    assert report.mismatches() == ()
    by_label = {v.group: v for v in report.verdicts}
    assert by_label["C5"].witness is not None
    assert by_label["C5"].trace[0] == "fixture"


@pytest.mark.slow
def test_classify_degree_12():
    report = classify(12)
    assert report.matches_expected
    m12 = next(v for v in report.verdicts if v.group == "M12")
    assert m12.status == STATUS_NOT
    assert m12.witness.g == Permutation.parse(M12_WITNESS_G, 12)


def test_classify_rejects_unknown_degree():
    with pytest.raises(ValueError):
        classify(10)


def test_verdict_serialization_shape():
    v = is_a_normalizing(catalog("C5", 5), Transformation.parse("1,1,3,4,1"))
    d = v.to_dict()
    assert d["status"] == STATUS_NOT
    assert d["map"] == [1, 1, 3, 4, 1]
    assert d["witness"]["g"]["cycles"] == v.witness.g.cycle_string()
    assert "seconds" not in d
    assert "seconds" in v.to_dict(timings=True)
