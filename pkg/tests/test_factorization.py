from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from monofact.factorization import (
    DomainError,
    check_eventual_affine,
    elasticity_of_element,
    factorizations,
    generalized_elasticity_scan,
    generalized_length_set,
    lattice_points,
    length_set,
    system_sample,
)
from monofact.monoid import MonoidSpec, AtomSequence, truncate

from oracles import dp_lengths_1d, naive_factorizations, naive_lengths

FG = [(1, 2), (2, 1), (1, 1)]


def test_factorization_examples():
    assert factorizations(FG, (3, 3)) == [(0, 0, 3), (1, 1, 0)]
    assert set(factorizations([(2,), (3,)], (12,))) == {(6, 0), (3, 2), (0, 4)}
    assert factorizations(FG, (0, 0)) == [(0, 0, 0)]
    assert factorizations(FG, (1, 0)) == []


def test_length_and_elasticity_examples():
    assert length_set([(2,), (3,)], (12,)) == (4, 5, 6)
    assert length_set(FG, (3, 3)) == (2, 3)
    assert length_set(FG, (2, 1)) == (1,)
    assert elasticity_of_element([(2,), (3,)], (12,)) == Fraction(3, 2)
    assert elasticity_of_element(FG, (3, 3)) == Fraction(3, 2)
    assert elasticity_of_element(FG, (1, 2)) == 1


@pytest.mark.parametrize("x", [(0, 0), (1, 0)])
def test_element_elasticity_needs_nonzero_member(x):
    with pytest.raises(DomainError):
        elasticity_of_element(FG, x)


atoms2 = st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)).filter(any), min_size=1, max_size=4)
atoms3 = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)).filter(any), min_size=1, max_size=4)


@settings(max_examples=150, deadline=None)
@given(atoms2, st.tuples(st.integers(0, 20), st.integers(0, 20)))
def test_factorizations_match_naive_recursion(atoms, x):
    got = factorizations(atoms, x)
    assert set(got) == naive_factorizations(atoms, x)
    assert got == sorted(got)
    for z in got:
        assert tuple(sum(c * a[j] for c, a in zip(z, atoms)) for j in range(2)) == x


@settings(max_examples=60, deadline=None)
@given(atoms3, st.tuples(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8)))
def test_factorizations_match_naive_recursion_3d(atoms, x):
    assert set(factorizations(atoms, x)) == naive_factorizations(atoms, x)


@settings(max_examples=30, deadline=None)
@given(atoms2)
def test_system_sample_matches_oracle(atoms):
    sample = system_sample(atoms, 90)
    assert list(sample) == [p for p in lattice_points(2, 90) if p in sample]
    for p in lattice_points(2, 90):
        L = naive_lengths(atoms, p)
        assert sample.get(p, ()) == tuple(L)


def test_system_sample_examples():
    assert all(len(L) == 1 for L in system_sample([(1, 0), (0, 1)], 8).values())
    assert system_sample(FG, 18)[(3, 3)] == (2, 3)
    chain = truncate(MonoidSpec.family([], [AtomSequence((0, 1), (1, 1), (0, 0))]), 25).generators
    for x, L in system_sample(chain, 25).items():
        assert L == (x[1] - x[0],)


def test_system_sample_parallel_identical():
    assert system_sample(FG, 60, jobs=2) == system_sample(FG, 60)


def test_generalized_length_examples():
    assert generalized_length_set([2, 4], 8).values == (2, 3, 4)
    assert generalized_length_set([2, 3], 6).values == (2, 3)
    assert generalized_length_set([5], 35).values == (7,)
    assert generalized_length_set([2, 4], 7).values == ()


@settings(max_examples=60, deadline=None)
@given(st.sets(st.integers(1, 12), min_size=1, max_size=4), st.integers(1, 80))
def test_generalized_lengths_bounds_and_oracle(gens, x):
    vals = generalized_length_set(gens, x).values
    assert list(vals) == dp_lengths_1d(sorted(gens), x)
    n1, nk = min(gens), max(gens)
    for v in vals:
        assert Fraction(x, nk) <= v <= Fraction(x, n1)


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(2, 12), min_size=1, max_size=4), st.integers(1, 80))
def test_generalized_specializes_to_length_set(gens, x):
    from monofact.monoid import atoms_of

    atoms = [a[0] for a in atoms_of([(g,) for g in gens])]
    assert generalized_length_set(atoms, x).values == length_set([(a,) for a in atoms], (x,))


def test_generalized_scan_examples():
    scan = generalized_elasticity_scan([2, 3], 1000)
    assert scan.within_bound and scan.max_observed <= Fraction(3, 2)
    assert any(r >= Fraction(3, 2) - Fraction(1, 100) for _, r in scan.values)
    assert dict(generalized_elasticity_scan([2, 4], 8).values)[8] == 2
    assert dict(generalized_elasticity_scan([3, 5], 15).values)[15] == Fraction(5, 3)


@settings(max_examples=25, deadline=None)
@given(st.sets(st.integers(1, 9), min_size=2, max_size=4))
def test_eventual_affine(gens):
    chk = check_eventual_affine(gens, 600)
    assert chk.holds
    assert chk.period == min(gens) * max(gens)


def test_oracle_sweep_sampled():
    """All d = 1 monoids, all d = 2 monoids with <= 2 atoms, and a seeded sample of larger ones."""
    import itertools
    import random

    from oracles import box_length_sets

    vecs1 = [(v,) for v in range(1, 7)]
    vecs2 = [v for v in itertools.product(range(7), repeat=2) if any(v)]
    cases = [(1, c) for k in range(1, 5) for c in itertools.combinations(vecs1, k)]
    cases += [(2, c) for k in (1, 2) for c in itertools.combinations(vecs2, k)]
    rng = random.Random(7)
    cases += [(2, tuple(rng.sample(vecs2, k))) for k in (3, 4) for _ in range(80)]
    for d, atoms in cases:
        box = (20,) * d
        lengths = box_length_sets(atoms, box)
        for x in itertools.product(range(21), repeat=d):
            if x in lengths:
                assert set(factorizations(atoms, x)) == naive_factorizations(atoms, x), (atoms, x)
            else:
                assert factorizations(atoms, x) == []
