import json

import pytest
from hypothesis import given, settings, strategies as st

from monofact.factorization import factorizations
from monofact.monoid import (
    AtomSequence,
    MonoidSpec,
    SpecError,
    atoms_of,
    family_members_up_to,
    is_member,
    truncate,
    validate_family_atoms,
)

from oracles import naive_is_sum

S = AtomSequence


@pytest.mark.parametrize(
    "gens,expected",
    [
        ([(1, 0), (0, 1), (1, 1)], {(1, 0), (0, 1)}),
        ([(1, 2), (2, 1), (1, 1)], {(1, 2), (2, 1), (1, 1)}),
        ([(2,), (3,), (4,)], {(2,), (3,)}),
        ([], set()),
    ],
)
def test_atoms_of_examples(gens, expected):
    assert set(atoms_of(gens)) == expected


small_gens = st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(any), min_size=1, max_size=5)


@settings(max_examples=80, deadline=None)
@given(small_gens)
def test_atoms_of_matches_oracle_and_is_idempotent(gens):
    atoms = atoms_of(gens)
    assert set(atoms) == {g for g in set(gens) if not naive_is_sum(gens, g)}
    assert atoms_of(atoms) == atoms


@settings(max_examples=40, deadline=None)
@given(small_gens, st.integers(1, 4))
def test_atoms_of_scales(gens, lam):
    scaled = [tuple(lam * c for c in g) for g in gens]
    assert set(atoms_of(scaled)) == {tuple(lam * c for c in a) for a in atoms_of(gens)}


def test_is_member_examples():
    assert is_member([(1, 2), (2, 1)], (3, 3))
    assert not is_member([(1, 2), (2, 1)], (1, 0))
    assert is_member([(1, 2), (2, 1)], (0, 0))


@settings(max_examples=60, deadline=None)
@given(small_gens, st.tuples(st.integers(0, 12), st.integers(0, 12)))
def test_membership_agrees_with_factorizations(gens, x):
    assert is_member(gens, x) == bool(factorizations(gens, x))


def test_family_windows():
    fam = MonoidSpec.family([], [S((0, 1), (1, 1), (0, 0))])
    assert family_members_up_to(fam, 30) == ((1, 2), (2, 3), (3, 4))
    assert family_members_up_to(MonoidSpec.family([(2, 5)], [], dim=2), 100) == ((2, 5),)
    two = MonoidSpec.family([], [S((1, 0), (2, 1), (0, 0)), S((0, 1), (1, 2), (0, 0))])
    assert family_members_up_to(two, 10) == ((1, 3), (3, 1))


def test_validation_reports_decomposition():
    fam = MonoidSpec.family([], [S((0, 1), (1, 1), (0, 0)), S((1, 0), (1, 1), (0, 0))])
    rep = validate_family_atoms(fam, 10)
    assert not rep.ok
    assert "(4, 5) = (1, 2) + (1, 2) + (2, 1)" in [str(v) for v in rep.violations]


@pytest.mark.parametrize(
    "seqs",
    [[S((1, 0), (2, 1), (0, 0)), S((0, 1), (1, 2), (0, 0))], [S((0, 1), (1, 1), (0, 0))]],
)
def test_validation_passes(seqs):
    rep = validate_family_atoms(MonoidSpec.family([], seqs), 12)
    assert rep.ok and not rep.violations and rep.monotone_slopes


def test_truncate():
    g = MonoidSpec.finite([(1, 2), (2, 1)])
    assert truncate(g, 5) is g
    fam = MonoidSpec.family([], [S((0, 1), (1, 1), (0, 0))])
    assert truncate(fam, 25).generators == ((1, 2), (2, 3), (3, 4))
    assert truncate(MonoidSpec(2, "family"), 100).generators == ()


def test_spec_round_trip_with_big_integers():
    big = 2**70 + 3
    spec = MonoidSpec.finite([(big, 1), (1, 2)])
    text = spec.dumps()
    assert str(big) in text and f'"{big}"' in text
    assert MonoidSpec.loads(text) == spec
    fam = MonoidSpec.family([(2, 5)], [S((0, 1), (1, 1), (0, 0), n_start=4)])
    assert MonoidSpec.loads(fam.dumps()) == fam


def test_spec_file_examples_parse():
    MonoidSpec.loads('{"dim": 2, "kind": "finite", "generators": [[1,2],[2,1],[1,1]]}')
    fam = MonoidSpec.loads(
        '{"dim": 2, "kind": "family", "finite_atoms": [[2,5]], '
        '"sequences": [{"c0": [0,1], "c1": [1,1], "c2": [0,0], "n_start": 4}]}'
    )
    assert fam.sequences[0](4) == (4, 5)


@pytest.mark.parametrize(
    "text,where",
    [
        ('{"dim": 2, "kind": "finite", "generators": [[1,2],[2,-1]]}', "generators[1]"),
        ('{"dim": 2, "kind": "finite", "generators": [[1,2],[2]]}', "generators[1]"),
        ('{"dim": 2, "kind": "finite",\n "generators": [[1,2],]}', "line 2"),
        ('{"dim": 2, "kind": "ring"}', "kind"),
    ],
)
def test_spec_errors_are_located(text, where):
    with pytest.raises(SpecError, match=where.replace("[", r"\[").replace("]", r"\]")):
        MonoidSpec.loads(text)


def test_sequence_must_stay_in_orthant():
    with pytest.raises(SpecError):
        S((-5, 0), (1, 1), (0, 0))
    with pytest.raises(SpecError):
        S((1, 1), (0, 0), (0, 0))
