import pytest

from upsilon.enumerator import (enumerate_profiles, oracle_enumerate, profile_key, strata,
                                symmetric_extension)
from upsilon.pl import PLFunction, upsilon_simple, validate_candidate


def test_genus_one_profiles():
    assert set(enumerate_profiles(1)) == {PLFunction.zero(), upsilon_simple(1), upsilon_simple(-1)}
    assert enumerate_profiles(1, 0) == [PLFunction.zero()]


def test_genus_two_count():
    profiles = enumerate_profiles(2)
    assert len(profiles) == 13
    assert strata(profiles) == {-2: 4, -1: 2, 0: 1, 1: 2, 2: 4}


def test_output_is_sorted():
    profiles = enumerate_profiles(3)
    assert profiles == sorted(profiles, key=profile_key)


@pytest.mark.parametrize("gc", [1, 2, 3])
def test_every_profile_validates(gc):
    for f in enumerate_profiles(gc):
        assert validate_candidate(f, tau=-f.initial_slope, gc=gc).ok


@pytest.mark.parametrize("gc", [1, 2, 3])
def test_negation_swaps_strata(gc):
    profiles = set(enumerate_profiles(gc))
    assert {-f for f in profiles} == profiles


def test_count_grows_with_genus():
    counts = [len(enumerate_profiles(g)) for g in range(1, 5)]
    assert counts == sorted(counts)


@pytest.mark.parametrize("gc,bound", [(1, 4), (2, 4), (2, 8), (3, 12)])
def test_oracle_agrees(gc, bound):
    assert set(oracle_enumerate(gc, bound)) == set(enumerate_profiles(gc))


def test_argument_errors():
    with pytest.raises(ValueError):
        enumerate_profiles(0)
    with pytest.raises(ValueError):
        enumerate_profiles(1, 2)


def test_symmetric_extension():
    f = symmetric_extension([], [-1])
    assert f == upsilon_simple(1)
