from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from addcomb.groups import GroupMismatchError, boolean_group, format_group_text, make_group
from addcomb.setstat import (
    GroupSet,
    check_energy_difference_bound,
    check_generalized_triangle,
    check_katz_koester,
    corr_counts,
    difference_set,
    doubling_constant,
    energy,
    full_set,
    group_set,
    higher_energy,
    peak_coefficient,
    profile,
    slice_set,
    sumset,
)

from .oracles import (
    corr_direct,
    difference_direct,
    energy_direct,
    higher_energy_direct,
    peak_direct,
    sumset_direct,
)

GROUPS = [make_group(f) for f in [(18,), (2, 2, 2, 2), (3, 8)]]


def _random_set(g, rng, lo=2, hi=None):
    hi = hi or max(3, g.order // 2)
    return group_set(g, rng.sample(range(g.order), rng.randrange(lo, hi)))


def test_group_set_sorts_and_dedupes():
    g = make_group((10,))
    A = group_set(g, [7, 1, 7, 3])
    assert A.members == (1, 3, 7)
    assert len(A) == 3
    assert A.index_set == frozenset({1, 3, 7})


def test_translate_and_neg():
    g = make_group((12,))
    A = group_set(g, [0, 1, 5])
    assert A.translate(3).members == (3, 4, 8)
    assert A.neg().members == (0, 7, 11)
    gb = boolean_group(3)
    B = group_set(gb, [1, 6])
    assert B.neg().members == B.members


@pytest.mark.parametrize("g", GROUPS, ids=format_group_text)
def test_corr_counts_matches_double_loop(g):
    rng = random.Random(g.order)
    for _ in range(6):
        A = _random_set(g, rng)
        B = _random_set(g, rng)
        got = corr_counts(A, B)
        want = corr_direct(A, B)
        assert [int(v) for v in got] == want


def test_corr_counts_identity_slices():
    g = boolean_group(4)
    rng = random.Random(3)
    A = _random_set(g, rng)
    got = corr_counts(A, A)
    assert int(got[0]) == len(A)
    for x in range(g.order):
        assert int(got[x]) == len(slice_set(A, x))


@pytest.mark.parametrize("g", GROUPS, ids=format_group_text)
def test_sumset_difference_match_brute(g):
    rng = random.Random(g.order + 5)
    A, B = _random_set(g, rng), _random_set(g, rng)
    assert set(sumset(A, B).members) == sumset_direct(A, B)
    assert set(difference_set(A, B).members) == difference_direct(A, B)


def test_mismatched_groups_rejected():
    A = group_set(make_group((6,)), [1])
    B = group_set(make_group((2, 3)), [1])
    with pytest.raises(GroupMismatchError):
        sumset(A, B)


@pytest.mark.parametrize("g", GROUPS, ids=format_group_text)
def test_energy_matches_quadruple_count(g):
    rng = random.Random(g.order + 9)
    A, B = _random_set(g, rng), _random_set(g, rng)
    assert energy(A, B) == energy_direct(A, B)
    assert energy(A, A) == higher_energy(A, 2)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_higher_energy_matches_brute(k):
    g = make_group((15,))
    rng = random.Random(k)
    A = _random_set(g, rng)
    assert higher_energy(A, k) == higher_energy_direct(A, k)


def test_energy_extremes():
    g = make_group((11,))
    A = full_set(g)
    # full group: (A o A)(x) = N everywhere
    assert higher_energy(A, 2) == g.order**3
    single = group_set(g, [4])
    assert higher_energy(single, 2) == 1


def test_doubling_constant_values():
    g = boolean_group(4)
    H = group_set(g, range(4))  # span of first two coordinates
    assert doubling_constant(H) == 1
    single = group_set(g, [9])
    assert doubling_constant(single) == 1


@pytest.mark.parametrize("g", GROUPS, ids=format_group_text)
def test_peak_coefficient_matches_direct_transform(g):
    rng = random.Random(g.order + 13)
    A = _random_set(g, rng)
    peak_sq, arg = peak_coefficient(A)
    want = peak_direct(A)
    assert abs(float(peak_sq) - want) < 1e-6 * (1 + want)
    assert 1 <= arg < g.order
    if g.is_boolean_space:
        assert isinstance(peak_sq, int)


def test_peak_tie_breaks_to_smallest_index():
    g = boolean_group(4)
    H = group_set(g, range(4))  # perp is spanned by indices 4 and 8
    peak_sq, arg = peak_coefficient(H)
    assert peak_sq == len(H) ** 2
    assert arg == 4


def test_peak_of_subgroup_is_its_square():
    g = make_group((12,))
    H = group_set(g, [0, 4, 8])
    peak_sq, arg = peak_coefficient(H)
    assert abs(float(peak_sq) - 9.0) < 1e-9
    assert arg in (3, 6, 9)


def test_generalized_triangle_subgroup_equality():
    g = boolean_group(4)
    H = list(range(4))
    rep = check_generalized_triangle(g, [(h,) for h in H], [(h,) for h in H], H, H)
    assert rep.holds and rep.lhs == rep.rhs == len(H) ** 3
    assert rep.margin == 1


def test_generalized_triangle_random_instances():
    g = make_group((15,))
    rng = random.Random(77)
    for _ in range(25):
        W = [(rng.randrange(15),) for _ in range(rng.randrange(1, 4))]
        Y = [(rng.randrange(15),) for _ in range(rng.randrange(1, 4))]
        X = rng.sample(range(15), rng.randrange(1, 4))
        Z = rng.sample(range(15), rng.randrange(1, 4))
        assert check_generalized_triangle(g, W, Y, X, Z).holds


def test_generalized_triangle_pairs():
    g = make_group((7,))
    W = [(1, 2), (3, 4)]
    Y = [(0, 5)]
    rep = check_generalized_triangle(g, W, Y, [0, 1], [2, 6])
    assert rep.holds


def test_energy_difference_bound_margin_at_least_one():
    g = make_group((24,))
    rng = random.Random(5)
    for _ in range(20):
        A, B = _random_set(g, rng), _random_set(g, rng)
        rep = check_energy_difference_bound(A, B, k=2 + rng.randrange(2))
        assert rep.holds and rep.margin >= 1


def test_katz_koester_inclusion_everywhere():
    g = make_group((30,))
    rng = random.Random(6)
    A, B = _random_set(g, rng), _random_set(g, rng)
    for x in difference_set(A, A).members:
        assert check_katz_koester(A, B, x).ok


def test_profile_consistency_checks_pass():
    g = boolean_group(4)
    rng = random.Random(10)
    A = _random_set(g, rng)
    prof = profile(A, energy_orders=(2, 3))
    assert all(r.ok for r in prof.checks)
    assert prof.size == len(A)
    assert prof.energy == higher_energy(A, 2)
    assert prof.higher[3] == higher_energy(A, 3)
    assert prof.doubling == Fraction(prof.diff_size, prof.size)


def test_profile_rejects_empty():
    g = make_group((5,))
    with pytest.raises(ValueError):
        profile(group_set(g, []))


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_energy_log_convexity_property(data):
    g = make_group((16,))
    size = data.draw(st.integers(min_value=2, max_value=10))
    members = data.draw(
        st.sets(st.integers(min_value=0, max_value=15), min_size=size, max_size=size)
    )
    A = group_set(g, members)
    e = {k: higher_energy(A, k) for k in (2, 3, 4)}
    assert e[2] * e[4] >= e[3] ** 2


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_corr_total_mass_property(data):
    g = boolean_group(4)
    members = data.draw(
        st.sets(st.integers(min_value=0, max_value=15), min_size=1, max_size=16)
    )
    A = group_set(g, members)
    counts = corr_counts(A, A)
    assert sum(int(v) for v in counts) == len(A) ** 2
