from __future__ import annotations

import random
from fractions import Fraction

import pytest

from addcomb.groups import boolean_group, make_group
from addcomb.harmonic import indicator, table_from_values
from addcomb.setstat import group_set
from addcomb.spectral import (
    chang_bound,
    is_dissociated,
    max_dissociated,
    span,
    spectrum,
)

from .oracles import dissociated_direct, span_direct


def test_dissociated_small_cases():
    g = make_group((10,))
    assert not is_dissociated(g, [1, 2, 3])  # 1 + 2 - 3 = 0
    g20 = make_group((20,))
    assert is_dissociated(g20, [1, 2, 5])
    assert is_dissociated(g20, [])
    assert not is_dissociated(g20, [0])
    assert not is_dissociated(g20, [7, 13])  # 7 + 13 = 0 mod 20


def test_dissociated_matches_brute_enumeration():
    g = make_group((24,))
    rng = random.Random(41)
    for _ in range(40):
        lam = rng.sample(range(1, 24), rng.randrange(1, 5))
        assert is_dissociated(g, lam) == dissociated_direct(g, lam)


def test_max_dissociated_in_an_interval():
    g = make_group((100,))
    witness = max_dissociated(g, list(range(1, 9)))
    assert witness.mode == "exact"
    # 4 = log2(8) + 1 is the ceiling for {1..8}: any 5th element is a
    # {0,1}-combination of {1,2,4,8} shifted by signs
    assert len(witness) == 4
    assert is_dissociated(g, witness.members)


def test_max_dissociated_boolean_is_rank():
    g = boolean_group(6)
    cands = [0b000011, 0b000101, 0b000110, 0b111000, 0b100000]
    witness = max_dissociated(g, cands)
    assert witness.mode == "exact"
    assert len(witness) == 4


def test_max_dissociated_weights_steer_greedy_order():
    g = make_group((50,))
    cands = list(range(1, 26))
    heavy = {25: 10.0, 24: 9.0}
    witness = max_dissociated(g, cands, weights=heavy)
    assert witness.mode == "greedy"
    assert witness.members[0] == 25
    assert is_dissociated(g, witness.members)


def test_span_frozen_examples():
    g7 = make_group((7,))
    assert set(span(g7, [1]).members) == {0, 1, 6}
    g20 = make_group((20,))
    got = span(g20, [1, 3])
    assert set(got.members) == {0, 1, 19, 3, 17, 4, 16, 2, 18}
    assert len(got) == 9


def test_span_matches_brute():
    rng = random.Random(42)
    for factors in [(30,), (4, 6)]:
        g = make_group(factors)
        for _ in range(15):
            lam = rng.sample(range(1, g.order), rng.randrange(1, 4))
            assert set(span(g, lam).members) == span_direct(g, lam)


def test_span_boolean_is_linear_span():
    g = boolean_group(5)
    got = span(g, [0b00011, 0b00101])
    assert set(got.members) == {0, 3, 5, 6}


def test_spectrum_exact_on_boolean_int_tables():
    g = boolean_group(4)
    H = group_set(g, range(4))
    spec = spectrum(indicator(g, H.members), Fraction(1, 2))
    assert spec.exact
    # indicator of a subgroup: fhat = |H| on the perp, 0 elsewhere
    assert set(spec.members) == {0, 4, 8, 12}
    assert spec.magnitudes[0] == 4.0
    assert spec.borderline == ()


def test_spectrum_sorted_heaviest_first_ties_by_index():
    g = boolean_group(3)
    spec = spectrum(indicator(g, [0, 1, 2, 3]), Fraction(1, 4))
    assert list(spec.magnitudes) == sorted(spec.magnitudes, reverse=True)
    top = [t for t, m in zip(spec.members, spec.magnitudes) if m == spec.magnitudes[0]]
    assert top == sorted(top)


def test_spectrum_general_group_includes_borderline():
    g = make_group((12,))
    f = table_from_values(g, [1] * 3 + [0] * 9, kind="int")
    spec = spectrum(f, Fraction(1, 3))
    assert 0 in spec
    assert not spec.exact


def test_spectrum_threshold_validation():
    g = make_group((6,))
    f = table_from_values(g, [1, 0, 0, 0, 0, 0], kind="int")
    with pytest.raises(ValueError):
        spectrum(f, Fraction(3, 2))
    with pytest.raises(ValueError):
        spectrum(table_from_values(g, [0] * 6, kind="int"), Fraction(1, 2))


def test_spectrum_membership_against_direct_transform():
    g = make_group((21,))
    rng = random.Random(43)
    values = [rng.randrange(-3, 4) for _ in range(21)]
    f = table_from_values(g, values, kind="int")
    eps = Fraction(1, 3)
    spec = spectrum(f, eps)
    from .oracles import dft_direct

    fhat = dft_direct(g, values)
    l1 = sum(abs(v) for v in values)
    for t in range(21):
        mag = abs(fhat[t])
        if mag > float(eps) * l1 + 1e-6:
            assert t in spec
        if mag < float(eps) * l1 - 1e-6:
            assert t not in spec


def test_chang_bound_audit_on_subgroup_indicator():
    g = boolean_group(6)
    H = group_set(g, range(8))
    rep = chang_bound(indicator(g, H.members), Fraction(1, 2))
    assert rep.ok is True
    assert rep.dim <= rep.bound
    assert rep.spectrum_size == 8


def test_chang_bound_below_audit_floor_is_diagnostic():
    g = boolean_group(4)
    rep = chang_bound(indicator(g, [0, 1]), Fraction(1, 2), c_chang=Fraction(1, 100))
    assert rep.ok is None
