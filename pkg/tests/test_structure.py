from __future__ import annotations

import random
from fractions import Fraction

import pytest

from addcomb.families import make_h_lambda, make_planted, HLambdaSpec
from addcomb.groups import boolean_group, make_group
from addcomb.harness import derive_params
from addcomb.setstat import (
    corr_counts,
    difference_set,
    group_set,
    higher_energy,
    sumset,
)
from addcomb.structure import (
    DensityGuaranteeFailed,
    HypothesisFailure,
    InclusionFailed,
    NoJump,
    StructureParams,
    brute_force_3B_subspace,
    certify_difference_subset,
    check_hypotheses,
    dichotomy_M,
    extract_bohr,
    extract_subspace,
    find_energy_jump,
    phi_k,
    regularize_density,
)

from .oracles import corr_direct


def _subgroup(n, dim):
    return group_set(boolean_group(n), range(1 << dim))


def _count_overlap(B, piece_members, z):
    g = B.group
    return sum(1 for s in piece_members if g.add_index(s, z) in B.index_set)


def test_params_validation():
    with pytest.raises(ValueError):
        StructureParams(m=1, m_prime=1, kappa=1, zeta=0, t=2)
    with pytest.raises(ValueError):
        StructureParams(m=1, m_prime=1, kappa=1, zeta=Fraction(1, 8), t=1)
    with pytest.raises(ValueError):
        StructureParams(m=0, m_prime=1, kappa=1, zeta=Fraction(1, 8), t=2)
    p = StructureParams(m=2, m_prime=4, kappa=1, zeta=Fraction(1, 8), t=2, omega=Fraction(1, 2))
    assert p.m_star == (2 + 1) * 2 * 2
    assert p.k0 >= p.k0_pad


def test_energy_jump_on_a_subgroup_is_immediate():
    H = _subgroup(8, 3)
    params = StructureParams(m=1, m_prime=2, kappa=1, zeta=Fraction(1, 8), t=2)
    jump = find_energy_jump(H, params)
    # subgroup: (H o H) = |H| on H, so E_{k+1} = |H| E_k exactly
    assert jump.k == 2
    assert jump.e_next == len(H) * jump.e_k


def test_energy_jump_values_match_energy_table():
    g = make_group((24,))
    A = group_set(g, [0, 1, 3, 7, 12, 20])
    params = StructureParams(m=3, m_prime=6, kappa=1, zeta=Fraction(1, 8), t=2)
    jump = find_energy_jump(A, params)
    assert jump.e_k == higher_energy(A, jump.k)
    assert jump.e_next == higher_energy(A, jump.k + 1)
    assert jump.e_next * jump.m_star >= len(A) * jump.e_k


def test_no_jump_when_m_star_below_one():
    # E_{k+1} <= |B| E_k always, so m_star < 1 admits no jump
    g = make_group((24,))
    rng = random.Random(1)
    A = group_set(g, rng.sample(range(24), 8))
    params = StructureParams(
        m=Fraction(1, 10), m_prime=Fraction(1, 5), kappa=Fraction(1, 10),
        zeta=Fraction(1, 8), t=Fraction(3, 2),
    )
    assert params.m_star < 1
    with pytest.raises(NoJump) as exc:
        find_energy_jump(A, params)
    assert exc.value.k0 == params.k0
    # energies list starts at E_1 = b^2
    assert exc.value.energies[0] == len(A) ** 2
    assert exc.value.energies[1] == higher_energy(A, 2)


def test_phi_k_is_the_correlation_power():
    g = boolean_group(4)
    A = group_set(g, [0, 1, 2, 5, 9])
    corr = corr_direct(A, A)
    phi = phi_k(A, 3)
    assert phi.kind == "int"
    assert list(phi.values) == [v**3 for v in corr]


def test_check_hypotheses_binds_omega():
    A = _subgroup(8, 3)
    params = derive_params(A, A)
    rep = check_hypotheses(A, A, params)
    assert rep.core_ok
    wrong = StructureParams(
        m=params.m, m_prime=params.m_prime, kappa=params.kappa,
        zeta=params.zeta, t=params.t, omega=Fraction(1, 2),
    )
    rep2 = check_hypotheses(A, A, wrong)
    assert not rep2.core_ok


def test_check_hypotheses_energy_capacity_failure():
    A = _subgroup(8, 3)
    tight = StructureParams(
        m=1, m_prime=Fraction(1, 1000), kappa=1, zeta=Fraction(1, 8), t=2
    )
    rep = check_hypotheses(A, A, tight)
    assert not rep.core_ok
    with pytest.raises(HypothesisFailure):
        extract_subspace(A, A, tight)


def test_extract_subspace_certificate_verified_independently():
    A = _subgroup(10, 3)
    params = derive_params(A, A)
    res = extract_subspace(A, A, params)
    piece = res.variant
    # direct recount of the certified overlap
    overlap = _count_overlap(A, piece.subspace.members, piece.z)
    assert overlap == res.achieved
    guaranteed = (
        (1 - params.zeta) * params.omega * len(piece.subspace)
        / (params.t * (params.m + params.kappa))
    )
    assert res.guaranteed == guaranteed
    assert Fraction(overlap) >= guaranteed
    assert all(r.ok for r in res.records)


def test_extract_subspace_recovers_planted_subgroup():
    spec = HLambdaSpec(n=8, k=3, lambda_size=5)
    A = make_h_lambda(spec)
    params = derive_params(A, A)
    res = extract_subspace(A, A, params)
    piece = res.variant
    # the translate is fully inside A: every subspace point lands in A
    assert res.achieved == len(piece.subspace)
    assert _count_overlap(A, piece.subspace.members, piece.z) == len(piece.subspace)


def test_extract_subspace_rejects_general_groups():
    g = make_group((15,))
    A = group_set(g, [0, 1, 2])
    with pytest.raises(ValueError):
        extract_subspace(A, A, StructureParams(m=1, m_prime=2, kappa=1, zeta=Fraction(1, 8), t=2))


def test_extract_bohr_certificate_verified_independently():
    g = make_group((101,))
    A = group_set(g, [5])
    params = derive_params(A, A, zeta=Fraction(1, 4))
    res = extract_bohr(A, A, params)
    piece = res.variant
    overlap = _count_overlap(A, piece.bohr.members.members, piece.z)
    assert overlap == res.achieved
    guaranteed = (
        (1 - 2 * params.zeta) * params.omega * len(piece.bohr.members)
        / (params.t * (params.m + params.kappa))
    )
    assert Fraction(overlap) >= guaranteed
    assert all(r.ok for r in res.records)


def test_extract_bohr_needs_small_zeta():
    g = make_group((101,))
    A = group_set(g, [5])
    params = StructureParams(m=1, m_prime=2, kappa=1, zeta=Fraction(3, 4), t=2)
    with pytest.raises(ValueError):
        extract_bohr(A, A, params)


def test_dichotomy_structured_branch_on_subgroup():
    H = _subgroup(10, 3)
    res = dichotomy_M(H)
    assert res.kind == "SubspacePiece"
    assert all(r.ok for r in res.records)
    deco = res.diagnostics["decomposition"]
    assert deco["heavy_cosets"] >= 1
    # independent recount of the 8M floor
    M = res.diagnostics["m"]
    piece = res.variant
    overlap = _count_overlap(H, piece.subspace.members, piece.z)
    assert Fraction(overlap) >= Fraction(len(piece.subspace)) / (8 * M)


def test_dichotomy_large_coefficient_branch():
    g = make_group((1000,))
    A = group_set(g, [0, 1])
    res = dichotomy_M(A, M=1)
    assert res.kind == "LargeCoefficient"
    # |Ahat(1)|^2 = |1 + e(1/1000)|^2 close to 4, above a^2 M / K = 8/3
    assert float(res.achieved) > 8 / 3
    assert res.variant.x in (1, 999)


def test_dichotomy_exactly_one_branch_fires():
    rng = random.Random(17)
    for _ in range(6):
        dim = rng.randrange(1, 4)
        n = rng.randrange(10, 13)
        inst = make_planted(boolean_group(n), subgroup_dim=dim, cosets=2, noise=0, seed=rng.randrange(999))
        res = dichotomy_M(inst.set)
        assert res.kind in ("LargeCoefficient", "SubspacePiece")


def test_dichotomy_gate_failure_is_surfaced():
    A = make_h_lambda(HLambdaSpec(n=8, k=3, lambda_size=5))
    # 100 K^2 a = 100 * (11/5)^2 * 40 = 19360 > 256 = N
    with pytest.raises(HypothesisFailure) as exc:
        dichotomy_M(A)
    assert exc.value.record.ref == "dichotomy:gate_M"


def test_dichotomy_rejects_m_outside_range():
    H = _subgroup(10, 3)
    with pytest.raises(ValueError):
        dichotomy_M(H, M=Fraction(1, 2))
    with pytest.raises(ValueError):
        dichotomy_M(H, M=5)  # K = 1 for a subgroup


def test_dichotomy_rejects_foreign_subset():
    H = _subgroup(10, 3)
    other = group_set(H.group, [900, 901])
    with pytest.raises(ValueError):
        dichotomy_M(H, B_sub=other)


def test_certify_difference_subset_boolean():
    A = _subgroup(12, 3)
    res = certify_difference_subset(A, Fraction(1, 2))
    assert res.kind in ("LargeCoefficient", "SubspacePiece")
    if res.kind == "SubspacePiece":
        diff = set(difference_set(A, A).members)
        for x in res.variant.subspace.members:
            assert x in diff
    assert all(r.ok for r in res.records)


def test_certify_difference_subset_general_group():
    g = make_group((1009,))
    A = group_set(g, [5])
    res = certify_difference_subset(A, Fraction(1, 2))
    assert all(r.ok for r in res.records)
    if res.kind == "BohrPiece":
        diff = set(difference_set(A, A).members)
        for x in res.variant.bohr.members.members:
            assert x in diff


def test_certify_gate_failure():
    g = make_group((30,))
    A = group_set(g, range(10))
    with pytest.raises(HypothesisFailure):
        certify_difference_subset(A, Fraction(1, 2))


def test_certify_eps_validation():
    A = _subgroup(12, 3)
    with pytest.raises(ValueError):
        certify_difference_subset(A, Fraction(3, 2))


def test_brute_force_3B_subspace_against_exhaustive_search():
    g = boolean_group(5)
    rng = random.Random(23)
    from addcomb.f2 import dual_spaces, subspace_elements

    for _ in range(6):
        B = group_set(g, rng.sample(range(32), rng.randrange(3, 10)))
        triple = sumset(sumset(B, B), B)
        tset = triple.index_set
        got = brute_force_3B_subspace(B, max_codim=5)

        best = None
        for codim in range(0, 6):
            dim = 5 - codim
            for basis in dual_spaces(5, dim, cap=1 << 21):
                elems = subspace_elements(basis)
                for z in range(32):
                    if all((e ^ z) in tset for e in elems):
                        best = (dim, z)
                        break
                if best:
                    break
            if best:
                break
        if got is None:
            assert best is None
        else:
            lset, z = got
            assert len(lset) == 1 << best[0]
            assert all((e ^ z) in tset for e in lset.members)


def test_brute_force_3B_requires_boolean():
    g = make_group((9,))
    B = group_set(g, [0, 1])
    with pytest.raises(ValueError):
        brute_force_3B_subspace(B, max_codim=2)


def test_regularize_density_terminates_with_gate():
    rng = random.Random(29)
    g = boolean_group(12)
    for _ in range(3):
        A = group_set(g, rng.sample(range(g.order), 40))
        trace = regularize_density(A)
        final_a = len(trace.final_set)
        final_n = trace.final_group.order
        assert 100 * trace.final_k**2 * Fraction(final_a, final_n) > 1
        densities = [s.density_before for s in trace.steps] + [trace.final_delta]
        assert all(b > a for a, b in zip(densities, densities[1:]))
        lifted = trace.lift()
        assert set(lifted.members) <= set(A.members)
        assert len(lifted) == final_a


def test_regularize_branches_are_all_piece_steps():
    # under the smallness gate the peak bound forces m <= 1/(16 delta),
    # so the half-space increment branch can never fire
    rng = random.Random(31)
    g = boolean_group(12)
    for _ in range(4):
        A = group_set(g, rng.sample(range(g.order), rng.randrange(20, 80)))
        trace = regularize_density(A)
        assert all(step.branch == "piece" for step in trace.steps)


def test_regularize_on_subgroup_stops_at_full_density():
    H = _subgroup(12, 3)
    trace = regularize_density(H)
    assert trace.final_delta == 1
    assert trace.final_k == 1
    assert set(trace.lift().members) == set(H.members)


def test_regularize_singleton():
    g = boolean_group(8)
    A = group_set(g, [77])
    trace = regularize_density(A)
    assert len(trace.final_set) == 1
    assert trace.lift().members == A.members
    assert 100 * trace.final_k**2 * trace.final_delta > 1


def test_regularize_rejects_general_groups():
    g = make_group((12,))
    with pytest.raises(ValueError):
        regularize_density(group_set(g, [0, 1]))
