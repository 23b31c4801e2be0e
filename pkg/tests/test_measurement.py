import numpy as np
import pytest

from ppovm.channels import (
    Povm,
    apply_second,
    choi_of_channel,
    identity_channel,
    ket,
    max_entangled_ket,
    projector,
)
from ppovm.linalg import hs_inner, kron, max_abs, partial_trace
from ppovm.measurement import (
    NormStateInvalidError,
    NotProductNormalizationError,
    NotPsdError,
    ProcessEffect,
    ProcessPovm,
    SupportViolationError,
    TestCouple,
    build_ppovm,
    effects_multiset_equal,
    extra_effect,
    merge_couples,
    outcome_probabilities,
    process_effect,
    realize,
    validate_ppovm,
)
from ppovm.rand import (
    random_channel,
    random_density,
    random_effect,
    random_povm,
    random_ppovm,
    random_test_couple,
)
from ppovm.schemes import (
    identity_vs_contraction_ppovm,
    pauli_probe_couple,
    pauli_probe_ppovm,
    six_state_couples,
)


def born_probability(state, anc_dim, d, ch, effect):
    """Oracle: send the test state through the channel, then measure."""
    output = apply_second(ch, state, anc_dim)
    return hs_inner(effect, output).real


def test_max_entangled_probe_halves_the_effects():
    rng = np.random.default_rng(0)
    povm = random_povm(4, 5, rng)
    state = projector(max_entangled_ket(2, normalized=True))
    pp = build_ppovm([TestCouple(1.0, state, povm, 2)], 2)
    for m, f in zip(pp.matrices, povm.effects):
        assert max_abs(m - f / 2) < 1e-12


def test_ancilla_free_couple_gives_transposed_tensor():
    rng = np.random.default_rng(1)
    rho = random_density(2, rng)
    povm = random_povm(2, 3, rng)
    pp = build_ppovm([TestCouple(1.0, rho, povm, 1)], 2)
    for m, f in zip(pp.matrices, povm.effects):
        assert max_abs(m - kron(rho.T, f)) < 1e-12


def test_factorized_ancilla_couple_ignores_ancilla_part():
    rng = np.random.default_rng(2)
    xi = random_density(3, rng)
    rho = random_density(2, rng)
    qubit_povm = random_povm(2, 3, rng)
    lifted = Povm(
        tuple(kron(np.eye(3), f) for f in qubit_povm.effects), qubit_povm.labels
    )
    pp = build_ppovm([TestCouple(1.0, kron(xi, rho), lifted, 3)], 2)
    for m, f in zip(pp.matrices, qubit_povm.effects):
        assert max_abs(m - kron(rho.T, f)) < 1e-10


def test_fundamental_equivalence_small():
    rng = np.random.default_rng(3)
    for anc_dim, d in ((1, 2), (2, 2), (4, 2), (1, 3), (2, 3)):
        for _ in range(12):
            state = random_density(anc_dim * d, rng)
            effect = random_effect(anc_dim * d, rng)
            ch = random_channel(d, rng)
            lhs = born_probability(state, anc_dim, d, ch, effect)
            m = process_effect(state, effect, anc_dim, d)
            rhs = hs_inner(m, choi_of_channel(ch)).real
            assert abs(lhs - rhs) < 1e-9


def test_build_normalization_state():
    rng = np.random.default_rng(4)
    couples = [
        random_test_couple(2, 1, rng, weight=0.25),
        random_test_couple(2, 2, rng, weight=0.75),
    ]
    pp = build_ppovm(couples, 2)
    expected = sum(
        c.weight * partial_trace(c.state, c.anc_dim, 2, "first") for c in couples
    )
    assert max_abs(pp.norm_state - expected) < 1e-12
    assert max_abs(sum(pp.matrices) - kron(expected.T, np.eye(2))) < 1e-9


def test_build_rejects_bad_weights():
    rng = np.random.default_rng(5)
    couple = random_test_couple(2, 1, rng, weight=0.5)
    with pytest.raises(ValueError):
        build_ppovm([couple], 2)  # weights sum to 0.5
    with pytest.raises(ValueError):
        build_ppovm(
            [couple, random_test_couple(2, 1, rng, weight=0.0),
             random_test_couple(2, 1, rng, weight=0.5)],
            2,
        )


def test_validate_half_povm():
    rng = np.random.default_rng(6)
    povm = random_povm(4, 5, rng)
    pp = validate_ppovm([f / 2 for f in povm.effects], 2)
    assert max_abs(pp.norm_state - np.eye(2) / 2) < 1e-9


def test_validate_contraction_pair():
    p0 = projector(ket(0, 2))
    p1 = projector(ket(1, 2))
    m_id = kron(p1, np.eye(2) - p0)
    m_contr = kron(p1, p0)
    pp = validate_ppovm([m_id, m_contr], 2, labels=["identity", "contraction"])
    assert max_abs(pp.norm_state - p1) < 1e-12
    assert max_abs(sum(pp.matrices) - kron(p1, np.eye(2))) < 1e-12


def test_validate_identity_is_not_a_ppovm():
    # I (x) I factors as sigma (x) I with trace-2 sigma, so the product
    # check passes and the norm-state check is what fails
    with pytest.raises(NormStateInvalidError):
        validate_ppovm([np.eye(4)], 2)


def test_validate_rejects_non_product_sum():
    psi = projector(max_entangled_ket(2)) / 2
    with pytest.raises(NotProductNormalizationError):
        validate_ppovm([psi], 2)


def test_validate_rejects_non_psd():
    bad = kron(projector(ket(1, 2)), np.diag([1.0, -0.1]))
    good = kron(projector(ket(1, 2)), np.diag([0.0, 1.1]))
    with pytest.raises(NotPsdError):
        validate_ppovm([bad, good], 2)


def test_merge_single_couple_is_identity():
    couple = pauli_probe_couple()
    merged = merge_couples([couple])
    assert merged.anc_dim == couple.anc_dim
    assert max_abs(merged.state - couple.state) < 1e-12
    pp_a = build_ppovm([couple], 2)
    pp_b = build_ppovm([merged], 2)
    for a, b in zip(pp_a.matrices, pp_b.matrices):
        assert max_abs(a - b) < 1e-9


def test_merge_two_ancilla_free_probes():
    p0 = projector(ket(0, 2))
    p1 = projector(ket(1, 2))
    povm = Povm((p0, p1), ("0", "1"))
    couples = [
        TestCouple(0.5, p0, povm, 1),
        TestCouple(0.5, p1, povm, 1),
    ]
    merged = merge_couples(couples)
    expected_state = 0.5 * (kron(p0, p0) + kron(p1, p1))
    assert max_abs(merged.state - expected_state) < 1e-12
    pp_a = build_ppovm(couples, 2)
    pp_b = build_ppovm([merged], 2)
    for a, b in zip(pp_a.matrices, pp_b.matrices):
        assert max_abs(a - b) < 1e-9


def test_merge_six_state_scheme():
    couples = six_state_couples()
    pp_a = build_ppovm(couples, 2)
    pp_b = build_ppovm([merge_couples(couples)], 2)
    for a, b in zip(pp_a.matrices, pp_b.matrices):
        assert max_abs(a - b) < 1e-9
    assert effects_multiset_equal(pp_a, pp_b, 1e-9)


def test_merge_mixed_ancilla_sizes():
    rng = np.random.default_rng(7)
    couples = [
        random_test_couple(2, 1, rng, weight=0.3),
        random_test_couple(2, 2, rng, weight=0.7),
    ]
    merged = merge_couples(couples)
    assert merged.anc_dim == 4  # 2 couples x padded ancilla 2
    pp_a = build_ppovm(couples, 2)
    pp_b = build_ppovm([merged], 2)
    for a, b in zip(pp_a.matrices, pp_b.matrices):
        assert max_abs(a - b) < 1e-9


def test_outcome_probabilities_identity_vs_contraction():
    from ppovm.channels import contraction_channel

    pp = identity_vs_contraction_ppovm()
    assert np.array_equal(outcome_probabilities(pp, identity_channel(2)), [1.0, 0.0])
    got = outcome_probabilities(pp, contraction_channel(ket(0, 2)))
    assert np.array_equal(got, [0.0, 1.0])


def test_outcome_probabilities_match_born_rule():
    rng = np.random.default_rng(8)
    couple = pauli_probe_couple()
    pp = build_ppovm([couple], 2)
    for ch in (identity_channel(2), random_channel(2, rng)):
        probs = outcome_probabilities(pp, ch)
        direct = np.array(
            [
                born_probability(couple.state, 2, 2, ch, f)
                for f in couple.povm.effects
            ]
        )
        assert np.abs(probs - direct).max() < 1e-12
        assert abs(probs.sum() - 1.0) < 1e-9


def test_outcome_probabilities_requires_tp():
    from ppovm.channels import KrausChannel

    pp = pauli_probe_ppovm()
    with pytest.raises(ValueError):
        outcome_probabilities(pp, KrausChannel(2, 2, (np.diag([1.0, 0.5]),)))


def test_realize_maximally_mixed_norm_state():
    pp = pauli_probe_ppovm()  # norm state I/2
    real = realize(pp)
    assert real.r == 2
    assert abs(np.linalg.norm(real.test_vector) - 1.0) < 1e-9
    xi = projector(real.test_vector)
    assert max_abs(partial_trace(xi, 2, 2, "first") - pp.norm_state) < 1e-8
    assert max_abs(real.test_vector - max_entangled_ket(2, normalized=True)) < 1e-12
    for f, m in zip(real.povm.effects, pp.matrices):
        assert max_abs(f - 2 * m) < 1e-9


def test_realize_identity_vs_contraction():
    real = realize(identity_vs_contraction_ppovm())
    assert real.r == 1
    assert max_abs(real.test_vector - ket(1, 2)) < 1e-12
    p0 = projector(ket(0, 2))
    assert max_abs(real.povm.effects[0] - (np.eye(2) - p0)) < 1e-12
    assert max_abs(real.povm.effects[1] - p0) < 1e-12


def test_realize_round_trip_ancilla_free_full_rank():
    rng = np.random.default_rng(9)
    rho = random_density(2, rng)
    povm = random_povm(2, 3, rng)
    pp = build_ppovm([TestCouple(1.0, rho, povm, 1)], 2)
    real = realize(pp)
    back = build_ppovm([real.as_couple()], 2)
    for a, b in zip(pp.matrices, back.matrices):
        assert max_abs(a - b) < 1e-8


def test_realize_round_trip_random_including_rank_deficient():
    rng = np.random.default_rng(10)
    for d in (2, 3):
        for rank in range(1, d + 1):
            pp = random_ppovm(d, rng, rho_rank=rank)
            real = realize(pp)
            assert real.r == rank
            assert max_abs(sum(real.povm.effects) - np.eye(rank * d)) < 1e-9
            back = build_ppovm([real.as_couple()], d)
            for a, b in zip(pp.matrices, back.matrices):
                assert max_abs(a - b) < 1e-8


def test_realize_detects_support_violation():
    # handcrafted: effect sticks out of the rank-one norm state's support
    pp = ProcessPovm(
        2,
        (ProcessEffect("full", np.eye(4)),),
        projector(ket(1, 2)),
    )
    with pytest.raises(SupportViolationError):
        realize(pp)


def test_extra_effect_examples():
    pp = identity_vs_contraction_ppovm()  # norm state |1><1|
    assert max_abs(extra_effect(pp) - kron(projector(ket(0, 2)), np.eye(2))) < 1e-12
    pp2 = pauli_probe_ppovm()  # norm state I/2
    assert max_abs(extra_effect(pp2) - 0.5 * np.eye(4)) < 1e-12


def test_extra_effect_rate_is_d_minus_one():
    rng = np.random.default_rng(11)
    for d in (2, 3):
        pp = random_ppovm(d, rng)
        for _ in range(10):
            omega = choi_of_channel(random_channel(d, rng))
            rate = hs_inner(extra_effect(pp), omega).real
            assert abs(rate - (d - 1)) < 1e-9


def test_entangled_probe_equivalent_of_ancilla_free_scheme():
    # an ancilla-free scheme with test state rho can be reproduced by the
    # maximally entangled probe if the output is "measured" with the
    # operators d * rho^T (x) F_j; these give the same statistics but are
    # not effects once rho is not maximally mixed
    rng = np.random.default_rng(12)
    rho = np.diag([0.8, 0.2]).astype(complex)
    povm = random_povm(2, 3, rng)
    pp = build_ppovm([TestCouple(1.0, rho, povm, 1)], 2)
    psi = projector(max_entangled_ket(2, normalized=True))
    ch = random_channel(2, rng)
    output = apply_second(ch, psi, 2)
    for m, f in zip(pp.matrices, povm.effects):
        x = 2 * kron(rho.T, f)
        assert abs(hs_inner(x, output).real - hs_inner(m, choi_of_channel(ch)).real) < 1e-12
    total = sum(2 * kron(rho.T, f) for f in povm.effects)
    assert max_abs(total - np.eye(4)) > 0.5  # not a POVM
    assert max(np.linalg.eigvalsh(2 * kron(rho.T, f)).max() for f in povm.effects) > 1.0


def test_effects_multiset_equal_ignores_order_and_labels():
    pp = pauli_probe_ppovm()
    shuffled = ProcessPovm(
        2,
        tuple(ProcessEffect(f"x{k}", m) for k, m in enumerate(reversed(pp.matrices))),
        pp.norm_state,
    )
    assert effects_multiset_equal(pp, shuffled, 1e-12)
    assert not effects_multiset_equal(pp.matrices[:-1], pp.matrices[1:], 1e-12)
