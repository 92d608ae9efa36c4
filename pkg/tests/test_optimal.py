import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sfqec import channels, optimal, petz, states
from sfqec.errors import DegenerateChannelError, InvalidCodeError

from test_petz import flip, qubit_code, random_channel, random_code, repetition_code, z_flip


@pytest.mark.parametrize("p", [0.1, 0.25])
def test_phase_flip_cannot_be_corrected(p):
    res = optimal.optimal_recovery(qubit_code(), z_flip(p))
    assert res.fidelity == pytest.approx(1 - p, abs=1e-7)
    assert res.duality_gap <= 1e-7


def test_single_flips_corrected_perfectly():
    p = 0.05
    K = channels.KrausSet(tuple([np.sqrt(1 - 3 * p) * np.eye(8)] + [np.sqrt(p) * flip(i) for i in range(3)]))
    res = optimal.optimal_recovery(repetition_code(), K)
    assert res.fidelity == pytest.approx(1, abs=1e-7)
    total = sum(r.conj().T @ r for r in res.kraus)
    span = res.choi.span
    assert np.allclose(span.conj().T @ total @ span, np.eye(span.shape[1]), atol=1e-6)


def test_independent_flips_at_least_majority_vote():
    p = 0.1
    ops = []
    for mask in range(8):
        k = np.eye(8)
        weight = 1.0
        for i in range(3):
            if mask >> i & 1:
                k = flip(i) @ k
                weight *= p
            else:
                weight *= 1 - p
        ops.append(np.sqrt(weight) * k)
    K = channels.KrausSet(tuple(ops))
    code = repetition_code()
    res = optimal.optimal_recovery(code, K)
    majority = 1 - 3 * p**2 + 2 * p**3
    assert res.fidelity >= majority - 1e-7
    f_petz = petz.petz_fidelity(code, K).fidelity
    assert f_petz - 1e-6 <= res.fidelity <= 0.5 * (1 + f_petz) + 1e-6


def test_error_subspaces_and_b_operators(sf):
    K = channels.first_order_set("loss", 1e-3, sf.dim)
    subs = optimal.error_subspaces(sf, K)
    vecs = np.column_stack(subs.vectors)
    assert np.allclose(vecs.conj().T @ vecs, np.eye(vecs.shape[1]), atol=1e-10)
    B = optimal.b_operators(sf, subs)
    assert len(B) == len(subs.b_labels())
    assert subs.b_labels()[:4] == [(0, 1), (0, 2), (0, 3), (0, 4)]
    # Pauli pattern: B_1 maps psi_0^+ to |0_L> and psi_0^- to |1_L>
    _, p0, m0 = subs.blocks[0]
    assert np.allclose(B[0] @ p0, sf.zero) and np.allclose(B[0] @ m0, sf.one)
    assert np.allclose(B[3] @ m0, -sf.one)


def test_dropped_vectors_give_two_operator_blocks():
    # K_1 sends both codewords to the same state, so one image is dropped
    dim = 4
    k0 = np.diag([1.0, 1.0, 0, 0])
    k1 = np.zeros((dim, dim))
    k1[2, 0] = k1[2, 1] = np.sqrt(0.5)
    K = channels.KrausSet((np.sqrt(0.9) * k0, np.sqrt(0.1) * k1))
    subs = optimal.error_subspaces(qubit_code(dim), K)
    assert subs.dropped == ((1, "-"),)
    assert subs.b_labels() == [(0, 1), (0, 2), (0, 3), (0, 4), (1, 1), (1, 2)]
    res = optimal.optimal_recovery(qubit_code(dim), K)
    f_petz = petz.petz_fidelity(qubit_code(dim), K).fidelity
    assert f_petz - 1e-6 <= res.fidelity <= 0.5 * (1 + f_petz) + 1e-6


def test_objective_matches_extracted_kraus(codes):
    for label in ("SF", "alpha_perp_1.0"):
        code = codes[label]
        K = channels.first_order_set("dephasing", 1e-4, code.dim)
        res = optimal.optimal_recovery(code, K)
        assert optimal.channel_fidelity(res.kraus, K, code) == pytest.approx(res.choi.objective, abs=1e-6)
        assert optimal.entanglement_fidelity(res.kraus, K, code) == pytest.approx(res.choi.objective, abs=1e-6)
        assert res.choi.tp_residual < 1e-6


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 3))
def test_random_channel_sandwich(seed, n_ops):
    rng = np.random.default_rng(seed)
    code, K = random_code(5, rng), random_channel(5, n_ops, rng)
    res = optimal.optimal_recovery(code, K)
    f_petz = petz.petz_fidelity(code, K).fidelity
    assert res.duality_gap <= 1e-7
    assert f_petz - 1e-6 <= res.fidelity <= 0.5 * (1 + f_petz) + 1e-6


def test_errors():
    loose = states.custom_code(states.fock(0, 4), states.fock(0, 4) + states.fock(1, 4), orthogonality_tol=None)
    with pytest.raises(InvalidCodeError):
        optimal.optimal_recovery(loose, z_flip(0.1))
    with pytest.raises(DegenerateChannelError):
        optimal.error_subspaces(qubit_code(), channels.KrausSet((np.zeros((4, 4)),)))
