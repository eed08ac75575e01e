import math

import numpy as np
import pytest

from jsynth.circuit import Emitter, GateSequence, JPower, Perm, evaluate, peephole
from jsynth.gates import BLOCK_SWAP, TENSOR_SWAP, JGate, PermGate, j_power, make_j, rz
from jsynth.numerics import I2, I4, blockdiag, haar_unitary, op_norm_dist, phase_aligned_dist
from jsynth.synthesis import (
    eigenfactor_matrix,
    expand_perms,
    expandable,
    factor_eigen,
    synth_blockdiag,
    synth_from_factors,
    synth_unitary,
)

G = JGate.default()
A, B = G.alpha, G.beta


def _seq(gates, phase=0.0):
    return GateSequence(list(gates), A, B, phase)


def _random_sequence(rng, n=12):
    gates = []
    for _ in range(n):
        if rng.random() < 0.4:
            gates.append(Perm(PermGate(tuple(rng.permutation(4)), tuple(rng.choice([1, -1], 4)))))
        else:
            gates.append(JPower(int(rng.integers(-50, 50)), 0.0, bool(rng.random() < 0.3)))
    return _seq(gates)


def test_evaluate_examples():
    assert np.array_equal(evaluate(_seq([])), I4)
    assert np.array_equal(evaluate(_seq([JPower(1)])), make_j(G))
    p = PermGate((3, 1, 0, 2), (1, -1, -1, 1))
    assert np.array_equal(evaluate(_seq([Perm(p), Perm(p.inverse())])), I4)


def test_evaluate_order_is_matrix_product():
    p = Perm(BLOCK_SWAP)
    got = evaluate(_seq([p, JPower(2)]))
    assert np.array_equal(got, BLOCK_SWAP.matrix() @ j_power(G, 2))


def test_swapped_power():
    s = TENSOR_SWAP.matrix()
    assert np.array_equal(JPower(3, swapped=True).matrix(G), s @ j_power(G, 3) @ s)


def test_peephole_examples():
    assert len(peephole(_seq([JPower(3), JPower(-3)]))) == 0
    p = PermGate((1, 2, 3, 0), (1, 1, -1, 1))
    assert len(peephole(_seq([Perm(p), Perm(p.inverse())]))) == 0
    assert len(peephole(_seq([JPower(0), JPower(2), JPower(5)]))) == 1


def test_peephole_preserves_evaluation(rng):
    for _ in range(50):
        seq = _random_sequence(rng)
        out = peephole(seq)
        assert len(out) <= len(seq)
        assert np.abs(evaluate(out) - evaluate(seq)).max() <= 1e-12


def test_peephole_remeasures_merged_error():
    em = Emitter(0.01)
    a, b = em.power(0.0, 0.3), em.power(0.0, -0.3)
    merged = peephole(_seq([a, b]))
    assert merged.total_budget <= a.step_error + b.step_error
    assert op_norm_dist(evaluate(merged), I4) <= merged.total_budget + 1e-12


def test_total_budget_is_sum():
    seq = _seq([JPower(1, 0.1), Perm(BLOCK_SWAP), JPower(2, 0.2)])
    assert seq.total_budget == pytest.approx(0.3, abs=1e-12)


def test_blockdiag_identity_is_empty():
    seq = synth_blockdiag(I2, I2, 5e-3)
    assert len(seq) == 0 and seq.total_budget == 0


def test_blockdiag_phase_shape_is_one_power():
    seq = synth_blockdiag(I2, rz(0.3), 5e-3)
    assert len(seq) == 1 and isinstance(seq.gates[0], JPower)
    err = op_norm_dist(evaluate(seq), blockdiag(I2, rz(0.3)))
    assert seq.total_budget == pytest.approx(err, abs=1e-15)


def test_blockdiag_soundness(rng):
    for _ in range(10):
        u, v = haar_unitary(rng, 2), haar_unitary(rng, 2)
        seq = synth_blockdiag(u, v, 5e-3)
        target = blockdiag(u, v)
        assert phase_aligned_dist(evaluate(seq), target) <= seq.total_budget + 1e-9
        assert np.abs(seq.ideal() - target).max() <= 1e-12


def test_factor_eigen_examples():
    fs = factor_eigen(I4)
    assert [eta for _, eta in fs] == [0, 0, 0, 0]
    eta = 0.7
    d = np.diag([1, 1, np.exp(-1j * eta), np.exp(1j * eta)])
    nontrivial = [(v, e) for v, e in factor_eigen(d) if abs(e) > 1e-12]
    assert len(nontrivial) == 2
    supports = sorted(int(np.argmax(np.abs(v))) for v, _ in nontrivial)
    assert supports == [2, 3]


def test_factor_eigen_reconstruction_any_order(rng):
    for _ in range(20):
        g = haar_unitary(rng)
        fs = factor_eigen(g)
        for order in ([0, 1, 2, 3], [3, 1, 0, 2]):
            prod = I4
            for k in order:
                prod = prod @ eigenfactor_matrix(*fs[k])
            assert np.abs(prod - g).max() <= 1e-9


def test_synth_identity_is_empty():
    rep = synth_unitary(I4, 5e-3)
    assert len(rep.sequence) == 0 and rep.measured_error == 0


def test_synth_lower_phase_shape():
    rep = synth_unitary(blockdiag(I2, rz(1.1)), 5e-3)
    assert len(rep.sequence) == 1
    assert rep.measured_error <= rep.total_budget + 1e-9


def test_synth_random_budget_soundness():
    rng = np.random.default_rng(21)
    for _ in range(3):
        g = haar_unitary(rng)
        rep = synth_unitary(g, 1e-2)
        assert rep.measured_error <= rep.total_budget + 1e-9
        assert rep.exhausted_steps == 0
        steps = sum(1 for x in rep.sequence.gates if isinstance(x, JPower))
        assert rep.total_budget <= steps * 2 * 1e-2
        # the ideal product is the target up to the reported phase
        assert np.abs(rep.sequence.ideal() - g).max() <= 1e-9
        assert all(x.m >= 0 for x in rep.sequence.gates if isinstance(x, JPower))


def test_synth_rejects_bad_input():
    with pytest.raises(ValueError):
        synth_unitary(2 * I4, 5e-3)
    with pytest.raises(ValueError):
        synth_unitary(I4, 0.0)


def test_eigenbasis_independence(rng):
    # a doubly degenerate spectrum: any basis of each eigenspace is valid
    q = haar_unitary(rng)
    lam = [0.4, 0.4, -1.2, 2.0]
    g = q @ np.diag(np.exp(1j * np.array(lam))) @ q.conj().T
    w = haar_unitary(rng, 2)
    q2 = q.copy()
    q2[:, :2] = q[:, :2] @ w
    for basis in (q, q2):
        seq = synth_from_factors([(basis[:, k], lam[k]) for k in range(4)], 1e-2)
        assert phase_aligned_dist(evaluate(seq), g) <= seq.total_budget + 1e-9


def test_factor_order_does_not_matter_without_peephole(rng):
    g = haar_unitary(rng)
    fs = factor_eigen(g)
    s1 = synth_from_factors(fs, 1e-2, optimize=False)
    s2 = synth_from_factors(fs[::-1], 1e-2, optimize=False)
    assert np.abs(s1.ideal() - s2.ideal()).max() <= 1e-12
    assert abs(s1.total_budget - s2.total_budget) <= 1e-12


def test_synthesis_is_deterministic(rng):
    g = haar_unitary(rng)
    a, b = synth_unitary(g, 1e-2), synth_unitary(g.copy(), 1e-2)
    assert a.sequence.gates == b.sequence.gates
    assert a.measured_error == b.measured_error


def test_j_powers_fix_the_last_line():
    # why perms moving |11> cannot be expanded: every J power, in either
    # qubit order, maps e_3 to a multiple of itself
    for m in (1, 7, 123):
        for swapped in (False, True):
            col = JPower(m, swapped=swapped).matrix(G)[:, 3]
            assert np.abs(col[:3]).max() == 0


def test_expand_perms_without_perms_is_identity():
    seq = _seq([JPower(4, 0.01), JPower(9, 0.02, True)])
    out = expand_perms(seq, 1e-2)
    assert out.gates == seq.gates and out.global_phase == seq.global_phase
    assert expand_perms(out, 1e-2).gates == out.gates


def test_block_swap_is_not_expandable():
    assert not expandable(BLOCK_SWAP)
    seq = _seq([Perm(BLOCK_SWAP)])
    assert expand_perms(seq, 1e-2).gates == seq.gates


@pytest.mark.parametrize("perm, signs", [
    ((1, 0, 2, 3), (1, -1, 1, 1)),
    ((0, 2, 1, 3), (1, 1, 1, 1)),
    ((2, 0, 1, 3), (-1, 1, 1, 1)),
    ((0, 1, 2, 3), (1, -1, -1, 1)),
    ((2, 1, 0, 3), (1, 1, 1, -1)),
])
def test_expand_perm_within_budget(perm, signs):
    p = PermGate(perm, signs)
    seq = _seq([Perm(p)])
    out = expand_perms(seq, 1e-2)
    assert all(isinstance(x, JPower) for x in out.gates)
    target = p.matrix()
    assert phase_aligned_dist(evaluate(out), target) <= out.total_budget + 1e-9
    assert np.abs(out.ideal() - target).max() <= 1e-12
    # J-only sequences are left alone by a second pass
    assert expand_perms(out, 1e-2).gates == out.gates


def test_expand_perms_on_synthesis_output(rng):
    g = haar_unitary(rng)
    rep = synth_unitary(g, 1e-2)
    out = expand_perms(rep.sequence, 1e-2)
    left = [x for x in out.gates if isinstance(x, Perm)]
    assert all(not expandable(x.perm) for x in left)
    assert phase_aligned_dist(evaluate(out), g) <= out.total_budget + 1e-9
