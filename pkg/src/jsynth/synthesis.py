"""Compile arbitrary 2-qubit unitaries into J powers and signed permutations.

Pipeline for a general target g:

1. Split g into commuting rank-1 eigenfactors I + (e^{i eta} - 1) v v^dag.
2. For each factor, R = R3 R2 R1 sends v to |11>, so the factor equals
   R^-1 diag(1, 1, 1, e^{i eta}) R.
3. Every R_k is a two-level SU(2) gate; it is moved onto the lower block by
   an exact permutation and built there from rz/ry pieces, each one a single
   J power found by a Kronecker search.
4. diag(1, 1, 1, e^{i eta}) is, up to a global phase, three two-level rz
   gates on the planes (k, 3).

Block-diagonal targets skip the eigen route and use :func:`synth_blockdiag`.
All results hold up to a global phase, which is reported, not synthesised.
"""

import collections
import math
import time
from dataclasses import dataclass

import numpy as np

from .circuit import Emitter, GateSequence, JPower, Perm, evaluate, peephole
from .gates import IDENTITY_PERM, PermGate, approx_block_sigma, decompose_zy, JGate
from .hypersphere import build_pole_map, pole_gates, pole_inverse_gates
from .kronecker import DEFAULT_M_MAX
from .numerics import blockdiag, check_unitary, eig_unitary, phase_aligned_dist, wrap_angle

BLOCK_TOL = 1e-12


@dataclass
class SynthesisReport:
    target: np.ndarray
    sequence: GateSequence
    measured_error: float
    eigen_angles: list
    wall_time: float
    exhausted_steps: int

    @property
    def total_budget(self):
        return self.sequence.total_budget

    @property
    def global_phase(self):
        return self.sequence.global_phase


def _diagonal_phase_gates(em, angles):
    """Gates for diag(e^{i a_0}, ..., e^{i a_3}) with sum(a) == 0 (mod 2 pi).

    Plane (k, 3) carries rz(-a_k): e^{i a_k} on k and the balancing phase on 3.
    """
    gates = []
    for k in range(3):
        gates += em.two_level(k, 3, [("z", -angles[k])])
    return gates


def _blockdiag_gates(em, u, v):
    du, dv = decompose_zy(u), decompose_zy(v)
    # blockdiag(e^{i gu}, e^{i gv}) = e^{i (gu+gv)/2} diag(e^{-id}, e^{-id}, e^{id}, e^{id})
    d = (dv.global_phase - du.global_phase) / 2
    gates = em.two_level(0, 3, [("z", d)]) + em.two_level(1, 2, [("z", d)])
    gates += em.upper(du.factors()) + em.lower(dv.factors())
    return gates, (du.global_phase + dv.global_phase) / 2


def synth_blockdiag(u, v, eps_step, g=None, m_max=DEFAULT_M_MAX, optimize=True):
    """Approximate blockdiag(u, v), u and v in U(2), up to a global phase."""
    u, v = check_unitary(u, name="u"), check_unitary(v, name="v")
    em = Emitter(eps_step, g, m_max)
    gates, phase = _blockdiag_gates(em, u, v)
    seq = em.sequence(gates, wrap_angle(phase))
    return peephole(seq) if optimize else seq


def factor_eigen(g):
    """Commuting rank-1 factors (v, eta) with g = prod_k (I + (e^{i eta_k} - 1) v_k v_k^dag)."""
    return [(p.vector, p.value_angle) for p in eig_unitary(g)]


def eigenfactor_matrix(v, eta):
    v = np.asarray(v, dtype=complex)
    return np.eye(len(v), dtype=complex) + (np.exp(1j * eta) - 1) * np.outer(v, v.conj())


def _eigenfactor_gates(em, v, eta):
    pm = build_pole_map(v)
    # diag(1, 1, 1, e^{i eta}) = e^{i eta/4} diag(e^{-i eta/4} x3, e^{3i eta/4})
    a = -eta / 4
    gates = pole_inverse_gates(em, pm.coords)
    gates += _diagonal_phase_gates(em, [a, a, a, -3 * a])
    gates += pole_gates(em, pm.coords)
    return gates, eta / 4


def synth_from_factors(factors, eps_step, g=None, m_max=DEFAULT_M_MAX, optimize=True):
    """Sequence for the product of the given eigenfactors (any order, they commute)."""
    em = Emitter(eps_step, g, m_max)
    gates, phase = [], 0.0
    for v, eta in factors:
        if abs(np.exp(1j * eta) - 1) <= 1e-14:
            continue
        fg, fp = _eigenfactor_gates(em, v, eta)
        gates += fg
        phase += fp
    seq = em.sequence(gates, wrap_angle(phase))
    return peephole(seq) if optimize else seq


def _block_parts(g):
    if max(np.abs(g[:2, 2:]).max(), np.abs(g[2:, :2]).max()) <= BLOCK_TOL:
        return g[:2, :2], g[2:, 2:]
    return None


def synth_unitary(g, eps_step, gate=None, m_max=DEFAULT_M_MAX, optimize=True):
    """Compile a 4x4 unitary; the report's error is phase-aligned and measured."""
    t0 = time.perf_counter()
    g = check_unitary(g, name="target")
    if g.shape != (4, 4):
        raise ValueError("synth_unitary expects a 4x4 unitary")
    factors = factor_eigen(g)
    parts = _block_parts(g)
    if parts is not None:
        raw = synth_blockdiag(*parts, eps_step, gate, m_max, optimize=False)
    else:
        raw = synth_from_factors(factors, eps_step, gate, m_max, optimize=False)
    exhausted = raw.exhausted_steps
    seq = peephole(raw) if optimize else raw
    err = phase_aligned_dist(evaluate(seq), g, candidates=(seq.global_phase,))
    return SynthesisReport(g, seq, err, [eta for _, eta in factors],
                           time.perf_counter() - t0, exhausted)


# -- permutation expansion ---------------------------------------------------

_SIGMA01 = PermGate((1, 0, 2, 3), (1, -1, 1, 1))  # blockdiag(sigma, I)
_SIGMA02 = PermGate((2, 1, 0, 3), (1, 1, -1, 1))  # the same with the qubits exchanged


def _sigma_word(target):
    """Shortest word over sigma-type gates whose underlying permutation matches ``target``.

    Letters are (gate, power) with power 1 or 3.  Only permutations fixing
    coordinate 3 are reachable.
    """
    gens = [(gen, k) for gen in (_SIGMA01, _SIGMA02) for k in (1, 3)]
    start = IDENTITY_PERM.perm
    seen = {start: []}
    queue = collections.deque([(start, IDENTITY_PERM)])
    while queue:
        key, mat = queue.popleft()
        if key == target.perm:
            return seen[key], mat
        for gen, k in gens:
            step = gen if k == 1 else gen @ gen @ gen
            nxt = mat @ step
            if nxt.perm not in seen:
                seen[nxt.perm] = seen[key] + [(gen, k)]
                queue.append((nxt.perm, nxt))
    return None, None


def expandable(p):
    return p.perm[3] == 3


def _expand_one(p, eps_step, g, m_max):
    """J-power gates realising ``p`` up to a global phase, and that phase."""
    word, realised = _sigma_word(p)
    sig = approx_block_sigma(eps_step, g, m_max)
    em = Emitter(eps_step, g, m_max)

    def sigma_gate(gen, k):
        swapped = gen is _SIGMA02
        ideal = (gen @ gen @ gen if k == 3 else gen).matrix()
        mat = JPower(k * sig.m, 0.0, swapped).matrix(g)
        err = float(np.linalg.norm(mat - ideal, 2))
        return JPower(k * sig.m, err, swapped, sig.exhausted, ideal)

    # p = D . W with W the sigma word and D a diagonal of signs
    d = (p @ realised.inverse()).signs
    theta = [0.0 if s == 1 else math.pi for s in d]
    kappa = sum(theta) / 4
    a = [t - kappa for t in theta]
    diag_gates = []
    for k in range(3):
        s = -a[k]
        if abs(math.remainder(s, 2 * math.pi)) <= 1e-14:
            continue
        if k == 2:
            diag_gates.append(em.power(0.0, s))
        elif k == 1:
            diag_gates.append(em.power(0.0, s, swapped=True))
        else:
            # move the (1, 3) phase onto (0, 3) with the first-block sigma
            diag_gates += [sigma_gate(_SIGMA01, 1), em.power(0.0, s, swapped=True),
                           sigma_gate(_SIGMA01, 3)]
    return diag_gates + [sigma_gate(gen, k) for gen, k in word], kappa


def expand_perms(seq, eps_step, m_max=DEFAULT_M_MAX):
    """Replace permutations by sigma-type J powers where that is possible.

    J powers, on either qubit ordering, never move |11> out of its own line,
    so only signed permutations fixing coordinate 3 can be expanded; others
    (the block swap among them) are left in place.
    """
    g = seq.jgate
    out, phase = [], seq.global_phase
    for gate in seq.gates:
        if isinstance(gate, Perm) and expandable(gate.perm) and not gate.perm.is_identity:
            gates, kappa = _expand_one(gate.perm, eps_step, g, m_max)
            out += gates
            phase += kappa
        else:
            out.append(gate)
    return GateSequence(out, seq.alpha, seq.beta, wrap_angle(phase))


__all__ = [
    "SynthesisReport",
    "evaluate",
    "expand_perms",
    "expandable",
    "factor_eigen",
    "eigenfactor_matrix",
    "peephole",
    "synth_blockdiag",
    "synth_from_factors",
    "synth_unitary",
    "blockdiag",
    "JGate",
]
