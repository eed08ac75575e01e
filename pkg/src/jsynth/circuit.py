"""Gate-sequence IR: J powers and signed permutations, with error accounting.

A sequence ``[g_0, g_1, ..., g_k]`` denotes the matrix product
``g_0 @ g_1 @ ... @ g_k``; acting on a state, the last gate is applied first.

Every ``JPower`` remembers the continuous gate it stands in for (``ideal``)
and the measured operator-norm distance to it (``step_error``).  Because the
operator norm is unitarily invariant and subadditive over products, the
evaluated sequence is within ``total_budget`` of the product of the ideals.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .gates import (
    BLOCK_SWAP,
    TENSOR_SWAP,
    JGate,
    PermGate,
    approx_block_pair,
    j_power,
    plane_perm,
    ry,
    rz,
)
from .kronecker import DEFAULT_M_MAX
from .numerics import I4, blockdiag, op_norm_dist

NEGLIGIBLE_ANGLE = 1e-14


@dataclass(frozen=True)
class JPower:
    m: int
    step_error: float = 0.0
    # J applied with its two qubits exchanged, i.e. SWAP . J^m . SWAP
    swapped: bool = False
    exhausted: bool = False
    ideal: np.ndarray = field(default=None, repr=False, compare=False)

    def matrix(self, g):
        mat = j_power(g, self.m)
        if self.swapped:
            s = TENSOR_SWAP.matrix()
            mat = s @ mat @ s
        return mat

    def ideal_matrix(self, g):
        return self.matrix(g) if self.ideal is None else self.ideal


@dataclass(frozen=True)
class Perm:
    perm: PermGate

    step_error = 0.0

    def matrix(self, g=None):
        return self.perm.matrix()

    def ideal_matrix(self, g=None):
        return self.perm.matrix()


@dataclass
class GateSequence:
    """Ordered gates; ``target = e^{i global_phase} * (product of ideals)``."""

    gates: list
    alpha: float
    beta: float
    global_phase: float = 0.0

    @property
    def jgate(self):
        return JGate(self.alpha, self.beta)

    @property
    def total_budget(self):
        return math.fsum(g.step_error for g in self.gates)

    @property
    def exhausted_steps(self):
        return sum(1 for g in self.gates if isinstance(g, JPower) and g.exhausted)

    def __len__(self):
        return len(self.gates)

    def ideal(self):
        out = I4
        for gate in self.gates:
            out = out @ gate.ideal_matrix(self.jgate)
        return np.exp(1j * self.global_phase) * out


def evaluate(seq):
    """Exact product of the materialised gates."""
    g = seq.jgate
    out = I4.copy()
    for gate in seq.gates:
        out = out @ gate.matrix(g)
    return out


def peephole(seq):
    """Merge adjacent J powers, compose adjacent permutations, drop identities.

    Merged J powers take the product of their ideals as the new ideal and the
    step error is re-measured against it, so the budget never grows.
    """
    g = seq.jgate
    out = []
    for gate in seq.gates:
        cur = gate
        while out:
            prev = out[-1]
            if isinstance(prev, Perm) and isinstance(cur, Perm):
                cur = Perm(prev.perm @ cur.perm)
            elif isinstance(prev, JPower) and isinstance(cur, JPower) and prev.swapped == cur.swapped:
                ideal = prev.ideal_matrix(g) @ cur.ideal_matrix(g)
                merged = JPower(prev.m + cur.m, 0.0, cur.swapped, prev.exhausted or cur.exhausted)
                cur = JPower(merged.m, op_norm_dist(merged.matrix(g), ideal), merged.swapped,
                             merged.exhausted, ideal)
            else:
                break
            out.pop()
        if _is_trivial(cur):
            continue
        out.append(cur)
    return GateSequence(out, seq.alpha, seq.beta, seq.global_phase)


def _is_trivial(gate):
    if isinstance(gate, Perm):
        return gate.perm.is_identity
    return gate.m == 0 and gate.step_error <= 1e-15


def _negligible(angle):
    return abs(math.remainder(angle, 2 * math.pi)) <= NEGLIGIBLE_ANGLE


class Emitter:
    """Turns elementary block rotations into J powers via Kronecker searches.

    ``lower``/``upper`` realise products of ``("z"|"y", angle)`` factors on
    the lower or upper 2x2 block; ``two_level`` moves a lower-block product
    onto an arbitrary coordinate plane by exact permutation conjugation.
    """

    def __init__(self, eps_step, g=None, m_max=DEFAULT_M_MAX):
        if not eps_step > 0:
            raise ValueError(f"eps_step must be positive, got {eps_step}")
        self.g = g or JGate.default()
        self.eps = float(eps_step)
        self.m_max = int(m_max)

    def sequence(self, gates, global_phase=0.0):
        return GateSequence(list(gates), self.g.alpha, self.g.beta, global_phase)

    def power(self, theta, phi, swapped=False):
        """One J power approximating blockdiag(ry(theta), rz(phi))."""
        m, achieved, exhausted = approx_block_pair(theta, phi, self.eps, self.g, self.m_max)
        ideal = blockdiag(ry(theta), rz(phi))
        if swapped:
            s = TENSOR_SWAP.matrix()
            ideal = s @ ideal @ s
        return JPower(m, achieved, swapped, exhausted, ideal)

    def lower(self, factors):
        out = []
        for axis, angle in factors:
            if _negligible(angle):
                continue
            if axis == "z":
                out.append(self.power(0.0, angle))
            else:
                out += [Perm(BLOCK_SWAP), self.power(angle, 0.0), Perm(BLOCK_SWAP)]
        return out

    def upper(self, factors):
        out = []
        for axis, angle in factors:
            if _negligible(angle):
                continue
            if axis == "y":
                out.append(self.power(angle, 0.0))
            else:
                out += [Perm(BLOCK_SWAP), self.power(0.0, angle), Perm(BLOCK_SWAP)]
        return out

    def two_level(self, i, j, factors):
        inner = self.lower(factors)
        if not inner:
            return []
        p = plane_perm(i, j)
        if p.is_identity:
            return inner
        return [Perm(p.inverse()), *inner, Perm(p)]
