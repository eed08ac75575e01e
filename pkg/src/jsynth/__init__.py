"""Synthesis of 2-qubit unitaries from integer powers of one universal gate."""

from .circuit import GateSequence, JPower, Perm, evaluate, peephole
from .gates import JGate, PermGate, j_power, make_j
from .hypersphere import build_pole_map, prepare_state
from .kronecker import KroneckerQuery, KroneckerResult, find_power
from .numerics import op_norm_dist, phase_aligned_dist
from .synthesis import expand_perms, synth_blockdiag, synth_unitary

__version__ = "0.1.0"
