"""Concrete gates built around the universal gate J(alpha, beta).

Besides J and its closed-form powers this module holds the 2x2 rotations it
is assembled from and the signed permutations it is combined with.

Conventions follow the matrices as printed for the construction:

    rz(phi)   = diag(e^{-i phi}, e^{i phi})
    ry(theta) = [[cos theta, -sin theta], [sin theta, cos theta]]
    J         = blockdiag(ry(alpha), rz(beta))

so rz/ry carry full angles in their entries.  As Bloch-sphere rotations
rz(phi) turns by 2*phi about Z and ry(theta) by 2*theta about Y.
"""

import functools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .kronecker import DEFAULT_M_MAX, KroneckerQuery, default_constants, find_power
from .numerics import I2, blockdiag, check_unitary, op_norm_dist, wrap_angle

SIGMA = np.array([[0, -1], [1, 0]], dtype=complex)


def rz(phi):
    return np.array([[np.exp(-1j * phi), 0], [0, np.exp(1j * phi)]], dtype=complex)


def ry(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def elementary(axis, angle):
    if axis == "z":
        return rz(angle)
    if axis == "y":
        return ry(angle)
    raise ValueError(f"unknown rotation axis {axis!r}")


def product(factors):
    """Matrix product of ``(axis, angle)`` factors, leftmost first."""
    out = I2
    for axis, angle in factors:
        out = out @ elementary(axis, angle)
    return out


# -- single-qubit axis/angle ------------------------------------------------


@dataclass(frozen=True)
class BlochAxisAngle:
    """u = e^{i global_phase} (cos(psi/2) I - i sin(psi/2) n.sigma),
    n = (sin theta cos phi, sin theta sin phi, cos theta)."""

    theta: float
    phi: float
    psi: float
    global_phase: float

    @property
    def axis(self):
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    def matrix(self):
        nx, ny, nz = self.axis
        n_sigma = np.array([[nz, nx - 1j * ny], [nx + 1j * ny, -nz]], dtype=complex)
        core = math.cos(self.psi / 2) * I2 - 1j * math.sin(self.psi / 2) * n_sigma
        return np.exp(1j * self.global_phase) * core


def axis_angle_of(u):
    """Rotation axis, angle and global phase of a 2x2 unitary.

    The axis is kept in the closed upper hemisphere (theta <= pi/2) and the
    angle in (-pi, pi]; a rotation by 2*pi is absorbed into the global phase.
    The identity maps to psi = 0 with the axis fixed to Z.
    """
    u = check_unitary(u, name="u")
    if u.shape != (2, 2):
        raise ValueError("axis_angle_of expects a 2x2 unitary")
    gamma = float(np.angle(np.linalg.det(u))) / 2
    su = np.exp(-1j * gamma) * u
    p, q = su[0, 0], su[1, 0]
    w = np.array([-q.imag, q.real, -p.imag])
    s = float(np.linalg.norm(w))
    psi = 2 * math.atan2(s, p.real)
    if s < 1e-300:
        n = np.array([0.0, 0.0, 1.0])
    else:
        n = w / s
        if n[2] < 0:
            n, psi = -n, -psi
    if psi > math.pi:
        psi, gamma = psi - 2 * math.pi, gamma + math.pi
    elif psi <= -math.pi:
        psi, gamma = psi + 2 * math.pi, gamma + math.pi
    theta = math.acos(min(1.0, max(-1.0, float(n[2]))))
    phi = math.atan2(n[1], n[0]) % (2 * math.pi) if s >= 1e-300 else 0.0
    return BlochAxisAngle(theta, phi, psi, wrap_angle(gamma))


@dataclass(frozen=True)
class ZYDecomposition:
    """u = e^{i global_phase} * R * rz(psi/2) * R^-1 with R = rz(phi/2) ry(theta/2).

    R carries the Z axis onto the rotation axis of u, so the middle factor
    is the same rotation performed about Z.
    """

    phi: float
    theta: float
    psi: float
    global_phase: float

    def factors(self):
        """Elementary ``(axis, angle)`` factors in matrix-product order."""
        return [
            ("z", self.phi / 2),
            ("y", self.theta / 2),
            ("z", self.psi / 2),
            ("y", -self.theta / 2),
            ("z", -self.phi / 2),
        ]

    def matrix(self):
        return np.exp(1j * self.global_phase) * product(self.factors())


def decompose_zy(u):
    aa = axis_angle_of(u)
    return ZYDecomposition(aa.phi, aa.theta, aa.psi, aa.global_phase)


# -- the universal gate ------------------------------------------------------


@dataclass(frozen=True)
class JGate:
    alpha: float
    beta: float

    @classmethod
    def default(cls):
        return cls(*default_constants())


def j_power(g, m):
    """J^m in closed form: blockdiag(ry(m alpha), rz(m beta))."""
    return blockdiag(ry(m * g.alpha), rz(m * g.beta))


def make_j(g):
    return j_power(g, 1)


def as_controlled_pair(g):
    """Targets of the two controlled gates whose product is J.

    J = C0(u0) . C1(u1) where C0 applies u0 to the second qubit when the
    first is |0>, and C1 applies u1 when it is |1>.
    """
    return ry(g.alpha), rz(g.beta)


def controlled(u, control_value):
    if control_value == 0:
        return blockdiag(u, I2)
    if control_value == 1:
        return blockdiag(I2, u)
    raise ValueError("control_value must be 0 or 1")


# -- power approximations ----------------------------------------------------


class PowerApprox(NamedTuple):
    m: int
    achieved: float
    exhausted: bool


def approx_block_pair(theta, phi, eps, g=None, m_max=DEFAULT_M_MAX):
    """J^m ~ blockdiag(ry(theta), rz(phi)); ``achieved`` is the measured operator-norm error."""
    g = g or JGate.default()
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    res = find_power(KroneckerQuery((g.alpha, g.beta), (theta, phi), eps, m_max))
    ideal = blockdiag(ry(theta), rz(phi))
    return PowerApprox(res.m, op_norm_dist(j_power(g, res.m), ideal), res.exhausted)


def approx_phase_gate(phi, eps, g=None, m_max=DEFAULT_M_MAX):
    """J^m1 ~ blockdiag(I, rz(phi))."""
    return approx_block_pair(0.0, phi, eps, g, m_max)


def approx_rotation_gate(theta, eps, g=None, m_max=DEFAULT_M_MAX):
    """J^m2 ~ blockdiag(ry(theta), I)."""
    return approx_block_pair(theta, 0.0, eps, g, m_max)


@functools.lru_cache(maxsize=64)
def _block_sigma(alpha, beta, eps, m_max):
    return approx_rotation_gate(math.pi / 2, eps, JGate(alpha, beta), m_max)


def approx_block_sigma(eps, g=None, m_max=DEFAULT_M_MAX):
    """J^m3 ~ blockdiag(sigma, I) with sigma = ry(pi/2); cached per (alpha, beta, eps)."""
    g = g or JGate.default()
    return _block_sigma(g.alpha, g.beta, float(eps), int(m_max))


# -- exchanges and permutations ----------------------------------------------


def exchange_conjugate(d):
    """sigma . diag(a, b) . sigma^-1 = diag(b, a)."""
    d = np.asarray(d, dtype=complex)
    if d.shape != (2, 2) or d[0, 1] != 0 or d[1, 0] != 0:
        raise ValueError("exchange_conjugate expects a 2x2 diagonal matrix")
    return SIGMA @ d @ SIGMA.T


@dataclass(frozen=True)
class PermGate:
    """Signed permutation: basis vector e_j maps to signs[j] * e_{perm[j]} (0-based)."""

    perm: tuple
    signs: tuple = (1, 1, 1, 1)

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        signs = tuple(int(s) for s in self.signs)
        if len(perm) != 4 or sorted(perm) != [0, 1, 2, 3]:
            raise ValueError(f"invalid permutation {self.perm!r}")
        if len(signs) != 4 or any(s not in (1, -1) for s in signs):
            raise ValueError(f"signs must be four values in (+1, -1), got {self.signs!r}")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "signs", signs)

    def matrix(self):
        out = np.zeros((4, 4), dtype=complex)
        for j, (p, s) in enumerate(zip(self.perm, self.signs)):
            out[p, j] = s
        return out

    def __matmul__(self, other):
        # (self @ other) e_j = other.signs[j] * self.signs[other.perm[j]] e_{self.perm[other.perm[j]]}
        perm = tuple(self.perm[other.perm[j]] for j in range(4))
        signs = tuple(other.signs[j] * self.signs[other.perm[j]] for j in range(4))
        return PermGate(perm, signs)

    def inverse(self):
        perm = [0] * 4
        signs = [1] * 4
        for j, (p, s) in enumerate(zip(self.perm, self.signs)):
            perm[p] = j
            signs[p] = s
        return PermGate(tuple(perm), tuple(signs))

    @property
    def is_identity(self):
        return self.perm == (0, 1, 2, 3) and self.signs == (1, 1, 1, 1)


def perm_matrix(p):
    return p.matrix()


IDENTITY_PERM = PermGate((0, 1, 2, 3))
# X (x) I: exchanges the |0.> and |1.> blocks
BLOCK_SWAP = PermGate((2, 3, 0, 1))
# exchanges the two tensor factors, |01> <-> |10>
TENSOR_SWAP = PermGate((0, 2, 1, 3))


def plane_perm(i, j):
    """Pure permutation sending e_i -> e_2 and e_j -> e_3, the rest in order."""
    if i == j or not (0 <= i < 4 and 0 <= j < 4):
        raise ValueError(f"invalid plane ({i}, {j})")
    rest = [k for k in range(4) if k not in (i, j)]
    perm = [0] * 4
    perm[rest[0]], perm[rest[1]], perm[i], perm[j] = 0, 1, 2, 3
    return PermGate(tuple(perm))


def two_level(w, i, j):
    """4x4 identity with the 2x2 ``w`` acting on coordinates (i, j)."""
    out = np.eye(4, dtype=complex)
    out[np.ix_([i, j], [i, j])] = w
    return out
