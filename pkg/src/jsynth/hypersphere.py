"""Telescopic hyperspherical coordinates on C^4 and the rotation to the pole.

A unit vector is written as

    w = sin(psi) e^{i phi1}
    x = cos(psi) sin(theta) e^{i phi2}
    y = cos(psi) cos(theta) sin(phi)
    z = cos(psi) cos(theta) cos(phi) e^{i phi3}

(the third coordinate real, fixing the global phase).  R = R3 R2 R1 sends it
to a phase times (0, 0, 0, 1).  Each factor is a real plane rotation into the
z coordinate preceded by a two-entry phase that makes the rotated pair share
one phase.  The phase exponents are

    R1:  diag(1, 1, e^{i phi3/2}, e^{-i phi3/2})          plane (y, z)
    R2:  diag(1, e^{-i c2}, 1, e^{i c2}),  c2 = (phi2 - phi3/2) / 2
    R3:  diag(e^{-i c3}, 1, 1, e^{i c3}),  c3 = (phi1 - (phi2 + phi3/2)/2) / 2

leaving the pole phase (phi1 + phi2/2 + phi3/4) / 2.
"""

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Emitter, evaluate, peephole
from .kronecker import DEFAULT_M_MAX
from .numerics import check_unit, wrap_angle

TWO_PI = 2 * math.pi
POLE = np.array([0, 0, 0, 1], dtype=complex)


@dataclass(frozen=True)
class HypersphericalCoords:
    psi: float = 0.0
    theta: float = 0.0
    phi: float = 0.0
    phi1: float = 0.0
    phi2: float = 0.0
    phi3: float = 0.0


def from_coords(c):
    cp, ct = math.cos(c.psi), math.cos(c.theta)
    return np.array([
        math.sin(c.psi) * np.exp(1j * c.phi1),
        cp * math.sin(c.theta) * np.exp(1j * c.phi2),
        cp * ct * math.sin(c.phi),
        cp * ct * math.cos(c.phi) * np.exp(1j * c.phi3),
    ], dtype=complex)


def _phase(z):
    return float(np.angle(z)) % TWO_PI if z != 0 else 0.0


def to_coords(v):
    """Inverse of ``from_coords`` up to a global phase.

    Returns ``(coords, gauge_phase)`` with ``from_coords(coords) ==
    e^{-i gauge_phase} v``.  The gauge makes the third coordinate real
    non-negative; when it vanishes the first nonzero of the fourth, second
    and first coordinates is made real instead.  Phases of zero coordinates
    are set to 0.
    """
    v = check_unit(v)
    for k in (2, 3, 1, 0):
        if v[k] != 0:
            gauge = float(np.angle(v[k]))
            break
    else:  # pragma: no cover - excluded by check_unit
        raise ValueError("zero vector")
    u = v * np.exp(-1j * gauge)
    u[k] = abs(v[k])  # exactly real, so its phase cannot wrap to 2 pi
    w, x, y, z = u
    aw, ax, ay, az = abs(w), abs(x), abs(y), abs(z)
    psi = math.atan2(aw, math.sqrt(ax * ax + ay * ay + az * az))
    theta = math.atan2(ax, math.sqrt(ay * ay + az * az))
    phi = math.atan2(ay, az)
    c = HypersphericalCoords(psi, theta, phi, _phase(w), _phase(x), _phase(z))
    return c, gauge


def r_phases(c):
    """The two-entry phase exponents (c2, c3) and the pole phase for coords ``c``."""
    c2 = (c.phi2 - c.phi3 / 2) / 2
    c3 = (c.phi1 - (c.phi2 + c.phi3 / 2) / 2) / 2
    pole = (c.phi1 + c.phi2 / 2 + c.phi3 / 4) / 2
    return c2, c3, pole


def _plane_rotation(i, j, angle):
    r = np.eye(4, dtype=complex)
    cs, sn = math.cos(angle), math.sin(angle)
    r[i, i], r[i, j], r[j, i], r[j, j] = cs, -sn, sn, cs
    return r


def build_r1(c):
    ph = np.diag([1, 1, np.exp(1j * c.phi3 / 2), np.exp(-1j * c.phi3 / 2)])
    return _plane_rotation(2, 3, c.phi) @ ph


def build_r2(c):
    c2, _, _ = r_phases(c)
    ph = np.diag([1, np.exp(-1j * c2), 1, np.exp(1j * c2)])
    return _plane_rotation(1, 3, c.theta) @ ph


def build_r3(c):
    _, c3, _ = r_phases(c)
    ph = np.diag([np.exp(-1j * c3), 1, 1, np.exp(1j * c3)])
    return _plane_rotation(0, 3, c.psi) @ ph


def r_factors(c):
    """R1, R2, R3 as ``(plane, lower-block factors)`` in application order.

    On its plane (k, 3) each factor is ry(angle) . rz(phase) in the 2x2
    conventions of :mod:`jsynth.gates`.
    """
    c2, c3, _ = r_phases(c)
    return [
        ((2, 3), [("y", c.phi), ("z", -c.phi3 / 2)]),
        ((1, 3), [("y", c.theta), ("z", c2)]),
        ((0, 3), [("y", c.psi), ("z", c3)]),
    ]


def inverse_factors(factors):
    return [(axis, -angle) for axis, angle in reversed(factors)]


@dataclass(frozen=True)
class PoleMap:
    r: np.ndarray
    residual_phase: float
    coords: HypersphericalCoords
    gauge_phase: float


def build_pole_map(v):
    v = check_unit(v)
    c, gauge = to_coords(v)
    r = build_r3(c) @ build_r2(c) @ build_r1(c)
    return PoleMap(r, wrap_angle(np.angle((r @ v)[3])), c, gauge)


@dataclass
class StatePreparation:
    target: np.ndarray
    sequence: object
    state: np.ndarray
    fidelity: float

    @property
    def total_budget(self):
        return self.sequence.total_budget


def pole_inverse_gates(emitter, c):
    """Gates for R^-1 = R1^-1 R2^-1 R3^-1 in matrix-product order."""
    gates = []
    for (i, j), fs in r_factors(c):
        gates += emitter.two_level(i, j, inverse_factors(fs))
    return gates


def pole_gates(emitter, c):
    """Gates for R = R3 R2 R1 in matrix-product order."""
    gates = []
    for (i, j), fs in reversed(r_factors(c)):
        gates += emitter.two_level(i, j, fs)
    return gates


def prepare_state(v, eps_step, g=None, m_max=DEFAULT_M_MAX, optimize=True):
    """Synthesise R^-1 so that applying the sequence to |11> gives ``v`` up to phase."""
    v = check_unit(np.asarray(v, dtype=complex))
    em = Emitter(eps_step, g, m_max)
    pm = build_pole_map(v)
    seq = em.sequence(pole_inverse_gates(em, pm.coords), global_phase=pm.residual_phase)
    if optimize:
        seq = peephole(seq)
    state = evaluate(seq) @ POLE
    return StatePreparation(v, seq, state, float(abs(np.vdot(v, state))))
