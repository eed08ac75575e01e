"""Dense complex linear algebra for 2x2 and 4x4 unitaries.

Matrices are plain ``numpy`` complex arrays.  The computational basis is
ordered (|00>, |01>, |10>, |11>), so a gate acting on the second qubit
conditioned on the first is block diagonal.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import minimize_scalar

UNITARY_TOL = 1e-10
UNIT_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)


class NotUnitaryError(ValueError):
    pass


class EigenError(RuntimeError):
    pass


@dataclass(frozen=True)
class EigenPair:
    value_angle: float
    vector: np.ndarray


def as_matrix(a, dims=(2, 4)):
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in dims:
        raise ValueError(f"expected a square matrix of dimension {dims}, got shape {m.shape}")
    return m


def _same_shape(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def unitarity_residual(m):
    m = as_matrix(m)
    return float(np.linalg.norm(m @ m.conj().T - np.eye(len(m)), 2))


def is_unitary(m, tol=UNITARY_TOL):
    return unitarity_residual(m) <= tol


def check_unitary(m, tol=UNITARY_TOL, name="matrix"):
    m = as_matrix(m)
    r = unitarity_residual(m)
    if r > tol:
        raise NotUnitaryError(f"{name} is not unitary: |M M^dag - I| = {r:.3e} > {tol:.1e}")
    return m


def check_unit(v, dim=4, tol=UNIT_TOL):
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape != (dim,):
        raise ValueError(f"expected a vector of length {dim}, got {v.shape}")
    n = np.linalg.norm(v)
    if abs(n - 1.0) > tol:
        raise ValueError(f"vector is not normalized: |v| = {n!r}")
    return v


def wrap_angle(a):
    """Map an angle to (-pi, pi]."""
    w = float(np.remainder(a + np.pi, 2 * np.pi) - np.pi)
    return np.pi if w == -np.pi else w


def mat_mul(*ms):
    out = as_matrix(ms[0])
    for m in ms[1:]:
        m = as_matrix(m)
        if m.shape != out.shape:
            raise ValueError(f"dimension mismatch: {out.shape} vs {m.shape}")
        out = out @ m
    return out


def adjoint(a):
    return as_matrix(a).conj().T


def tensor_id(a, side="left"):
    """Embed a 2x2 gate into 4x4: ``left`` gives A (x) I, ``right`` gives I (x) A."""
    a = as_matrix(a, dims=(2,))
    if side == "left":
        return np.kron(a, I2)
    if side == "right":
        return np.kron(I2, a)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def blockdiag(u, v):
    u, v = as_matrix(u, dims=(2,)), as_matrix(v, dims=(2,))
    out = np.zeros((4, 4), dtype=complex)
    out[:2, :2] = u
    out[2:, 2:] = v
    return out


def op_norm_dist(a, b):
    """Largest singular value of ``a - b``."""
    a, b = _same_shape(a, b)
    return float(np.linalg.norm(a - b, 2))


def phase_aligned_dist(a, b, candidates=()):
    """Operator-norm distance minimised over a global phase applied to ``a``.

    The trace alignment ``arg tr(a^dag b)`` seeds a coarse scan of the phase
    circle, then a bounded 1-D refinement polishes the best grid point.
    Extra phases known to the caller can be passed as ``candidates``.
    """
    a, b = _same_shape(a, b)
    diff = a.conj().T @ b
    t = np.trace(diff)
    seed = float(np.angle(t)) if abs(t) > 1e-300 else 0.0

    def f(delta):
        return float(np.linalg.norm(np.exp(1j * delta) * a - b, 2))

    n_grid = 48
    grid = seed + 2 * np.pi * np.arange(n_grid) / n_grid
    pts = [*grid, *candidates]
    vals = [f(d) for d in pts]
    k = int(np.argmin(vals))
    best_d, best = pts[k], vals[k]
    h = 2 * np.pi / n_grid
    res = minimize_scalar(f, bounds=(best_d - h, best_d + h), method="bounded",
                          options={"xatol": 1e-13})
    return min(best, float(res.fun))


def _canonical_phase(v):
    # largest-modulus entry (first on ties) made real positive
    k = int(np.argmax(np.round(np.abs(v), 12)))
    return v * np.exp(-1j * np.angle(v[k]))


def eig_unitary(m, tol=UNITARY_TOL):
    """Orthonormal eigenpairs of a unitary, sorted by eigenphase.

    A complex Schur form of a normal matrix is diagonal, so the Schur vectors
    are an orthonormal eigenbasis even inside degenerate eigenspaces.  Pairs
    are ordered by ascending angle in (-pi, pi]; ties are broken by the vector
    entries in descending lexicographic order (so the identity yields the
    standard basis in order).
    """
    m = check_unitary(m, tol)
    try:
        t, z = scipy.linalg.schur(m, output="complex")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenError(f"Schur decomposition failed: {exc}") from exc
    off = np.linalg.norm(np.triu(t, 1))
    if off > 1e-9:
        raise EigenError(f"Schur form not diagonal (off-diagonal mass {off:.3e})")
    pairs = []
    for k in range(len(m)):
        eta = wrap_angle(np.angle(t[k, k]))
        pairs.append(EigenPair(eta, _canonical_phase(z[:, k])))

    def key(p):
        ent = tuple(x for c in p.vector for x in (-round(c.real, 9), -round(c.imag, 9)))
        return (round(p.value_angle, 12), ent)

    return sorted(pairs, key=key)


def haar_unitary(rng, dim=4):
    """Haar-random unitary from the QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state(rng, dim=4):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
