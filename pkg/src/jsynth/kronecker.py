"""Simultaneous phase approximation by integer multiples.

If alpha_1..alpha_n together with pi are linearly independent over the
rationals, the points (m*alpha_1, ..., m*alpha_n) are dense modulo 2*pi.  The
search here is the operational side of that fact: scan m = 1, 2, ... and stop
at the first m whose phases all land within epsilon of the targets on the unit
circle.
"""

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2 * math.pi
DEFAULT_M_MAX = 10**8

_CHUNK_MIN = 1 << 13
_CHUNK_MAX = 1 << 20


@dataclass(frozen=True)
class KroneckerQuery:
    alphas: tuple
    targets: tuple
    epsilon: float
    m_max: int = DEFAULT_M_MAX

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "targets", tuple(float(x) for x in self.targets))
        if not self.alphas:
            raise ValueError("alphas must be non-empty")
        if len(self.alphas) != len(self.targets):
            raise ValueError(
                f"alphas and targets differ in length ({len(self.alphas)} vs {len(self.targets)})"
            )
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if int(self.m_max) < 1:
            raise ValueError(f"m_max must be a positive integer, got {self.m_max}")
        object.__setattr__(self, "m_max", int(self.m_max))


@dataclass(frozen=True)
class KroneckerResult:
    m: int
    achieved_errors: tuple
    exhausted: bool

    @property
    def max_error(self):
        return max(self.achieved_errors)


def circle_dist(a, b):
    """Chordal distance |e^{ia} - e^{ib}| between two phases."""
    return abs(cmath.exp(1j * a) - cmath.exp(1j * b))


def default_constants():
    """(sqrt 2, sqrt 3): rationally independent of each other and of pi."""
    return math.sqrt(2.0), math.sqrt(3.0)


def _errors(m, alphas, targets):
    # int * float rounds exactly like the vectorised float64 product
    return tuple(circle_dist(m * a, x) for a, x in zip(alphas, targets))


def find_power(q):
    """Smallest m in [1, m_max] with every |e^{i m a_j} - e^{i x_j}| < epsilon.

    Chunks of m are screened in vectorised form by angular distance measured
    in turns (with slack for the rounding of ``m * alpha`` at large m), first
    coordinate first; survivors are confirmed in ascending order with the
    exact chordal test, so the returned m is the minimum.  If no m qualifies,
    the m with the smallest worst-coordinate distance is returned with
    ``exhausted=True``.
    """
    rates = np.array(q.alphas) / TWO_PI
    offsets = np.array(q.targets) / TWO_PI
    eps = q.epsilon
    thr = 0.5 if eps >= 2.0 else math.asin(eps / 2.0) / math.pi
    # |m*alpha| ~ 1e8 carries ~1e-8 absolute rounding; screen generously, confirm exactly
    thr += 1e-10 + 64 * np.finfo(float).eps * float(np.max(np.abs(rates))) * q.m_max

    best_m, best_d = 1, math.inf
    start, size = 1, _CHUNK_MIN
    while start <= q.m_max:
        stop = min(start + size, q.m_max + 1)
        m = np.arange(start, stop, dtype=np.float64)
        t = m * rates[0] - offsets[0]
        d = np.abs(t - np.rint(t))
        cand = np.flatnonzero(d < max(thr, best_d))
        worst = d[cand]
        for r, x in zip(rates[1:], offsets[1:]):
            t = m[cand] * r - x
            np.maximum(worst, np.abs(t - np.rint(t)), out=worst)
        for i in cand[worst < thr]:
            mi = start + int(i)
            errs = _errors(mi, q.alphas, q.targets)
            if max(errs) < eps:
                return KroneckerResult(mi, errs, False)
        if len(worst):
            k = int(np.argmin(worst))
            if worst[k] < best_d:
                best_m, best_d = start + int(cand[k]), float(worst[k])
        start = stop
        size = min(2 * size, _CHUNK_MAX)
    return KroneckerResult(best_m, _errors(best_m, q.alphas, q.targets), True)


def small_relation(values, bound, constant=True):
    """Best integer relation c_1 v_1 + ... + c_n v_n (+ s) ~ 0 with |c_j| <= bound.

    Returns ``(coeffs, s, residual)`` minimising the residual over nonzero
    coefficient vectors; with ``constant=False`` the integer s is fixed to 0.
    This is a heuristic screen for rational dependence: a tiny residual at
    small ``bound`` flags a likely exact relation, while independent values
    still show residuals shrinking roughly like bound**-n.
    """
    values = [float(v) for v in values]
    if not values:
        raise ValueError("values must be non-empty")
    rng = np.arange(-bound, bound + 1)
    last = values[-1] * rng
    best = (None, 0, math.inf)
    for head in itertools.product(range(-bound, bound + 1), repeat=len(values) - 1):
        tot = sum(c * v for c, v in zip(head, values)) + last
        near = np.round(tot) if constant else np.zeros_like(tot)
        res = np.abs(tot - near)
        if not any(head):
            res[bound] = np.inf  # the all-zero vector
        k = int(np.argmin(res))
        if res[k] < best[2]:
            best = ((*head, int(rng[k])), -int(near[k]), float(res[k]))
    return best
