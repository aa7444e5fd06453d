"""Minimum-error discrimination of two generalized coherent states.

Covers the Helstrom bound, OOK and BPSK signal ensembles, the orthogonal
non-standard cat basis and the projective measurement built on it, plus a
brute-force optimality check and the homodyne shot-noise baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DegenerateEnsembleError
from .states import DEFAULT_TRUNCATION, FamilySpec, FockVector, TruncationPolicy, fock_coefficients, overlap

DEGENERACY_MARGIN = 1e-9


@dataclass(frozen=True, eq=False)
class BinaryEnsemble:
    """Two signal states of one family with their prior probabilities."""

    family: FamilySpec
    alpha0: float
    alpha1: float
    q0: float
    q1: float
    state0: FockVector
    state1: FockVector

    @classmethod
    def build(
        cls,
        family: FamilySpec,
        alpha0: float,
        alpha1: float,
        q0: float,
        policy: TruncationPolicy = DEFAULT_TRUNCATION,
    ) -> BinaryEnsemble:
        if not 0.0 <= q0 <= 1.0:
            raise ValueError(f"q0 must be a probability, got {q0}")
        return cls(
            family=family,
            alpha0=float(alpha0),
            alpha1=float(alpha1),
            q0=float(q0),
            q1=1.0 - float(q0),
            state0=fock_coefficients(family, alpha0, policy),
            state1=fock_coefficients(family, alpha1, policy),
        )

    @property
    def overlap(self) -> float:
        return overlap(self.state0, self.state1)

    def padded(self) -> tuple[np.ndarray, np.ndarray]:
        """Both amplitude vectors zero-padded to a common length."""
        m = max(len(self.state0), len(self.state1))
        a = np.zeros(m)
        b = np.zeros(m)
        a[: len(self.state0)] = self.state0.amplitudes
        b[: len(self.state1)] = self.state1.amplitudes
        return a, b


def make_ook(family: FamilySpec, alpha: float, q0: float, policy: TruncationPolicy = DEFAULT_TRUNCATION) -> BinaryEnsemble:
    """On-off keying: bit 0 is ``|alpha, h>``, bit 1 the vacuum ``|0, h>``."""
    return BinaryEnsemble.build(family, alpha, 0.0, q0, policy)


def make_bpsk(family: FamilySpec, alpha: float, q0: float, policy: TruncationPolicy = DEFAULT_TRUNCATION) -> BinaryEnsemble:
    """Binary phase-shift keying: ``|alpha, h>`` versus ``|-alpha, h>``."""
    return BinaryEnsemble.build(family, alpha, -alpha, q0, policy)


def helstrom_from_overlap(s: float, q0: float) -> float:
    q1 = 1.0 - q0
    return 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - 4.0 * q0 * q1 * s * s)))


def helstrom_bound(ensemble: BinaryEnsemble) -> float:
    """Maximum success probability over all two-outcome measurements."""
    return helstrom_from_overlap(ensemble.overlap, ensemble.q0)


@dataclass(frozen=True, eq=False)
class CatBasis:
    cat_plus: np.ndarray
    cat_minus: np.ndarray
    overlap_s: float

    @property
    def norm_plus(self) -> float:
        return 1.0 / math.sqrt(2.0 * (1.0 + self.overlap_s))

    @property
    def norm_minus(self) -> float:
        return 1.0 / math.sqrt(2.0 * (1.0 - self.overlap_s))


@dataclass(frozen=True)
class ProjectiveAngles:
    xi: float
    zeta: float


def _require_distinct(s: float) -> None:
    if abs(s) >= 1.0 - DEGENERACY_MARGIN:
        raise DegenerateEnsembleError(f"signal overlap {s!r} is too close to 1 for a cat basis")


def cat_basis(ensemble: BinaryEnsemble) -> CatBasis:
    """Orthonormal cats ``N_pm (|alpha0, h> +- |alpha1, h>)`` spanning the signal plane."""
    s = ensemble.overlap
    _require_distinct(s)
    a, b = ensemble.padded()
    plus = (a + b) / math.sqrt(2.0 * (1.0 + s))
    minus = (a - b) / math.sqrt(2.0 * (1.0 - s))
    return CatBasis(cat_plus=plus, cat_minus=minus, overlap_s=s)


def optimal_projective_angles(ensemble: BinaryEnsemble) -> ProjectiveAngles:
    """Angles at which the cat-basis projective measurement reaches the Helstrom bound.

    ``2 xi = atan2(sqrt(1 - s^2), (q0 - q1) s)`` picks the maximizing branch
    for every sign of ``(q0 - q1) s``; ``zeta = 0``.
    """
    s = ensemble.overlap
    _require_distinct(s)
    xi = 0.5 * math.atan2(math.sqrt(1.0 - s * s), (ensemble.q0 - ensemble.q1) * s)
    return ProjectiveAngles(xi=xi, zeta=0.0)


def projection_vectors(basis: CatBasis, xi: float, zeta: float) -> tuple[np.ndarray, np.ndarray]:
    phase = complex(math.cos(zeta), math.sin(zeta))
    pi0 = math.cos(xi) * basis.cat_plus + phase * math.sin(xi) * basis.cat_minus
    pi1 = math.sin(xi) * basis.cat_plus - phase * math.cos(xi) * basis.cat_minus
    return pi0, pi1


def projective_success(ensemble: BinaryEnsemble, xi: float, zeta: float) -> float:
    """Success probability of the projective measurement ``{|pi_0><pi_0|, |pi_1><pi_1|}``.

    Evaluated directly from the amplitude vectors, not from a closed form.
    """
    basis = cat_basis(ensemble)
    pi0, pi1 = projection_vectors(basis, xi, zeta)
    a, b = ensemble.padded()
    p0 = abs(np.vdot(pi0, a)) ** 2
    p1 = abs(np.vdot(pi1, b)) ** 2
    return float(ensemble.q0 * p0 + ensemble.q1 * p1)


def brute_force_optimum(ensemble: BinaryEnsemble, grid: int = 2000) -> float:
    """Best projective success over a ``xi`` grid with ``zeta in {0, pi}``, ternary-refined.

    Every rank-one projective measurement inside the real signal plane is
    reachable this way, which makes it an independent check on the closed-form
    optimum.
    """
    if grid < 100:
        raise ValueError("grid must be at least 100")
    step = math.pi / grid
    best = -math.inf
    for zeta in (0.0, math.pi):
        xs = np.arange(grid) * step
        vals = [projective_success(ensemble, x, zeta) for x in xs]
        i = int(np.argmax(vals))
        lo, hi = xs[i] - step, xs[i] + step
        for _ in range(100):
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            if projective_success(ensemble, m1, zeta) < projective_success(ensemble, m2, zeta):
                lo = m1
            else:
                hi = m2
        best = max(best, vals[i], projective_success(ensemble, 0.5 * (lo + hi), zeta))
    return best


def shot_noise_limit(alpha: float) -> float:
    """Homodyne BPSK success probability ``1 - erfc(sqrt(2) alpha) / 2`` for S-CS."""
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    return 1.0 - 0.5 * specfun.erfc(math.sqrt(2.0) * alpha)
