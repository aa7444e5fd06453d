"""Indirect measurement through a resonant Jaynes-Cummings interaction.

The signal mode couples to a two-level atom prepared in ``|g>``; after an
accumulated interaction ``Phi`` the atom is measured in the basis
``|pi_0> = cos(theta)|g> + e^{i phi} sin(theta)|e>``,
``|pi_1> = sin(theta)|g> - e^{i phi} cos(theta)|e>``.  On the signal this
acts through two Kraus operators whose Fock-basis action is closed form::

    K_0|n> = cos(theta) cos(Phi sqrt n) |n> - i e^{-i phi} sin(theta) sin(Phi sqrt n) |n-1>
    K_1|n> = sin(theta) cos(Phi sqrt n) |n> + i e^{-i phi} cos(theta) sin(Phi sqrt n) |n-1>
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .discrimination import BinaryEnsemble, helstrom_bound
from .optimizer import OptimizerConfig, Run, best_run, nelder_mead
from .states import FockVector

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MeasurementAngles:
    theta: float
    phi: float
    Phi: float

    def as_array(self) -> np.ndarray:
        return np.array([self.theta, self.phi, self.Phi])

    def canonical(self) -> MeasurementAngles:
        """Equivalent angles with ``theta`` in [0, pi), ``phi`` in (-pi, pi], ``Phi >= 0``.

        Uses the exact symmetries ``theta -> theta + pi`` (global sign of both
        Kraus operators) and ``(phi, Phi) -> (phi + pi, -Phi)``.
        """
        theta, phi, Phi = self.theta, self.phi, self.Phi
        if Phi < 0:
            Phi = -Phi
            phi += math.pi
        theta = math.fmod(theta, math.pi)
        if theta < 0:
            theta += math.pi
        if theta >= math.pi:
            # a tiny negative theta rounds up to pi
            theta = 0.0
        phi = math.remainder(phi, TWO_PI)
        if phi <= -math.pi:
            phi += TWO_PI
        return MeasurementAngles(theta, phi, Phi)


def _amplitudes(v) -> np.ndarray:
    return v.amplitudes if isinstance(v, FockVector) else np.asarray(v)


def kraus_apply(outcome: int, v, a: MeasurementAngles) -> np.ndarray:
    """Unnormalized amplitudes of ``K_outcome |v>`` (complex)."""
    c = _amplitudes(v)
    root_n = np.sqrt(np.arange(len(c)))
    lowered = np.zeros(len(c), dtype=complex)
    lowered[:-1] = np.sin(a.Phi * root_n[1:]) * c[1:]
    diagonal = np.cos(a.Phi * root_n) * c
    phase = np.exp(-1j * a.phi)
    if outcome == 0:
        return math.cos(a.theta) * diagonal - 1j * phase * math.sin(a.theta) * lowered
    if outcome == 1:
        return math.sin(a.theta) * diagonal + 1j * phase * math.cos(a.theta) * lowered
    raise ValueError(f"outcome must be 0 or 1, got {outcome!r}")


def outcome_probability(outcome: int, v, a: MeasurementAngles) -> float:
    """``<v| K_y^dagger K_y |v>``; summing the per-level terms ``F_y(n)`` once."""
    k = kraus_apply(outcome, v, a)
    return float(np.vdot(k, k).real)


def success_probability(ensemble: BinaryEnsemble, a: MeasurementAngles) -> float:
    return ensemble.q0 * outcome_probability(0, ensemble.state0, a) + ensemble.q1 * outcome_probability(
        1, ensemble.state1, a
    )


def gap_percent(ensemble: BinaryEnsemble, p_ind: float, p_hel: float | None = None) -> float:
    """Shortfall of ``p_ind`` below the Helstrom bound, in percent.

    Values above the bound by at most 1e-9 are numerical noise and reported as 0.
    """
    if p_hel is None:
        p_hel = helstrom_bound(ensemble)
    gap = p_hel - p_ind
    if -1e-9 <= gap < 0:
        gap = 0.0
    return 100.0 * gap / p_hel


class _Terms:
    """Precomputed weights of the objective for real amplitude vectors.

    With ``C_n = cos(Phi sqrt n)``, ``S_n = sin(Phi sqrt n)`` and state ``y``::

        P(0 | psi_0) = cos^2(theta) a_0 + sin^2(theta) (|c_0|^2 - a_0) - sin(phi) sin(2 theta) x_0
        P(1 | psi_1) = sin^2(theta) a_1 + cos^2(theta) (|c_1|^2 - a_1) + sin(phi) sin(2 theta) x_1

    where ``a_y = sum c_n^2 C_n^2`` and ``x_y = sum c_n c_{n+1} C_n S_{n+1}``.
    """

    def __init__(self, ensemble: BinaryEnsemble, cutoff: float = 0.0):
        c0, c1 = ensemble.padded()
        keep = np.nonzero((np.abs(c0) > cutoff) | (np.abs(c1) > cutoff))[0]
        size = int(keep[-1]) + 2 if keep.size else 1
        size = min(size, len(c0))
        c0, c1 = c0[:size], c1[:size]
        self.q0, self.q1 = ensemble.q0, ensemble.q1
        self.root_n = np.sqrt(np.arange(size))
        self.squares = np.vstack([c0 * c0, c1 * c1])
        self.cross = np.vstack([c0[:-1] * c0[1:], c1[:-1] * c1[1:]])
        self.norms = self.squares.sum(axis=1)

    def quantities(self, cos_t: np.ndarray, sin_t: np.ndarray):
        # first axis runs over Fock levels; a trailing axis of Phi samples is allowed
        a = self.squares @ (cos_t * cos_t)
        x = self.cross @ (cos_t[:-1] * sin_t[1:])
        return a, x

    def matrix(self, a, x, sin_phi=1.0):
        """Entries of the 2x2 form in ``(cos(theta), sin(theta))``."""
        q0, q1 = self.q0, self.q1
        m00 = q0 * a[0] + q1 * (self.norms[1] - a[1])
        m11 = q0 * (self.norms[0] - a[0]) + q1 * a[1]
        m01 = sin_phi * (q1 * x[1] - q0 * x[0])
        return m00, m11, m01

    def value(self, theta: float, phi: float, Phi: float) -> float:
        arg = Phi * self.root_n
        a, x = self.quantities(np.cos(arg), np.sin(arg))
        m00, m11, m01 = self.matrix(a, x, math.sin(phi))
        ct, st = math.cos(theta), math.sin(theta)
        return float(ct * ct * m00 + st * st * m11 + 2.0 * ct * st * m01)


def jc_objective(ensemble: BinaryEnsemble) -> Callable[[np.ndarray], float]:
    """Fast real-arithmetic form of :func:`success_probability` on ``x = (theta, phi, Phi)``."""
    terms = _Terms(ensemble)

    def objective(x):
        return terms.value(x[0], x[1], x[2])

    return objective


def profile(ensemble: BinaryEnsemble, Phi) -> tuple[np.ndarray, np.ndarray]:
    """Best success probability over ``(theta, phi)`` at each ``Phi``, and the maximizing ``theta``.

    For real amplitudes the objective is affine in ``sin(phi)`` and, at fixed
    ``(phi, Phi)``, a quadratic form in ``(cos(theta), sin(theta))``; its top
    eigenvalue at ``sin(phi) = 1`` is the maximum. The returned angle pairs
    with ``phi = pi/2``.
    """
    terms = _Terms(ensemble)
    Phi = np.atleast_1d(np.asarray(Phi, dtype=float))
    arg = np.multiply.outer(terms.root_n, Phi)
    a, x = terms.quantities(np.cos(arg), np.sin(arg))
    return _top_eigen(terms, a, x)


def _top_eigen(terms: _Terms, a, x):
    m00, m11, m01 = terms.matrix(a, x)
    half_diff = 0.5 * (m00 - m11)
    top = 0.5 * (m00 + m11) + np.sqrt(half_diff * half_diff + m01 * m01)
    theta = 0.5 * np.arctan2(2.0 * m01, m00 - m11)
    return top, theta


@dataclass(frozen=True)
class ScanConfig:
    """Long-range ``Phi`` scan that seeds the local search.

    The profile over ``(theta, phi)`` is sampled on ``[0, phi_max]`` with
    spacing ``step``; the ``refine`` best local maxima are polished by golden
    section and the top ``seeds`` become Nelder-Mead starts.
    """

    phi_max: float = 2.0e5
    step: float = 0.05
    refine: int = 1024
    seeds: int = 4
    chunk: int = 8192
    cutoff: float = 1e-10

    def __post_init__(self):
        if self.phi_max < 0 or not self.step > 0:
            raise ValueError("phi_max must be >= 0 and step > 0")
        if self.seeds < 0 or self.refine < self.seeds:
            raise ValueError("need 0 <= seeds <= refine")


def _golden_refine(terms: _Terms, lo: np.ndarray, hi: np.ndarray, iterations: int = 48):
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0

    def g(p):
        arg = np.multiply.outer(terms.root_n, p)
        return _top_eigen(terms, *terms.quantities(np.cos(arg), np.sin(arg)))[0]

    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f1, f2 = g(x1), g(x2)
    for _ in range(iterations):
        left = f1 >= f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        x2n = np.where(left, x1, lo + inv_phi * (hi - lo))
        x1n = np.where(left, hi - inv_phi * (hi - lo), x2)
        f2n = np.where(left, f1, np.nan)
        f1n = np.where(left, np.nan, f2)
        x1, x2 = x1n, x2n
        need1 = np.isnan(f1n)
        need2 = np.isnan(f2n)
        if need1.any():
            f1n[need1] = g(x1[need1])
        if need2.any():
            f2n[need2] = g(x2[need2])
        f1, f2 = f1n, f2n
    mid = 0.5 * (lo + hi)
    return mid, g(mid)


def scan_seeds(ensemble: BinaryEnsemble, scan: ScanConfig) -> list[tuple[float, float, float]]:
    """Starting points ``(theta, pi/2, Phi)`` at the best peaks of the ``Phi`` profile."""
    if scan.seeds == 0 or scan.phi_max == 0:
        return []
    terms = _Terms(ensemble, scan.cutoff)
    root_n = terms.root_n
    steps = np.arange(scan.chunk) * scan.step
    rotation = np.exp(1j * np.multiply.outer(root_n, steps))
    total = int(math.floor(scan.phi_max / scan.step)) + 1

    values = np.empty(total)
    for begin in range(0, total, scan.chunk):
        count = min(scan.chunk, total - begin)
        start = begin * scan.step
        z = np.exp(1j * start * root_n)[:, None] * rotation[:, :count]
        a, x = terms.quantities(z.real, z.imag)
        values[begin : begin + count] = _top_eigen(terms, a, x)[0]

    interior = np.nonzero((values[1:-1] >= values[:-2]) & (values[1:-1] >= values[2:]))[0] + 1
    if interior.size == 0:
        interior = np.array([min(max(int(np.argmax(values)), 1), total - 2)])
    # rank peaks by a parabola through the three samples around each one
    left, mid, right = values[interior - 1], values[interior], values[interior + 1]
    curvature = left - 2.0 * mid + right
    with np.errstate(divide="ignore", invalid="ignore"):
        shift = np.where(curvature < 0, 0.5 * (left - right) / curvature, 0.0)
    estimate = mid - 0.25 * (left - right) * shift
    order = np.argsort(-estimate, kind="stable")[: scan.refine]
    peaks = np.sort(interior[order]) * scan.step
    lo = np.maximum(peaks - scan.step, 0.0)
    hi = peaks + scan.step
    where, top = _golden_refine(terms, lo, hi)
    ranked = np.argsort(-top, kind="stable")[: scan.seeds]
    _, theta = profile(ensemble, where[ranked])
    return [(float(t), math.pi / 2, float(p)) for t, p in zip(theta, where[ranked])]


def default_starts() -> tuple[tuple[float, float, float], ...]:
    thetas = [k * math.pi / 8 for k in (1, 3, 5, 7)]
    phis = [math.pi / 2, -math.pi / 2]
    Phis = [0.25 + 0.5 * k for k in range(12)]
    return tuple((t, p, P) for t in thetas for p in phis for P in Phis)


def default_config() -> OptimizerConfig:
    return OptimizerConfig(starts=default_starts())


@dataclass(frozen=True)
class JCResult:
    p_success: float
    angles: MeasurementAngles
    p_helstrom: float
    delta_percent: float
    starts_used: int
    converged: bool
    runs: list[Run] = field(default_factory=list, repr=False, compare=False)


def optimize(
    ensemble: BinaryEnsemble,
    cfg: OptimizerConfig | None = None,
    scan: ScanConfig | None = ScanConfig(),
) -> JCResult:
    """Maximize the indirect-measurement success probability over ``(theta, phi, Phi)``.

    Nelder-Mead runs from every start in ``cfg`` plus the seeds of the
    long-range ``Phi`` scan (``scan=None`` disables it). The best run is
    returned; ties go to the lexicographically smallest canonical angles.
    """
    cfg = cfg or default_config()
    starts = list(cfg.starts)
    if scan is not None:
        starts += scan_seeds(ensemble, scan)
    cfg = replace(cfg, starts=tuple(starts))

    objective = jc_objective(ensemble)
    runs = [
        nelder_mead(objective, s, cfg.simplex_scale, cfg.tolerance, cfg.max_iterations)
        for s in cfg.starts
    ]

    def canonical_key(run: Run):
        c = MeasurementAngles(*run.point).canonical()
        return (c.theta, c.phi, c.Phi)

    best = best_run(runs, key=canonical_key)
    angles = MeasurementAngles(*best.point).canonical()
    p = success_probability(ensemble, angles)
    p_hel = helstrom_bound(ensemble)
    return JCResult(
        p_success=p,
        angles=angles,
        p_helstrom=p_hel,
        delta_percent=gap_percent(ensemble, p, p_hel),
        starts_used=len(runs),
        converged=best.converged,
        runs=runs,
    )
