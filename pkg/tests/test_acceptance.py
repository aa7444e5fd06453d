"""The eight acceptance criteria, one test each, with a pass/fail summary line."""

import math
import time

import mpmath
import numpy as np
import pytest

from nscs import cli
from nscs.discrimination import helstrom_bound, make_bpsk, make_ook, optimal_projective_angles, projective_success
from nscs.jcmodel import MeasurementAngles, kraus_apply, outcome_probability, success_probability
from nscs.states import FamilySpec, fock_coefficients, mandel_q
from test_jcmodel import series_kraus

FAMILIES = [FamilySpec.scs(), FamilySpec.oscs(3), FamilySpec.bgcs(0.5), FamilySpec.msgcs()]


def test_criterion_1_projective_equals_helstrom(acceptance_report):
    t0 = time.perf_counter()
    worst = 0.0
    for family in FAMILIES:
        for alpha in 0.2 * np.arange(1, 9):
            for q0 in 0.1 * np.arange(1, 10):
                ens = make_bpsk(family, alpha, q0)
                angles = optimal_projective_angles(ens)
                worst = max(worst, abs(projective_success(ens, angles.xi, angles.zeta) - helstrom_bound(ens)))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-10 and elapsed < 5
    acceptance_report(1, ok, f"max |p_proj - p_hel| = {worst:.2e} over 288 ensembles (< 1e-10), {elapsed:.2f} s")
    assert ok


def test_criterion_2_overlap_closed_forms(acceptance_report):
    t0 = time.perf_counter()
    worst = 0.0
    for alpha in 0.1 * np.arange(1, 11):
        u = alpha * alpha
        pairs = [(FamilySpec.scs(), math.exp(-2 * u))]
        pairs += [(FamilySpec.oscs(nj), ((1 - u) / (1 + u)) ** nj) for nj in (1, 3, 5)]
        bg = mpmath.besselj(0, 2 * alpha) / mpmath.besseli(0, 2 * alpha)
        pairs.append((FamilySpec.bgcs(0.5), float(bg)))
        for family, expected in pairs:
            worst = max(worst, abs(make_bpsk(family, alpha, 0.5).overlap - expected))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-10 and elapsed < 1
    acceptance_report(2, ok, f"max overlap error = {worst:.2e} (< 1e-10), {elapsed:.2f} s")
    assert ok


def test_criterion_3_indirect_measurement_gap(acceptance_report):
    t0 = time.perf_counter()
    panels = cli.figure3_panels()
    elapsed = time.perf_counter() - t0
    worst_all, worst_small, above = 0.0, 0.0, 0
    for rows, _ in panels.values():
        for row in rows:
            worst_all = max(worst_all, row["delta_percent"])
            if row["mean_n"] <= 0.1 + 1e-12:
                worst_small = max(worst_small, row["delta_percent"])
            above += row["p_ind"] > row["p_hel"] + 1e-9
    ok = worst_all < 0.1 and worst_small < 1e-5 and above == 0 and elapsed < 300
    acceptance_report(
        3, ok,
        f"max delta = {worst_all:.3e}% on (0, 0.6] (< 0.1%), {worst_small:.3e}% for <n> <= 0.1 (< 1e-5%), "
        f"{elapsed:.0f} s for 3 x 60 points",
    )
    assert ok


def test_criterion_4_bpsk_dominates_ook(acceptance_report):
    t0 = time.perf_counter()
    panels = cli.figure2_panels()
    elapsed = time.perf_counter() - t0
    margin = min(r["p_hel_bpsk"] - r["p_hel_ook"] for rows, _ in panels.values() for r in rows)
    ok = margin >= -1e-12 and elapsed < 5
    acceptance_report(4, ok, f"min (p_hel_bpsk - p_hel_ook) = {margin:.3e} over 180 points, {elapsed:.2f} s")
    assert ok


def test_criterion_5_kraus_completeness_and_oracle(acceptance_report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240601)
    families = FAMILIES + [FamilySpec.bgcs(2.0), FamilySpec.oscs(6)]
    worst_sum = 0.0
    for _ in range(100):
        v = fock_coefficients(families[rng.integers(len(families))], rng.uniform(0, 3))
        a = MeasurementAngles(rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-30, 30))
        worst_sum = max(worst_sum, abs(outcome_probability(0, v, a) + outcome_probability(1, v, a) - 1.0))
    worst_oracle = 0.0
    for _ in range(50):
        v = fock_coefficients(families[rng.integers(len(families))], rng.uniform(0.05, 1.2))
        a = MeasurementAngles(rng.uniform(0, math.pi), rng.uniform(-math.pi, math.pi), rng.uniform(0, 1.5))
        for y, k in zip((0, 1), series_kraus(len(v), a)):
            worst_oracle = max(worst_oracle, float(np.max(np.abs(kraus_apply(y, v, a) - k @ v.amplitudes))))
            w = k @ v.amplitudes
            worst_oracle = max(worst_oracle, abs(outcome_probability(y, v, a) - np.vdot(w, w).real))
    elapsed = time.perf_counter() - t0
    ok = worst_sum < 1e-12 and worst_oracle < 1e-10 and elapsed < 30
    acceptance_report(
        5, ok, f"completeness error {worst_sum:.2e} (< 1e-12), series oracle error {worst_oracle:.2e} (< 1e-10), {elapsed:.2f} s"
    )
    assert ok


def test_criterion_6_sub_poissonian(acceptance_report):
    t0 = time.perf_counter()
    grid = np.linspace(0.01, 1.0, 100)
    worst = max(mandel_q(f, u) for f in FAMILIES[1:] for u in grid)
    elapsed = time.perf_counter() - t0
    ok = worst < 0 and elapsed < 1
    acceptance_report(6, ok, f"max Mandel Q = {worst:.4f} on u in (0, 1] for OS-CS, BG-CS, mSG-CS (< 0), {elapsed:.2f} s")
    assert ok


def _msg_overlap(u):
    return make_bpsk(FamilySpec.msgcs(), math.sqrt(u), 0.5).overlap


def test_criterion_7_msg_perfect_discrimination(acceptance_report):
    t0 = time.perf_counter()
    grid = np.linspace(0.05, 4.0, 80)
    vals = [_msg_overlap(u) for u in grid]
    k = next(i for i in range(len(grid) - 1) if vals[i] * vals[i + 1] < 0)
    lo, hi = grid[k], grid[k + 1]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _msg_overlap(lo) * _msg_overlap(mid) <= 0:
            hi = mid
        else:
            lo = mid
    root = 0.5 * (lo + hi)
    p = helstrom_bound(make_bpsk(FamilySpec.msgcs(), math.sqrt(root), 0.5))
    # extended-precision overlap at the root: sum (-1)^n c_n^2 with c_n ~ sqrt(n+1) J_{n+1}(2 alpha)
    x = 2 * mpmath.sqrt(root)
    norm = mpmath.nsum(lambda m: m * mpmath.besselj(m, x) ** 2, [1, mpmath.inf])
    s_mp = mpmath.nsum(lambda m: (-1) ** (m - 1) * m * mpmath.besselj(m, x) ** 2, [1, mpmath.inf]) / norm
    elapsed = time.perf_counter() - t0
    ok = 0 < root <= 4 and abs(1 - p) < 1e-9 and abs(float(s_mp)) < 1e-9 and elapsed < 1
    acceptance_report(7, ok, f"overlap root u = {root:.10f}, |1 - p_hel| = {abs(1 - p):.1e} (< 1e-9), {elapsed:.2f} s")
    assert ok


def test_criterion_8_bound_respect(acceptance_report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = -math.inf
    for i in range(20):
        family = FAMILIES[i % 4]
        make = make_bpsk if i % 2 == 0 else make_ook
        ens = make(family, 0.2 + 0.15 * i, 0.2 + 0.03 * i)
        p_hel = helstrom_bound(ens)
        for theta, phi, Phi in rng.uniform([-4, -4, -50], [4, 4, 50], size=(1000, 3)):
            worst = max(worst, success_probability(ens, MeasurementAngles(theta, phi, Phi)) - p_hel)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 30
    acceptance_report(8, ok, f"max (p_success - p_hel) = {worst:.3e} over 20 x 1000 samples (<= 1e-9), {elapsed:.2f} s")
    assert ok
