"""Generalized coherent states with real amplitudes.

A state of a family is ``|alpha, h> = sum_n alpha**n h_n(alpha**2) |n>``.
Four families are supported: the standard (Glauber-Sudarshan) coherent
state, the optical spin coherent state with ``n_j`` levels, the
Barut-Girardello state with Bargmann index ``chi`` and the modified
Susskind-Glogower state.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError, TruncationError, UnreachableTargetError

U_MAX = 36.0
ALPHA_MAX = math.sqrt(U_MAX)


class Family(enum.Enum):
    SCS = "scs"
    OSCS = "oscs"
    BGCS = "bgcs"
    MSGCS = "msgcs"


@dataclass(frozen=True)
class FamilySpec:
    """A coherent-state family together with its parameter, if any."""

    kind: Family
    n_j: int | None = None
    chi: float | None = None

    def __post_init__(self):
        if self.kind is Family.OSCS:
            if self.n_j is None or int(self.n_j) != self.n_j or self.n_j < 1:
                raise ValueError(f"OSCS needs a positive integer n_j, got {self.n_j!r}")
            if self.chi is not None:
                raise ValueError("chi is only meaningful for BGCS")
        elif self.kind is Family.BGCS:
            if self.chi is None or not self.chi >= 0.5:
                raise ValueError(f"BGCS needs chi >= 1/2, got {self.chi!r}")
            if self.n_j is not None:
                raise ValueError("n_j is only meaningful for OSCS")
        elif self.n_j is not None or self.chi is not None:
            raise ValueError(f"{self.kind.value} takes no parameter")

    @classmethod
    def scs(cls) -> FamilySpec:
        return cls(Family.SCS)

    @classmethod
    def oscs(cls, n_j: int) -> FamilySpec:
        return cls(Family.OSCS, n_j=n_j)

    @classmethod
    def bgcs(cls, chi: float) -> FamilySpec:
        return cls(Family.BGCS, chi=float(chi))

    @classmethod
    def msgcs(cls) -> FamilySpec:
        return cls(Family.MSGCS)

    @property
    def label(self) -> str:
        if self.kind is Family.OSCS:
            return f"OS-CS(n_j={self.n_j})"
        if self.kind is Family.BGCS:
            return f"BG-CS(chi={self.chi:g})"
        return {Family.SCS: "S-CS", Family.MSGCS: "mSG-CS"}[self.kind]


@dataclass(frozen=True)
class TruncationPolicy:
    tail_tolerance: float = 1e-14
    hard_cap: int = 256

    def __post_init__(self):
        if not self.tail_tolerance > 0:
            raise ValueError("tail_tolerance must be > 0")
        if self.hard_cap < 8:
            raise ValueError("hard_cap must be >= 8")


DEFAULT_TRUNCATION = TruncationPolicy()


@dataclass(frozen=True, eq=False)
class FockVector:
    """Truncated real Fock amplitudes ``c_n = alpha**n h_n(alpha**2)``.

    ``tail_bound`` is a certified upper bound on the discarded weight
    ``sum_{n > N} c_n**2``.
    """

    amplitudes: np.ndarray
    alpha: float
    family: FamilySpec
    tail_bound: float

    def __len__(self) -> int:
        return len(self.amplitudes)

    @property
    def norm_squared(self) -> float:
        return float(self.amplitudes @ self.amplitudes)

    def probabilities(self) -> np.ndarray:
        return self.amplitudes**2


def _check_u(u: float) -> None:
    if u < 0:
        raise DomainError(f"u must be non-negative, got {u}")
    if u > U_MAX:
        raise DomainError(f"u = {u} exceeds the supported range u <= {U_MAX}")


def normalization_bg(u: float, chi: float) -> float:
    """``Gamma(2 chi) u**(1/2 - chi) I_{2 chi - 1}(2 sqrt(u))``, equal to 1 at u = 0."""
    if u < 0:
        raise DomainError(f"u must be non-negative, got {u}")
    if u == 0:
        return 1.0
    # u**(1/2 - chi) cancels the u**(chi - 1/2) prefactor of the Bessel series
    return specfun.gamma(2.0 * chi) * specfun.bessel_i_scaled(2.0 * chi - 1.0, u)


def normalization_msg(u: float) -> float:
    """Normalization of the modified Susskind-Glogower state, equal to 1 at u = 0."""
    if u < 0:
        raise DomainError(f"u must be non-negative, got {u}")
    if u == 0:
        return 1.0
    r = math.sqrt(u)
    j0 = specfun.bessel_j(0, 2.0 * r)
    j1 = specfun.bessel_j(1, 2.0 * r)
    return (2.0 * u * j0 * j0 - r * j0 * j1 + 2.0 * u * j1 * j1) / u


def _normalization(family: FamilySpec, u: float) -> float:
    if family.kind is Family.BGCS:
        return normalization_bg(u, family.chi)
    if family.kind is Family.MSGCS:
        return normalization_msg(u)
    return 1.0


def _h(family: FamilySpec, n: int, u: float, norm: float) -> float:
    kind = family.kind
    if kind is Family.SCS:
        return math.exp(-0.5 * u - 0.5 * math.lgamma(n + 1))
    if kind is Family.OSCS:
        if n > family.n_j:
            return 0.0
        return math.sqrt(math.comb(family.n_j, n)) * (1.0 + u) ** (-0.5 * family.n_j)
    if kind is Family.BGCS:
        two_chi = 2.0 * family.chi
        log_lam = 0.5 * (math.lgamma(two_chi) - math.lgamma(n + 1) - math.lgamma(two_chi + n))
        return math.exp(log_lam) / math.sqrt(norm)
    # J_{n+1}(2 sqrt u) / u**((n+1)/2) is entire in u, so u = 0 needs no special case
    return math.sqrt((n + 1) / norm) * specfun.bessel_j_scaled(n + 1, u)


def h_coefficient(family: FamilySpec, n: int, u: float) -> float:
    """The family's expansion function ``h_n(u)``."""
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    _check_u(u)
    return _h(family, n, u, _normalization(family, u))


def _majorant(family: FamilySpec, u: float, norm: float):
    """Return ``(b, rho)`` with ``b(n) >= c_n**2`` and ``rho(n) = b(n+1)/b(n)`` non-increasing."""
    kind = family.kind
    if kind is Family.SCS:
        def b(n):
            return math.exp(-u + n * math.log(u) - math.lgamma(n + 1))

        def rho(n):
            return u / (n + 1)
    elif kind is Family.BGCS:
        two_chi = 2.0 * family.chi

        def b(n):
            return math.exp(
                n * math.log(u) + math.lgamma(two_chi) - math.lgamma(n + 1) - math.lgamma(two_chi + n)
            ) / norm

        def rho(n):
            return u / ((n + 1) * (two_chi + n))
    else:
        # |J_m(x)| <= (x/2)**m / m! for x >= 0
        def b(n):
            return math.exp(math.log(n + 1) + n * math.log(u) - 2.0 * math.lgamma(n + 2)) / norm

        def rho(n):
            return u / ((n + 1) * (n + 2))
    return b, rho


def fock_coefficients(
    family: FamilySpec, alpha: float, policy: TruncationPolicy = DEFAULT_TRUNCATION
) -> FockVector:
    """Build the truncated amplitude vector of ``|alpha, h>`` for real ``alpha``."""
    alpha = float(alpha)
    u = alpha * alpha
    _check_u(u)
    norm = _normalization(family, u)

    if family.kind is Family.OSCS:
        size = family.n_j + 1
        tail = 0.0
    elif u == 0.0:
        size = 1
        tail = 0.0
    else:
        b, rho = _majorant(family, u, norm)
        size = None
        for last in range(policy.hard_cap):
            r = rho(last + 1)
            if r < 1.0:
                tail = b(last + 1) / (1.0 - r)
                if tail <= policy.tail_tolerance:
                    size = last + 1
                    break
        if size is None:
            raise TruncationError(
                f"{family.label} at alpha={alpha} needs more than {policy.hard_cap} Fock levels"
            )

    amps = np.empty(size)
    for n in range(size):
        amps[n] = alpha**n * _h(family, n, u, norm)
    return FockVector(amplitudes=amps, alpha=alpha, family=family, tail_bound=tail)


def overlap(a: FockVector, b: FockVector) -> float:
    """Inner product of two real Fock vectors over their common range."""
    m = min(len(a), len(b))
    return float(a.amplitudes[:m] @ b.amplitudes[:m])


def _moments(family: FamilySpec, u: float, policy: TruncationPolicy) -> tuple[float, float]:
    p = fock_coefficients(family, math.sqrt(u), policy).probabilities()
    n = np.arange(len(p))
    return float(n @ p), float((n * n) @ p)


def mean_photon_number(family: FamilySpec, u: float, policy: TruncationPolicy = DEFAULT_TRUNCATION) -> float:
    """Mean photon number of the state with ``u = alpha**2``."""
    _check_u(u)
    return _moments(family, u, policy)[0]


def mandel_q(family: FamilySpec, u: float, policy: TruncationPolicy = DEFAULT_TRUNCATION) -> float:
    """Mandel parameter ``var(n) / <n> - 1``; negative means sub-Poissonian."""
    if not u > 0:
        raise DomainError(f"the Mandel parameter needs u > 0, got {u}")
    _check_u(u)
    m1, m2 = _moments(family, u, policy)
    return (m2 - m1 * m1) / m1 - 1.0


def alpha_for_mean_n(
    family: FamilySpec,
    target: float,
    tol: float = 1e-10,
    policy: TruncationPolicy = DEFAULT_TRUNCATION,
) -> float:
    """Smallest non-negative ``alpha`` whose state has mean photon number ``target``.

    Bisection in ``alpha``; relies on the mean photon number being strictly
    increasing in ``u``.
    """
    if target < 0:
        raise DomainError(f"target mean photon number must be non-negative, got {target}")
    if target == 0:
        return 0.0
    if family.kind is Family.OSCS and target >= family.n_j:
        raise UnreachableTargetError(
            f"OS-CS with n_j={family.n_j} has mean photon number below {family.n_j}, got {target}"
        )

    def f(a):
        return mean_photon_number(family, a * a, policy) - target

    lo, hi = 0.0, ALPHA_MAX
    if f(hi) < 0:
        raise UnreachableTargetError(
            f"{family.label} cannot reach mean photon number {target} with alpha <= {ALPHA_MAX}"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = f(mid)
        if abs(fm) <= 0.01 * tol and hi - lo < 1e-13:
            break
        if fm < 0:
            lo = mid
        else:
            hi = mid
    best = lo if abs(f(lo)) <= abs(f(hi)) else hi
    if abs(f(best)) > tol:
        raise UnreachableTargetError(
            f"bisection for {family.label} stalled at alpha={best} (residual {f(best):.3e})"
        )
    return best
