"""Special functions used by the coherent-state families.

Bessel functions are evaluated from their ascending power series, which is
accurate for the small arguments (2*sqrt(u), u <= 36) that occur here.
The ``J`` series alternates and cancels badly once the order is small
against ``x``; there Miller's backward recurrence takes over.
Gamma and erfc delegate to the standard library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation rule for ascending power series.

    A series stops once the terms are decreasing and the next term is below
    ``term_tolerance * |partial sum|``, or after ``max_terms`` terms. The
    test is relative because the scaled series below can be far smaller
    than one while their prefactor ``(x/2)**n`` is large.
    """

    max_terms: int = 200
    term_tolerance: float = 1e-16

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if not self.term_tolerance > 0:
            raise ValueError("term_tolerance must be > 0")


DEFAULT_SERIES = SeriesPolicy()


def gamma(x: float) -> float:
    """Gamma function for positive real ``x``."""
    if not x > 0:
        raise ValueError(f"gamma is only defined here for x > 0, got {x}")
    return math.gamma(x)


def log_gamma(x: float) -> float:
    if not x > 0:
        raise ValueError(f"log_gamma is only defined here for x > 0, got {x}")
    return math.lgamma(x)


def erfc(x: float) -> float:
    """Complementary error function."""
    return math.erfc(x)


def _sum_series(first: float, ratio, policy: SeriesPolicy) -> float:
    # ratio(k) gives term[k+1] / term[k]
    total = first
    term = first
    for k in range(policy.max_terms - 1):
        r = ratio(k)
        nxt = term * r
        if abs(r) < 1.0 and abs(nxt) <= policy.term_tolerance * abs(total):
            break
        total += nxt
        term = nxt
    return total


def bessel_j_orders(n_max: int, x: float) -> list[float]:
    """``[J_0(x), ..., J_{n_max}(x)]`` by Miller's backward recurrence.

    The recurrence starts well above ``max(n_max, x)`` and is normalized
    with ``J_0 + 2 sum_k J_{2k} = 1``.
    """
    if n_max < 0:
        raise ValueError("order must be non-negative")
    if x < 0:
        raise ValueError(f"x must be non-negative, got {x}")
    if x == 0.0:
        return [1.0] + [0.0] * n_max
    top = max(n_max, int(x)) + 1
    start = 2 * ((top + 20 + int(math.sqrt(160.0 * top))) // 2)
    out = [0.0] * (n_max + 1)
    j_above, j = 0.0, 1e-300
    norm = 0.0
    for k in range(start, 0, -1):
        j_below = 2.0 * k / x * j - j_above
        j_above, j = j, j_below
        if abs(j) > 1e250:
            # rescale to keep the recurrence in range
            j *= 1e-250
            j_above *= 1e-250
            norm *= 1e-250
            out = [v * 1e-250 for v in out]
        if k - 1 <= n_max:
            out[k - 1] = j
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j
    norm += j
    return [v / norm for v in out]


def bessel_j_scaled(n: int, u: float, policy: SeriesPolicy = DEFAULT_SERIES) -> float:
    """Return ``J_n(2 sqrt(u)) / u**(n/2)``.

    This is the entire function ``sum_k (-u)^k / (k! (n+k)!)``; it stays finite
    at ``u = 0`` where it equals ``1/n!``. The series is used while its terms
    decrease from the first one (``n + 1 >= 2u``), the recurrence otherwise.
    """
    if n < 0:
        raise ValueError("order must be non-negative")
    if u < 0:
        raise ValueError("u must be non-negative")
    if n + 1 < 2.0 * u and u > 1.0:
        return bessel_j_orders(n, 2.0 * math.sqrt(u))[n] / u ** (0.5 * n)
    first = math.exp(-math.lgamma(n + 1))
    return _sum_series(first, lambda k: -u / ((k + 1) * (n + k + 1)), policy)


def bessel_i_scaled(nu: float, u: float, policy: SeriesPolicy = DEFAULT_SERIES) -> float:
    """Return ``I_nu(2 sqrt(u)) / u**(nu/2)`` as ``sum_k u^k / (k! Gamma(nu+k+1))``."""
    if nu < 0:
        raise ValueError("order must be non-negative")
    if u < 0:
        raise ValueError("u must be non-negative")
    first = math.exp(-math.lgamma(nu + 1))
    return _sum_series(first, lambda k: u / ((k + 1) * (nu + k + 1)), policy)


def bessel_j(n: int, x: float, policy: SeriesPolicy = DEFAULT_SERIES) -> float:
    """Bessel function of the first kind, integer order ``n >= 0``, ``x >= 0``."""
    if n < 0 or int(n) != n:
        raise ValueError(f"order must be a non-negative integer, got {n}")
    if x < 0:
        raise ValueError(f"x must be non-negative, got {x}")
    half = 0.5 * x
    if half == 0.0:
        return 1.0 if n == 0 else 0.0
    return half**n * bessel_j_scaled(int(n), half * half, policy)


def bessel_i(nu: float, x: float, policy: SeriesPolicy = DEFAULT_SERIES) -> float:
    """Modified Bessel function of the first kind, real order ``nu >= 0``, ``x >= 0``."""
    if nu < 0:
        raise ValueError(f"order must be non-negative, got {nu}")
    if x < 0:
        raise ValueError(f"x must be non-negative, got {x}")
    half = 0.5 * x
    if half == 0.0:
        return 1.0 if nu == 0 else 0.0
    return half**nu * bessel_i_scaled(nu, half * half, policy)
