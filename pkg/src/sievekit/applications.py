"""Twin-prime, Goldbach, and shifted-square counts with bound reports.

Counts are exact (flag-array scans); the reports compare them against the
C * param / log(param)^2 main scale with the constant's normalization
stated explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import goldbach_constant, twin_prime_constant
from .errors import DomainError
from .primes import build_factor_table, legendre_symbol, prime_flags, primes_array
from .sifting import build_problem, subset_card

DEFAULT_TRUNCATION = 10**6

# the factor 2 lives inside the constant, so C2 is about 1.3203, twice
# the product many references call the twin prime constant
CONSTANT_CONVENTION = "C2 = 2 * prod_{p > 2} (1 - 1/(p - 1)^2)"


def twin_count(x):
    """Primes p <= x with p + 2 prime; p + 2 itself may exceed x."""
    x = int(x)
    if x < 2:
        raise DomainError(f"x = {x} is below 2")
    flags = prime_flags(x + 2)
    return int(np.count_nonzero(flags[: x + 1] & flags[2 : x + 3]))


def goldbach_count(n):
    """Primes p <= n with n - p prime: ordered representations of n."""
    n = int(n)
    if n < 4 or n % 2:
        raise DomainError(f"n = {n} must be even and at least 4")
    flags = prime_flags(n)
    return int(np.count_nonzero(flags & flags[::-1]))


@dataclass(frozen=True)
class BoundReport:
    """An exact count against its conjectured main scale."""

    parameter: int
    exact_count: int
    constant: float
    convention: str
    main_scale: float
    ratio: float
    theorem_constant: float
    within_theorem: bool


def _bound_report(param, count, constant, eps):
    log_sq = math.log(param) ** 2
    ratio = count * log_sq / (constant * param)
    ceiling = 4.0 + eps
    return BoundReport(
        parameter=param,
        exact_count=count,
        constant=constant,
        convention=CONSTANT_CONVENTION,
        main_scale=constant * param / log_sq,
        ratio=ratio,
        theorem_constant=ceiling,
        within_theorem=ratio <= ceiling,
    )


def twin_bound_report(x, eps=0.0, truncation_prime=DEFAULT_TRUNCATION):
    """twin_count(x) against C2 x / (log x)^2 with ceiling 4 + eps."""
    x = int(x)
    if x < 10:
        raise DomainError(f"x = {x} is below 10")
    c2 = twin_prime_constant(truncation_prime).c2
    return _bound_report(x, twin_count(x), c2, float(eps))


def goldbach_bound_report(n, eps=0.0, truncation_prime=DEFAULT_TRUNCATION):
    """goldbach_count(n) against C_n n / (log n)^2 with ceiling 4 + eps."""
    n = int(n)
    if n < 10 or n % 2:
        raise DomainError(f"n = {n} must be even and at least 10")
    c2 = twin_prime_constant(truncation_prime).c2
    return _bound_report(n, goldbach_count(n), goldbach_constant(n, c2), float(eps))


@dataclass(frozen=True)
class ResidueDensityRecord:
    p: int
    subset_count: int
    predicted: float
    deviation: float


def quadratic_residue_density_check(n, p_max):
    """|A_p| for the shifted-square set against 2 pi(sqrt(n)) / (p - 1).

    The prediction is zero when n is a non-residue mod p, and then the
    exact count is zero too: q**2 = n (mod p) has no solution.
    """
    n = int(n)
    p_max = int(p_max)
    problem = build_problem("square_shift", n)
    if p_max < 2 or p_max * p_max > n:
        raise DomainError(f"p_max = {p_max} must lie in [2, sqrt({n})]")
    pi_root = int(primes_array(math.isqrt(n)).size)
    records = []
    for p in primes_array(p_max).tolist():
        if p in problem.excluded_primes:
            continue
        card = subset_card(problem, p)
        if legendre_symbol(n, p) == 1:
            predicted = 2.0 * pi_root / (p - 1)
        else:
            predicted = 0.0
        records.append(
            ResidueDensityRecord(
                p=p, subset_count=card, predicted=predicted, deviation=card - predicted
            )
        )
    return records


@dataclass(frozen=True)
class AlmostPrimeReport:
    """Shifted-square values surviving sifting below z, refactored."""

    n: int
    z: int
    rough_count: int
    max_omega: int
    witnesses: tuple  # (q, n - q**2, ((p, e), ...)) per survivor


def almost_prime_report(n, z_exponent):
    n = int(n)
    problem = build_problem("square_shift", n)
    # the nudge keeps exact powers like 125**(1/3) from landing a notch low
    z = int(n ** float(z_exponent) + 1e-9)
    if z < 2:
        raise DomainError(f"z = {z} from exponent {z_exponent} is below 2")
    table = build_factor_table(max(problem.elements[-1], 2))
    witnesses = []
    max_omega = 0
    for v in problem.elements:
        fac = table.factor(v)
        if fac and fac[0][0] < z:
            continue
        witnesses.append((math.isqrt(n - v), v, tuple(fac)))
        max_omega = max(max_omega, sum(e for _, e in fac))
    return AlmostPrimeReport(
        n=n,
        z=z,
        rough_count=len(witnesses),
        max_omega=max_omega,
        witnesses=tuple(witnesses),
    )
