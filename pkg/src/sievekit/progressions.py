"""Primes in arithmetic progressions: exact equidistribution error
profiles for pi and psi, weighted error sums over moduli, the k-offset
variant, Brun-Titchmarsh ratio checks, and the pi1 comparison."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError
from .primes import prime_power_arrays, primes_array


@dataclass(frozen=True)
class BvParameters:
    """Averaged-error sum parameters.

    D is the modulus ceiling, y0 and Q1 the derived inner scales, and
    b_gamma the decay exponent: B - 1 for weights gamma <= 1, otherwise
    (B - gamma**2) / 2.
    """

    x_cal: int
    B: float
    gamma: float
    D: int
    y0: int
    Q1: float
    b_gamma: float


def bv_parameters(x_cal, B, gamma, D=None):
    """Build BvParameters; D defaults to floor(sqrt(x)/(log x)**B).

    An explicit D overrides the formula, which at small x_cal cannot
    reach interesting modulus ranges. Rejects any D below 1.
    """
    x_cal = int(x_cal)
    if x_cal < 3:
        raise DomainError(f"x_cal = {x_cal} is too small")
    B = float(B)
    gamma = float(gamma)
    if B <= 0 or gamma <= 0:
        raise DomainError("B and gamma must be positive")
    if gamma > 1 and B <= gamma * gamma:
        raise DomainError(f"B = {B} must exceed gamma**2 = {gamma * gamma}")
    lx = math.log(x_cal)
    if D is None:
        D = int(math.sqrt(x_cal) / lx**B)
    D = int(D)
    if D < 1:
        raise DomainError(f"derived D = {D} is below 1; x_cal too small for B = {B}")
    y0 = int(x_cal / lx**B)
    if y0 < 1:
        raise DomainError(f"y0 = {y0} is below 1; x_cal too small for B = {B}")
    b_gamma = B - 1.0 if gamma <= 1.0 else (B - gamma * gamma) / 2.0
    return BvParameters(
        x_cal=x_cal,
        B=B,
        gamma=gamma,
        D=D,
        y0=y0,
        Q1=math.log(y0) ** B if y0 > 1 else 0.0,
        b_gamma=b_gamma,
    )


@dataclass
class ResidueErrorRecord:
    d: int
    e_pi: float
    e_psi: float
    argmax_y_pi: int
    argmax_a_pi: int
    phi_d: int
    omega_d: int
    squarefree: bool


def _factor_small(d):
    """(omega, squarefree, phi) of d by trial division; d stays small here."""
    omega = 0
    squarefree = True
    phi = 1
    m = d
    p = 2
    while p * p <= m:
        if m % p == 0:
            omega += 1
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e > 1:
                squarefree = False
            phi *= (p - 1) * p ** (e - 1)
        p += 1
    if m > 1:
        omega += 1
        phi *= m - 1
    return omega, squarefree, phi


def _coprime_classes(d):
    return np.nonzero(np.gcd(np.arange(d, dtype=np.int64), d) == 1)[0]


def residue_error_profile(x, d, primes=None, power_data=None, want_pi=True, want_psi=True):
    """Exact sup over 2 <= y <= x of the worst per-class count error.

    e_pi is the sup of |pi(y; d, a) - pi(y)/phi(d)| over reduced classes
    a; e_psi the analogue with psi. Between consecutive jumps both
    functions are constant, so scanning the state after every jump
    covers each side of each jump exactly once. The recorded witness is
    the smallest attaining y, then the smallest class.
    """
    x = int(x)
    d = int(d)
    if not 1 <= d <= x:
        raise DomainError(f"need 1 <= d <= x, got d = {d}, x = {x}")
    if primes is None:
        primes = primes_array(x)
    omega_d, squarefree, phi_d = _factor_small(d)
    coprime = _coprime_classes(d)

    e_pi = 0.0
    argmax_y = 2
    argmax_a = 0
    if want_pi:
        res = primes % d
        num, bj, ba = _kernels.pi_error_scan(res, d, coprime)
        if bj >= 0:
            count = int(np.count_nonzero(res[: bj + 1] == ba))
            # same expression a naive recheck uses, so floats agree exactly
            e_pi = abs(count - (bj + 1) / phi_d)
            argmax_y = int(primes[bj])
            argmax_a = int(ba)

    e_psi = 0.0
    if want_psi:
        if power_data is None:
            power_data = prime_power_arrays(x, primes)
        powers, weights = power_data
        num_psi, _, _ = _kernels.psi_error_scan(powers % d, weights, d, coprime)
        e_psi = num_psi / phi_d

    return ResidueErrorRecord(
        d=d,
        e_pi=e_pi,
        e_psi=e_psi,
        argmax_y_pi=argmax_y,
        argmax_a_pi=argmax_a,
        phi_d=phi_d,
        omega_d=omega_d,
        squarefree=squarefree,
    )


@dataclass
class BvAggregate:
    params: BvParameters
    kind: str
    weight_gamma: float
    excluded_divisor_k: int
    excluded_primes: frozenset
    total: float
    envelope: float
    normalized: float
    breakdown: list | None


def _admissible_moduli(D, excluded_primes, excluded_divisor_k):
    out = []
    for d in range(1, D + 1):
        omega, squarefree, _ = _factor_small(d)
        if not squarefree:
            continue
        if any(d % p == 0 for p in excluded_primes):
            continue
        if excluded_divisor_k and d % excluded_divisor_k == 0:
            continue
        out.append((d, omega))
    return out


def bv_sum(
    params: BvParameters,
    kind="pi",
    excluded_primes=frozenset(),
    excluded_divisor_k=0,
    with_breakdown=False,
    threads=1,
):
    """Weighted error sum over admissible moduli d <= D.

    total = sum of gamma**omega(d) * E(d) over squarefree d coprime to
    excluded_primes, skipping multiples of excluded_divisor_k when that
    is nonzero. E(d) is the pi or psi error sup at x_cal. The reduction
    runs in ascending d regardless of thread count, so output does not
    depend on scheduling.
    """
    if kind not in ("pi", "psi"):
        raise DomainError(f"kind must be pi or psi, not {kind!r}")
    k = int(excluded_divisor_k)
    if k < 0:
        raise DomainError("excluded_divisor_k must be 0 or a squarefree integer > 1")
    if k:
        omega_k, squarefree_k, _ = _factor_small(k)
        if k == 1 or not squarefree_k:
            raise DomainError(f"excluded_divisor_k = {k} must be squarefree and > 1")
    excluded_primes = frozenset(int(p) for p in excluded_primes)

    x = params.x_cal
    gamma = params.gamma
    primes = primes_array(x)
    want_psi = kind == "psi" or with_breakdown
    want_pi = kind == "pi" or with_breakdown
    power_data = prime_power_arrays(x, primes) if want_psi else None

    moduli = _admissible_moduli(params.D, excluded_primes, excluded_divisor_k=k)

    def profile(d):
        return residue_error_profile(
            x, d, primes=primes, power_data=power_data,
            want_pi=want_pi, want_psi=want_psi,
        )

    if threads > 1 and len(moduli) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(profile, [d for d, _ in moduli]))
    else:
        records = [profile(d) for d, _ in moduli]

    terms = []
    for (d, omega), rec in zip(moduli, records):
        err = rec.e_pi if kind == "pi" else rec.e_psi
        terms.append(gamma**omega * err)
    total = math.fsum(terms)
    envelope = x / math.log(x) ** params.b_gamma
    return BvAggregate(
        params=params,
        kind=kind,
        weight_gamma=gamma,
        excluded_divisor_k=k,
        excluded_primes=excluded_primes,
        total=total,
        envelope=envelope,
        normalized=total / envelope,
        breakdown=records if with_breakdown else None,
    )


def bv_breakdown_csv(aggregate: BvAggregate, fileobj):
    """Per-modulus rows for an aggregate built with a breakdown."""
    if aggregate.breakdown is None:
        raise DomainError("aggregate has no breakdown; rerun with with_breakdown")
    w = csv.writer(fileobj)
    w.writerow(["d", "omega", "phi", "e_pi", "argmax_y", "argmax_a", "weighted_term"])
    g = aggregate.weight_gamma
    for rec in aggregate.breakdown:
        err = rec.e_pi if aggregate.kind == "pi" else rec.e_psi
        w.writerow(
            [
                rec.d,
                rec.omega_d,
                rec.phi_d,
                "%.15g" % rec.e_pi,
                rec.argmax_y_pi,
                rec.argmax_a_pi,
                "%.15g" % (g**rec.omega_d * err),
            ]
        )


def k_offset_error(x, k, d):
    """Sup error of pi(y; k*d, a) against its modulus-k coarsening.

    Measures sup over y <= x, max over (a, kd) = 1 of
    |pi(y; kd, a) - pi(y; k, a)/phi(d)|. k must be squarefree and > 1,
    d coprime to k, and kd <= x.
    """
    x, k, d = int(x), int(k), int(d)
    omega_k, squarefree_k, _ = _factor_small(k) if k > 1 else (0, False, 1)
    if k <= 1 or not squarefree_k:
        raise DomainError(f"k = {k} must be a squarefree integer > 1")
    if d < 1 or math.gcd(k, d) != 1:
        raise DomainError(f"d = {d} must be positive and coprime to k = {k}")
    if k * d > x:
        raise DomainError(f"k*d = {k * d} exceeds x = {x}")
    if d == 1:
        return 0.0
    _, _, phi_d = _factor_small(d)
    primes = primes_array(x)
    kd = k * d
    num = _kernels.k_offset_scan(
        primes % kd, primes % k, kd, k, phi_d, _coprime_classes(kd)
    )
    return num / phi_d


@dataclass
class BrunTitchmarshReport:
    x: int
    d_max: int
    max_ratio: float
    witness_d: int
    witness_a: int
    witness_y: int


def brun_titchmarsh_check(x, d_max):
    """Worst ratio pi(x; d, a) * phi(d) * log(x/d) / x over d <= d_max.

    Evaluated at y = x for each modulus; the witness is the smallest
    (d, a) attaining the maximum.
    """
    x = int(x)
    d_max = int(d_max)
    if not 1 <= d_max < x:
        raise DomainError(f"need 1 <= d_max < x, got d_max = {d_max}, x = {x}")
    primes = primes_array(x)
    best = -1.0
    wd = wa = 0
    for d in range(1, d_max + 1):
        counts = np.bincount(primes % d, minlength=d)
        if d == 1:
            top = int(counts[0])
            a = 0
            phi_d = 1
        else:
            coprime = _coprime_classes(d)
            sub = counts[coprime]
            i = int(np.argmax(sub))  # first max, so smallest class wins ties
            top = int(sub[i])
            a = int(coprime[i])
            phi_d = len(coprime)
        ratio = top * phi_d * math.log(x / d) / x
        if ratio > best:
            best = ratio
            wd, wa = d, a
    return BrunTitchmarshReport(
        x=x, d_max=d_max, max_ratio=best, witness_d=wd, witness_a=wa, witness_y=x
    )


@dataclass
class Pi1Comparison:
    x: int
    pi1: float
    pi: int
    gap: float
    gap_over_sqrt: float


def pi1_comparison(x):
    """pi1(x) = sum over prime powers p**m <= x of 1/m, against pi(x).

    The gap pi1 - pi collects 1/m over proper powers only, so it is
    nonnegative and small against sqrt(x).
    """
    x = int(x)
    if x < 2:
        raise DomainError(f"x = {x} is below 2")
    primes = primes_array(x)
    pi = int(primes.shape[0])
    frac = []
    for p in primes.tolist():
        if p * p > x:
            break
        q = p * p
        m = 2
        while q <= x:
            frac.append((q, 1.0 / m))
            q *= p
            m += 1
    frac.sort()
    gap = math.fsum(t for _, t in frac)
    return Pi1Comparison(
        x=x, pi1=pi + gap, pi=pi, gap=gap, gap_over_sqrt=gap / math.sqrt(x)
    )
