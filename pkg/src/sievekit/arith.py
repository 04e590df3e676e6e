"""Multiplicative arithmetic: mu, omega, phi, tau and their partial sums,
sieve density products, the omega-condition fit, and the twin-prime and
related constants."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import DomainError
from .primes import FactorTable, is_prime, primes_array

# Euler-Mascheroni constant, 20 significant digits. Distinct from the
# sieve weight gamma that appears in equidistribution sums.
EULER_MASCHERONI = 0.57721566490153286061


@dataclass(frozen=True)
class MultiplicativeSpec:
    """A sifting density: excluded primes plus a rule p -> g(p).

    g is defined at primes outside excluded_primes and must satisfy
    0 <= g(p) < 1; it extends multiplicatively to squarefree d coprime
    to the excluded set. Anywhere else g is an error, not a zero.
    """

    excluded_primes: frozenset
    density_at_prime: object  # callable p -> g(p)
    label: str

    def g_prime(self, p):
        if p in self.excluded_primes:
            raise DomainError(f"{self.label}: g undefined at excluded prime {p}")
        v = float(self.density_at_prime(p))
        if not 0.0 <= v < 1.0:
            raise DomainError(f"{self.label}: g({p}) = {v} outside [0, 1)")
        return v

    def g_of(self, d, table: FactorTable):
        """g(d) for squarefree d coprime to the excluded primes; g(1) = 1."""
        d = int(d)
        if d == 1:
            return 1.0
        out = 1.0
        for p, e in table.factor(d):
            if e > 1:
                raise DomainError(f"{self.label}: g undefined at non-squarefree {d}")
            out *= self.g_prime(p)
        return out


def twin_density_spec():
    """Density for the twin problem: g(p) = 1/(p-1), sifting away p = 2."""
    return MultiplicativeSpec(
        excluded_primes=frozenset({2}),
        density_at_prime=lambda p: 1.0 / (p - 1),
        label="twin",
    )


def mobius_omega_phi_tau(n, table: FactorTable):
    """(mu(n), omega(n), phi(n), tau(n)), exact, from the SPF table."""
    n = int(n)
    if n == 1:
        return 1, 0, 1, 1
    fac = table.factor(n)  # range-checks n
    mu = 1
    phi = 1
    tau = 1
    for p, e in fac:
        mu = 0 if e > 1 else -mu
        phi *= (p - 1) * p ** (e - 1)
        tau *= e + 1
    return mu, len(fac), phi, tau


@lru_cache(maxsize=2)
def _mult_tables(limit):
    # cached by limit; callers must treat the arrays as read-only
    sf, om, phi = _kernels.multiplicative_tables(limit)
    return sf, om, phi


@lru_cache(maxsize=2)
def _tau_table(limit):
    return _kernels.divisor_count_table(limit)


@lru_cache(maxsize=4)
def _weighted_phi_cumsum(limit, gamma):
    sf, om, phi = _mult_tables(limit)
    gpow = np.power(float(gamma), np.arange(int(om.max()) + 1, dtype=np.float64))
    terms = sf[1:].astype(np.float64) * gpow[om[1:]] / phi[1:].astype(np.float64)
    return np.cumsum(terms)  # index i holds the sum over d <= i + 1


def weighted_phi_sum(x, gamma):
    """Sum over squarefree d <= x of gamma**omega(d) / phi(d)."""
    x = int(x)
    if x < 1:
        raise DomainError(f"x = {x} is below 1")
    if gamma < 0:
        raise DomainError(f"gamma = {gamma} is negative")
    return float(_weighted_phi_cumsum(x, float(gamma))[x - 1])


def weighted_phi_scan(xs, gamma):
    """(x, value, value / (log x)**gamma) rows at each checkpoint x >= 2."""
    xs = [int(x) for x in xs]
    if not xs or any(x < 2 for x in xs):
        raise DomainError("scan checkpoints must all be at least 2")
    cs = _weighted_phi_cumsum(max(xs), float(gamma))
    rows = []
    for x in xs:
        v = float(cs[x - 1])
        rows.append((x, v, v / math.log(x) ** gamma))
    return rows


def divisor_moment_sum(x, r):
    """Sum over d <= x of tau(d)**r, exact. r from 1 to 8."""
    x = int(x)
    r = int(r)
    if x < 1:
        raise DomainError(f"x = {x} is below 1")
    if not 1 <= r <= 8:
        raise DomainError(f"moment order r = {r} outside [1, 8]")
    tau = _tau_table(x)
    if r <= 3:
        # int64 is safe: tau(d) < 2**13 for d <= 2**32, so tau**3 * x < 2**63
        return int(np.sum(tau[1:].astype(np.int64) ** r))
    # higher moments promote to arbitrary-width Python integers
    return sum(int(t) ** r for t in tau[1:].tolist())


def divisor_moment_scan(xs, r):
    """(x, value, value / (x * (log x)**(2**r - 1))) rows at checkpoints."""
    xs = [int(x) for x in xs]
    if not xs or any(x < 2 for x in xs):
        raise DomainError("scan checkpoints must all be at least 2")
    top = max(xs)
    tau = _tau_table(top)
    if r <= 3:
        cs = np.cumsum(tau[1:].astype(np.int64) ** int(r))
        totals = {x: int(cs[x - 1]) for x in xs}
    else:
        want = sorted(set(xs))
        totals = {}
        acc = 0
        i = 1
        for x in want:
            while i <= x:
                acc += int(tau[i]) ** int(r)
                i += 1
            totals[x] = acc
    pw = (1 << int(r)) - 1
    return [(x, totals[x], totals[x] / (x * math.log(x) ** pw)) for x in xs]


def sieve_density_product(spec: MultiplicativeSpec, z):
    """V(z): product of (1 - g(p)) over sifting primes p < z; empty = 1."""
    z = int(z)
    if z < 2:
        raise DomainError(f"z = {z} is below 2")
    if z == 2:
        return 1.0
    out = 1.0
    for p in primes_array(z - 1).tolist():
        if p not in spec.excluded_primes:
            out *= 1.0 - spec.g_prime(p)
    return out


def density_product_scan(spec: MultiplicativeSpec, zs):
    """(z,V(z), V(z) * log z) rows; one ascending pass over the primes."""
    zs = [int(z) for z in zs]
    if not zs or any(z < 2 for z in zs):
        raise DomainError("scan checkpoints must all be at least 2")
    for a, b in zip(zs, zs[1:]):
        if b < a:
            raise DomainError("scan checkpoints must be ascending")
    pr = primes_array(max(zs)).tolist()
    rows = []
    v = 1.0
    i = 0
    for z in zs:
        while i < len(pr) and pr[i] < z:
            p = pr[i]
            if p not in spec.excluded_primes:
                v *= 1.0 - spec.g_prime(p)
            i += 1
        rows.append((z, v, v * math.log(z)))
    return rows


@dataclass
class OmegaPairRecord:
    z1: int
    z2: int
    inverse_product: float  # product of (1 - g(p))**-1 over z1 <= p < z2
    log_ratio_power: float  # (log z2 / log z1)**kappa
    required_L: float  # smallest L making the non-strict bound hold
    strict_at_min: bool  # whether the strict bound holds at the overall min L


@dataclass
class OmegaConditionReport:
    kappa: float
    min_L: float
    strict_ok: bool
    records: list


def omega_condition_scan(spec: MultiplicativeSpec, kappa, z_pairs):
    """Fit the smallest L with prod <= (log z2/log z1)**kappa (1 + L/log z1).

    Works pairwise on the supplied grid. required_L is 0 where the bare
    log-ratio factor already covers the product. Pairs that sit exactly
    at equality once the overall minimum L is chosen get strict_at_min
    False; that is reported, not raised.
    """
    pairs = [(int(a), int(b)) for a, b in z_pairs]
    if not pairs:
        raise DomainError("z_pairs must be nonempty")
    for z1, z2 in pairs:
        if not 2 <= z1 < z2:
            raise DomainError(f"bad pair ({z1}, {z2}): need 2 <= z1 < z2")
    top = max(z2 for _, z2 in pairs)
    pr = primes_array(top).tolist()
    records = []
    for z1, z2 in pairs:
        prod = 1.0
        for p in pr:
            if p >= z2:
                break
            if p >= z1 and p not in spec.excluded_primes:
                prod *= 1.0 / (1.0 - spec.g_prime(p))
        base = (math.log(z2) / math.log(z1)) ** kappa
        req = max(0.0, (prod / base - 1.0) * math.log(z1))
        records.append(
            OmegaPairRecord(
                z1=z1,
                z2=z2,
                inverse_product=prod,
                log_ratio_power=base,
                required_L=req,
                strict_at_min=True,
            )
        )
    min_L = max(r.required_L for r in records)
    for r in records:
        bound = r.log_ratio_power * (1.0 + min_L / math.log(r.z1))
        r.strict_at_min = r.inverse_product < bound
    return OmegaConditionReport(
        kappa=float(kappa),
        min_L=min_L,
        strict_ok=all(r.strict_at_min for r in records),
        records=records,
    )


def omega_condition_min_L(spec: MultiplicativeSpec, kappa, z_pairs):
    """Smallest L >= 0 covering every pair; may be math.inf (reported)."""
    return omega_condition_scan(spec, kappa, z_pairs).min_L


@dataclass(frozen=True)
class ConstantsReport:
    c2: float
    truncation_prime: int
    tail_bound: float
    euler_mascheroni: float

    def to_json_dict(self):
        return {
            "c2": self.c2,
            "truncation_prime": self.truncation_prime,
            "tail_bound": self.tail_bound,
        }


@lru_cache(maxsize=8)
def twin_prime_constant(truncation_prime):
    """2 * product over odd p <= truncation of (1 - 1/(p-1)**2), with a tail.

    The true constant sits below the partial product by a factor at most
    exp(sum over n >= z of 3/n**2) <= exp(3/(z-1)), which gives the
    reported one-sided tail_bound.
    """
    z = int(truncation_prime)
    if z < 3:
        raise DomainError(f"truncation prime {z} is below 3")
    c2 = 2.0
    for p in primes_array(z).tolist():
        if p > 2:
            c2 *= 1.0 - 1.0 / (p - 1) ** 2
    tail = c2 * math.expm1(3.0 / (z - 1))
    return ConstantsReport(
        c2=c2,
        truncation_prime=z,
        tail_bound=tail,
        euler_mascheroni=EULER_MASCHERONI,
    )


def goldbach_constant(n, c2):
    """c2 times the product of (p-1)/(p-2) over odd primes dividing n."""
    n = int(n)
    if n < 4 or n % 2:
        raise DomainError(f"n = {n} must be an even integer at least 4")
    out = float(c2)
    m = n
    while m % 2 == 0:
        m //= 2
    p = 3
    while p * p <= m:
        if m % p == 0:
            out *= (p - 1) / (p - 2)
            while m % p == 0:
                m //= p
        p += 2
    if m > 1:
        out *= (m - 1) / (m - 2)
    return out


@dataclass
class PrimorialRecord:
    d: int
    omega: int
    phi: int
    omega_ratio: float  # omega(d) * log log d / log d
    phi_ratio: float  # phi(d) * log log d / d


@dataclass
class ExtremalGrowthReport:
    limit: int
    records: list
    max_omega_ratio: float
    min_phi_ratio: float


def extremal_growth_report(limit):
    """Growth ratios of omega and phi at primorial arguments up to limit.

    Primorials are the extremal inputs for both ratios. Starts at 2*3 = 6,
    the first primorial where log log d is positive.
    """
    limit = int(limit)
    if limit < 30:
        raise DomainError(f"limit {limit} is below 30")
    records = []
    d = 2
    phi = 1
    omega = 1
    p = 3
    while True:
        if d * p > limit:
            break
        d *= p
        phi *= p - 1
        omega += 1
        ll = math.log(math.log(d))
        records.append(
            PrimorialRecord(
                d=d,
                omega=omega,
                phi=phi,
                omega_ratio=omega * ll / math.log(d),
                phi_ratio=phi * ll / d,
            )
        )
        p += 2
        while not is_prime(p):
            p += 2
    return ExtremalGrowthReport(
        limit=limit,
        records=records,
        max_omega_ratio=max(r.omega_ratio for r in records),
        min_phi_ratio=min(r.phi_ratio for r in records),
    )


def write_scan_csv(fileobj, rows):
    """Emit (x, value, normalized_value) rows; floats at 15 digits."""
    w = csv.writer(fileobj)
    w.writerow(["x", "value", "normalized_value"])
    for x, v, nv in rows:
        w.writerow([x, _csv_num(v), _csv_num(nv)])


def _csv_num(v):
    if isinstance(v, float):
        return "%.15g" % v
    return v
