"""Explicit sifting instances and the exclusion-chain identities.

A SieveProblem is a finite integer set together with the primes withheld
from sifting and a density model g. Everything here is exact: sift counts
scan actual divisibility, remainders compare those counts against g(d)X,
and the chain identities are verified by computing both sides.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .arith import MultiplicativeSpec, twin_density_spec
from .errors import DomainError
from .primes import legendre_symbol, primes_array


def _trial_factor(n):
    """(p, e) pairs of n >= 1 in ascending p, by trial division."""
    n = int(n)
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def _primes_below(z):
    # sifting primes are strictly below z
    z = int(z)
    if z < 2:
        raise DomainError(f"z = {z} is below 2")
    if z == 2:
        return np.empty(0, dtype=np.int64)
    return primes_array(z - 1)


@dataclass(frozen=True)
class SieveProblem:
    """A finite set A, the withheld primes, a density g, and the scale X.

    Elements must be strictly ascending positive integers, none divisible
    by a withheld prime. X defaults to |A| in the named constructors.
    """

    elements: tuple
    excluded_primes: frozenset
    density: MultiplicativeSpec
    X: float
    label: str
    kind: str = "custom"
    parameter: int = 0

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(int(a) for a in self.elements))
        object.__setattr__(self, "excluded_primes", frozenset(self.excluded_primes))
        if not self.elements:
            raise DomainError(f"{self.label}: empty element set")
        els = np.asarray(self.elements, dtype=np.int64)
        if els[0] <= 0 or np.any(np.diff(els) <= 0):
            raise DomainError(
                f"{self.label}: elements must be positive and strictly ascending"
            )
        for p in sorted(self.excluded_primes):
            if np.any(els % p == 0):
                raise DomainError(
                    f"{self.label}: an element is divisible by excluded prime {p}"
                )
        if self.excluded_primes != self.density.excluded_primes:
            raise DomainError(f"{self.label}: density and problem exclude different primes")
        if not self.X > 0:
            raise DomainError(f"{self.label}: X = {self.X} must be positive")


def build_problem(kind, value):
    """Named instances: twin(x), goldbach(n), square_shift(n)."""
    kind = str(kind)
    value = int(value)
    if kind == "twin":
        # A = {p + 2 : 2 < p <= x}, sift everything but 2
        if value < 5:
            raise DomainError(f"twin: x = {value} is below 5")
        els = tuple(p + 2 for p in primes_array(value).tolist() if p > 2)
        excluded = frozenset({2})
        spec = twin_density_spec()
        label = f"twin x={value}"
    elif kind == "goldbach":
        if value < 6 or value % 2:
            raise DomainError(f"goldbach: n = {value} must be even and at least 6")
        divisors = frozenset(p for p, _ in _trial_factor(value))
        els = tuple(
            sorted(value - p for p in primes_array(value).tolist() if p not in divisors)
        )
        excluded = divisors
        spec = MultiplicativeSpec(
            excluded_primes=divisors,
            density_at_prime=lambda p: 1.0 / (p - 1),
            label="goldbach",
        )
        label = f"goldbach n={value}"
    elif kind == "square_shift":
        # n - q^2 over primes 3 < q <= sqrt(n) coprime to n; the parity
        # constraint keeps every element odd and nonzero mod 3
        if value < 24 or value % 6 not in (0, 2):
            raise DomainError(
                f"square_shift: n = {value} must be 0 or 2 mod 6 and at least 24"
            )
        divisors = frozenset(p for p, _ in _trial_factor(value))
        qs = [
            q
            for q in primes_array(math.isqrt(value)).tolist()
            if q > 3 and value % q
        ]
        if not qs:
            raise DomainError(f"square_shift: no admissible shift prime for n = {value}")
        els = tuple(sorted(value - q * q for q in qs))
        excluded = frozenset({2, 3}) | divisors
        n_fixed = value
        spec = MultiplicativeSpec(
            excluded_primes=excluded,
            density_at_prime=lambda p: (1 + legendre_symbol(n_fixed, p)) / (p - 1.0),
            label="square_shift",
        )
        label = f"square_shift n={value}"
    else:
        raise DomainError(f"unknown problem kind {kind!r}")
    return SieveProblem(
        elements=els,
        excluded_primes=excluded,
        density=spec,
        X=float(len(els)),
        label=label,
        kind=kind,
        parameter=value,
    )


def problem_json(problem: SieveProblem):
    """Summary dict used by the command-line output."""
    return {
        "kind": problem.kind,
        "parameter": problem.parameter,
        "element_count": len(problem.elements),
        "excluded_primes": sorted(problem.excluded_primes),
        "X": problem.X,
    }


def _sifting_primes(problem, z):
    ps = _primes_below(z)
    if ps.size and problem.excluded_primes:
        drop = np.fromiter(problem.excluded_primes, dtype=np.int64)
        ps = ps[~np.isin(ps, drop)]
    return ps


def _count_unsifted(els, ps):
    if els.size == 0:
        return 0
    alive = np.ones(els.size, dtype=bool)
    top = int(els.max())
    for p in ps.tolist():
        if p > top:
            break
        alive &= els % p != 0
    return int(np.count_nonzero(alive))


def sift_count(problem: SieveProblem, z):
    """S(A, P, z): elements with no sifting prime factor below z."""
    ps = _sifting_primes(problem, z)
    els = np.asarray(problem.elements, dtype=np.int64)
    return _count_unsifted(els, ps)


def _check_modulus(problem, d):
    d = int(d)
    if d < 1:
        raise DomainError(f"d = {d} is below 1")
    for p, e in _trial_factor(d) if d > 1 else []:
        if e > 1:
            raise DomainError(f"d = {d} is not squarefree")
        if p in problem.excluded_primes:
            raise DomainError(f"d = {d} shares prime {p} with the excluded set")
    return d


def _g_value(problem, d):
    # d pre-validated squarefree and coprime to the excluded set
    out = 1.0
    for p, _ in _trial_factor(d) if d > 1 else []:
        out *= problem.density.g_prime(p)
    return out


def subset_card(problem: SieveProblem, d):
    """|A_d|: elements divisible by d (squarefree, coprime to excluded)."""
    d = _check_modulus(problem, d)
    if d == 1:
        return len(problem.elements)
    els = np.asarray(problem.elements, dtype=np.int64)
    return int(np.count_nonzero(els % d == 0))


def remainder_r(problem: SieveProblem, d):
    """r(d) = |A_d| - g(d) X."""
    d = _check_modulus(problem, d)
    return subset_card(problem, d) - _g_value(problem, d) * problem.X


def remainder_sum(problem: SieveProblem, D, gamma0):
    """R_D: gamma0**omega(d) * |r(d)| over squarefree d < D coprime to
    the excluded set. The range bound is strict."""
    if D < 1:
        raise DomainError(f"D = {D} is below 1")
    g0 = float(gamma0)
    if g0 < 0:
        raise DomainError(f"gamma0 = {gamma0} is negative")
    els = np.asarray(problem.elements, dtype=np.int64)
    terms = []
    for d in range(1, math.ceil(D)):
        fac = _trial_factor(d) if d > 1 else []
        if any(e > 1 for _, e in fac):
            continue
        if any(p in problem.excluded_primes for p, _ in fac):
            continue
        g = 1.0
        for p, _ in fac:
            g *= problem.density.g_prime(p)
        card = int(np.count_nonzero(els % d == 0)) if d > 1 else els.size
        terms.append(g0 ** len(fac) * abs(card - g * problem.X))
    return math.fsum(terms)


@dataclass(frozen=True)
class ExclusionChain:
    """Decreasing prime factors q_1 > ... > q_ell of an injected modulus k,
    partial products m_j, and level products V_j(z) over P with q_1..q_j
    removed. V_levels[0] is the plain V(z)."""

    k: int
    q: tuple
    m: tuple
    ell: int
    z: int
    V_levels: tuple


def build_exclusion_chain(problem: SieveProblem, k, z):
    k = int(k)
    z = int(z)
    if k < 2:
        raise DomainError(f"k = {k} must exceed 1")
    fac = _trial_factor(k)
    if any(e > 1 for _, e in fac):
        raise DomainError(f"k = {k} is not squarefree")
    for p, _ in fac:
        if p in problem.excluded_primes:
            raise DomainError(f"k = {k} shares prime {p} with the excluded set")
    q = tuple(sorted((p for p, _ in fac), reverse=True))
    m = [1]
    for prime in q:
        m.append(m[-1] * prime)
    ps = _sifting_primes(problem, z).tolist()
    levels = []
    for j in range(len(q) + 1):
        removed = set(q[:j])
        v = 1.0
        for p in ps:
            if p not in removed:
                v *= 1.0 - problem.density.g_prime(p)
        levels.append(v)
    return ExclusionChain(
        k=k, q=q, m=tuple(m), ell=len(q), z=z, V_levels=tuple(levels)
    )


def verify_inclusion_exclusion(problem: SieveProblem, k, z):
    """Both sides of the chain decomposition of S(A, P, z), exactly.

    Returns (lhs, rhs, equal). Equality is guaranteed when every chain
    prime lies below z; an injected prime at or above z that divides a
    surviving element makes the sides differ, and that is reported,
    not raised.
    """
    chain = build_exclusion_chain(problem, k, z)
    els = np.asarray(problem.elements, dtype=np.int64)
    base = _sifting_primes(problem, z)
    lhs = _count_unsifted(els, base)
    total = 0
    for j in range(chain.ell):
        sub = els[els % chain.m[j] == 0]
        thin = base[~np.isin(base, chain.q[: j + 1])]
        total += (-1) ** j * _count_unsifted(sub, thin)
    sub = els[els % chain.m[chain.ell] == 0]
    thin = base[~np.isin(base, chain.q)]
    total += (-1) ** chain.ell * _count_unsifted(sub, thin)
    return lhs, total, lhs == total


def verify_V_identity(problem: SieveProblem, k, z):
    """V(z) against its alternating chain expansion; returns
    (lhs, rhs, abs_gap)."""
    chain = build_exclusion_chain(problem, k, z)
    lhs = chain.V_levels[0]
    terms = []
    for j in range(chain.ell):
        terms.append((-1) ** j * _g_value(problem, chain.m[j]) * chain.V_levels[j + 1])
    terms.append(
        (-1) ** chain.ell
        * _g_value(problem, chain.m[chain.ell])
        * chain.V_levels[chain.ell]
    )
    rhs = math.fsum(terms)
    return lhs, rhs, abs(lhs - rhs)


def v1_bound_check(problem: SieveProblem, k, z, A_const):
    """Chain tail sum against 2 A e^A (V_1 - V); returns (lhs, rhs, holds).

    Every sifting or chain prime p must satisfy p >= A + 2 and
    g(p) <= A/(p - 1), otherwise the bound's hypotheses fail and a
    DomainError is raised.
    """
    A = float(A_const)
    if A < 1:
        raise DomainError(f"A = {A_const} is below 1")
    chain = build_exclusion_chain(problem, k, z)
    support = sorted(set(_sifting_primes(problem, z).tolist()) | set(chain.q))
    for p in support:
        if p < A + 2:
            raise DomainError(f"prime {p} is below A + 2 = {A + 2}")
        if problem.density.g_prime(p) > A / (p - 1):
            raise DomainError(f"g({p}) exceeds A/(p - 1) = {A / (p - 1)}")
    terms = [
        _g_value(problem, chain.m[j]) * chain.V_levels[j + 1]
        for j in range(1, chain.ell)
    ]
    terms.append(_g_value(problem, chain.m[chain.ell]) * chain.V_levels[chain.ell])
    lhs = math.fsum(terms)
    rhs = 2.0 * A * math.exp(A) * (chain.V_levels[1] - chain.V_levels[0])
    return lhs, rhs, lhs <= rhs


@dataclass(frozen=True)
class LowerBoundGeometry:
    """How dividing the level D by the chain products m_j shrinks the
    sifting parameter s = log D / log z."""

    D: int
    z: int
    k: int
    s: float
    m: tuple
    D_levels: tuple
    s_levels: tuple
    delta: float
    warning: bool


def lower_bound_geometry(D, z, k):
    """Per-level D_j = D/m_j and s_j = log D_j / log z, with the loss
    delta = log k / log z. warning flags s_ell <= 1."""
    D = int(D)
    z = int(z)
    k = int(k)
    if z < 2:
        raise DomainError(f"z = {z} is below 2")
    if D <= z:
        raise DomainError(f"D = {D} must exceed z = {z}")
    if k < 1:
        raise DomainError(f"k = {k} is below 1")
    fac = _trial_factor(k) if k > 1 else []
    if any(e > 1 for _, e in fac):
        raise DomainError(f"k = {k} is not squarefree")
    q = sorted((p for p, _ in fac), reverse=True)
    m = [1]
    for prime in q:
        m.append(m[-1] * prime)
    log_z = math.log(z)
    s = math.log(D) / log_z
    d_levels = tuple(D / mm for mm in m)
    s_levels = tuple(math.log(dd) / log_z for dd in d_levels)
    return LowerBoundGeometry(
        D=D,
        z=z,
        k=k,
        s=s,
        m=tuple(m),
        D_levels=d_levels,
        s_levels=s_levels,
        delta=math.log(k) / log_z,
        warning=s_levels[-1] <= 1.0,
    )


def random_instances(seed, count, element_bound=10**5):
    """Deterministic (problem, k, z) triples for identity exercises.

    Cycles through the named kinds plus a synthetic odd-element kind.
    Chain primes are always drawn below z from the problem's own sifting
    primes, so the exact identities are guaranteed to hold.
    """
    if count < 1:
        raise DomainError(f"count = {count} is below 1")
    if element_bound < 700:
        raise DomainError(f"element_bound = {element_bound} is too small")
    rng = random.Random(seed)
    kinds = ("twin", "goldbach", "square_shift", "custom")
    out = []
    while len(out) < count:
        kind = kinds[len(out) % len(kinds)]
        problem = None
        for _ in range(200):
            try:
                if kind == "twin":
                    problem = build_problem("twin", rng.randrange(20, min(element_bound - 2, 600)))
                elif kind == "goldbach":
                    problem = build_problem("goldbach", 2 * rng.randrange(5, min(element_bound // 2, 400)))
                elif kind == "square_shift":
                    n = 6 * rng.randrange(10, min(element_bound // 6, 500))
                    problem = build_problem("square_shift", n + rng.choice((0, 2)))
                else:
                    size = rng.randrange(20, 60)
                    els = sorted(
                        {2 * rng.randrange(1, element_bound // 2) + 1 for _ in range(size)}
                    )
                    problem = SieveProblem(
                        elements=tuple(els),
                        excluded_primes=frozenset({2}),
                        density=twin_density_spec(),
                        X=float(len(els)),
                        label="random odd set",
                    )
            except DomainError:
                continue
            z = rng.randrange(6, 60)
            pool = _sifting_primes(problem, z).tolist()
            if pool:
                break
            problem = None
        if problem is None:
            raise DomainError("failed to draw a usable instance")
        ell = rng.randrange(1, min(3, len(pool)) + 1)
        k = 1
        for p in rng.sample(pool, ell):
            k *= p
        out.append((problem, k, z))
    return out
