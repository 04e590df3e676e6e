"""Naive reference implementations used only by the test suite.

Everything here is deliberately slow and obvious: trial division and
direct summation, no numpy, no code shared with the package under test.
"""

import math


def naive_is_prime(n):
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def naive_primes(limit):
    return [n for n in range(2, limit + 1) if naive_is_prime(n)]


def naive_spf(n):
    """Smallest prime factor of n >= 2 by trial division."""
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return d
    return n


def naive_factor(n):
    out = []
    while n > 1:
        p = naive_spf(n)
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def naive_pi(y):
    return sum(1 for n in range(2, y + 1) if naive_is_prime(n))


def naive_theta(y):
    return math.fsum(math.log(p) for p in naive_primes(y))


def naive_psi(y):
    total = []
    for p in naive_primes(y):
        q = p
        while q <= y:
            total.append(math.log(p))
            q *= p
    return math.fsum(total)


def naive_mobius(n):
    fac = naive_factor(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def naive_omega(n):
    return len(naive_factor(n))


def naive_phi(n):
    if n == 1:
        return 1
    out = n
    for p, _ in naive_factor(n):
        out = out // p * (p - 1)
    return out


def naive_tau(n):
    return sum(1 for d in range(1, n + 1) if n % d == 0)


def euler_criterion(n, p):
    """Legendre symbol by Euler's criterion; p an odd prime."""
    a = n % p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def naive_pi_progression(y, d, a):
    """Count primes <= y congruent to a mod d."""
    return sum(1 for n in range(2, y + 1) if n % d == a and naive_is_prime(n))


def naive_psi_progression(y, d, a):
    """Sum of log p over prime powers p**m <= y with p**m = a mod d."""
    vals = []
    for p in naive_primes(y):
        q = p
        while q <= y:
            if q % d == a:
                vals.append(math.log(p))
            q *= p
    return math.fsum(vals)


def naive_sieve_flags(limit):
    """Plain list-of-bool Eratosthenes; flags[n] is True iff n is prime."""
    flags = [False, False] + [True] * (limit - 1)
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            for m in range(p * p, limit + 1, p):
                flags[m] = False
    return flags


def naive_twin_count(x):
    """Primes p <= x with p + 2 also prime."""
    return sum(1 for p in range(2, x + 1) if naive_is_prime(p) and naive_is_prime(p + 2))


def naive_goldbach_count(n):
    """Pairs (p, q) with p <= q, p + q = n, both prime."""
    return sum(
        1 for p in range(2, n // 2 + 1) if naive_is_prime(p) and naive_is_prime(n - p)
    )
