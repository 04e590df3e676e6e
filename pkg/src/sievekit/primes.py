"""Prime generation and prime-power bookkeeping.

Segmented sieve enumeration, smallest-prime-factor tables, checkpointed
prime counts (pi, psi, theta), Legendre symbols and modular square roots,
plus a small advisory on-disk prime cache.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, ResourceLimitError

HARD_CAP = 1 << 32  # desk scale; every counter fits in 64 bits
DEFAULT_SEGMENT_LENGTH = 1 << 17  # integers per segment = 2**16 odd slots

CACHE_MAGIC = b"SVKPRIM1"

# Deterministic Miller-Rabin witness set, exact for all 64-bit inputs.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _check_limit(limit):
    if limit < 2:
        raise DomainError(f"limit {limit} is below 2; the prime domain is empty")
    if limit > HARD_CAP:
        raise ResourceLimitError(f"limit {limit} exceeds the hard cap {HARD_CAP}")


def _simple_odd_primes(limit):
    """Odd primes <= limit by a direct sieve; supplies base primes for segments."""
    if limit < 3:
        return np.empty(0, dtype=np.int64)
    n_odds = (limit - 1) // 2  # odd value at index i is 2*i + 3
    flags = np.ones(n_odds, dtype=np.uint8)
    i = 0
    while True:
        p = 2 * i + 3
        if p * p > limit:
            break
        if flags[i]:
            flags[(p * p - 3) // 2 :: p] = 0
        i += 1
    return 2 * np.nonzero(flags)[0].astype(np.int64) + 3


@dataclass
class SieveSegment:
    """One block of the segmented sieve.

    flags[i] = 1 marks the odd number base + 1 + 2*i as prime; the block
    covers the integers [base, base + length). base is always even, so
    consecutive segments tile [2, limit] without gaps or overlaps.
    """

    base: int
    length: int
    flags: np.ndarray

    def primes(self):
        """Odd primes inside this segment, ascending (2 never appears here)."""
        return self.base + 1 + 2 * np.nonzero(self.flags)[0].astype(np.int64)


def iter_segments(limit, segment_length=DEFAULT_SEGMENT_LENGTH):
    """Yield SieveSegment blocks tiling [2, limit]."""
    limit = int(limit)
    _check_limit(limit)
    step = int(segment_length)
    if step < 2:
        raise DomainError(f"segment_length {segment_length} is below 2")
    step += step % 2  # keep bases even
    base_primes = _simple_odd_primes(math.isqrt(limit))
    for base in range(2, limit + 1, step):
        hi = min(base + step, limit + 1)
        n_odds = (hi - base) // 2
        flags = np.ones(n_odds, dtype=np.uint8)
        _kernels.mark_segment_odds(flags, base, base_primes)
        yield SieveSegment(base=base, length=hi - base, flags=flags)


def enumerate_primes(limit, segment_length=DEFAULT_SEGMENT_LENGTH):
    """Stream the primes <= limit in increasing order, exactly once each."""
    limit = int(limit)
    _check_limit(limit)
    yield 2
    for seg in iter_segments(limit, segment_length):
        yield from seg.primes().tolist()


def primes_array(limit, segment_length=DEFAULT_SEGMENT_LENGTH):
    """All primes <= limit as an int64 array."""
    limit = int(limit)
    _check_limit(limit)
    parts = [np.array([2], dtype=np.int64)]
    parts.extend(seg.primes() for seg in iter_segments(limit, segment_length))
    return np.concatenate(parts)


def prime_flags(limit):
    """uint8 array f of size limit+1 with f[n] = 1 iff n is prime."""
    limit = int(limit)
    if limit < 0:
        raise DomainError("limit must be nonnegative")
    if limit > HARD_CAP:
        raise ResourceLimitError(f"limit {limit} exceeds the hard cap {HARD_CAP}")
    f = np.zeros(limit + 1, dtype=np.uint8)
    if limit >= 2:
        f[2] = 1
    if limit >= 3:
        odd = np.ones((limit - 1) // 2, dtype=np.uint8)
        _kernels.mark_segment_odds(odd, 2, _simple_odd_primes(math.isqrt(limit)))
        f[3::2] = odd
    return f


@dataclass
class FactorTable:
    """Smallest-prime-factor table for 2 <= n <= limit; spf[1] = 1."""

    limit: int
    spf: np.ndarray

    def factor(self, n):
        """Prime factorization of n as (p, exponent) pairs, ascending p."""
        n = int(n)
        if not 1 <= n <= self.limit:
            raise DomainError(f"{n} is outside the table range [1, {self.limit}]")
        out = []
        spf = self.spf
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out


def build_factor_table(limit, cap=HARD_CAP):
    limit = int(limit)
    if limit < 2:
        raise DomainError(f"factor table limit {limit} is below 2")
    if limit > min(cap, HARD_CAP):
        raise ResourceLimitError(
            f"factor table limit {limit} exceeds the cap {min(cap, HARD_CAP)}"
        )
    spf = np.zeros(limit + 1, dtype=np.uint32)
    _kernels.spf_fill(spf)
    return FactorTable(limit=limit, spf=spf)


def prime_power_arrays(limit, primes=None):
    """Sorted prime powers <= limit with parallel log-of-base-prime weights.

    The weight attached to p**m is log p, computed once per prime so that
    all powers of p carry the identical float.
    """
    if primes is None:
        primes = primes_array(limit)
    logs = np.log(primes.astype(np.float64))
    vals = [primes]
    ws = [logs]
    root = math.isqrt(limit)
    k = int(np.searchsorted(primes, root, side="right"))
    for i in range(k):
        p = int(primes[i])
        w = float(logs[i])
        q = p * p
        while q <= limit:
            vals.append(np.array([q], dtype=np.int64))
            ws.append(np.array([w], dtype=np.float64))
            q *= p
    powers = np.concatenate(vals)
    weights = np.concatenate(ws)
    order = np.argsort(powers, kind="stable")  # prime powers are distinct
    return powers[order], weights[order]


@dataclass
class CheckpointRow:
    y: int
    pi: int
    psi: float
    theta: float


@dataclass
class PrimeCountCheckpoints:
    limit: int
    rows: list


def count_checkpoints(limit, ys, segment_length=DEFAULT_SEGMENT_LENGTH):
    """Exact (y, pi, psi, theta) records at each checkpoint y.

    psi sums log p over all prime powers p**m <= y; theta over primes only.
    Both use compensated (Kahan) accumulation in ascending order. ys must
    be sorted ascending, nonempty, each at most limit.
    """
    limit = int(limit)
    _check_limit(limit)
    ys = [int(y) for y in ys]
    if not ys:
        raise DomainError("ys must be nonempty")
    for a, b in zip(ys, ys[1:]):
        if b < a:
            raise DomainError("ys must be sorted ascending")
    if ys[-1] > limit:
        raise DomainError(f"checkpoint {ys[-1]} exceeds limit {limit}")
    if ys[0] < 0:
        raise DomainError("checkpoints must be nonnegative")

    pr = primes_array(limit, segment_length)
    powers, weights = prime_power_arrays(limit, pr)
    pr_l = pr.tolist()
    pr_logs = np.log(pr.astype(np.float64)).tolist()
    pw_l = powers.tolist()
    pw_w = weights.tolist()

    rows = []
    i_pr = 0
    i_pw = 0
    psi = 0.0
    psi_c = 0.0
    th = 0.0
    th_c = 0.0
    n_pr = len(pr_l)
    n_pw = len(pw_l)
    for y in ys:
        while i_pw < n_pw and pw_l[i_pw] <= y:
            v = pw_w[i_pw]
            t = psi + (v - psi_c)
            psi_c = (t - psi) - (v - psi_c)
            psi = t
            i_pw += 1
        while i_pr < n_pr and pr_l[i_pr] <= y:
            v = pr_logs[i_pr]
            t = th + (v - th_c)
            th_c = (t - th) - (v - th_c)
            th = t
            i_pr += 1
        rows.append(CheckpointRow(y=y, pi=i_pr, psi=psi, theta=th))
    return PrimeCountCheckpoints(limit=limit, rows=rows)


def is_prime(n):
    """Deterministic Miller-Rabin; exact for every input below 2**64."""
    n = int(n)
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _require_odd_prime(p):
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise DomainError(f"modulus {p} is not an odd prime")


def _jacobi(a, n):
    # n odd positive; returns the Jacobi symbol (a|n)
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre_symbol(n, p):
    """Legendre symbol (n|p) in {-1, 0, +1} via iterative Jacobi reduction."""
    _require_odd_prime(p)
    a = n % p
    if a == 0:
        return 0
    return _jacobi(a, p)


def sqrt_mod(n, p):
    """Smaller root a0 of a0**2 = n (mod p), or None for a non-residue.

    Tonelli-Shanks with the deterministic non-residue search 2, 3, 4, ...
    (the first non-residue is always prime, so scanning integers is the
    same as scanning primes). p must be an odd prime not dividing n.
    """
    _require_odd_prime(p)
    a = n % p
    if a == 0:
        raise DomainError(f"{p} divides {n}; caller must exclude p | n")
    if _jacobi(a, p) == -1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q = p - 1
        s = 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while _jacobi(z, p) != -1:
            z += 1
        c = pow(z, q, p)
        r = pow(a, (q + 1) // 2, p)
        t = pow(a, q, p)
        m = s
        while t != 1:
            i = 0
            t2 = t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            r = r * b % p
            c = b * b % p
            t = t * c % p
            m = i
    return min(r, p - r)


def write_prime_cache(path, primes):
    """Write primes as the 8-byte magic plus little-endian u64 deltas."""
    arr = np.asarray(primes, dtype=np.int64)
    deltas = np.diff(arr, prepend=np.int64(0)).astype("<u8")
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(deltas.tobytes())


def read_prime_cache(path):
    """Primes stored by write_prime_cache, as an int64 array."""
    with open(path, "rb") as fh:
        head = fh.read(8)
        if head != CACHE_MAGIC:
            raise DomainError(f"{path}: bad prime cache magic")
        body = fh.read()
    if len(body) % 8:
        raise DomainError(f"{path}: truncated prime cache")
    deltas = np.frombuffer(body, dtype="<u8")
    return np.cumsum(deltas.astype(np.int64))


def cached_primes_array(limit, cache_path, segment_length=DEFAULT_SEGMENT_LENGTH):
    """primes_array with an advisory delta cache; output identical either way."""
    limit = int(limit)
    _check_limit(limit)
    pr = None
    try:
        pr = read_prime_cache(cache_path)
    except (OSError, DomainError):
        pr = None
    if pr is not None and pr.shape[0] and int(pr[-1]) >= limit:
        return pr[: int(np.searchsorted(pr, limit, side="right"))]
    pr = primes_array(limit, segment_length)
    try:
        write_prime_cache(cache_path, pr)
    except OSError:
        pass  # advisory cache; persisting is best-effort
    return pr
