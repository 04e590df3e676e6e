"""Pure numpy/Python kernels, the fallback backend.

Every function here has a compiled twin in ``_kernels_cy``; the dispatcher
in ``_kernels`` picks one at import time. Integer-valued kernels must give
identical results on both backends. The psi scan follows the exact same
compensated-summation order as the compiled version so that even its
floating-point output matches.
"""

from __future__ import annotations

import numpy as np


def mark_segment_odds(flags, base, primes):
    """Zero out composite odd slots in place.

    flags[i] stands for the odd number base + 1 + 2*i (base is even).
    primes must be ascending and cover every prime up to the square root
    of the segment top; 2 is skipped if present.
    """
    n = int(flags.shape[0])
    if n == 0:
        return
    lo = base + 1
    hi = base + 2 * n  # exclusive top of the covered odd range
    for p in primes.tolist():
        if p < 3:
            continue
        start = p * p
        if start >= hi:
            break  # ascending primes: later p*p only larger
        if start < lo:
            # first odd multiple of p at or above lo; > p*p here, so composite
            start = ((lo + p - 1) // p) * p
            if start % 2 == 0:
                start += p
            if start >= hi:
                continue
        flags[(start - lo) // 2 :: p] = 0


def spf_fill(spf):
    """Fill spf[n] = smallest prime factor of n, in place; spf[1] = 1."""
    n = int(spf.shape[0]) - 1
    if n >= 0:
        spf[0] = 0
    if n >= 1:
        spf[1] = 1
    i = 2
    while i * i <= n:
        if spf[i] == 0:
            spf[i] = i
            view = spf[i * i :: i]
            view[view == 0] = i
        i += 1
    tail = spf[2:]
    idx = np.nonzero(tail == 0)[0]
    tail[idx] = (idx + 2).astype(spf.dtype)


def multiplicative_tables(limit):
    """Tables (squarefree uint8, omega uint8, phi int64) for 0..limit."""
    n = int(limit)
    sf = np.ones(n + 1, dtype=np.uint8)
    om = np.zeros(n + 1, dtype=np.uint8)
    phi = np.arange(n + 1, dtype=np.int64)
    sf[0] = 0
    isp = np.ones(n + 1, dtype=bool)
    isp[: min(2, n + 1)] = False
    i = 2
    while i * i <= n:
        if isp[i]:
            isp[i * i :: i] = False
        i += 1
    for p in np.nonzero(isp)[0].tolist():
        om[p::p] += 1
        view = phi[p::p]
        view -= view // p  # exact: p still divides the running value
        pp = p * p
        if pp <= n:
            sf[pp::pp] = 0
    return sf, om, phi


def divisor_count_table(limit):
    """tau[n] = number of divisors of n, for 0..limit (tau[0] = 0)."""
    n = int(limit)
    tau = np.zeros(n + 1, dtype=np.int64)
    if n >= 1:
        tau[1:] += 1  # the divisor 1
    for i in range(2, n // 2 + 1):
        tau[i::i] += 1
    lo = max(n // 2 + 1, 2)
    if lo <= n:
        tau[lo:] += 1  # self-divisor of everything past n/2
    return tau


def pi_error_scan(residues, d, coprime):
    """Exact scan of max over classes of |phi*count_a(j) - (j+1)|.

    residues[j] is p_j mod d over the ascending primes p_0 < p_1 < ...;
    coprime lists the reduced residues ascending. Returns the integer
    numerator of the sup, the earliest 0-based jump index attaining it,
    and the smallest witness class (ties: smallest j, then smallest a).
    """
    J = int(residues.shape[0])
    phi = int(coprime.shape[0])
    if J == 0 or phi == 0:
        return 0, -1, -1
    pis = np.arange(1, J + 1, dtype=np.int64)
    best = -1
    bj = -1
    ba = -1
    for a in coprime.tolist():
        err = np.abs(phi * np.cumsum(residues == a, dtype=np.int64) - pis)
        m = int(err.max())
        if m < best:
            continue
        j = int(err.argmax())
        if m > best or j < bj:
            best, bj, ba = m, j, a
    return best, bj, ba


def psi_error_scan(residues, values, d, coprime):
    """Streaming compensated scan of max over classes of |phi*S_a(j) - T(j)|.

    Same convention as pi_error_scan, but the jumps carry the weights in
    ``values`` (log of the base prime at each prime power). Kahan-sums each
    class and the total in stream order; numerator returned as a float.
    """
    res = residues.tolist()
    vals = values.tolist()
    cop = coprime.tolist()
    phi = len(cop)
    if not res or phi == 0:
        return 0.0, -1, -1
    slot_of = {a: i for i, a in enumerate(cop)}
    S = [0.0] * phi
    C = [0.0] * phi
    T = 0.0
    Tc = 0.0
    smax = 0.0
    smin = 0.0
    nmin = phi
    best = -1.0
    bj = -1
    ba = -1
    for j in range(len(res)):
        v = vals[j]
        y = v - Tc
        t = T + y
        Tc = (t - T) - y
        T = t
        i = slot_of.get(res[j], -1)
        if i >= 0:
            s_old = S[i]
            y = v - C[i]
            t = s_old + y
            C[i] = (t - s_old) - y
            S[i] = t
            if t > smax:
                smax = t
            if s_old == smin:
                nmin -= 1
                if nmin == 0:
                    smin = min(S)
                    nmin = S.count(smin)
        hi = phi * smax - T
        lo = T - phi * smin
        m = hi if hi >= lo else lo
        if m > best:
            best = m
            bj = j
            for i2 in range(phi):
                e = phi * S[i2] - T
                if e < 0.0:
                    e = -e
                if e == m:
                    ba = cop[i2]
                    break
    return best, bj, ba


def k_offset_scan(res_kd, res_k, kd, k, phi_d, coprime_kd):
    """Max integer numerator |phi_d*count_{a mod kd}(j) - count_{a mod k}(j)|."""
    if int(res_kd.shape[0]) == 0 or int(coprime_kd.shape[0]) == 0:
        return 0
    best = 0
    for a in coprime_kd.tolist():
        c1 = np.cumsum(res_kd == a, dtype=np.int64)
        c2 = np.cumsum(res_k == (a % k), dtype=np.int64)
        m = int(np.abs(phi_d * c1 - c2).max())
        if m > best:
            best = m
    return best
