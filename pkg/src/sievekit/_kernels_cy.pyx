# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Must mirror _kernels_py exactly: identical integer
results, and bitwise-identical floats for the psi scan (same operation
order, no FP contraction; see setup.py flags)."""

import numpy as np


def mark_segment_odds(unsigned char[::1] flags, long long base, long long[::1] primes):
    cdef Py_ssize_t n = flags.shape[0]
    cdef long long lo = base + 1
    cdef long long hi = base + 2 * n
    cdef Py_ssize_t ip, idx, step
    cdef long long p, start
    if n == 0:
        return
    for ip in range(primes.shape[0]):
        p = primes[ip]
        if p < 3:
            continue
        start = p * p
        if start >= hi:
            break
        if start < lo:
            start = ((lo + p - 1) // p) * p
            if start % 2 == 0:
                start += p
            if start >= hi:
                continue
        idx = <Py_ssize_t>((start - lo) // 2)
        step = <Py_ssize_t>p
        while idx < n:
            flags[idx] = 0
            idx += step


def spf_fill(unsigned int[::1] spf):
    cdef Py_ssize_t n = spf.shape[0] - 1
    cdef Py_ssize_t i, j
    if n >= 0:
        spf[0] = 0
    if n >= 1:
        spf[1] = 1
    i = 2
    while i * i <= n:
        if spf[i] == 0:
            spf[i] = <unsigned int>i
            j = i * i
            while j <= n:
                if spf[j] == 0:
                    spf[j] = <unsigned int>i
                j += i
        i += 1
    for i in range(2, n + 1):
        if spf[i] == 0:
            spf[i] = <unsigned int>i


def multiplicative_tables(long long limit):
    cdef Py_ssize_t n = <Py_ssize_t>limit
    sf_arr = np.ones(n + 1, dtype=np.uint8)
    om_arr = np.zeros(n + 1, dtype=np.uint8)
    phi_arr = np.arange(n + 1, dtype=np.int64)
    cdef unsigned char[::1] sf = sf_arr
    cdef unsigned char[::1] om = om_arr
    cdef long long[::1] phi = phi_arr
    cdef Py_ssize_t p, j, pp
    sf[0] = 0
    for p in range(2, n + 1):
        if phi[p] == p:  # untouched by smaller primes, hence prime
            for j in range(p, n + 1, p):
                om[j] += 1
                phi[j] -= phi[j] // p
            if p <= n // p:
                pp = p * p
                for j in range(pp, n + 1, pp):
                    sf[j] = 0
    return sf_arr, om_arr, phi_arr


def divisor_count_table(long long limit):
    cdef Py_ssize_t n = <Py_ssize_t>limit
    tau_arr = np.zeros(n + 1, dtype=np.int64)
    cdef long long[::1] tau = tau_arr
    cdef Py_ssize_t i, j
    for i in range(1, n + 1):
        for j in range(i, n + 1, i):
            tau[j] += 1
    return tau_arr


def pi_error_scan(long long[::1] residues, long long d, long long[::1] coprime):
    cdef Py_ssize_t J = residues.shape[0]
    cdef Py_ssize_t phi = coprime.shape[0]
    if J == 0 or phi == 0:
        return 0, -1, -1
    slot_arr = np.full(d, -1, dtype=np.int64)
    counts_arr = np.zeros(phi, dtype=np.int64)
    cdef long long[::1] slot = slot_arr
    cdef long long[::1] counts = counts_arr
    cdef Py_ssize_t i, j, s
    for i in range(phi):
        slot[coprime[i]] = i
    cdef long long cmax = 0, cmin = 0
    cdef Py_ssize_t nmin = phi
    cdef long long best = -1, ba = -1
    cdef Py_ssize_t bj = -1
    cdef long long hi, lo, m, c_old, e
    for j in range(J):
        s = <Py_ssize_t>slot[residues[j]]
        if s >= 0:
            c_old = counts[s]
            counts[s] = c_old + 1
            if c_old + 1 > cmax:
                cmax = c_old + 1
            if c_old == cmin:
                nmin -= 1
                if nmin == 0:
                    cmin = counts[0]
                    for i in range(1, phi):
                        if counts[i] < cmin:
                            cmin = counts[i]
                    nmin = 0
                    for i in range(phi):
                        if counts[i] == cmin:
                            nmin += 1
        hi = phi * cmax - (j + 1)
        lo = (j + 1) - phi * cmin
        m = hi if hi >= lo else lo
        if m > best:
            best = m
            bj = j
            for i in range(phi):
                e = phi * counts[i] - (j + 1)
                if e < 0:
                    e = -e
                if e == m:
                    ba = coprime[i]
                    break
    return int(best), int(bj), int(ba)


def psi_error_scan(long long[::1] residues, double[::1] values, long long d,
                   long long[::1] coprime):
    cdef Py_ssize_t J = residues.shape[0]
    cdef Py_ssize_t phi = coprime.shape[0]
    if J == 0 or phi == 0:
        return 0.0, -1, -1
    slot_arr = np.full(d, -1, dtype=np.int64)
    S_arr = np.zeros(phi, dtype=np.float64)
    C_arr = np.zeros(phi, dtype=np.float64)
    cdef long long[::1] slot = slot_arr
    cdef double[::1] S = S_arr
    cdef double[::1] C = C_arr
    cdef Py_ssize_t i, j, s
    for i in range(phi):
        slot[coprime[i]] = i
    cdef double T = 0.0, Tc = 0.0, smax = 0.0, smin = 0.0
    cdef Py_ssize_t nmin = phi
    cdef double best = -1.0
    cdef Py_ssize_t bj = -1
    cdef long long ba = -1
    cdef double v, y, t, s_old, hi, lo, m, e
    for j in range(J):
        v = values[j]
        y = v - Tc
        t = T + y
        Tc = (t - T) - y
        T = t
        s = <Py_ssize_t>slot[residues[j]]
        if s >= 0:
            s_old = S[s]
            y = v - C[s]
            t = s_old + y
            C[s] = (t - s_old) - y
            S[s] = t
            if t > smax:
                smax = t
            if s_old == smin:
                nmin -= 1
                if nmin == 0:
                    smin = S[0]
                    for i in range(1, phi):
                        if S[i] < smin:
                            smin = S[i]
                    nmin = 0
                    for i in range(phi):
                        if S[i] == smin:
                            nmin += 1
        hi = phi * smax - T
        lo = T - phi * smin
        m = hi if hi >= lo else lo
        if m > best:
            best = m
            bj = j
            for i in range(phi):
                e = phi * S[i] - T
                if e < 0.0:
                    e = -e
                if e == m:
                    ba = coprime[i]
                    break
    return float(best), int(bj), int(ba)


def k_offset_scan(long long[::1] res_kd, long long[::1] res_k, long long kd,
                  long long k, long long phi_d, long long[::1] coprime_kd):
    cdef Py_ssize_t J = res_kd.shape[0]
    cdef Py_ssize_t phi = coprime_kd.shape[0]
    if J == 0 or phi == 0:
        return 0
    slot_arr = np.full(kd, -1, dtype=np.int64)
    c1_arr = np.zeros(phi, dtype=np.int64)
    c2_arr = np.zeros(k, dtype=np.int64)
    pair_arr = np.zeros(phi, dtype=np.int64)
    cdef long long[::1] slot = slot_arr
    cdef long long[::1] c1 = c1_arr
    cdef long long[::1] c2 = c2_arr
    cdef long long[::1] pair = pair_arr
    cdef Py_ssize_t i, j, s
    for i in range(phi):
        slot[coprime_kd[i]] = i
        pair[i] = coprime_kd[i] % k
    cdef long long best = 0, e
    for j in range(J):
        s = <Py_ssize_t>slot[res_kd[j]]
        if s >= 0:
            c1[s] += 1
        c2[res_k[j]] += 1
        for i in range(phi):
            e = phi_d * c1[i] - c2[pair[i]]
            if e < 0:
                e = -e
            if e > best:
                best = e
    return int(best)
