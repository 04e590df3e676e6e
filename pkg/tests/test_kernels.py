"""Backend parity: the compiled kernels against the pure-Python ones.

Integer kernels must agree exactly; the compensated float scan is held
to 1e-12. The compiled module is optional, so every comparison skips
cleanly when only the fallback is installed.
"""

import numpy as np
import pytest

from sievekit import _kernels_py as kpy
from sievekit.primes import prime_power_arrays, primes_array


def _cy():
    return pytest.importorskip("sievekit._kernels_cy")


def _segment_inputs(base, count, rng):
    top = base + 2 * count
    primes = primes_array(max(int(top**0.5) + 1, 3))
    flags = (rng.random(count) < 0.97).astype(np.uint8)
    return flags, primes


@pytest.mark.parametrize("base", [0, 30, 10**6, 10**9])
def test_mark_segment_odds_agrees(base):
    kcy = _cy()
    rng = np.random.default_rng(base + 7)
    flags, primes = _segment_inputs(base, 4096, rng)
    a = flags.copy()
    b = flags.copy()
    kpy.mark_segment_odds(a, base, primes)
    kcy.mark_segment_odds(b, base, primes)
    assert np.array_equal(a, b)


def test_mark_segment_odds_matches_trial_division():
    base = 10**4
    flags = np.ones(512, dtype=np.uint8)
    kpy.mark_segment_odds(flags, base, primes_array(200))
    for i, alive in enumerate(flags.tolist()):
        v = base + 1 + 2 * i
        composite = any(v % p == 0 for p in range(3, int(v**0.5) + 1, 2))
        assert alive == (0 if composite else 1), v


@pytest.mark.parametrize("size", [2, 3, 100, 4096])
def test_spf_fill_agrees(size):
    kcy = _cy()
    a = np.zeros(size, dtype=np.uint32)
    b = np.zeros(size, dtype=np.uint32)
    kpy.spf_fill(a)
    kcy.spf_fill(b)
    assert np.array_equal(a, b)
    if size > 49:
        assert a[12] == 2 and a[49] == 7


@pytest.mark.parametrize("limit", [1, 2, 100, 3000])
def test_multiplicative_tables_agree(limit):
    kcy = _cy()
    for pa, pb in zip(kpy.multiplicative_tables(limit), kcy.multiplicative_tables(limit)):
        assert np.array_equal(np.asarray(pa), np.asarray(pb))


def test_multiplicative_tables_spot_values():
    sf, om, phi = kpy.multiplicative_tables(60)
    assert sf[30] == 1 and sf[12] == 0
    assert om[30] == 3 and om[1] == 0
    assert phi[60] == 16 and phi[1] == 1


@pytest.mark.parametrize("limit", [1, 2, 500, 2048])
def test_divisor_count_table_agrees(limit):
    kcy = _cy()
    assert np.array_equal(kpy.divisor_count_table(limit), np.asarray(kcy.divisor_count_table(limit)))


def test_divisor_count_spot_values():
    tau = kpy.divisor_count_table(100)
    assert tau[1] == 1 and tau[12] == 6 and tau[97] == 2 and tau[100] == 9


@pytest.mark.parametrize("d", [3, 4, 5, 12, 30])
def test_pi_error_scan_agrees_on_real_primes(d):
    kcy = _cy()
    pr = primes_array(10**4)
    residues = (pr % d).astype(np.int64)
    coprime = np.array([a for a in range(1, d) if np.gcd(a, d) == 1], dtype=np.int64)
    assert kpy.pi_error_scan(residues, d, coprime) == kcy.pi_error_scan(residues, d, coprime)


@pytest.mark.parametrize("d", [3, 5, 12])
def test_psi_error_scan_agrees_on_prime_powers(d):
    kcy = _cy()
    pr = primes_array(10**4)
    powers, weights = prime_power_arrays(10**4, pr)
    residues = (powers % d).astype(np.int64)
    coprime = np.array([a for a in range(1, d) if np.gcd(a, d) == 1], dtype=np.int64)
    na, ja, aa = kpy.psi_error_scan(residues, weights, d, coprime)
    nb, jb, ab = kcy.psi_error_scan(residues, weights, d, coprime)
    assert abs(na - nb) <= 1e-12 * max(1.0, abs(na))
    assert (ja, aa) == (jb, ab)


def test_k_offset_scan_agrees():
    kcy = _cy()
    pr = primes_array(5000)
    k, d = 3, 4
    kd = k * d
    res_kd = (pr % kd).astype(np.int64)
    res_k = (pr % k).astype(np.int64)
    coprime = np.array([a for a in range(1, kd) if np.gcd(a, kd) == 1], dtype=np.int64)
    phi_d = 2
    got_py = kpy.k_offset_scan(res_kd, res_k, kd, k, phi_d, coprime)
    got_cy = kcy.k_offset_scan(res_kd, res_k, kd, k, phi_d, coprime)
    assert got_py == got_cy
