"""Prime engine: enumeration, factor tables, checkpoints, modular roots."""

import math

import numpy as np
import pytest

from sievekit.errors import DomainError, ResourceLimitError
from sievekit.primes import (
    build_factor_table,
    cached_primes_array,
    count_checkpoints,
    enumerate_primes,
    is_prime,
    iter_segments,
    legendre_symbol,
    prime_flags,
    prime_power_arrays,
    primes_array,
    read_prime_cache,
    sqrt_mod,
    write_prime_cache,
)

from .oracles import (
    euler_criterion,
    naive_factor,
    naive_is_prime,
    naive_pi,
    naive_primes,
    naive_psi,
    naive_spf,
    naive_theta,
)


def test_enumerate_primes_small_segments():
    assert list(enumerate_primes(30, segment_length=16)) == [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29,
    ]


def test_enumerate_primes_limit_two():
    assert list(enumerate_primes(2, segment_length=64)) == [2]


def test_enumerate_primes_matches_naive_sieve():
    assert list(enumerate_primes(2000, segment_length=128)) == naive_primes(2000)


def test_enumerate_primes_million():
    count = sum(1 for _ in enumerate_primes(10**6, segment_length=1 << 16))
    assert count == 78498


def test_enumerate_primes_rejects_bad_limit():
    with pytest.raises(DomainError):
        list(enumerate_primes(1))
    with pytest.raises(ResourceLimitError):
        list(enumerate_primes((1 << 32) + 1))


def test_segments_tile_without_overlap():
    segs = list(iter_segments(1000, segment_length=64))
    assert segs[0].base == 2
    for a, b in zip(segs, segs[1:]):
        assert a.base + a.length == b.base
        assert a.base % 2 == 0
    assert segs[-1].base + segs[-1].length == 1001


def test_odd_segment_length_rounds_up():
    got = [p for seg in iter_segments(100, segment_length=15) for p in seg.primes()]
    assert [2] + got == naive_primes(100)


def test_primes_array_agrees_with_generator():
    arr = primes_array(5000)
    assert arr.tolist() == list(enumerate_primes(5000))


def test_prime_flags_match_naive():
    f = prime_flags(300)
    want = [1 if naive_is_prime(n) else 0 for n in range(301)]
    assert f.tolist() == want


def test_factor_table_examples():
    ft = build_factor_table(100)
    assert int(ft.spf[91]) == 7
    assert int(ft.spf[97]) == 97
    assert int(ft.spf[64]) == 2


def test_factor_table_matches_trial_division():
    ft = build_factor_table(3000)
    for n in range(2, 3001):
        assert int(ft.spf[n]) == naive_spf(n)
    for n in (2, 97, 91, 360, 2048, 2999, 3000):
        assert ft.factor(n) == naive_factor(n)


def test_factor_table_range_errors():
    ft = build_factor_table(50)
    with pytest.raises(DomainError):
        ft.factor(51)
    with pytest.raises(DomainError):
        ft.factor(0)
    with pytest.raises(DomainError):
        build_factor_table(1)
    with pytest.raises(ResourceLimitError):
        build_factor_table(100, cap=50)


def test_prime_power_arrays_small():
    powers, weights = prime_power_arrays(20)
    assert powers.tolist() == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]
    # every power of p carries the identical log p float
    assert weights[0] == weights[2] == weights[5] == weights[9] == math.log(2)
    assert weights[1] == weights[6] == math.log(3)


def test_count_checkpoints_psi_ten():
    rep = count_checkpoints(10, [10])
    row = rep.rows[0]
    assert row.pi == 4
    want = 3 * math.log(2) + 2 * math.log(3) + math.log(5) + math.log(7)
    assert abs(row.psi - want) <= 1e-9
    assert abs(row.theta - naive_theta(10)) <= 1e-9


def test_count_checkpoints_y_one_is_empty():
    row = count_checkpoints(10, [1]).rows[0]
    assert (row.pi, row.psi, row.theta) == (0, 0.0, 0.0)


def test_count_checkpoints_streaming_matches_naive():
    ys = [1, 2, 10, 50, 97, 97, 200]
    rep = count_checkpoints(200, ys)
    for row in rep.rows:
        assert row.pi == naive_pi(row.y)
        assert abs(row.psi - naive_psi(row.y)) <= 1e-9
        assert abs(row.theta - naive_theta(row.y)) <= 1e-9


def test_count_checkpoints_rejects_unsorted():
    with pytest.raises(DomainError):
        count_checkpoints(100, [10, 5])
    with pytest.raises(DomainError):
        count_checkpoints(100, [])
    with pytest.raises(DomainError):
        count_checkpoints(100, [101])


def test_is_prime_matches_naive():
    for n in range(-3, 2000):
        assert is_prime(n) == naive_is_prime(n)
    assert is_prime(2**31 - 1)
    assert not is_prime(2**32 + 1)


def test_legendre_examples():
    assert legendre_symbol(4, 7) == 1
    assert legendre_symbol(2, 7) == 1
    assert legendre_symbol(3, 7) == -1
    assert legendre_symbol(14, 7) == 0


def test_legendre_agrees_with_euler_criterion():
    for p in naive_primes(500):
        if p == 2:
            continue
        for n in range(0, 2 * p + 5, 3):
            assert legendre_symbol(n, p) == euler_criterion(n, p)


def test_legendre_rejects_bad_modulus():
    for p in (1, 2, 4, 9, 15):
        with pytest.raises(DomainError):
            legendre_symbol(3, p)


def test_sqrt_mod_examples():
    assert sqrt_mod(2, 7) == 3
    assert sqrt_mod(3, 7) is None
    assert sqrt_mod(1, 13) == 1


def test_sqrt_mod_exhaustive_small_moduli():
    for p in naive_primes(200):
        if p == 2:
            continue
        for n in range(1, p):
            r = sqrt_mod(n, p)
            if legendre_symbol(n, p) == -1:
                assert r is None
            else:
                assert r is not None
                assert r * r % p == n
                assert r <= p - r  # smaller of the two roots


def test_sqrt_mod_rejects_divisible():
    with pytest.raises(DomainError):
        sqrt_mod(21, 7)


def test_prime_cache_round_trip(tmp_path):
    path = tmp_path / "primes.svk"
    pr = primes_array(10_000)
    write_prime_cache(path, pr)
    back = read_prime_cache(path)
    assert np.array_equal(back, pr)


def test_prime_cache_rejects_bad_magic(tmp_path):
    path = tmp_path / "bad.svk"
    path.write_bytes(b"NOTMAGIC" + b"\x00" * 8)
    with pytest.raises(DomainError):
        read_prime_cache(path)
    path.write_bytes(b"SVKPRIM1" + b"\x00" * 5)
    with pytest.raises(DomainError):
        read_prime_cache(path)


def test_cached_primes_identical_with_and_without_cache(tmp_path):
    path = tmp_path / "cache.svk"
    cold = cached_primes_array(2000, path)
    warm = cached_primes_array(2000, path)
    slice_ = cached_primes_array(500, path)  # served from the larger cache
    assert np.array_equal(cold, warm)
    assert np.array_equal(cold, primes_array(2000))
    assert np.array_equal(slice_, primes_array(500))
