import math

import numpy as np
import pytest

from lfunclab.arith import (
    MultiplicativeTables,
    divisors,
    kloosterman,
    kloosterman_row,
    mod_inverse,
    moebius,
    ramanujan_sum,
    tables,
    twisted_factorization_check,
    zeta_value,
)
from lfunclab.errors import CapacityError, DomainError, InternalMismatch, NotInvertible

from oracles import divisor_count_slow, kloosterman_brute, moebius_slow, zeta_direct


class TestModInverse:
    def test_identity(self):
        assert mod_inverse(1, 5).value == 1

    @pytest.mark.parametrize("a,c,want", [(2, 5, 3), (3, 7, 5)])
    def test_brute_scan(self, a, c, want):
        got = mod_inverse(a, c).value
        assert got == want
        assert (a * got) % c == 1

    def test_not_invertible(self):
        with pytest.raises(NotInvertible):
            mod_inverse(6, 9)


class TestKloosterman:
    def test_trivial_modulus(self):
        assert kloosterman(3, 7, 1) == 1.0

    def test_small_case_direct(self):
        # S(1,1;3) over h in {1,2}: e(2/3) + e(4/3) = 2 cos(2 pi/3) = -1
        assert kloosterman(1, 1, 3) == pytest.approx(-1.0, abs=1e-12)

    def test_matches_brute_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            c = int(rng.integers(1, 80))
            n = int(rng.integers(0, 200))
            m = int(rng.integers(0, 200))
            want = kloosterman_brute(n, m, c)
            assert abs(want.imag) < 1e-9
            assert kloosterman(n, m, c) == pytest.approx(want.real, abs=1e-9)

    def test_weil_bound_random_sweep(self):
        rng = np.random.default_rng(17)
        t = tables(500)
        for _ in range(2000):
            c = int(rng.integers(1, 501))
            n = int(rng.integers(1, 10 ** 6))
            m = int(rng.integers(1, 10 ** 6))
            bound = math.sqrt(math.gcd(math.gcd(n, m), c)) * math.sqrt(c) * t.d[c]
            assert abs(kloosterman(n, m, c)) <= bound + 1e-9

    def test_symmetry(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            c = int(rng.integers(1, 300))
            n = int(rng.integers(0, 10 ** 4))
            m = int(rng.integers(0, 10 ** 4))
            assert kloosterman(n, m, c) == pytest.approx(kloosterman(m, n, c), abs=1e-10)

    def test_twisted_multiplicativity(self):
        rng = np.random.default_rng(31)
        done = 0
        while done < 100:
            c1 = int(rng.integers(2, 60))
            c2 = int(rng.integers(2, 60))
            if math.gcd(c1, c2) != 1:
                continue
            n = int(rng.integers(0, 1000))
            m = int(rng.integers(0, 1000))
            c2b = pow(c2, -1, c1)
            c1b = pow(c1, -1, c2)
            lhs = kloosterman(n, m, c1 * c2)
            rhs = kloosterman(n * c2b, m * c2b, c1) * kloosterman(n * c1b, m * c1b, c2)
            assert lhs == pytest.approx(rhs, abs=1e-9)
            done += 1

    def test_row_matches_scalar(self):
        ns = np.array([1, 2, 5, 10])
        row = kloosterman_row(ns, 3, 35)
        for n, v in zip(ns, row):
            assert v == pytest.approx(kloosterman(int(n), 3, 35), abs=1e-10)


class TestRamanujanSum:
    def test_prime_not_dividing(self):
        # c = q prime, q does not divide m: value -1
        assert ramanujan_sum(3, 7) == -1.0

    def test_prime_dividing(self):
        # c = q prime, q divides m: value q - 1
        assert ramanujan_sum(14, 7) == 6.0

    def test_composite_vs_brute(self):
        want = kloosterman_brute(0, 4, 12).real
        assert ramanujan_sum(4, 12) == pytest.approx(want, abs=1e-9)

    def test_paths_agree_exhaustively(self):
        for c in range(1, 60):
            for m in range(1, 60):
                ramanujan_sum(m, c)  # raises InternalMismatch on disagreement


class TestTwistedFactorization:
    def test_basic_instance(self):
        # S(3,1;6) = -S(1,1;2)
        assert twisted_factorization_check(1, 1, 2, 3)

    def test_degenerate_n_zero(self):
        assert twisted_factorization_check(0, 5, 4, 3)

    def test_random_sweep(self):
        rng = np.random.default_rng(99)
        primes = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                  59, 61, 67, 71, 73, 79, 83, 89, 97]
        done = 0
        while done < 300:
            q = int(rng.choice(primes))
            c = int(rng.integers(1, 51))
            m = int(rng.integers(1, 100))
            if math.gcd(c, q) != 1 or math.gcd(m, q) != 1:
                continue
            n = int(rng.integers(0, 100))
            assert twisted_factorization_check(n, m, c, q)
            done += 1


class TestTables:
    def test_divisor_values(self):
        t = tables(100)
        assert t.d[12] == 6
        assert t.d[1] == 1

    def test_moebius_values(self):
        t = tables(100)
        assert t.mu[30] == -1
        assert t.mu[4] == 0
        assert t.mu[1] == 1

    def test_against_slow_oracles(self):
        t = tables(500)
        for n in range(1, 501, 7):
            assert t.d[n] == divisor_count_slow(n)
            assert t.mu[n] == moebius_slow(n)

    def test_mertens_consistency(self):
        t = tables(10 ** 4)
        want = sum(moebius_slow(n) for n in range(1, 10 ** 4 + 1))
        assert int(np.sum(t.mu[1:])) == want

    def test_capacity_error(self):
        with pytest.raises(CapacityError):
            MultiplicativeTables(10 ** 8 + 1)


class TestZeta:
    def test_zeta2(self):
        assert zeta_value(2.0) == pytest.approx(math.pi ** 2 / 6, abs=1e-12)

    def test_zeta4(self):
        assert zeta_value(4.0) == pytest.approx(math.pi ** 4 / 90, abs=1e-12)

    def test_zeta3_vs_direct_oracle(self):
        assert zeta_value(3.0) == pytest.approx(zeta_direct(3.0), abs=1e-9)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            zeta_value(1.0)

    def test_divisors_helper(self):
        assert divisors(12) == [1, 2, 3, 4, 6, 12]
        assert moebius(30) == -1
