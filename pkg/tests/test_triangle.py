from math import comb, factorial

import numpy as np
import pytest

from pascal_ecpp.errors import NotFound
from pascal_ecpp.numtheory import is_probable_prime, primes_up_to
from pascal_ecpp.triangle import (
    BASE_112,
    TriangleBase,
    center,
    center_divisibility_stats,
    easy_factor_center,
    first_factor_row,
    first_factor_rows,
    hunt_center_primes,
    power_row,
    rows,
    rows_mod,
)

FIRST_ROWS = [
    [1],
    [1, 1, 2],
    [1, 2, 5, 4, 4],
    [1, 3, 9, 13, 18, 12, 8],
    [1, 4, 14, 28, 49, 56, 56, 32, 16],
    [1, 5, 20, 50, 105, 161, 210, 200, 160, 80, 32],
    [1, 6, 27, 80, 195, 366, 581, 732, 780, 640, 432, 192, 64],
]

SMALL_CENTER_PRIMES = [(2, 5), (3, 13), (8, 7393), (15, 65753693), (21, 175669746209),
                       (24, 9232029156001)]


def center_by_multinomial(n):
    # (1 + x + 2x^2)^n: choosing j squared terms forces n - 2j linear terms
    return sum(factorial(n) // (factorial(j) ** 2 * factorial(n - 2 * j)) * 2**j
               for j in range(n // 2 + 1))


def test_first_rows():
    assert [list(r.coeffs) for r in rows(BASE_112, 6)] == FIRST_ROWS
    assert str(next(iter(rows(BASE_112, 0)))) == "0: 1"


def test_base_parsing():
    assert TriangleBase.parse("112") == BASE_112
    assert str(BASE_112) == "112" and BASE_112.m == 3
    for bad in ("1", "0112", "1a2", ""):
        with pytest.raises(ValueError):
            TriangleBase.parse(bad)


def test_ordinary_pascal_triangle():
    base = TriangleBase.parse("11")
    for r in rows(base, 30):
        assert list(r.coeffs) == [comb(r.n, k) for k in range(r.n + 1)]


@pytest.mark.parametrize("digits", ["112", "111", "123", "1021", "97"])
def test_row_sum_and_decimal_value(digits):
    base = TriangleBase.parse(digits)
    value = int(digits)
    for r in rows(base, 60):
        assert sum(r.coeffs) == sum(base.digits) ** r.n
        top = (base.m - 1) * r.n
        assert sum(e * 10 ** (top - k) for k, e in enumerate(r.coeffs)) == value**r.n


def test_row_sum_is_power_of_four_long_range():
    for r in rows(BASE_112, 300):
        assert sum(r.coeffs) == 4**r.n


def test_recurrence_agrees_with_powering():
    for base in (BASE_112, TriangleBase.parse("1234"), TriangleBase.parse("99")):
        for r in rows(base, 100):
            assert power_row(base, r.n) == r


def test_center_matches_multinomial_sum():
    for n in list(range(0, 120)) + [500, 1001]:
        assert center(BASE_112, n) == center_by_multinomial(n)


def test_center_requires_three_digits():
    with pytest.raises(ValueError):
        center(TriangleBase.parse("1121"), 4)


def test_center_is_always_odd():
    for r in rows_mod(BASE_112, 2, 2000):
        n = (len(r) - 1) // 2
        assert r[n] == 1


def test_rows_mod_agrees_with_exact_rows():
    for p in (7, 97, 1009):
        for exact, reduced in zip(rows(BASE_112, 80), rows_mod(BASE_112, p, 80)):
            assert np.array_equal(np.array(exact.coeffs) % p, reduced)


def test_small_center_primes():
    hits = hunt_center_primes(BASE_112, 100)
    assert [(r, v) for r, _, v in hits] == SMALL_CENTER_PRIMES
    assert all(d == len(str(v)) for _, d, v in hits)


def test_one_digit_primes_appear_by_row_four():
    for p in (2, 3, 5, 7):
        assert first_factor_row(BASE_112, p, 10) <= 4
    assert first_factor_row(BASE_112, 7, 10) == 4


def test_two_digit_first_occurrences():
    found = first_factor_rows(BASE_112, [p for p in primes_up_to(100) if p > 10], 40)
    late = {p: r for p, r in found.items() if r > 12}
    assert late == {79: 14, 71: 15, 59: 17, 41: 27}


def test_three_digit_first_occurrences():
    three = [p for p in primes_up_to(1000) if p > 100]
    found = first_factor_rows(BASE_112, three, 120)
    assert len(three) == 143 and None not in found.values()
    assert min(found.values()) == 7
    assert sorted(p for p, r in found.items() if r == 7) == [103, 191, 409]
    assert sum(r <= 40 for r in found.values()) == 105
    assert sum(r <= 60 for r in found.values()) == 134
    assert sorted(p for p, r in found.items() if 61 <= r <= 70) == [823, 827]
    assert {p: r for p, r in found.items() if r > 70} == {
        479: 74, 499: 74, 677: 76, 719: 77, 859: 72, 937: 98, 947: 73}


def test_first_factor_rows_against_exact_rows():
    exact = list(rows(BASE_112, 60))
    for p in (293, 347, 631, 691, 743):
        want = next(r.n for r in exact if any(e % p == 0 for e in r.coeffs[2:]))
        assert first_factor_row(BASE_112, p, 60) == want


def test_first_factor_not_found():
    with pytest.raises(NotFound):
        first_factor_row(BASE_112, 947, 72)
    assert first_factor_rows(BASE_112, [947], 72) == {947: None}


def test_rows_mod_rejects_huge_modulus():
    with pytest.raises(ValueError):
        next(rows_mod(BASE_112, 2**61, 3))


def test_divisibility_stats():
    stats = center_divisibility_stats(BASE_112, 300, [2, 3, 5, 7], [10, 100, 300])
    exact = [center(BASE_112, n) for n in range(1, 301)]
    for d in (2, 3, 5, 7):
        assert stats["final"][d] == (sum(c % d == 0 for c in exact), 300)
        assert stats["trace"][10][d] == (sum(c % d == 0 for c in exact[:10]), 10)
    assert stats["final"][2][0] == 0
    assert stats["final"][3][0] == 0


def test_divisibility_trend_by_five_and_seven():
    marks = [100, 1000, 2000]
    stats = center_divisibility_stats(BASE_112, 2000, [5, 7], marks)
    for d in (5, 7):
        fractions = [stats["trace"][m][d][0] / m for m in marks]
        assert fractions == sorted(fractions) and fractions[-1] > 0.7


def test_row_156_is_a_90_digit_prp():
    value = center(BASE_112, 156)
    assert len(str(value)) == 90 and is_probable_prime(value)


@pytest.mark.slow
def test_no_further_center_primes_to_row_1900():
    hits = hunt_center_primes(BASE_112, 1900)
    assert [r for r, _, _ in hits] == [2, 3, 8, 15, 21, 24, 156]


@pytest.mark.slow
@pytest.mark.parametrize("row,digits", [(1726, 1002), (1794, 1030)])
def test_large_prp_cofactors(row, digits):
    fi = easy_factor_center(BASE_112, row)
    assert fi.cofactor_is_prp and len(str(fi.cofactor)) == digits
    assert all(p < 10**8 for p, _ in fi.factors)
