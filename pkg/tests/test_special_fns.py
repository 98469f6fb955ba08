import math
from fractions import Fraction
from itertools import combinations, permutations

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from rumor_locus.special_fns import (partial_zeta, partial_zeta_table, reg_inc_beta,
                                     rising_factorial, stirling_first)


def beta_oracle(x, a, b):
    """Independent oracle: mpmath's hypergeometric evaluation at 40 digits."""
    with mpmath.workdps(40):
        return float(mpmath.betainc(a, b, 0, x, regularized=True))


def cycles(perm):
    seen, count = set(), 0
    for start in range(len(perm)):
        if start not in seen:
            count += 1
            j = start
            while j not in seen:
                seen.add(j)
                j = perm[j]
    return count


def zeta_enumerated(k, d, x):
    x = Fraction(x)
    return sum((math.prod(1 / (j + x) for j in c) for c in combinations(range(1, k + 1), d)),
               Fraction(0)) if d else Fraction(1)


@pytest.mark.parametrize("x, k, expected", [(1, 3, 6), (2.5, 0, 1), (0.5, 2, 0.75)])
def test_rising_factorial(x, k, expected):
    assert rising_factorial(x, k) == pytest.approx(expected, abs=1e-15)


def test_rising_factorial_rejects_negative_k():
    with pytest.raises(ValueError):
        rising_factorial(1.0, -1)


def test_reg_inc_beta_examples():
    assert reg_inc_beta(0.5, 1, 1) == pytest.approx(0.5, abs=1e-15)
    assert reg_inc_beta(0.5, 1, 2) == pytest.approx(0.75, abs=1e-14)
    assert beta_oracle(0.5, 1, 2) == pytest.approx(0.75, abs=1e-14)
    assert reg_inc_beta(0.0, 2, 3) == 0.0
    assert reg_inc_beta(1.0, 2, 3) == 1.0


@pytest.mark.parametrize("x, a, b", [
    (0.5, 0.5, 1.5),
    (0.5, 1.0, 2.0),
    (0.5, 39.5, 1.5),
    (0.5, 41.0, 0.5),
    (0.3, 2.0, 2.0),
    (0.9, 3.3, 0.7),
    (0.5, 0.001, 1.001),
    (0.97, 40.0, 1.25),
])
def test_reg_inc_beta_matches_oracle(x, a, b):
    assert reg_inc_beta(x, a, b) == pytest.approx(beta_oracle(x, a, b), abs=1e-13)


@pytest.mark.parametrize("args", [(-0.1, 1, 1), (1.1, 1, 1), (0.5, 0, 1), (0.5, 1, -2)])
def test_reg_inc_beta_domain(args):
    with pytest.raises(ValueError):
        reg_inc_beta(*args)


@settings(max_examples=200, deadline=None)
# dyadic x keeps 1 - x exact
@given(st.integers(0, 2**30).map(lambda i: i / 2**30), st.floats(0.05, 60), st.floats(0.05, 60))
def test_reg_inc_beta_reflection(x, a, b):
    assert reg_inc_beta(x, a, b) + reg_inc_beta(1 - x, b, a) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1), st.floats(0.05, 50), st.floats(0.05, 50))
def test_reg_inc_beta_monotone(x, y, a, b):
    lo, hi = sorted((x, y))
    assert reg_inc_beta(lo, a, b) <= reg_inc_beta(hi, a, b) + 1e-15


def test_stirling_examples():
    assert stirling_first(3, 3) == 1
    assert stirling_first(4, 2) == 11
    assert stirling_first(3, 2, signed=True) == -3
    assert stirling_first(2, 5) == 0
    assert stirling_first(0, 0) == 1


@pytest.mark.parametrize("k", range(1, 8))
def test_stirling_counts_permutation_cycles(k):
    counts = [0] * (k + 1)
    for perm in permutations(range(k)):
        counts[cycles(perm)] += 1
    assert [stirling_first(k, l) for l in range(k + 1)] == counts


def test_stirling_exact_beyond_machine_integers():
    # [k, 1] = (k-1)!
    assert stirling_first(200, 1) == math.factorial(199)
    assert sum(stirling_first(200, l) for l in range(201)) == math.factorial(200)


@pytest.mark.parametrize("k", range(1, 41))
def test_stirling_signed_row_sum(k):
    assert sum(stirling_first(k, l, signed=True) for l in range(1, k + 1)) == (1 if k == 1 else 0)


def test_partial_zeta_examples():
    assert partial_zeta(5, 0, 0.7) == 1.0
    assert partial_zeta(2, 1, 1) == pytest.approx(5 / 6, abs=1e-15)
    assert partial_zeta(3, 2, 0) == pytest.approx(1.0, abs=1e-15)
    assert partial_zeta(0, 0, 0) == 1.0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10), st.integers(0, 6), st.sampled_from([0, 1, Fraction(1, 2), Fraction(1, 3)]))
def test_partial_zeta_matches_enumeration(k, d, x):
    assert partial_zeta(k, d, float(x)) == pytest.approx(float(zeta_enumerated(k, d, x)), abs=1e-14)


@pytest.mark.parametrize("k, d", [(3, 4), (1, 2), (0, 1), (10, 11)])
def test_partial_zeta_zero_when_depth_exceeds_length(k, d):
    assert partial_zeta(k, d, 0.5) == 0.0


def test_partial_zeta_table_accuracy_at_scale():
    table = partial_zeta_table(200, 20, 1.0)
    with mpmath.workdps(40):
        # elementary symmetric sums of 1/(j+1) via the same polynomial, in high precision
        coeffs = [mpmath.mpf(1)] + [mpmath.mpf(0)] * 20
        for j in range(1, 201):
            w = mpmath.mpf(1) / (j + 1)
            for d in range(20, 0, -1):
                coeffs[d] += coeffs[d - 1] * w
        for d in (1, 5, 10, 20):
            assert abs(table[d][200] - float(coeffs[d])) <= 1e-13


def test_zeta_shift_identity():
    t0 = partial_zeta_table(61, 60, 0.0)
    t1 = partial_zeta_table(60, 60, 1.0)
    for k in range(1, 61):
        for d in range(1, k + 1):
            assert abs(t1[d][k] - (t0[d][k + 1] - t1[d - 1][k])) <= 1e-12


def test_stirling_bridge():
    t0 = partial_zeta_table(40, 40, 0.0)
    for k in range(1, 41):
        for l in range(1, k + 1):
            ratio = Fraction(stirling_first(k, l), math.factorial(k - 1))
            assert t0[l - 1][k - 1] == pytest.approx(float(ratio), rel=1e-12)
