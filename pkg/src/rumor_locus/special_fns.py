"""Special-function kernels: rising factorials, the regularized incomplete
beta function, Stirling numbers of the first kind and partial shifted
multiple harmonic sums.
"""

from __future__ import annotations

import math
from functools import lru_cache

__all__ = [
    "rising_factorial",
    "reg_inc_beta",
    "stirling_first",
    "partial_zeta",
    "partial_zeta_table",
]

_BETA_TOL = 1e-15
_BETA_MAX_ITER = 300
_TINY = 1e-300


def rising_factorial(x: float, k: int) -> float:
    """Return ``x (x+1) ... (x+k-1)``; the empty product (k = 0) is 1."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    out = 1.0
    for i in range(k):
        out *= x + i
    return out


def _beta_cf(x: float, a: float, b: float) -> float:
    # modified Lentz evaluation of the incomplete beta continued fraction
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_TOL:
            return h
    raise ArithmeticError(
        f"incomplete beta continued fraction did not converge (x={x}, a={a}, b={b})"
    )


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta function I_x(a, b).

    Evaluated by continued fraction, switching to the reflected form
    ``1 - I_{1-x}(b, a)`` when ``x > (a+1)/(a+b+2)``.
    """
    if not (a > 0 and b > 0):
        raise ValueError(f"a and b must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(x, a, b) / a
    return 1.0 - front * _beta_cf(1.0 - x, b, a) / b


@lru_cache(maxsize=None)
def _unsigned_stirling_row(k: int) -> tuple[int, ...]:
    if k == 0:
        return (1,)
    prev = _unsigned_stirling_row(k - 1)
    row = [0] * (k + 1)
    # [k, l] = (k-1) [k-1, l] + [k-1, l-1]
    for l in range(1, k + 1):
        left = prev[l] if l < k else 0
        row[l] = (k - 1) * left + prev[l - 1]
    return tuple(row)


def stirling_first(k: int, l: int, signed: bool = False) -> int:
    """Stirling number of the first kind, exact.

    Unsigned values count permutations of ``k`` elements with ``l`` cycles;
    the signed variant is ``(-1)**(k-l)`` times that.
    """
    if k < 0 or l < 0:
        raise ValueError(f"k and l must be non-negative, got k={k}, l={l}")
    if l > k:
        return 0
    # build rows bottom-up so deep requests do not hit the recursion limit
    for j in range(0, k, 256):
        _unsigned_stirling_row(j)
    value = _unsigned_stirling_row(k)[l]
    if signed and (k - l) % 2:
        return -value
    return value


def partial_zeta_table(kmax: int, dmax: int, x: float) -> list[list[float]]:
    """Table ``t[d][k]`` of zeta_k^d(x) for ``0 <= d <= dmax``, ``0 <= k <= kmax``.

    Uses ``zeta_k^d = zeta_{k-1}^d + zeta_{k-1}^{d-1} / (k + x)`` with
    ``zeta_k^0 = 1`` and ``zeta_0^d = 0`` for ``d >= 1``.
    """
    if kmax < 0 or dmax < 0:
        raise ValueError("kmax and dmax must be non-negative")
    table = [[1.0] * (kmax + 1)]
    for d in range(1, dmax + 1):
        prev = table[d - 1]
        row = [0.0] * (kmax + 1)
        for k in range(1, kmax + 1):
            row[k] = row[k - 1] + prev[k - 1] / (k + x)
        table.append(row)
    return table


def partial_zeta(k: int, d: int, x: float = 0.0) -> float:
    """Partial shifted multiple harmonic sum

        zeta_k^d(x) = sum over 1 <= j_1 < ... < j_d <= k of prod 1/(j_i + x).
    """
    if k < 0 or d < 0:
        raise ValueError(f"k and d must be non-negative, got k={k}, d={d}")
    if x < 0:
        raise ValueError(f"shift x must be non-negative, got {x}")
    if d == 0:
        return 1.0
    if d > k:
        return 0.0
    return partial_zeta_table(k, d, x)[d][k]
