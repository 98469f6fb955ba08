"""Closed forms, series and bounds for the source-to-estimate distance law.

All functions take the tree degree as a plain integer ``delta >= 3``
(a :class:`~rumor_locus.model.RegularTreeParams` is accepted as well).
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import NamedTuple, Optional

from .model import DistanceDistribution, Kind, check_delta
from .special_fns import partial_zeta_table, reg_inc_beta, stirling_first

__all__ = [
    "DEFAULT_M",
    "limit_correct_prob",
    "p1",
    "p2",
    "epsilon",
    "g_bound",
    "f_closed",
    "limit_dn_series",
    "dn_exact_delta3",
    "dn_exact_delta3_table",
    "cumulative_within",
    "WithinBounds",
    "limit_distribution",
]

DEFAULT_M = 40


def limit_correct_prob(delta) -> float:
    """Limit of the correct-detection probability C_n as n grows."""
    delta = check_delta(delta)
    a = 1.0 / (delta - 2)
    b = (delta - 1) / (delta - 2)
    return delta * reg_inc_beta(0.5, a, b) - (delta - 1)


def _p1_values(delta: int, d: int, m: int) -> dict[int, float]:
    """p1(delta, d, k) for every k in [d+1, m], sharing one zeta table."""
    if m < d + 1:
        return {}
    a = 1.0 / (delta - 2)
    b = 2.0 / (delta - 2)
    zeta = partial_zeta_table(m - 2, d - 1, a)[d - 1]
    scale = 2.0 / (delta - 2) ** d
    out = {}
    # running value of prod_{l=0}^{k-2} (l + a) / (l + b)
    ratio = 1.0
    for k in range(2, m + 1):
        ratio *= (k - 2 + a) / (k - 2 + b)
        if k >= d + 1:
            out[k] = scale * ratio / (k - 1 + b) * zeta[k - 2]
    return out


def p1(delta, d: int, k: int) -> float:
    """Probability that one fixed node at distance ``d`` is the k-th infected."""
    delta = check_delta(delta)
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if k <= d:
        return 0.0
    return _p1_values(delta, d, k)[k]


def p2(delta, k: int) -> float:
    """Limit probability that the k-th infected node has every neighbour
    subtree below half, expressed through two incomplete beta integrals."""
    delta = check_delta(delta)
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    r = delta - 2
    big = reg_inc_beta(0.5, k - 1 + 1 / r, (delta - 1) / r)
    small = reg_inc_beta(0.5, k - 1 + (delta - 1) / r, 1 / r)
    return big - (delta - 1) * small


def epsilon(m: int) -> float:
    """Width of the truncation bound after summing ``m`` terms."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return math.e ** 2 * (8 + 5 * m + m * m) * 2.0 ** (3 - m)


def g_bound(delta, d: int, m: int = DEFAULT_M) -> float:
    """Lower bound on lim D_n(d) from the first ``m`` terms of its series.

    ``d = 0`` returns the correct-detection limit, which is exact.
    """
    delta = check_delta(delta)
    if d < 0:
        raise ValueError(f"d must be non-negative, got {d}")
    if d == 0:
        return limit_correct_prob(delta)
    if m <= d:
        raise ValueError(f"m must exceed d (m={m}, d={d})")
    count = delta * (delta - 1) ** (d - 1)
    terms = [pk * p2(delta, k) for k, pk in _p1_values(delta, d, m).items()]
    return count * math.fsum(terms)


def f_closed(d: int) -> float:
    """Closed-form lim D_n(d) on the 3-regular tree.

    ``d = 0`` gives the correct-detection limit 1/4.
    """
    if d < 0:
        raise ValueError(f"d must be non-negative, got {d}")
    if d == 0:
        return limit_correct_prob(3)
    # the alternating sum cancels to about f(d) / 2^d, so carry enough digits
    with localcontext() as ctx:
        ctx.prec = 30 + 2 * d
        ln2 = Decimal(2).ln()
        total = Decimal(1) / 4
        partial = Decimal(1)  # sum_{j<=l} ln2^j / j!
        power = Decimal(1)
        for l in range(1, d + 1):
            power = power * ln2 / l
            partial += power
            term = power - 2 + partial
            total += term if l % 2 == 0 else -term
        return float(3 * 2 ** (d - 1) * total * (-1) ** d)


def limit_dn_series(d: int, kmax: int) -> float:
    """Truncated Stirling-number series for lim D_n(d), delta = 3.

    Partial sums are accumulated exactly in rationals.  Summation stops
    early once the term bound ``d max_l |s(k,l)| / ((k-1)! 2^k)`` has been
    below 1e-16 for five consecutive k.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if kmax < d + 1:
        raise ValueError(f"kmax must be >= d + 1 (kmax={kmax}, d={d})")
    total = Fraction(0)
    quiet = 0
    for k in range(d + 1, kmax + 1):
        row = [stirling_first(k, l, signed=True) for l in range(1, d + 1)]
        denom = 2 ** k * (k + 1) * math.factorial(k - 1)
        sign = -1 if (d + k) % 2 else 1
        total += Fraction(sign * sum(row), denom)
        bound = d * max(abs(s) for s in row) / (math.factorial(k - 1) * 2.0 ** k)
        quiet = quiet + 1 if bound < 1e-16 else 0
        if quiet >= 5:
            break
    return 3 * 2 ** (d - 1) * float(total)


def _dn_delta3_terms(n: int, d: int) -> list[float]:
    upper = (n + 1) // 2 if n % 2 else n // 2 + 1
    if d + 1 > upper:
        return []
    zeta = partial_zeta_table(upper - 2, d - 1, 1.0)[d - 1]
    top = (n + 3) // 2 if n % 2 else n // 2 + 1
    # q = C(top, k) / C(n+1, k), advanced one factor per k
    q = 1.0
    for i in range(d + 1):
        q *= (top - i) / (n + 1 - i)
    terms = []
    for k in range(d + 1, upper + 1):
        step = (top - k) / (n + 1 - k)
        if n % 2:
            ratio = q * step
        else:
            ratio = q * step + n / (2 * (n + 2)) * q * (k + 1) / (n + 1 - k)
        terms.append(2.0 / (k + 1) * zeta[k - 2] * ratio)
        q *= step
    return terms


def dn_exact_delta3(n: int, d: int) -> float:
    """Exact finite-n probability D_n(d) on the 3-regular tree, d >= 1."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return 3 * 2 ** (d - 1) * math.fsum(_dn_delta3_terms(n, d))


def dn_exact_delta3_table(n: int) -> dict[int, float]:
    """D_n(d) for every achievable d >= 1 on the 3-regular tree."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    dmax = ((n + 1) // 2 if n % 2 else n // 2 + 1) - 1
    return {d: dn_exact_delta3(n, d) for d in range(1, dmax + 1)}


class WithinBounds(NamedTuple):
    lower: float
    upper: float
    exact: Optional[float] = None


def cumulative_within(delta, d: int, m: int = DEFAULT_M) -> WithinBounds:
    """Bounds on lim Pr{distance <= d}; exact value added for delta = 3."""
    delta = check_delta(delta)
    if d < 0:
        raise ValueError(f"d must be non-negative, got {d}")
    if m < d + 1:
        raise ValueError(f"m must be >= d + 1 (m={m}, d={d})")
    lower = math.fsum(g_bound(delta, l, m) for l in range(d + 1))
    upper = lower + d * epsilon(m)
    exact = math.fsum(f_closed(l) for l in range(d + 1)) if delta == 3 else None
    return WithinBounds(lower, upper, exact)


def limit_distribution(delta, dmax: int, m: int = DEFAULT_M) -> DistanceDistribution:
    """Limiting distance law for d <= dmax.

    Exact closed form for delta = 3, otherwise per-d bound intervals.
    """
    delta = check_delta(delta)
    if delta == 3:
        masses = {d: f_closed(d) for d in range(dmax + 1)}
        return DistanceDistribution(masses, Kind.LIMIT, {"delta": 3})
    if m < dmax + 1:
        raise ValueError(f"m must be >= dmax + 1 (m={m}, dmax={dmax})")
    lower = {d: g_bound(delta, d, m) for d in range(dmax + 1)}
    eps = epsilon(m)
    upper = {d: lower[d] + (eps if d else 0.0) for d in range(dmax + 1)}
    return DistanceDistribution(lower, Kind.LOWER_BOUND, {"delta": delta, "m": m}, upper)
