"""Brute-force ground truth in exact rational arithmetic.

Every routine here enumerates literally (no symmetry reduction) and
refuses inputs beyond its capacity guard rather than approximating.
"""

from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction

from .model import DistanceDistribution, Kind, check_delta
from .tree_sim import InfectedTree, NodePath, NotInfectedError, boundary, neighbors
from .urn import UrnSpec

__all__ = [
    "CapacityError",
    "MAX_SEQUENCE_LEN",
    "MAX_URN_DRAWS",
    "MAX_LIKELIHOOD_NODES",
    "MAX_DN_NODES",
    "UrnSpec",
    "iter_sequences",
    "enumerate_sequences",
    "exact_vk_prob",
    "exact_urn_dist",
    "urn_pmf",
    "exact_likelihood",
    "exact_dn",
    "exact_correct_prob",
]

MAX_SEQUENCE_LEN = 9
MAX_URN_DRAWS = 12
MAX_LIKELIHOOD_NODES = 7
MAX_DN_NODES = 8


class CapacityError(ValueError):
    pass


def _guard(value: int, limit: int, what: str):
    if value > limit:
        raise CapacityError(f"{what} = {value} exceeds the oracle limit of {limit}")


def _walk(prefix: list, infected: set, delta: int, n: int, prob: Fraction):
    if len(prefix) == n:
        yield tuple(prefix), prob
        return
    frontier = sorted(boundary(infected, delta))
    step = prob / len(frontier)
    for v in frontier:
        prefix.append(v)
        infected.add(v)
        yield from _walk(prefix, infected, delta, n, step)
        infected.discard(v)
        prefix.pop()


def iter_sequences(params, n: int):
    """Yield every infection sequence of length n with its probability."""
    delta = check_delta(params)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    _guard(n, MAX_SEQUENCE_LEN, "sequence length")
    yield from _walk([()], {()}, delta, n, Fraction(1))


def enumerate_sequences(params, n: int) -> list:
    return list(iter_sequences(params, n))


def exact_vk_prob(params, d: int, k: int) -> Fraction:
    """Pr{the k-th infected node is the fixed node 0.0...0 at distance d}."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    target = (0,) * d
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return sum((p for seq, p in iter_sequences(params, k) if seq[-1] == target), Fraction(0))


def _rising(b: int, m: int, y: int) -> int:
    # b (b+m) ... (b+(y-1)m)
    out = 1
    for i in range(y):
        out *= b + i * m
    return out


def urn_pmf(spec: UrnSpec, counts) -> Fraction:
    """Closed-form probability of drawing each colour ``counts[j]`` times."""
    counts = tuple(counts)
    if len(counts) != len(spec.initial_counts) or sum(counts) != spec.draws or min(counts) < 0:
        return Fraction(0)
    m = spec.increment
    num = math.factorial(spec.draws)
    for b, y in zip(spec.initial_counts, counts):
        num *= _rising(b, m, y)
    den = _rising(sum(spec.initial_counts), m, spec.draws)
    for y in counts:
        den *= math.factorial(y)
    return Fraction(num, den)


def exact_urn_dist(spec: UrnSpec) -> dict:
    """Exact pmf over draw-count vectors, by stepping through the draw tree."""
    _guard(spec.draws, MAX_URN_DRAWS, "urn draws")
    colours = len(spec.initial_counts)
    total0 = sum(spec.initial_counts)
    dist = {(0,) * colours: Fraction(1)}
    for t in range(spec.draws):
        nxt = defaultdict(Fraction)
        total = total0 + t * spec.increment
        for y, p in dist.items():
            for j in range(colours):
                balls = spec.initial_counts[j] + y[j] * spec.increment
                z = y[:j] + (y[j] + 1,) + y[j + 1:]
                nxt[z] += p * Fraction(balls, total)
        dist = dict(nxt)
    return dist


def _orderings(nodes: frozenset, start: NodePath, delta: int):
    def walk(prefix, infected, prob):
        if len(prefix) == len(nodes):
            yield prob
            return
        frontier = boundary(infected, delta)
        step = prob / len(frontier)
        for v in sorted(frontier & nodes):
            prefix.append(v)
            infected.add(v)
            yield from walk(prefix, infected, step)
            infected.discard(v)
            prefix.pop()

    yield from walk([start], {start}, Fraction(1))


def exact_likelihood(tree: InfectedTree, v: NodePath) -> Fraction:
    """Pr{observing G_n | source v}, summed over every consistent ordering."""
    _guard(tree.n, MAX_LIKELIHOOD_NODES, "tree size")
    v = tuple(v)
    if v not in tree.nodes:
        raise NotInfectedError(f"node {v!r} is not infected")
    return sum(_orderings(tree.nodes, v, tree.delta), Fraction(0))


def _selection_probs(nodes: frozenset, delta: int) -> dict:
    """ML selection probability of each node, from subtree sizes alone."""
    n = len(nodes)
    out = {}
    for v in nodes:
        largest = 0
        for w in neighbors(v, delta):
            if w in nodes:
                largest = max(largest, _component_size(nodes, w, v, delta))
        if 2 * largest < n:
            out[v] = Fraction(1)
        elif 2 * largest == n:
            out[v] = Fraction(1, 2)
    return out


def _component_size(nodes, start, blocked, delta) -> int:
    seen = {start, blocked}
    stack = [start]
    count = 0
    while stack:
        u = stack.pop()
        count += 1
        for w in neighbors(u, delta):
            if w in nodes and w not in seen:
                seen.add(w)
                stack.append(w)
    return count


def exact_dn(params, n: int) -> DistanceDistribution:
    """Exact law of the distance between source and ML estimate for small n."""
    delta = check_delta(params)
    _guard(n, MAX_DN_NODES, "number of infected nodes")
    by_shape = defaultdict(Fraction)
    for seq, p in iter_sequences(delta, n):
        by_shape[frozenset(seq)] += p
    masses = defaultdict(Fraction)
    for nodes, p in by_shape.items():
        for v, q in _selection_probs(nodes, delta).items():
            masses[len(v)] += p * q
    return DistanceDistribution(dict(sorted(masses.items())), Kind.EXACT, {"delta": delta, "n": n})


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def exact_correct_prob(params, n: int) -> Fraction:
    """Exact C_n = D_n(0): the source's neighbour subtrees follow an urn
    with one ball per colour, summed over all compositions of n - 1."""
    delta = check_delta(params)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        return Fraction(1)
    _guard(math.comb(n + delta - 2, delta - 1), 10**6, "number of compositions")
    spec = UrnSpec((1,) * delta, delta - 2, n - 1)
    total = Fraction(0)
    for y in _compositions(n - 1, delta):
        twice = 2 * max(y)
        if twice < n:
            total += urn_pmf(spec, y)
        elif twice == n:
            total += urn_pmf(spec, y) / 2
    return total
