"""SI spreading on the infinite delta-regular tree.

Nodes are addressed by paths from the rumor source.  The source is the
empty tuple; its neighbours are ``(0,) ... (delta-1,)``.  Any other node
has children ``path + (j,)`` for ``j < delta - 1``, and neighbour slot
``delta - 1`` is reserved for the direction of its parent (towards the
source).
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .model import check_delta

NodePath = tuple  # tuple[int, ...]

__all__ = [
    "NodePath",
    "InfectedTree",
    "SubtreePartition",
    "NotInfectedError",
    "TreeFormatError",
    "trial_stream",
    "simulate_uniform",
    "simulate_clock",
    "subtree_partition",
    "distance",
    "neighbors",
    "boundary",
    "format_path",
    "parse_path",
]


class NotInfectedError(LookupError):
    pass


class TreeFormatError(ValueError):
    pass


def format_path(path: NodePath) -> str:
    return ".".join(str(s) for s in path)


def parse_path(text: str) -> NodePath:
    if text == "":
        return ()
    try:
        return tuple(int(s) for s in text.split("."))
    except ValueError:
        raise TreeFormatError(f"bad node path {text!r}") from None


def distance(u: NodePath, v: NodePath) -> int:
    """Number of edges on the path between two nodes."""
    common = 0
    for a, b in zip(u, v):
        if a != b:
            break
        common += 1
    return len(u) + len(v) - 2 * common


def neighbors(path: NodePath, delta: int) -> list[NodePath]:
    if not path:
        return [(j,) for j in range(delta)]
    return [path + (j,) for j in range(delta - 1)] + [path[:-1]]


def boundary(infected, delta: int) -> set:
    """Uninfected neighbours of an infected node set."""
    infected = set(infected)
    out = set()
    for v in infected:
        out.update(neighbors(v, delta))
    return out - infected


def _valid_symbols(path: NodePath, delta: int) -> bool:
    if not path:
        return True
    if not 0 <= path[0] < delta:
        return False
    return all(0 <= s < delta - 1 for s in path[1:])


@dataclass(frozen=True)
class InfectedTree:
    """Connected infected subgraph G_n, with nodes listed in infection order.

    ``parents[i]`` is the position in ``order`` of node i's parent (-1 for
    the source).  It is derived and the order validated when omitted.
    """

    delta: int
    order: tuple
    parents: Optional[tuple] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        check_delta(self.delta)
        if self.parents is None:
            object.__setattr__(self, "parents", self._derive_parents())

    def _derive_parents(self) -> tuple:
        if not self.order or self.order[0] != ():
            raise TreeFormatError("infection order must start at the source")
        index = {}
        parents = []
        for i, path in enumerate(self.order):
            path = tuple(path)
            if path in index:
                raise TreeFormatError(f"duplicate node {format_path(path)!r}")
            if not _valid_symbols(path, self.delta):
                raise TreeFormatError(
                    f"node {format_path(path)!r} is not in the {self.delta}-regular tree"
                )
            if i:
                p = index.get(path[:-1])
                if p is None:
                    raise TreeFormatError(
                        f"node {format_path(path)!r} infected before its parent"
                    )
                parents.append(p)
            else:
                parents.append(-1)
            index[path] = i
        return tuple(parents)

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def source(self) -> NodePath:
        return self.order[0]

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.order)}

    @cached_property
    def nodes(self) -> frozenset:
        return frozenset(self.order)

    @cached_property
    def below(self) -> tuple:
        """Size of the subtree hanging below each node (rooted at the source)."""
        sizes = [1] * self.n
        parents = self.parents
        for i in range(self.n - 1, 0, -1):
            sizes[parents[i]] += sizes[i]
        return tuple(sizes)

    def edges(self) -> list:
        return [(self.order[p], self.order[i]) for i, p in enumerate(self.parents) if p >= 0]

    def to_json(self) -> str:
        return json.dumps(
            {"delta": self.delta, "order": [format_path(v) for v in self.order], "source": ""}
        )

    @classmethod
    def from_json(cls, text: str) -> "InfectedTree":
        data = json.loads(text)
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data) -> "InfectedTree":
        if not isinstance(data, dict):
            raise TreeFormatError("tree JSON must be an object")
        for key in ("delta", "order"):
            if key not in data:
                raise TreeFormatError(f"missing key {key!r}")
        delta = data["delta"]
        if not isinstance(delta, int) or isinstance(delta, bool) or delta < 3:
            raise TreeFormatError(f"delta must be an integer >= 3, got {delta!r}")
        if data.get("source", "") != "":
            raise TreeFormatError("source must be the empty path")
        order = data["order"]
        if not isinstance(order, list) or not all(isinstance(s, str) for s in order):
            raise TreeFormatError("order must be a list of path strings")
        return cls(delta, tuple(parse_path(s) for s in order))


@dataclass(frozen=True)
class SubtreePartition:
    """Sizes of the delta components of G_n minus a node.

    ``sizes[j]`` counts infected nodes behind neighbour slot j.
    ``source_side`` is the slot whose component holds the source, or None
    when the node is the source itself.
    """

    sizes: tuple
    source_side: Optional[int]

    @property
    def largest(self) -> int:
        return max(self.sizes)


def subtree_partition(tree: InfectedTree, v: NodePath) -> SubtreePartition:
    i = tree.index.get(tuple(v))
    if i is None:
        raise NotInfectedError(f"node {format_path(v)!r} is not infected")
    delta = tree.delta
    sizes = [0] * delta
    below = tree.below
    for j in range(i + 1, tree.n):
        if tree.parents[j] == i:
            sizes[tree.order[j][-1]] = below[j]
    if i == 0:
        return SubtreePartition(tuple(sizes), None)
    sizes[delta - 1] = tree.n - below[i]
    return SubtreePartition(tuple(sizes), delta - 1)


def trial_stream(master_seed: int, trial: int) -> np.random.Generator:
    """Independent generator for one trial, derived from (master_seed, trial)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(master_seed, spawn_key=(trial,))))


def simulate_uniform(params, n: int, rng: np.random.Generator) -> InfectedTree:
    """Grow G_n by infecting a uniformly chosen boundary node at each step."""
    delta = check_delta(params)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    order = [()]
    parents = [-1]
    # boundary as parallel lists (infected neighbour position, slot symbol)
    b_from = [0] * delta
    b_sym = list(range(delta))
    fresh = range(delta - 1)
    for u in rng.random(n - 1).tolist():
        j = int(u * len(b_from))
        p = b_from[j]
        s = b_sym[j]
        b_from[j] = b_from[-1]
        b_sym[j] = b_sym[-1]
        b_from.pop()
        b_sym.pop()
        i = len(order)
        order.append(order[p] + (s,))
        parents.append(p)
        b_from.extend([i] * (delta - 1))
        b_sym.extend(fresh)
    return InfectedTree(delta, tuple(order), tuple(parents))


def simulate_clock(params, n: int, rng: np.random.Generator, with_times: bool = False):
    """Event-driven SI run with unit-mean exponential delays on every edge.

    Each boundary node has exactly one infected neighbour, so one pending
    event per boundary node suffices.  Ties are broken by node path.
    """
    delta = check_delta(params)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    order = [()]
    parents = [-1]
    times = [0.0]
    heap = []

    def push(t0, i):
        path = order[i]
        syms = range(delta) if i == 0 else range(delta - 1)
        for s, w in zip(syms, rng.exponential(1.0, len(syms)).tolist()):
            heapq.heappush(heap, (t0 + w, path + (s,), i))

    push(0.0, 0)
    while len(order) < n:
        t, path, p = heapq.heappop(heap)
        order.append(path)
        parents.append(p)
        times.append(t)
        push(t, len(order) - 1)
    tree = InfectedTree(delta, tuple(order), tuple(parents))
    if with_times:
        return tree, times
    return tree
