"""Maximum-likelihood source estimation through rumor centrality."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .tree_sim import InfectedTree, NodePath, subtree_partition

__all__ = [
    "EXACT_LIMIT",
    "CentralityTable",
    "CenterClass",
    "rumor_centrality",
    "ml_estimate",
    "local_center_check",
]

# exact big-integer centralities up to this many nodes, log-space beyond
EXACT_LIMIT = 200
LOG_TIE_RTOL = 1e-9


@dataclass(frozen=True)
class CentralityTable:
    """Rumor centrality per infected node.

    Values are exact integers when ``exact`` is true, natural logarithms
    otherwise.
    """

    values: dict
    exact: bool

    def argmax(self) -> list:
        """Maximising nodes, sorted by path."""
        best = max(self.values.values())
        if self.exact:
            return sorted(v for v, r in self.values.items() if r == best)
        tol = LOG_TIE_RTOL * max(1.0, abs(best))
        return sorted(v for v, r in self.values.items() if best - r <= tol)


class CenterClass(str, Enum):
    STRICT = "strict-center"
    TIE = "tie-center"
    NOT = "not-center"


def _adjacency(nodes: list) -> list:
    # undirected adjacency over the infected set only; infection order unused
    index = {v: i for i, v in enumerate(nodes)}
    adj = [[] for _ in nodes]
    for i, v in enumerate(nodes):
        if v:
            j = index[v[:-1]]
            adj[i].append(j)
            adj[j].append(i)
    return adj


def rumor_centrality(tree: InfectedTree, exact: bool | None = None) -> CentralityTable:
    """R(v) = n! / prod_u |T_u^v| for every infected v.

    One rooted pass gives subtree sizes and R at the root; a second pass
    moves the root across each edge using R(c) = R(p) t_c / (n - t_c).
    """
    nodes = sorted(tree.order)
    n = len(nodes)
    if exact is None:
        exact = n <= EXACT_LIMIT
    adj = _adjacency(nodes)
    parent = [-1] * n
    visit = [0]
    seen = [False] * n
    seen[0] = True
    for i in visit:
        for j in adj[i]:
            if not seen[j]:
                seen[j] = True
                parent[j] = i
                visit.append(j)
    size = [1] * n
    for i in reversed(visit[1:]):
        size[parent[i]] += size[i]

    values = [0] * n
    if exact:
        denom = 1
        for t in size:
            denom *= t
        values[0] = math.factorial(n) // denom
        for i in visit[1:]:
            values[i] = values[parent[i]] * size[i] // (n - size[i])
    else:
        values[0] = math.lgamma(n + 1) - math.fsum(math.log(t) for t in size)
        for i in visit[1:]:
            values[i] = values[parent[i]] + math.log(size[i]) - math.log(n - size[i])
    return CentralityTable(dict(zip(nodes, values)), exact)


def ml_estimate(tree: InfectedTree, rng: np.random.Generator) -> NodePath:
    """ML source estimate; a two-way tie is split by one fair coin from ``rng``."""
    best = rumor_centrality(tree).argmax()
    if len(best) == 1:
        return best[0]
    return best[0] if rng.random() < 0.5 else best[1]


def local_center_check(tree: InfectedTree, v: NodePath) -> CenterClass:
    """Classify v by its largest neighbouring subtree against n/2."""
    twice = 2 * subtree_partition(tree, v).largest
    if twice < tree.n:
        return CenterClass.STRICT
    if twice == tree.n:
        return CenterClass.TIE
    return CenterClass.NOT
