"""The post-reply network and its centrality measures.

Nodes are users.  A directed edge A -> B exists when A posted at least one
responding reply in a thread originated by B.  Parallel interactions
collapse to one edge and self-loops are dropped, so degrees count distinct
neighbors.
"""

from __future__ import annotations

import csv
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from threadinfluence.corpus import Corpus


class PageRankConvergenceError(RuntimeError):
    def __init__(self, residual: float, iterations: int):
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"pagerank failed to converge after {iterations} iterations "
            f"(L1 residual {residual:.3e})"
        )


@dataclass(frozen=True)
class DirectedGraph:
    """Immutable adjacency view with deterministically sorted nodes."""

    nodes: tuple[str, ...]
    successors: Mapping[str, tuple[str, ...]]
    predecessors: Mapping[str, tuple[str, ...]]

    @property
    def edge_count(self) -> int:
        return sum(len(out) for out in self.successors.values())

    def edges(self) -> Iterable[tuple[str, str]]:
        for node in self.nodes:
            for succ in self.successors[node]:
                yield (node, succ)


def build_graph(nodes: Iterable[str], edges: Iterable[tuple[str, str]]) -> DirectedGraph:
    """Deduplicate edges, drop self-loops, and freeze sorted adjacency."""
    node_tuple = tuple(sorted(set(nodes)))
    node_set = set(node_tuple)
    succ: dict[str, set[str]] = {n: set() for n in node_tuple}
    pred: dict[str, set[str]] = {n: set() for n in node_tuple}
    for a, b in edges:
        if a == b:
            continue
        if a not in node_set or b not in node_set:
            raise ValueError(f"edge ({a!r}, {b!r}) references an unknown node")
        succ[a].add(b)
        pred[b].add(a)
    return DirectedGraph(
        nodes=node_tuple,
        successors={n: tuple(sorted(succ[n])) for n in node_tuple},
        predecessors={n: tuple(sorted(pred[n])) for n in node_tuple},
    )


def build_post_reply_graph(corpus: Corpus) -> DirectedGraph:
    """Reply edges from each responder to the thread originator."""
    edges = set()
    for thread in corpus.threads:
        originator = thread.originator
        for post in thread.responding_replies:
            edges.add((post.user_id, originator))
    return build_graph(corpus.users, edges)


def degrees(graph: DirectedGraph) -> dict[str, tuple[int, int]]:
    """(in_degree, out_degree) per node, counting distinct neighbors."""
    return {
        n: (len(graph.predecessors[n]), len(graph.successors[n]))
        for n in graph.nodes
    }


def betweenness(graph: DirectedGraph, exact: bool = False) -> dict[str, float]:
    """Directed, unweighted, unnormalized betweenness (Brandes accumulation).

    With ``exact=True`` the pair-dependency fractions accumulate as exact
    rationals and only the final centrality is converted to float; useful
    for verification and small graphs.  The float path is identical except
    for round-off.
    """
    zero = Fraction(0) if exact else 0.0
    centrality: dict[str, Fraction | float] = {n: zero for n in graph.nodes}
    for source in graph.nodes:
        # Single-source shortest paths by BFS.
        sigma = {n: 0 for n in graph.nodes}
        dist = {n: -1 for n in graph.nodes}
        preds: dict[str, list[str]] = {n: [] for n in graph.nodes}
        sigma[source] = 1
        dist[source] = 0
        order: list[str] = []
        queue = deque([source])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in graph.successors[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        # Dependency accumulation in reverse BFS order.
        delta: dict[str, Fraction | float] = {n: zero for n in graph.nodes}
        for w in reversed(order):
            for v in preds[w]:
                share = (
                    Fraction(sigma[v], sigma[w])
                    if exact
                    else sigma[v] / sigma[w]
                )
                delta[v] += share * (1 + delta[w])
            if w != source:
                centrality[w] += delta[w]
    return {n: float(c) for n, c in centrality.items()}


def pagerank(
    graph: DirectedGraph,
    damping: float = 0.85,
    tolerance: float = 1e-9,
    max_iter: int = 200,
) -> dict[str, float]:
    """Power iteration with uniform teleport; dangling mass spreads uniformly.

    Scores sum to 1.  Raises PageRankConvergenceError (carrying the final
    L1 residual) if the iteration does not reach the tolerance.
    """
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must lie in (0, 1)")
    n = len(graph.nodes)
    if n == 0:
        return {}
    index = {node: i for i, node in enumerate(graph.nodes)}
    out_degree = np.array(
        [len(graph.successors[node]) for node in graph.nodes], dtype=float
    )
    dangling = out_degree == 0
    edge_pairs = list(graph.edges())
    src = np.array([index[a] for a, _ in edge_pairs], dtype=int)
    dst = np.array([index[b] for _, b in edge_pairs], dtype=int)
    safe_degree = np.where(dangling, 1.0, out_degree)

    rank = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    residual = np.inf
    for _ in range(max_iter):
        weight = damping * rank / safe_degree
        spread = np.zeros(n)
        np.add.at(spread, dst, weight[src])
        dangling_mass = damping * rank[dangling].sum() / n
        new_rank = spread + dangling_mass + teleport
        new_rank /= new_rank.sum()
        residual = float(np.abs(new_rank - rank).sum())
        rank = new_rank
        if residual < tolerance:
            return {node: float(rank[index[node]]) for node in graph.nodes}
    raise PageRankConvergenceError(residual, max_iter)


# ---------------------------------------------------------------------------
# File formats


def write_edge_list(graph: DirectedGraph, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for a, b in graph.edges():
            handle.write(f"{a}\t{b}\n")


def read_edge_list(path: str | Path) -> DirectedGraph:
    edges = []
    nodes = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{line_no}: expected 'from<TAB>to'")
            edges.append((parts[0], parts[1]))
            nodes.update(parts)
    return build_graph(nodes, edges)


def write_centrality(values: Mapping[str, float], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["user_id", "value"])
        for user in sorted(values):
            writer.writerow([user, f"{values[user]:.6g}"])
