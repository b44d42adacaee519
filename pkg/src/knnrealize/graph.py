"""Directed-graph container with regularity validation and component decomposition.

Vertices are dense integer ids 1..n. Adjacency is stored as sorted open
neighborhoods (the vertex itself excluded); the closed accessors add the
vertex back, which is the convention every ordering algorithm in this
package relies on.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class GraphError(ValueError):
    """Invalid graph input."""


class IdOutOfRangeError(GraphError):
    pass


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class NotKRegularError(GraphError):
    pass


class OpCounter:
    """Mutable counter for elementary steps, used by the scaling benchmark."""

    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0

    def add(self, n: int = 1) -> None:
        self.count += n


@dataclass(frozen=True)
class DirectedGraph:
    """A directed graph on vertices 1..n where every out-degree is exactly k.

    Immutable after construction; safe to share across threads. ``out_adj``
    and ``in_adj`` hold sorted open neighborhoods and are exact transposes
    of each other.
    """

    n: int
    k: int
    out_adj: tuple[tuple[int, ...], ...]
    in_adj: tuple[tuple[int, ...], ...]

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(1, self.n + 1):
            for v in self.out_adj[u - 1]:
                yield (u, v)

    def edge_count(self) -> int:
        return self.n * self.k

    def has_edge(self, u: int, v: int) -> bool:
        row = self.out_adj[u - 1]
        i = bisect_left(row, v)
        return i < len(row) and row[i] == v

    def closed_out(self, v: int) -> tuple[int, ...]:
        """The vertex together with its out-neighbors, sorted; size k+1."""
        return _insert_sorted(self.out_adj[v - 1], v)

    def closed_in(self, v: int) -> tuple[int, ...]:
        """The vertex together with its in-neighbors, sorted."""
        return _insert_sorted(self.in_adj[v - 1], v)

    def reversed(self) -> "DirectedGraph":
        """Transpose; only k-regular transposes can be rebuilt via build_graph."""
        return DirectedGraph(self.n, self.k, self.in_adj, self.out_adj)


@dataclass(frozen=True)
class ComponentLabeling:
    """Partition of 1..n into weakly-connected components.

    ``component_id[v-1]`` is the 0-based component index of vertex v, and
    ``members[c]`` lists component c in breadth-first discovery order from
    the lowest unvisited vertex.
    """

    component_id: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]

    @property
    def component_count(self) -> int:
        return len(self.members)


def _insert_sorted(row: tuple[int, ...], v: int) -> tuple[int, ...]:
    i = bisect_left(row, v)
    return row[:i] + (v,) + row[i:]


def build_graph(n: int, k: int, edges: Iterable[tuple[int, int]]) -> DirectedGraph:
    """Validate and build a k-regular directed graph.

    Raises IdOutOfRangeError, SelfLoopError, DuplicateEdgeError, or
    NotKRegularError on the first violation found. Total work is
    proportional to k*n.
    """
    if n < 0:
        raise IdOutOfRangeError(f"vertex count {n} is negative")
    if k < 0:
        raise NotKRegularError(f"out-degree parameter {k} is negative")
    out: list[list[int]] = [[] for _ in range(n)]
    inn: list[list[int]] = [[] for _ in range(n)]
    seen: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if not (1 <= u <= n) or not (1 <= v <= n):
            raise IdOutOfRangeError(f"edge ({u},{v}) leaves the id range 1..{n}")
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}")
        if v in seen[u - 1]:
            raise DuplicateEdgeError(f"edge ({u},{v}) repeated")
        seen[u - 1].add(v)
        out[u - 1].append(v)
        inn[v - 1].append(u)
    for u in range(1, n + 1):
        if len(out[u - 1]) != k:
            raise NotKRegularError(
                f"vertex {u} has out-degree {len(out[u - 1])}, expected {k}"
            )
    return DirectedGraph(
        n=n,
        k=k,
        out_adj=tuple(tuple(sorted(row)) for row in out),
        in_adj=tuple(tuple(sorted(row)) for row in inn),
    )


def undirected_neighbors(g: DirectedGraph, v: int) -> tuple[int, ...]:
    """Neighbors of v ignoring edge direction, sorted and deduplicated."""
    return tuple(sorted(set(g.out_adj[v - 1]) | set(g.in_adj[v - 1])))


def weak_components(
    g: DirectedGraph, ops: OpCounter | None = None
) -> ComponentLabeling:
    """Label weakly-connected components.

    Deterministic: each search starts from the lowest unvisited vertex and
    expands breadth-first with sorted neighbor order.
    """
    comp = [-1] * g.n
    members: list[tuple[int, ...]] = []
    for start in range(1, g.n + 1):
        if comp[start - 1] >= 0:
            continue
        cid = len(members)
        order: list[int] = []
        comp[start - 1] = cid
        queue = deque([start])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in undirected_neighbors(g, v):
                if ops is not None:
                    ops.add()
                if comp[w - 1] < 0:
                    comp[w - 1] = cid
                    queue.append(w)
        members.append(tuple(order))
    return ComponentLabeling(component_id=tuple(comp), members=tuple(members))
