"""Realizability in some finite-dimensional Euclidean space.

Builds, implicitly, a digraph on unordered vertex pairs where an edge
({v,u}, {v,u'}) states "in any realization, the pair {v,u} must be
strictly shorter than {v,u'}"; such an edge exists whenever (v,u) is an
edge of the input and (v,u') is not. A directed cycle among pairs is a
contradiction, hence a certificate that no realization exists in any
dimension. Acyclicity yields a total order on pairs consistent with all
constraints (the embedding construction from that order is out of scope).

Edges are generated on the fly during depth-first search; only the
Theta(n^2) pair states are materialized.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import DirectedGraph

DEFAULT_MAX_VERTICES = 2000

Pair = tuple[int, int]

_WHITE, _GRAY, _BLACK = 0, 1, 2


class PairGraphLimitError(ValueError):
    """The pair graph would exceed the configured size cap."""


@dataclass(frozen=True)
class PairOrderResult:
    """Either a pair order witnessing consistency or a refuting pair cycle."""

    realizable: bool
    order: tuple[Pair, ...] | None
    cycle: tuple[Pair, ...] | None


def _pair_index(n: int, u: int, v: int) -> int:
    # u < v, both 1-based; triangular row-major index
    a, b = u - 1, v - 1
    return a * n - a * (a + 1) // 2 + (b - a - 1)


def _successors(g: DirectedGraph, u: int, v: int):
    """Pairs that must be strictly farther than {u, v}."""
    for src, other in ((u, v), (v, u)):
        if not g.has_edge(src, other):
            continue
        closed = g.closed_out(src)
        ci, m = 0, len(closed)
        for w in range(1, g.n + 1):
            while ci < m and closed[ci] < w:
                ci += 1
            if ci < m and closed[ci] == w:
                continue  # w is src itself or an out-neighbor
            yield (src, w) if src < w else (w, src)


def check_pair_order(
    g: DirectedGraph, max_vertices: int = DEFAULT_MAX_VERTICES
) -> PairOrderResult:
    """Decide whether the pair constraints are acyclic.

    Returns a full topological order of the n*(n-1)/2 pairs on success, or
    an explicit constraint cycle (length >= 2) on failure. The cycle can be
    re-checked independently with pair_cycle_is_valid.
    """
    n = g.n
    if n > max_vertices:
        raise PairGraphLimitError(
            f"{n} vertices would give {n * (n - 1) // 2} pair states"
            f" (cap {max_vertices})"
        )
    total = n * (n - 1) // 2
    color = bytearray(total)
    finish: list[Pair] = []
    on_path: dict[int, int] = {}
    path: list[Pair] = []

    for su in range(1, n + 1):
        for sv in range(su + 1, n + 1):
            sidx = _pair_index(n, su, sv)
            if color[sidx] != _WHITE:
                continue
            stack = [((su, sv), _successors(g, su, sv))]
            color[sidx] = _GRAY
            on_path[sidx] = 0
            path.append((su, sv))
            while stack:
                pair, it = stack[-1]
                advanced = False
                for nxt in it:
                    nidx = _pair_index(n, nxt[0], nxt[1])
                    c = color[nidx]
                    if c == _GRAY:
                        start = on_path[nidx]
                        return PairOrderResult(
                            realizable=False,
                            order=None,
                            cycle=tuple(path[start:]),
                        )
                    if c == _WHITE:
                        color[nidx] = _GRAY
                        on_path[nidx] = len(path)
                        path.append(nxt)
                        stack.append((nxt, _successors(g, nxt[0], nxt[1])))
                        advanced = True
                        break
                if not advanced:
                    stack.pop()
                    pidx = _pair_index(n, pair[0], pair[1])
                    color[pidx] = _BLACK
                    del on_path[pidx]
                    path.pop()
                    finish.append(pair)
    finish.reverse()
    return PairOrderResult(realizable=True, order=tuple(finish), cycle=None)


def pair_cycle_is_valid(g: DirectedGraph, cycle: tuple[Pair, ...]) -> bool:
    """Check that consecutive cycle entries satisfy the constraint-edge rule."""
    if len(cycle) < 2:
        return False
    for (a, b), (c, d) in zip(cycle, cycle[1:] + cycle[:1]):
        if not _is_constraint_edge(g, (a, b), (c, d)):
            return False
    return True


def _is_constraint_edge(g: DirectedGraph, p: Pair, q: Pair) -> bool:
    ps, qs = set(p), set(q)
    shared = ps & qs
    if len(ps) != 2 or len(qs) != 2 or len(shared) != 1:
        return False
    (v,) = shared
    (u,) = ps - shared
    (w,) = qs - shared
    return g.has_edge(v, u) and not g.has_edge(v, w)
