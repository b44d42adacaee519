"""Ground-truth side of the realization problem.

Builds k-nearest-neighbor graphs from point sets, verifies candidate
realizations against the strict nearest-neighbor condition, and computes
the edge-preservation score whose per-edge indicator counts ties
generously (a non-strict comparison). Everything here is brute force on
purpose: these are the oracles the fast algorithms are tested against.

Two arithmetic modes exist. Exact point sets carry rational coordinates
and every comparison is exact (squared distances over a common integer
denominator, accelerated with int64 numpy when the magnitudes permit).
Float point sets are compared with a configurable relative margin.
"""

from __future__ import annotations

import enum
from bisect import bisect_right, insort
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .graph import DirectedGraph, build_graph

DEFAULT_FLOAT_MARGIN = 1e-9

Coord = Fraction | float
Point = tuple[Coord, ...]


class KnnError(ValueError):
    pass


class TooFewPointsError(KnnError):
    pass


class TieAtBoundaryError(KnnError):
    """The k-th and (k+1)-th nearest distances coincide; the graph is undefined."""


class DimensionMismatchError(KnnError):
    pass


class Provenance(enum.Enum):
    EXACT_LINE = "exact-line"
    HEURISTIC_COMPONENT = "heuristic-component"
    USER_SUPPLIED = "user-supplied"


@dataclass(frozen=True)
class PointSet:
    """n points in R^d, either all-rational (exact=True) or all-float."""

    dim: int
    points: tuple[Point, ...]
    exact: bool

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise DimensionMismatchError(f"dimension {self.dim} < 1")
        for p in self.points:
            if len(p) != self.dim:
                raise DimensionMismatchError(
                    f"point {p} has {len(p)} coordinates, expected {self.dim}"
                )
        if len(set(self.points)) != len(self.points):
            raise KnnError("points must be pairwise distinct")

    @property
    def size(self) -> int:
        return len(self.points)


def point_set_from_rationals(coords: Sequence[Sequence[Fraction | int]]) -> PointSet:
    pts = tuple(tuple(Fraction(c) for c in p) for p in coords)
    dim = len(pts[0]) if pts else 1
    return PointSet(dim=dim, points=pts, exact=True)


def point_set_from_floats(coords: Sequence[Sequence[float]]) -> PointSet:
    pts = tuple(tuple(float(c) for c in p) for p in coords)
    dim = len(pts[0]) if pts else 1
    return PointSet(dim=dim, points=pts, exact=False)


@dataclass(frozen=True)
class Realization:
    """Injective vertex-to-point assignment for a graph.

    ``assignment[v-1]`` is the 0-based index of the point carrying vertex v.
    The point set may contain unused points; only assigned images take part
    in distance comparisons.
    """

    graph: DirectedGraph
    point_set: PointSet
    assignment: tuple[int, ...]
    provenance: Provenance

    def __post_init__(self) -> None:
        n = self.graph.n
        if len(self.assignment) != n:
            raise DimensionMismatchError(
                f"assignment covers {len(self.assignment)} vertices, graph has {n}"
            )
        if len(set(self.assignment)) != n:
            raise DimensionMismatchError("assignment is not injective")
        for i in self.assignment:
            if not (0 <= i < self.point_set.size):
                raise DimensionMismatchError(f"point index {i} out of range")

    def images(self) -> tuple[Point, ...]:
        """Points in vertex order 1..n."""
        return tuple(self.point_set.points[i] for i in self.assignment)


def identity_realization(
    g: DirectedGraph, ps: PointSet, provenance: Provenance = Provenance.USER_SUPPLIED
) -> Realization:
    if ps.size < g.n:
        raise DimensionMismatchError(f"{ps.size} points cannot carry {g.n} vertices")
    return Realization(g, ps, tuple(range(g.n)), provenance)


@dataclass(frozen=True)
class ApproxScore:
    """Preserved-edge count under the tie-tolerant per-edge indicator."""

    preserved_edges: int
    total_edges: int

    @property
    def fraction(self) -> Fraction:
        if self.total_edges == 0:
            return Fraction(1)  # vacuous: no edges to preserve
        return Fraction(self.preserved_edges, self.total_edges)


# -- internal distance machinery -------------------------------------------

# int64 squared distances are exact as long as d * (2*maxabs)^2 < 2^63.
_INT64_SAFE = 1 << 29


def _scaled_int_rows(points: Sequence[Point]) -> list[tuple[int, ...]]:
    """Map rational points onto a common integer grid (exact)."""
    denoms = [c.denominator for p in points for c in p]
    d = lcm(*denoms) if denoms else 1
    return [tuple(int(c.numerator * (d // c.denominator)) for c in p) for p in points]


def _int_sqdist_matrix(rows: list[tuple[int, ...]]) -> list[list[int]]:
    n = len(rows)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        pi = rows[i]
        row = out[i]
        for j in range(i + 1, n):
            pj = rows[j]
            s = 0
            for a, b in zip(pi, pj):
                t = a - b
                s += t * t
            row[j] = s
            out[j][i] = s
    return out


def _numpy_sqdist_matrix(rows: list[tuple[int, ...]]) -> np.ndarray | None:
    """Exact int64 squared distances, or None when magnitudes are unsafe."""
    arr = np.asarray(rows, dtype=np.int64)
    if arr.size == 0:
        return None
    if int(np.abs(arr).max()) >= _INT64_SAFE or arr.shape[1] > 4:
        return None
    diff = arr[:, None, :] - arr[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _sqdist_rows(points: Sequence[Point], exact: bool):
    """Return (matrix, is_numpy) of distance comparison keys.

    Entries are squared distances, except in the exact 1-D fast path where
    absolute differences serve as keys (the comparison order is the same).
    Exact mode guarantees exact entries.
    """
    if exact:
        rows = _scaled_int_rows(points)
        if rows and len(rows[0]) == 1:
            xs = [r[0] for r in rows]
            if max(abs(x) for x in xs) < 1 << 61:
                arr = np.asarray(xs, dtype=np.int64)
                return np.abs(arr[:, None] - arr[None, :]), True
        m = _numpy_sqdist_matrix(rows)
        if m is not None:
            return m, True
        return _int_sqdist_matrix(rows), False
    arr = np.asarray([[float(c) for c in p] for p in points], dtype=np.float64)
    diff = arr[:, None, :] - arr[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff), True


def _float_tol(a: float, b: float, margin: float) -> float:
    return margin * max(abs(a), abs(b), 1.0)


# -- operations --------------------------------------------------------------


def knn_graph(
    ps: PointSet, k: int, margin: float = DEFAULT_FLOAT_MARGIN
) -> DirectedGraph:
    """Directed graph with an edge a->b iff b is among a's k nearest points.

    Requires a strict gap between each point's k-th and (k+1)-th nearest
    distances; otherwise the graph is ill-defined and TieAtBoundaryError is
    raised. Exact point sets are compared exactly, float ones with the
    relative ``margin``.
    """
    n = ps.size
    if k < 0:
        raise KnnError(f"k={k} is negative")
    if n < k + 1:
        raise TooFewPointsError(f"need at least {k + 1} points, got {n}")
    if k == 0:
        return build_graph(n, 0, [])
    mat, is_np = _sqdist_rows(ps.points, ps.exact)
    edges: list[tuple[int, int]] = []
    for u in range(n):
        if is_np:
            row = mat[u].copy()
            row[u] = np.iinfo(np.int64).max if ps.exact else np.inf
            part = np.partition(row, k)
            kth, nxt = part[k - 1], part[k]
            if ps.exact:
                tie = bool(kth == nxt)
            else:
                tie = abs(float(kth) - float(nxt)) <= _float_tol(
                    float(kth), float(nxt), margin
                )
            if tie:
                raise TieAtBoundaryError(
                    f"point {u + 1}: k-th and (k+1)-th nearest distances coincide"
                )
            nbrs = np.flatnonzero(row <= kth)
        else:
            vals = sorted((mat[u][v], v) for v in range(n) if v != u)
            if len(vals) > k:
                kth, nxt = vals[k - 1][0], vals[k][0]
                if kth == nxt:
                    raise TieAtBoundaryError(
                        f"point {u + 1}: k-th and (k+1)-th nearest distances coincide"
                    )
            nbrs = [v for d2, v in vals[:k]]
        picked = [int(v) for v in nbrs]
        if len(picked) != k:  # pragma: no cover - guarded by the tie check
            raise TieAtBoundaryError(f"point {u + 1}: ambiguous nearest set")
        edges.extend((u + 1, v + 1) for v in picked)
    return build_graph(n, k, edges)


def verify_realization(
    g: DirectedGraph, r: Realization, margin: float = DEFAULT_FLOAT_MARGIN
) -> bool:
    """Strict check: every out-neighbor image must be strictly closer than
    every non-neighbor image, for every vertex.

    Runs an O(n^2) pair scan with a per-vertex threshold rather than a
    triple scan.
    """
    _check_compat(g, r)
    n = g.n
    images = r.images()
    mat, is_np = _sqdist_rows(images, r.point_set.exact)
    for u in range(1, n + 1):
        out_idx = [v - 1 for v in g.out_adj[u - 1]]
        if len(out_idx) == n - 1:
            continue  # no non-neighbors to violate
        row = mat[u - 1]
        if is_np:
            mask = np.zeros(n, dtype=bool)
            mask[out_idx] = True
            mask[u - 1] = True
            worst_in = row[out_idx].max() if out_idx else None
            best_out = row[~mask].min()
            if r.point_set.exact:
                # int() keeps int64 comparisons exact beyond 2**53
                ok = worst_in is None or int(worst_in) < int(best_out)
            elif worst_in is None:
                ok = True
            else:
                wi, bo = float(worst_in), float(best_out)
                ok = wi < bo - _float_tol(wi, bo, margin)
        else:
            members = set(out_idx)
            worst_in = max((row[v] for v in out_idx), default=None)
            best_out = min(
                row[v] for v in range(n) if v != u - 1 and v not in members
            )
            ok = worst_in is None or worst_in < best_out
        if not ok:
            return False
    return True


def preservation_score(
    g: DirectedGraph, r: Realization, margin: float = DEFAULT_FLOAT_MARGIN
) -> ApproxScore:
    """Fraction of edges (u,v) whose target stays within u's k nearest images.

    The per-edge indicator counts the set {v' != u : dist(u,v') <= dist(u,v)}
    and succeeds when that count is at most k; ties at the boundary are
    counted, which makes this deliberately weaker than verify_realization.
    """
    _check_compat(g, r)
    n, k = g.n, g.k
    images = r.images()
    mat, is_np = _sqdist_rows(images, r.point_set.exact)
    preserved = 0
    for u in range(1, n + 1):
        row = mat[u - 1]
        if is_np:
            others = np.delete(row, u - 1)
            others.sort()
            tol = 0.0 if r.point_set.exact else None
            for v in g.out_adj[u - 1]:
                duv = row[v - 1]
                if tol is None:
                    duv = duv + _float_tol(float(duv), float(duv), margin)
                count = int(np.searchsorted(others, duv, side="right"))
                if count <= k:
                    preserved += 1
        else:
            others = sorted(row[v] for v in range(n) if v != u - 1)
            for v in g.out_adj[u - 1]:
                if bisect_right(others, row[v - 1]) <= k:
                    preserved += 1
    return ApproxScore(preserved_edges=preserved, total_edges=n * k)


def _check_compat(g: DirectedGraph, r: Realization) -> None:
    if r.graph.n != g.n:
        raise DimensionMismatchError(
            f"realization carries {r.graph.n} vertices, graph has {g.n}"
        )
