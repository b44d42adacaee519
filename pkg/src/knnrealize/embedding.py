"""Approximate embedding in fixed dimension by cut-and-solve.

The graph is split into small weakly-connected components by recursively
removing heuristic balanced cuts from its undirected shadow; each component
is then placed in R^d so that every surviving edge's target stays among the
k nearest images within the component (the quasi condition, which tolerates
distance ties), and the component layouts are strung along the first axis
with a translation large enough that nearest-neighbor sets never cross
components. Every kept intra-component edge then scores 1, so the final
score is at least 1 minus the removed fraction.

Status semantics are deliberately honest: a component is certified only by
an exact rational check of the quasi condition, impossibility is certified
only when every k-regular completion of the component is refuted by the
pair-order cycle test (which rules out every dimension), and anything the
numeric search merely fails on stays Unknown.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb, isqrt
from typing import Iterator, Mapping, Sequence

import numpy as np

from .gap_lp import LineRealization
from .graph import ComponentLabeling, DirectedGraph, build_graph
from .knn import (
    PointSet,
    Provenance,
    Realization,
    ApproxScore,
    preservation_score,
)
from .pair_order import Pair, check_pair_order
from .pipeline import realize_1d

Adjacency = Mapping[int, Sequence[int]]
UndirectedEdge = tuple[int, int]

_CUT_SEEDS = 16


class FragmentOverfullError(ValueError):
    """A fragment vertex already exceeds the target out-degree."""


class UnsolvedComponentError(RuntimeError):
    pass


class ImpossibleComponentError(RuntimeError):
    def __init__(self, message: str, solution: "ComponentSolution"):
        super().__init__(message)
        self.solution = solution


class ComponentStatus(enum.Enum):
    CERTIFIED_QUASI = "certified-quasi"
    HEURISTIC_QUASI = "heuristic-quasi"
    CERTIFIED_IMPOSSIBLE = "certified-impossible"
    UNKNOWN = "unknown"


@dataclass
class SolveBudget:
    """Work limits for a single component solve."""

    max_supergraphs: int = 10_000
    restarts: int = 50
    iterations: int = 500
    hinge_margin: float = 1e-3  # relative to the squared layout diameter
    snap_denominator: int = 1 << 40


@dataclass(frozen=True)
class CutResult:
    removed_edges: tuple[tuple[int, int], ...]
    components: ComponentLabeling
    removed_fraction: Fraction
    threshold_exceeded: bool
    size_cap: int


@dataclass(frozen=True)
class GraphFragment:
    """Directed graph on local ids 1..n with out-degrees at most k."""

    n: int
    out_adj: tuple[tuple[int, ...], ...]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(1, self.n + 1):
            for v in self.out_adj[u - 1]:
                yield (u, v)

    def edge_count(self) -> int:
        return sum(len(row) for row in self.out_adj)


@dataclass(frozen=True)
class ComponentSolution:
    """Placement attempt for one component, in local vertex order."""

    vertices: tuple[int, ...]
    status: ComponentStatus
    points: tuple[tuple[Fraction, ...], ...] | None
    certificate_cycle: tuple[Pair, ...] | None = None
    certificate_edges: tuple[tuple[int, int], ...] | None = None
    supergraphs_checked: int = 0
    supergraphs_refuted: int = 0
    restarts_used: int = 0
    note: str = ""


@dataclass(frozen=True)
class EmbeddingResult:
    realization: Realization
    score: ApproxScore
    statuses: tuple[ComponentStatus, ...]
    translation: int
    cut: CutResult


class EmbedStatus(enum.Enum):
    SUCCESS = "success"
    CERTIFIED_IMPOSSIBLE = "certified-impossible"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class EmbedOutcome:
    status: EmbedStatus
    result: EmbeddingResult | None
    cut: CutResult
    solutions: tuple[ComponentSolution, ...]
    message: str


def default_size_cap(k: int, eps: Fraction | float) -> int:
    return max(k + 2, ceil(1 / Fraction(eps)) * (k + 1))


# -- balanced cuts -----------------------------------------------------------


def undirected_shadow(g: DirectedGraph) -> dict[int, tuple[int, ...]]:
    return {
        v: tuple(sorted(set(g.out_adj[v - 1]) | set(g.in_adj[v - 1])))
        for v in range(1, g.n + 1)
    }


def _undirected_components(adj: Adjacency) -> list[list[int]]:
    seen: set[int] = set()
    comps: list[list[int]] = []
    for start in sorted(adj):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        queue = [start]
        while queue:
            v = queue.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def _bfs_region(adj: Adjacency, seed: int, target: int) -> set[int]:
    region = {seed}
    frontier = [seed]
    while frontier and len(region) < target:
        nxt: list[int] = []
        for v in frontier:
            for w in adj[v]:
                if w not in region:
                    region.add(w)
                    nxt.append(w)
                    if len(region) >= target:
                        return region
        frontier = nxt
    return region


def _boundary_size(adj: Adjacency, region: set[int]) -> int:
    return sum(1 for v in region for w in adj[v] if w not in region)


def approx_min_balanced_cut(adj: Adjacency) -> frozenset[UndirectedEdge]:
    """Heuristic balanced cut of an undirected graph.

    Guarantee: removing the returned edges leaves every component with at
    most ceil(|V|/2) vertices. No approximation ratio is promised; the
    search grows breadth-first regions from up to 16 spread seed vertices,
    keeps the smallest boundary, and applies one pass of move-gain
    refinement under the balance limits.
    """
    nv = len(adj)
    if nv < 2:
        return frozenset()
    cap = (nv + 1) // 2
    comps = _undirected_components(adj)
    big = max(comps, key=len)
    if len(big) <= cap:
        return frozenset()
    # at most one component can exceed half the vertices; bisect it
    target = (len(big) + 1) // 2
    lo_size = len(big) - cap  # region must keep the remainder within cap
    hi_size = cap
    big_set = set(big)
    step = max(1, len(big) // _CUT_SEEDS)
    seeds = big[::step][:_CUT_SEEDS]
    best_cut: frozenset[UndirectedEdge] | None = None
    for seed in seeds:
        region = _bfs_region(adj, seed, target)
        region = _refine_region(adj, big_set, region, lo_size, hi_size)
        cut = frozenset(
            (min(v, w), max(v, w))
            for v in region
            for w in adj[v]
            if w not in region
        )
        if best_cut is None or len(cut) < len(best_cut):
            best_cut = cut
    assert best_cut is not None
    return best_cut


def _refine_region(
    adj: Adjacency,
    universe: set[int],
    region: set[int],
    lo_size: int,
    hi_size: int,
) -> set[int]:
    """One pass of single-vertex moves that shrink the boundary while
    keeping both sides within [lo_size, hi_size] of the universe split."""
    region = set(region)
    other_size = len(universe) - len(region)
    for v in sorted(universe):
        inside = v in region
        same = sum(1 for w in adj[v] if (w in region) == inside)
        cross = sum(1 for w in adj[v] if (w in region) != inside)
        if cross <= same:
            continue
        if inside:
            if len(region) - 1 < lo_size or other_size + 1 > hi_size:
                continue
            region.discard(v)
            other_size += 1
        else:
            if len(region) + 1 > hi_size or other_size - 1 < lo_size:
                continue
            region.add(v)
            other_size -= 1
    return region


def _components_after_removal(
    g: DirectedGraph, removed_pairs: frozenset[UndirectedEdge]
) -> ComponentLabeling:
    comp = [-1] * g.n
    members: list[tuple[int, ...]] = []
    for start in range(1, g.n + 1):
        if comp[start - 1] >= 0:
            continue
        cid = len(members)
        comp[start - 1] = cid
        order = [start]
        queue = [start]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for w in sorted(set(g.out_adj[v - 1]) | set(g.in_adj[v - 1])):
                if comp[w - 1] < 0 and (min(v, w), max(v, w)) not in removed_pairs:
                    comp[w - 1] = cid
                    queue.append(w)
                    order.append(w)
        members.append(tuple(order))
    return ComponentLabeling(component_id=tuple(comp), members=tuple(members))


def cut_edges(
    g: DirectedGraph, eps: Fraction | float, size_cap: int | None = None
) -> CutResult:
    """Recursively cut the undirected shadow until every component fits
    under the size cap, then map the cut pairs back to directed edges.

    Never fails: exceeding the eps edge budget only sets
    ``threshold_exceeded`` (with a heuristic cut the excess does not prove
    anything about the input).
    """
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError(f"eps must be in (0, 1], got {eps}")
    cap = default_size_cap(g.k, eps) if size_cap is None else size_cap
    if cap < 1:
        raise ValueError(f"size cap must be positive, got {cap}")
    shadow = undirected_shadow(g)
    removed: set[UndirectedEdge] = set()
    stack: list[dict[int, tuple[int, ...]]] = [shadow]
    while stack:
        adj = stack.pop()
        if len(adj) <= cap:
            continue
        cut = approx_min_balanced_cut(adj)
        removed.update(cut)
        trimmed = {
            v: tuple(w for w in row if (min(v, w), max(v, w)) not in cut)
            for v, row in adj.items()
        }
        for comp in _undirected_components(trimmed):
            if len(comp) > cap:
                stack.append({v: trimmed[v] for v in comp})
    removed_frozen = frozenset(removed)
    removed_directed = tuple(
        (u, v) for u, v in g.edges() if (min(u, v), max(u, v)) in removed_frozen
    )
    total = g.n * g.k
    fraction = Fraction(len(removed_directed), total) if total else Fraction(0)
    return CutResult(
        removed_edges=removed_directed,
        components=_components_after_removal(g, removed_frozen),
        removed_fraction=fraction,
        threshold_exceeded=fraction > eps,
        size_cap=cap,
    )


# -- fragments and supergraphs ----------------------------------------------


def induced_fragment(
    g: DirectedGraph,
    vertices: Sequence[int],
    removed_edges: frozenset[tuple[int, int]] = frozenset(),
) -> tuple[GraphFragment, tuple[int, ...]]:
    """Subgraph on ``vertices`` with local ids 1..len(vertices) (assigned in
    ascending global order), dropping ``removed_edges``. Returns the
    fragment and the local-to-global vertex map."""
    ordered = tuple(sorted(vertices))
    local = {v: i + 1 for i, v in enumerate(ordered)}
    out: list[tuple[int, ...]] = []
    for v in ordered:
        row = tuple(
            local[w]
            for w in g.out_adj[v - 1]
            if w in local and (v, w) not in removed_edges
        )
        out.append(row)
    return GraphFragment(n=len(ordered), out_adj=tuple(out)), ordered


def completion_count(frag: GraphFragment, k: int) -> int:
    """Number of k-regular completions of the fragment."""
    total = 1
    for v in range(1, frag.n + 1):
        deg = len(frag.out_adj[v - 1])
        if deg > k:
            raise FragmentOverfullError(f"vertex {v} has out-degree {deg} > {k}")
        total *= comb(frag.n - 1 - deg, k - deg)
    return total


def enumerate_supergraphs(frag: GraphFragment, k: int) -> Iterator[DirectedGraph]:
    """Yield every k-regular completion on the same vertex set, lexicographic
    in the added target sets, vertex by vertex."""
    if frag.n < k + 1:
        raise ValueError(f"{frag.n} vertices cannot carry out-degree {k}")
    per_vertex: list[list[tuple[int, ...]]] = []
    for v in range(1, frag.n + 1):
        have = set(frag.out_adj[v - 1])
        if len(have) > k:
            raise FragmentOverfullError(
                f"vertex {v} has out-degree {len(have)} > {k}"
            )
        allowed = [w for w in range(1, frag.n + 1) if w != v and w not in have]
        per_vertex.append(list(itertools.combinations(allowed, k - len(have))))
    base_edges = list(frag.edges())
    for choice in itertools.product(*per_vertex):
        edges = list(base_edges)
        for v, extra in enumerate(choice, 1):
            edges.extend((v, w) for w in extra)
        yield build_graph(frag.n, k, edges)


# -- numeric placement -------------------------------------------------------


def _snap_points(
    arr: np.ndarray, denominator: int
) -> tuple[tuple[Fraction, ...], ...] | None:
    pts = tuple(
        tuple(Fraction(round(float(c) * denominator), denominator) for c in row)
        for row in arr
    )
    if len(set(pts)) != len(pts):
        return None
    return pts


def quasi_condition_holds(
    edges: Sequence[tuple[int, int]],
    points: Sequence[tuple[Fraction, ...]],
    k: int,
) -> bool:
    """Exact check: for every edge (u,v), at most k points of the component
    lie within distance(u,v) of u (ties included)."""
    denoms = [c.denominator for p in points for c in p]
    if denoms:
        from math import lcm

        d = lcm(*denoms)
        rows = [tuple(int(c.numerator * (d // c.denominator)) for c in p) for p in points]
    else:
        rows = [tuple()] * len(points)

    def sq(a: tuple[int, ...], b: tuple[int, ...]) -> int:
        return sum((x - y) * (x - y) for x, y in zip(a, b))

    for u, v in edges:
        duv = sq(rows[u - 1], rows[v - 1])
        count = 0
        for w in range(len(points)):
            if w != u - 1 and sq(rows[u - 1], rows[w]) <= duv:
                count += 1
                if count > k:
                    return False
    return True


def _pairwise_sq(arr: np.ndarray) -> np.ndarray:
    diff = arr[:, None, :] - arr[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _descend_topk(
    n: int,
    d: int,
    k: int,
    edges: Sequence[tuple[int, int]],
    init: np.ndarray,
    iterations: int,
    margin_rel: float,
) -> np.ndarray | None:
    """Subgradient descent pushing each edge target inside the open k-nearest
    ball of its source, with a margin relative to the squared diameter.
    Returns a margin-clear layout or None."""
    if not edges:
        return init
    eu = np.fromiter((u - 1 for u, _ in edges), dtype=np.intp, count=len(edges))
    ev = np.fromiter((v - 1 for _, v in edges), dtype=np.intp, count=len(edges))
    p = init.astype(np.float64).copy()
    rows = np.arange(n)
    for t in range(iterations):
        d2 = _pairwise_sq(p)
        np.fill_diagonal(d2, np.inf)
        order_k = np.argpartition(d2, k, axis=1)[:, k]
        thr = d2[rows, order_k]
        finite = d2[np.isfinite(d2)]
        diam2 = float(finite.max()) if finite.size else 1.0
        if diam2 <= 0:
            diam2 = 1.0
        margin = margin_rel * diam2
        gap = d2[eu, ev] - thr[eu]
        if float(gap.max()) <= -margin:
            return p
        active = gap > -margin
        au, av = eu[active], ev[active]
        aw = order_k[au]
        grad = np.zeros_like(p)
        np.add.at(grad, au, 2.0 * (p[aw] - p[av]))
        np.add.at(grad, av, 2.0 * (p[av] - p[au]))
        np.add.at(grad, aw, 2.0 * (p[au] - p[aw]))
        gnorm = float(np.sqrt((grad * grad).sum()))
        if gnorm < 1e-12:
            return None
        step = 0.3 * np.sqrt(diam2) / gnorm / np.sqrt(1.0 + 0.05 * t)
        p = p - step * grad
    return None


def _hop_distances(frag: GraphFragment) -> np.ndarray:
    n = frag.n
    adj: list[set[int]] = [set() for _ in range(n + 1)]
    for u, v in frag.edges():
        adj[u].add(v)
        adj[v].add(u)
    dist = np.full((n, n), float(n), dtype=np.float64)
    for s in range(1, n + 1):
        dist[s - 1, s - 1] = 0.0
        queue = [s]
        qi = 0
        seen = {s}
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    dist[s - 1, w - 1] = dist[s - 1, v - 1] + 1.0
                    queue.append(w)
    return dist


def _init_mds(frag: GraphFragment, d: int, rng: np.random.Generator) -> np.ndarray:
    """Classical scaling of hop distances plus jitter; a decent warm start
    for geometric components."""
    n = frag.n
    dist = _hop_distances(frag)
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * j @ (dist * dist) @ j
    vals, vecs = np.linalg.eigh(b)
    idx = np.argsort(vals)[::-1][:d]
    coords = vecs[:, idx] * np.sqrt(np.maximum(vals[idx], 1e-9))
    if coords.shape[1] < d:
        pad = rng.normal(scale=1e-3, size=(n, d - coords.shape[1]))
        coords = np.hstack([coords, pad])
    coords = coords + rng.normal(scale=1e-3, size=coords.shape)
    return _unit_diameter(coords)


def _init_gaussian(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    return _unit_diameter(rng.normal(size=(n, d)))


def _unit_diameter(p: np.ndarray) -> np.ndarray:
    d2 = _pairwise_sq(p)
    m = float(d2.max())
    if m <= 0:
        return p + np.linspace(0, 1, p.shape[0])[:, None]
    return p / np.sqrt(m)


def _lattice_points(n: int, d: int) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(
        tuple(Fraction(i if axis == 0 else 0) for axis in range(d))
        for i in range(n)
    )


def solve_component(
    frag: GraphFragment,
    k: int,
    d: int,
    budget: SolveBudget | None = None,
    seed: int = 0,
) -> ComponentSolution:
    """Place one fragment in R^d under the quasi condition.

    Tiny fragments (at most k vertices) take distinct lattice points. When
    the number of k-regular completions fits the budget they are swept in
    order: each is prechecked for a pair-order cycle, solved exactly on the
    line for d=1, or attacked numerically otherwise; refuting every
    completion certifies impossibility in every dimension. Oversized
    completion spaces go straight to the numeric search on the fragment's
    own edges. Certification always means an exact rational re-check.
    """
    budget = budget or SolveBudget()
    n = frag.n
    verts = tuple(range(1, n + 1))
    frag_edges = list(frag.edges())
    if n <= k:
        pts = _lattice_points(n, d)
        assert quasi_condition_holds(frag_edges, pts, k)
        return ComponentSolution(vertices=verts, status=ComponentStatus.CERTIFIED_QUASI, points=pts)

    rng = np.random.default_rng([seed & 0x7FFFFFFF, n, k, d])
    count = completion_count(frag, k)
    if count <= budget.max_supergraphs:
        return _solve_enumerated(frag, k, d, budget, rng, count)
    return _solve_dynamic(frag, k, d, budget, rng)


def _attempt_exact(
    frag_edges: Sequence[tuple[int, int]],
    k: int,
    layout: np.ndarray,
    budget: SolveBudget,
) -> tuple[tuple[Fraction, ...], ...] | None:
    snapped = _snap_points(_unit_diameter(layout), budget.snap_denominator)
    if snapped is not None and quasi_condition_holds(frag_edges, snapped, k):
        return snapped
    return None


def _solve_enumerated(
    frag: GraphFragment,
    k: int,
    d: int,
    budget: SolveBudget,
    rng: np.random.Generator,
    count: int,
) -> ComponentSolution:
    n = frag.n
    verts = tuple(range(1, n + 1))
    frag_edges = list(frag.edges())
    refuted = 0
    checked = 0
    restarts_used = 0
    cert_cycle: tuple[Pair, ...] | None = None
    cert_edges: tuple[tuple[int, int], ...] | None = None
    heuristic: tuple[tuple[Fraction, ...], ...] | None = None
    for sg in enumerate_supergraphs(frag, k):
        checked += 1
        outcome = check_pair_order(sg)
        if not outcome.realizable:
            refuted += 1
            if cert_cycle is None:
                cert_cycle = outcome.cycle
                cert_edges = tuple(sg.edges())
            continue
        if d == 1:
            lined = realize_1d(sg)
            if lined.realizable:
                assert lined.line is not None
                pts = _line_points(lined.line, lined.decision.ordering, n)
                if quasi_condition_holds(frag_edges, pts, k):
                    return ComponentSolution(
                        vertices=verts,
                        status=ComponentStatus.CERTIFIED_QUASI,
                        points=pts,
                        supergraphs_checked=checked,
                        supergraphs_refuted=refuted,
                        restarts_used=restarts_used,
                    )
            continue
        sg_edges = list(sg.edges())
        while restarts_used < budget.restarts:
            init = (
                _init_mds(frag, d, rng)
                if restarts_used == 0
                else _init_gaussian(n, d, rng)
            )
            restarts_used += 1
            layout = _descend_topk(
                n, d, k, sg_edges, init, budget.iterations, budget.hinge_margin
            )
            if layout is None:
                continue
            exact = _attempt_exact(frag_edges, k, layout, budget)
            if exact is not None:
                return ComponentSolution(
                    vertices=verts,
                    status=ComponentStatus.CERTIFIED_QUASI,
                    points=exact,
                    supergraphs_checked=checked,
                    supergraphs_refuted=refuted,
                    restarts_used=restarts_used,
                )
            if heuristic is None:
                heuristic = _snap_points(
                    _unit_diameter(layout), budget.snap_denominator
                )
    if refuted == checked == count:
        return ComponentSolution(
            vertices=verts,
            status=ComponentStatus.CERTIFIED_IMPOSSIBLE,
            points=None,
            certificate_cycle=cert_cycle,
            certificate_edges=cert_edges,
            supergraphs_checked=checked,
            supergraphs_refuted=refuted,
            restarts_used=restarts_used,
            note="every k-regular completion carries a pair-order cycle",
        )
    if heuristic is not None:
        return ComponentSolution(
            vertices=verts,
            status=ComponentStatus.HEURISTIC_QUASI,
            points=heuristic,
            supergraphs_checked=checked,
            supergraphs_refuted=refuted,
            restarts_used=restarts_used,
            note="numeric layout passed with margin but failed the exact re-check",
        )
    return ComponentSolution(
        vertices=verts,
        status=ComponentStatus.UNKNOWN,
        points=None,
        supergraphs_checked=checked,
        supergraphs_refuted=refuted,
        restarts_used=restarts_used,
        note="budget exhausted before any completion was placed",
    )


def _line_points(
    line: LineRealization, ordering: tuple[int, ...], n: int
) -> tuple[tuple[Fraction, ...], ...]:
    coords: list[tuple[Fraction, ...]] = [()] * n
    for position, v in enumerate(ordering):
        coords[v - 1] = (line.coords[position],)
    return tuple(coords)


def _solve_dynamic(
    frag: GraphFragment,
    k: int,
    d: int,
    budget: SolveBudget,
    rng: np.random.Generator,
) -> ComponentSolution:
    n = frag.n
    verts = tuple(range(1, n + 1))
    frag_edges = list(frag.edges())
    heuristic: tuple[tuple[Fraction, ...], ...] | None = None
    restarts_used = 0
    while restarts_used < budget.restarts:
        init = (
            _init_mds(frag, d, rng) if restarts_used == 0 else _init_gaussian(n, d, rng)
        )
        restarts_used += 1
        layout = _descend_topk(
            n, d, k, frag_edges, init, budget.iterations, budget.hinge_margin
        )
        if layout is None:
            continue
        exact = _attempt_exact(frag_edges, k, layout, budget)
        if exact is not None:
            return ComponentSolution(
                vertices=verts,
                status=ComponentStatus.CERTIFIED_QUASI,
                points=exact,
                restarts_used=restarts_used,
            )
        if heuristic is None:
            heuristic = _snap_points(_unit_diameter(layout), budget.snap_denominator)
    if heuristic is not None:
        return ComponentSolution(
            vertices=verts,
            status=ComponentStatus.HEURISTIC_QUASI,
            points=heuristic,
            restarts_used=restarts_used,
            note="numeric layout passed with margin but failed the exact re-check",
        )
    return ComponentSolution(
        vertices=verts,
        status=ComponentStatus.UNKNOWN,
        points=None,
        restarts_used=restarts_used,
        note="numeric search exhausted its restarts",
    )


# -- assembly ----------------------------------------------------------------


def _diameter_ceiling(points: Sequence[tuple[Fraction, ...]]) -> int:
    worst = Fraction(0)
    pts = list(points)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d2 = sum((a - b) * (a - b) for a, b in zip(pts[i], pts[j]))
            if d2 > worst:
                worst = d2
    if worst == 0:
        return 0
    num = -(-worst.numerator // worst.denominator)  # ceil of the fraction
    return isqrt(num) + 1


def assemble_embedding(
    solutions: Sequence[ComponentSolution],
    d: int,
    g: DirectedGraph,
    cut: CutResult,
) -> EmbeddingResult:
    """String the component layouts along the first axis.

    The translation magnitude, 3 * (largest local diameter, at least 1,
    rounded up to an integer) * (component count + 1), keeps every
    vertex's k nearest images inside its own component whenever that
    component has more than k vertices.
    """
    for sol in solutions:
        if sol.status is ComponentStatus.CERTIFIED_IMPOSSIBLE:
            raise ImpossibleComponentError(
                "a component admits no placement in any dimension", sol
            )
        if sol.points is None:
            raise UnsolvedComponentError(f"component unsolved: {sol.note}")
    diam = max((_diameter_ceiling(sol.points) for sol in solutions), default=0)
    translation = 3 * max(diam, 1) * (len(solutions) + 1)
    coords: list[tuple[Fraction, ...] | None] = [None] * g.n
    for index, sol in enumerate(solutions, 1):
        offset = Fraction(index * translation)
        assert sol.points is not None
        for vert, pt in zip(sol.vertices, sol.points):
            moved = (pt[0] + offset,) + tuple(pt[1:])
            coords[vert - 1] = moved
    assert all(c is not None for c in coords)
    ps = PointSet(dim=d, points=tuple(coords), exact=True)  # type: ignore[arg-type]
    realization = Realization(
        graph=g,
        point_set=ps,
        assignment=tuple(range(g.n)),
        provenance=Provenance.HEURISTIC_COMPONENT,
    )
    score = preservation_score(g, realization)
    if all(s.status is ComponentStatus.CERTIFIED_QUASI for s in solutions):
        assert score.fraction >= 1 - cut.removed_fraction, (
            "certified components must preserve every kept edge"
        )
    return EmbeddingResult(
        realization=realization,
        score=score,
        statuses=tuple(s.status for s in solutions),
        translation=translation,
        cut=cut,
    )


def embed(
    g: DirectedGraph,
    d: int,
    eps: Fraction | float,
    budget: SolveBudget | None = None,
    size_cap: int | None = None,
    seed: int = 0,
) -> EmbedOutcome:
    """Cut, solve each component, assemble.

    Success claims score >= 1 - removed fraction (and asserts it when all
    components are certified). A pair-order refutation of every completion
    of some component proves the input unrealizable in any dimension.
    Numeric failure never claims impossibility; it reports Unknown.
    """
    if d < 1:
        raise ValueError(f"dimension {d} < 1")
    budget = budget or SolveBudget()
    cut = cut_edges(g, eps, size_cap)
    removed = frozenset(cut.removed_edges)
    solutions: list[ComponentSolution] = []
    for ci, members in enumerate(cut.components.members):
        frag, mapping = induced_fragment(g, members, removed)
        local = solve_component(frag, g.k, d, budget, seed=seed * 1_000_003 + ci)
        solutions.append(
            ComponentSolution(
                vertices=mapping,
                status=local.status,
                points=local.points,
                certificate_cycle=local.certificate_cycle,
                certificate_edges=local.certificate_edges,
                supergraphs_checked=local.supergraphs_checked,
                supergraphs_refuted=local.supergraphs_refuted,
                restarts_used=local.restarts_used,
                note=local.note,
            )
        )
    for sol in solutions:
        if sol.status is ComponentStatus.CERTIFIED_IMPOSSIBLE:
            return EmbedOutcome(
                status=EmbedStatus.CERTIFIED_IMPOSSIBLE,
                result=None,
                cut=cut,
                solutions=tuple(solutions),
                message="a component admits no placement in any dimension",
            )
    if any(s.status is ComponentStatus.UNKNOWN for s in solutions):
        return EmbedOutcome(
            status=EmbedStatus.UNKNOWN,
            result=None,
            cut=cut,
            solutions=tuple(solutions),
            message="at least one component stayed unsolved within budget",
        )
    result = assemble_embedding(solutions, d, g, cut)
    return EmbedOutcome(
        status=EmbedStatus.SUCCESS,
        result=result,
        cut=cut,
        solutions=tuple(solutions),
        message="",
    )
