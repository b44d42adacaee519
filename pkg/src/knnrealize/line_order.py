"""Combinatorial pipeline deciding realizability on the line in O(kn).

The pipeline partitions the vertices into classes of equal closed out-sets,
orders the classes along the (hypothetical) line, orders vertices inside
each class by their in-neighborhood span, and finally checks that every
closed out-set forms a contiguous, monotone index window around its vertex.
That final window check is exact: an ordering passes it iff the graph is
realizable on the line with that ordering, so every intermediate step may
return garbage on unrealizable inputs without harming soundness.

All steps are deterministic; where the underlying procedure allows an
arbitrary choice we take the lowest id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph import ComponentLabeling, DirectedGraph, OpCounter, weak_components


class StuckError(RuntimeError):
    """Class-chain extension ran dry while classes remained (unrealizable)."""

    def __init__(self, message: str, witness: int):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class ClassPartition:
    """Vertex classes intended to group equal closed out-sets.

    On realizable inputs the grouping is exactly the equal-out-set
    partition; on arbitrary inputs it may differ and ``out_window`` holds
    the first member's closed out-set as representative.
    """

    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]
    out_window: tuple[tuple[int, ...], ...]

    def as_sets(self) -> set[frozenset[int]]:
        return {frozenset(c) for c in self.classes}


@dataclass(frozen=True)
class InWindowSignature:
    """Per-vertex (first, last) positions of classes fully inside the
    closed in-set, 1-based with respect to a class sequence."""

    first: tuple[int, ...]
    last: tuple[int, ...]


@dataclass(frozen=True)
class Condition1Result:
    feasible: bool
    windows: tuple[int, ...] | None
    witness: int | None


@dataclass(frozen=True)
class LineDecision:
    """Outcome of the line-realizability decision with all intermediates."""

    realizable: bool
    ordering: tuple[int, ...]
    windows: tuple[int, ...] | None
    partition: ClassPartition
    class_sequence: tuple[int, ...]
    signature: InWindowSignature | None
    components: ComponentLabeling
    witness: int | None
    reason: str


def _isect_size(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    i = j = c = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            c += 1
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    return c


def classify(g: DirectedGraph, ops: OpCounter | None = None) -> ClassPartition:
    """Partition vertices, grouping equal closed out-sets in O(kn).

    Processes the lowest unconsumed vertex v, buckets the unconsumed part
    of its closed in-set by out-set overlap with v, and splits each bucket
    greedily into "same out-set as the bucket head" and "the rest".
    """
    n, k = g.n, g.k
    consumed = bytearray(n + 1)
    classes: list[tuple[int, ...]] = []
    windows: list[tuple[int, ...]] = []
    class_of = [0] * (n + 1)

    for v in range(1, n + 1):
        if consumed[v]:
            continue
        ov = g.closed_out(v)
        group = [u for u in g.closed_in(v) if not consumed[u]]
        buckets: list[list[int]] = [[] for _ in range(k + 2)]
        for u in group:
            if ops is not None:
                ops.add(k + 1)
            buckets[_isect_size(g.closed_out(u), ov)].append(u)
        for bucket in buckets[1:]:
            same: list[int] = []
            rest: list[int] = []
            head_out: tuple[int, ...] = ()
            for u in bucket:
                ou = g.closed_out(u)
                if not same:
                    same.append(u)
                    head_out = ou
                elif ou == head_out:
                    same.append(u)
                else:
                    rest.append(u)
            for cls in (same, rest):
                if cls:
                    cid = len(classes)
                    classes.append(tuple(cls))
                    windows.append(g.closed_out(cls[0]))
                    for u in cls:
                        class_of[u] = cid
        for u in group:
            consumed[u] = 1
        if buckets[0]:  # cannot happen: v is in every member's closed out-set
            for u in buckets[0]:
                cid = len(classes)
                classes.append((u,))
                windows.append(g.closed_out(u))
                class_of[u] = cid

    return ClassPartition(
        classes=tuple(classes),
        class_of=tuple(class_of[1:]),
        out_window=tuple(windows),
    )


def _overlapping_classes(
    g: DirectedGraph,
    part: ClassPartition,
    did: int,
    alive: set[int],
    ops: OpCounter | None,
) -> list[tuple[int, int]]:
    """Alive classes whose out-window intersects that of class ``did``,
    with overlap sizes, found by scanning in-sets of the window members."""
    seen: set[int] = set()
    for v in part.out_window[did]:
        for u in g.closed_in(v):
            if ops is not None:
                ops.add()
            cid = part.class_of[u - 1]
            if cid in alive:
                seen.add(cid)
    out: list[tuple[int, int]] = []
    wd = part.out_window[did]
    for cid in seen:
        s = _isect_size(wd, part.out_window[cid])
        if s:
            out.append((cid, s))
    return out


def _find_chain(
    g: DirectedGraph,
    part: ClassPartition,
    pool: set[int],
    start: int,
    k: int,
    ops: OpCounter | None,
) -> list[int]:
    """Extend a class chain away from ``start``: repeatedly collect the pool
    classes overlapping the current head's window, append them by decreasing
    overlap (ties by class id), and advance to the last appended."""
    seq: list[int] = []
    d = start
    while True:
        cands = _overlapping_classes(g, part, d, pool, ops)
        if not cands:
            return seq
        buckets: list[list[int]] = [[] for _ in range(k + 2)]
        for cid, s in cands:
            buckets[min(s, k + 1)].append(cid)
        ordered: list[int] = []
        for s in range(k + 1, 0, -1):
            ordered.extend(sorted(buckets[s]))
        seq.extend(ordered)
        pool.difference_update(ordered)
        d = ordered[-1]


def class_order(
    g: DirectedGraph,
    part: ClassPartition,
    class_ids: Sequence[int] | None = None,
    ops: OpCounter | None = None,
) -> tuple[int, ...]:
    """Order the given classes along the line (both orientations are valid;
    the one produced is deterministic).

    ``class_ids`` must cover exactly one weakly-connected component; pass
    None for a weakly-connected graph. Picks the anchor X as the lowest
    class id, its neighbor Y by maximum window overlap, splits the rest
    into the two sides of X by the subset test against the X/Y overlap,
    and extends each side chain-wise. Raises StuckError when the chains
    cannot absorb every class, which cannot happen on realizable inputs.
    """
    ids = sorted(class_ids) if class_ids is not None else list(range(len(part.classes)))
    if not ids:
        return ()
    if len(ids) == 1:
        return (ids[0],)
    k = g.k
    x = ids[0]
    alive = set(ids)
    alive.discard(x)
    cands = _overlapping_classes(g, part, x, alive, ops)
    left_pool = set(alive)
    right_pool = set(alive)
    if cands:
        y, _ = max(cands, key=lambda cs: (cs[1], -cs[0]))
        wx = part.out_window[x]
        ov_y = frozenset(wx) & frozenset(part.out_window[y])
        for cid, _s in cands:
            ov_c = frozenset(wx) & frozenset(part.out_window[cid])
            if ov_c <= ov_y:
                left_pool.discard(cid)  # same side as Y: excluded from the left run
            else:
                right_pool.discard(cid)
    toward_y = _find_chain(g, part, right_pool, x, k, ops)
    away = _find_chain(g, part, left_pool, x, k, ops)
    ordering = tuple(reversed(away)) + (x,) + tuple(toward_y)
    if sorted(ordering) != ids:
        missing = set(ids) - set(ordering)
        witness_cls = min(missing) if missing else x
        raise StuckError(
            "class chains did not cover the component", part.classes[witness_cls][0]
        )
    return ordering


def compute_in_windows(
    g: DirectedGraph,
    part: ClassPartition,
    class_seq: Sequence[int],
    ops: OpCounter | None = None,
) -> InWindowSignature:
    """For each vertex, the first and last positions (1-based) in
    ``class_seq`` of classes fully contained in its closed in-set.

    Vertices whose in-set contains no full class get their own class
    position for both ends; on realizable inputs that case never occurs.
    """
    pos = {cid: i + 1 for i, cid in enumerate(class_seq)}
    first = [0] * g.n
    last = [0] * g.n
    for v in range(1, g.n + 1):
        counts: dict[int, int] = {}
        for u in g.closed_in(v):
            if ops is not None:
                ops.add()
            cid = part.class_of[u - 1]
            counts[cid] = counts.get(cid, 0) + 1
        lo = hi = 0
        for cid, c in counts.items():
            if c == len(part.classes[cid]) and cid in pos:
                p = pos[cid]
                if lo == 0 or p < lo:
                    lo = p
                if p > hi:
                    hi = p
        if lo == 0:
            lo = hi = pos.get(part.class_of[v - 1], 1)
        first[v - 1] = lo
        last[v - 1] = hi
    return InWindowSignature(first=tuple(first), last=tuple(last))


def vertex_order(
    g: DirectedGraph,
    part: ClassPartition,
    class_seq: Sequence[int],
    ops: OpCounter | None = None,
) -> tuple[tuple[int, ...], InWindowSignature]:
    """Concatenate class blocks, ordering members inside class i by the key
    first+last over the range {2i-2k, ..., 2i+2k} with bucket sort; ties
    break by (first, vertex id)."""
    sig = compute_in_windows(g, part, class_seq, ops)
    k = g.k
    order: list[int] = []
    for i, cid in enumerate(class_seq, 1):
        members = part.classes[cid]
        lo_key, hi_key = 2 * i - 2 * k, 2 * i + 2 * k
        buckets: list[list[int]] = [[] for _ in range(hi_key - lo_key + 1)]
        for v in members:
            if ops is not None:
                ops.add()
            key = sig.first[v - 1] + sig.last[v - 1]
            key = min(max(key, lo_key), hi_key)
            buckets[key - lo_key].append(v)
        for bucket in buckets:
            if len(bucket) > 1:
                bucket.sort(key=lambda v: (sig.first[v - 1], v))
            order.extend(bucket)
    return tuple(order), sig


def check_condition1(
    g: DirectedGraph,
    ordering: Sequence[int],
    ops: OpCounter | None = None,
) -> Condition1Result:
    """Exact feasibility test for a vertex ordering, O(kn).

    Feasible iff every closed out-set occupies a contiguous position window
    of size k+1 containing its own vertex and the window starts are
    monotone. Returns the window starts or the first violating vertex.
    """
    n, k = g.n, g.k
    if sorted(ordering) != list(range(1, n + 1)):
        raise ValueError("ordering is not a permutation of 1..n")
    pos = [0] * (n + 1)
    for i, v in enumerate(ordering, 1):
        pos[v] = i
    windows: list[int] = []
    prev = 1
    for i, v in enumerate(ordering, 1):
        mn = mx = pos[v]
        for u in g.out_adj[v - 1]:
            if ops is not None:
                ops.add()
            p = pos[u]
            if p < mn:
                mn = p
            elif p > mx:
                mx = p
        # k+1 distinct positions spanning exactly k are automatically contiguous
        if mx - mn != k or not (mn <= i <= mx) or mn < prev:
            return Condition1Result(feasible=False, windows=None, witness=v)
        windows.append(mn)
        prev = mn
    return Condition1Result(feasible=True, windows=tuple(windows), witness=None)


def decide_1d(g: DirectedGraph, ops: OpCounter | None = None) -> LineDecision:
    """Decide line realizability in O(kn); total on every k-regular input.

    Per weakly-connected component: classify, order the classes, order the
    vertices; concatenate components in discovery order and run the exact
    window check on the full ordering.
    """
    labeling = weak_components(g, ops)
    part = classify(g, ops)
    groups: list[list[int]] = [[] for _ in range(labeling.component_count)]
    for cid, members in enumerate(part.classes):
        groups[labeling.component_id[members[0] - 1]].append(cid)

    seq: list[int] = []
    for group in groups:
        try:
            seq.extend(class_order(g, part, group, ops))
        except StuckError as exc:
            ordering = tuple(
                v for grp in labeling.members for v in sorted(grp)
            )
            return LineDecision(
                realizable=False,
                ordering=ordering,
                windows=None,
                partition=part,
                class_sequence=tuple(seq),
                signature=None,
                components=labeling,
                witness=exc.witness,
                reason=str(exc),
            )
    ordering, sig = vertex_order(g, part, seq, ops)
    res = check_condition1(g, ordering, ops)
    return LineDecision(
        realizable=res.feasible,
        ordering=ordering,
        windows=res.windows,
        partition=part,
        class_sequence=tuple(seq),
        signature=sig,
        components=labeling,
        witness=res.witness,
        reason="" if res.feasible else "out-window check failed",
    )
