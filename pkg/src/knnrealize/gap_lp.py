"""Exact linear feasibility over the gap variables of a vertex ordering.

Variables are the n-1 consecutive gaps of an ordering. Each vertex whose
out-window has a neighbor just outside it contributes one inequality per
side: the distance to the far end of its window must stay strictly below
the distance to the nearest excluded vertex. Strictness is encoded by a
slack of -1 on every row; any solution of the slack system, bumped by a
uniform 1/n per gap, satisfies the strict system.

Every answer is exact. The fast path solves the system in floating point,
snaps the result onto a fine rational grid, re-substitutes exactly, and
exploits homogeneity (row values scale linearly with the gaps) to rescale
any strictly-negative candidate until every row clears its -1 bound. When
that fails, a dense phase-1 simplex over Fractions with Bland's rule
decides the system outright and, on infeasibility, produces an
independently checkable nonnegative certificate (y >= 0, A^T y >= 0,
b^T y < 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

_SNAP_DENOMINATOR = 1 << 40


class WindowsInvalidError(ValueError):
    pass


@dataclass(frozen=True)
class LpRow:
    """One inequality: sum of gaps over ``plus`` minus sum over ``minus``
    is at most -1. Ranges are inclusive 1-based gap-index intervals."""

    plus: tuple[int, int] | None
    minus: tuple[int, int] | None
    vertex: int
    side: str  # "left" or "right"

    bound: int = -1


@dataclass(frozen=True)
class LpSystem:
    num_vars: int
    rows: tuple[LpRow, ...]


@dataclass(frozen=True)
class LpSolution:
    delta: tuple[Fraction, ...]
    method: str  # "float-repaired" or "simplex"


@dataclass(frozen=True)
class LpInfeasible:
    certificate: tuple[Fraction, ...]


def build_lp(
    ordering: Sequence[int], windows: Sequence[int], k: int
) -> LpSystem:
    """Emit the left/right rows for a window-checked ordering.

    The left row of position i exists only when a vertex sits just past the
    window's right end (windows[i] + k + 1 <= n); the right row only when
    one sits just before its left end (windows[i] >= 2).
    """
    n = len(ordering)
    if len(windows) != n:
        raise WindowsInvalidError(f"{len(windows)} windows for {n} vertices")
    prev = 1
    for i, p in enumerate(windows, 1):
        if not (1 <= p <= i <= p + k <= n) or p < prev:
            raise WindowsInvalidError(f"window start {p} invalid at position {i}")
        prev = p
    rows: list[LpRow] = []
    for i, p in enumerate(windows, 1):
        v = ordering[i - 1]
        if p + k + 1 <= n:
            rows.append(
                LpRow(
                    plus=(p, i - 1) if p <= i - 1 else None,
                    minus=(i, p + k),
                    vertex=v,
                    side="left",
                )
            )
        if p >= 2:
            rows.append(
                LpRow(
                    plus=(i, p + k - 1) if i <= p + k - 1 else None,
                    minus=(p - 1, i - 1),
                    vertex=v,
                    side="right",
                )
            )
    return LpSystem(num_vars=n - 1, rows=tuple(rows))


def row_value(row: LpRow, prefix: Sequence[Fraction]) -> Fraction:
    """Evaluate a row against prefix sums (prefix[t] = delta_1+...+delta_t)."""
    val = Fraction(0)
    if row.plus is not None:
        a, b = row.plus
        val += prefix[b] - prefix[a - 1]
    if row.minus is not None:
        c, d = row.minus
        val -= prefix[d] - prefix[c - 1]
    return val


def _prefix(delta: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)]
    for d in delta:
        out.append(out[-1] + d)
    return out


def solution_satisfies(sys: LpSystem, delta: Sequence[Fraction]) -> bool:
    """Exact re-substitution: delta >= 0 and every row at most its bound."""
    if len(delta) != sys.num_vars or any(d < 0 for d in delta):
        return False
    pre = _prefix(delta)
    return all(row_value(row, pre) <= row.bound for row in sys.rows)


def certificate_is_valid(sys: LpSystem, y: Sequence[Fraction]) -> bool:
    """Exact Farkas check: y >= 0, A^T y >= 0, and b^T y < 0."""
    if len(y) != len(sys.rows) or any(c < 0 for c in y):
        return False
    if sum(y) <= 0:  # b = -1 everywhere, so b^T y = -sum(y)
        return False
    diff = [Fraction(0)] * (sys.num_vars + 2)
    for row, c in zip(sys.rows, y):
        if row.plus is not None:
            a, b = row.plus
            diff[a] += c
            diff[b + 1] -= c
        if row.minus is not None:
            a, b = row.minus
            diff[a] -= c
            diff[b + 1] += c
    acc = Fraction(0)
    for j in range(1, sys.num_vars + 1):
        acc += diff[j]
        if acc < 0:
            return False
    return True


def _float_lp_candidate(sys: LpSystem) -> list[Fraction] | None:
    """Solve in floating point, snap to rationals, rescale into validity.

    A candidate whose rows all evaluate to strictly negative exact values
    can be multiplied by 1/min(-value) to push every row to -1 or below;
    snapping noise of ~2^-40 cannot flip a row that the float solver left
    near -1, so this almost always certifies. Returns None when it cannot.
    """
    m = sys.num_vars
    if m == 0 or not sys.rows:
        return [Fraction(0)] * m
    a_ub = np.zeros((len(sys.rows), m), dtype=np.float64)
    for r, row in enumerate(sys.rows):
        if row.plus is not None:
            a_ub[r, row.plus[0] - 1 : row.plus[1]] = 1.0
        if row.minus is not None:
            a_ub[r, row.minus[0] - 1 : row.minus[1]] = -1.0
    res = linprog(
        c=np.zeros(m),
        A_ub=a_ub,
        b_ub=np.full(len(sys.rows), -1.0),
        bounds=(0, None),
        method="highs",
    )
    if not res.success:
        return None
    delta = [
        Fraction(max(round(v * _SNAP_DENOMINATOR), 0), _SNAP_DENOMINATOR)
        for v in res.x
    ]
    pre = _prefix(delta)
    worst = max(row_value(row, pre) for row in sys.rows)
    if worst >= 0:
        return None
    if worst > -1:
        scale = -1 / worst
        delta = [d * scale for d in delta]
    return delta if solution_satisfies(sys, delta) else None


def solve_feasibility(sys: LpSystem) -> LpSolution | LpInfeasible:
    """Find exact nonnegative gaps satisfying every row, or certify that
    none exist. Deterministic; total on every well-formed system."""
    candidate = _float_lp_candidate(sys)
    if candidate is not None:
        return LpSolution(delta=tuple(candidate), method="float-repaired")
    return _phase1_simplex(sys)


def _dense_coeffs(row: LpRow, m: int) -> list[int]:
    dense = [0] * m
    if row.plus is not None:
        a, b = row.plus
        for j in range(a, b + 1):
            dense[j - 1] += 1
    if row.minus is not None:
        a, b = row.minus
        for j in range(a, b + 1):
            dense[j - 1] -= 1
    return dense


def _phase1_simplex(sys: LpSystem) -> LpSolution | LpInfeasible:
    """Dense phase-1 simplex over Fractions with Bland's rule.

    Rows enter as  -a.x - e + t = 1  with e, t >= 0 and the artificials t
    basic; minimizing sum(t) to zero yields a feasible x, while a positive
    optimum yields the Farkas vector as the phase-1 duals.
    """
    m = sys.num_vars
    nrows = len(sys.rows)
    if nrows == 0:
        return LpSolution(delta=(Fraction(0),) * m, method="simplex")
    ncols = m + 2 * nrows
    tab: list[list[Fraction]] = []
    for r, row in enumerate(sys.rows):
        dense = _dense_coeffs(row, m)
        line = [Fraction(-c) for c in dense]
        line += [Fraction(0)] * (2 * nrows)
        line[m + r] = Fraction(-1)
        line[m + nrows + r] = Fraction(1)
        line.append(Fraction(1))  # rhs
        tab.append(line)
    basis = [m + nrows + r for r in range(nrows)]
    # reduced-cost row (c_j - z_j) with rhs = -objective
    obj = [Fraction(0)] * (ncols + 1)
    for j in range(ncols):
        c_j = Fraction(1) if j >= m + nrows else Fraction(0)
        obj[j] = c_j - sum(tab[r][j] for r in range(nrows))
    obj[ncols] = -sum(tab[r][ncols] for r in range(nrows))

    while True:
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        best: Fraction | None = None
        for r in range(nrows):
            a = tab[r][enter]
            if a > 0:
                ratio = tab[r][ncols] / a
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[r] < basis[leave])
                ):
                    best = ratio
                    leave = r
        if leave is None:  # pragma: no cover - phase 1 is bounded below
            raise RuntimeError("phase-1 simplex reported an unbounded objective")
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for r in range(nrows):
            if r != leave and tab[r][enter] != 0:
                f = tab[r][enter]
                tab[r] = [v - f * w for v, w in zip(tab[r], tab[leave])]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [v - f * w for v, w in zip(obj, tab[leave])]
        basis[leave] = enter

    objective = -obj[ncols]
    if objective == 0:
        delta = [Fraction(0)] * m
        for r, b in enumerate(basis):
            if b < m:
                delta[b] = tab[r][ncols]
        assert solution_satisfies(sys, delta), "simplex produced an invalid solution"
        return LpSolution(delta=tuple(delta), method="simplex")
    y = [Fraction(1) - obj[m + nrows + r] for r in range(nrows)]
    assert certificate_is_valid(sys, y), "simplex produced an invalid certificate"
    return LpInfeasible(certificate=tuple(y))


@dataclass(frozen=True)
class LineRealization:
    """Strictly increasing exact coordinates along an ordering."""

    coords: tuple[Fraction, ...]
    ordering: tuple[int, ...] | None = None


def extract_coordinates(
    delta: Sequence[Fraction], n: int, ordering: Sequence[int] | None = None
) -> LineRealization:
    """Turn slack-system gaps into strict coordinates.

    Each gap grows by 1/n, which restores strictness of every inequality
    and makes the coordinates strictly increasing.
    """
    if len(delta) != n - 1:
        raise ValueError(f"{len(delta)} gaps cannot place {n} points")
    if any(d < 0 for d in delta):
        raise ValueError("gaps must be nonnegative")
    bump = Fraction(1, n)
    coords = [Fraction(0)]
    for d in delta:
        coords.append(coords[-1] + d + bump)
    return LineRealization(
        coords=tuple(coords),
        ordering=tuple(ordering) if ordering is not None else None,
    )


def dump_system(sys: LpSystem) -> str:
    """Plain-text form for external cross-checking: one row per line with
    signed gap indices and the bound."""
    lines = [f"vars {sys.num_vars}"]
    for row in sys.rows:
        parts: list[str] = []
        if row.plus is not None:
            parts.extend(f"+{j}" for j in range(row.plus[0], row.plus[1] + 1))
        if row.minus is not None:
            parts.extend(f"-{j}" for j in range(row.minus[0], row.minus[1] + 1))
        parts.append(f"<= {row.bound}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"
