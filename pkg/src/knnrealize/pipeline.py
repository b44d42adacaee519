"""End-to-end line realization: decide, solve the gap system, verify."""

from __future__ import annotations

from dataclasses import dataclass

from .gap_lp import (
    LineRealization,
    LpInfeasible,
    build_lp,
    extract_coordinates,
    solve_feasibility,
)
from .graph import DirectedGraph, OpCounter
from .knn import PointSet, Provenance, Realization, verify_realization
from .line_order import LineDecision, decide_1d


class InternalSolverError(RuntimeError):
    """The gap system of a window-checked ordering came back infeasible.

    This contradicts the feasibility guarantee for such systems, so it can
    only mean a defect in this package; the certificate is attached for
    diagnosis.
    """


class PostVerifyFailedError(RuntimeError):
    """Extracted coordinates failed the strict verification round trip."""


@dataclass(frozen=True)
class RealizeOutcome:
    decision: LineDecision
    line: LineRealization | None
    realization: Realization | None

    @property
    def realizable(self) -> bool:
        return self.decision.realizable


def realize_1d(g: DirectedGraph, ops: OpCounter | None = None) -> RealizeOutcome:
    """Compute exact strictly-increasing coordinates realizing g on the
    line, or report non-realizability with the decision diagnostics."""
    decision = decide_1d(g, ops)
    if not decision.realizable:
        return RealizeOutcome(decision=decision, line=None, realization=None)
    assert decision.windows is not None
    system = build_lp(decision.ordering, decision.windows, g.k)
    solved = solve_feasibility(system)
    if isinstance(solved, LpInfeasible):
        raise InternalSolverError(
            "window-checked ordering produced an infeasible gap system; "
            f"ordering={decision.ordering} windows={decision.windows} "
            f"certificate={solved.certificate}"
        )
    line = extract_coordinates(solved.delta, g.n, decision.ordering)
    ps = PointSet(dim=1, points=tuple((c,) for c in line.coords), exact=True)
    assignment = [0] * g.n
    for position, v in enumerate(decision.ordering):
        assignment[v - 1] = position
    realization = Realization(
        graph=g,
        point_set=ps,
        assignment=tuple(assignment),
        provenance=Provenance.EXACT_LINE,
    )
    if not verify_realization(g, realization):
        raise PostVerifyFailedError(
            f"coordinates failed strict verification; ordering={decision.ordering}"
        )
    return RealizeOutcome(decision=decision, line=line, realization=realization)
