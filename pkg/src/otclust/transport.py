"""Exact discrete optimal transport through the simplex solver."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    STATUS_OPTIMAL,
    CostMatrix,
    PointCloud,
    ProbabilityVector,
    SolveReport,
    TransportPlan,
    build_cost_matrix,
)
from .lp import LinearProgram, LpConfig, solve_lp


@dataclass(frozen=True)
class TransportResult:
    plan: TransportPlan
    report: SolveReport


def transport_program(
    cost: CostMatrix, p0: ProbabilityVector, p1: ProbabilityVector
) -> LinearProgram:
    """Marginal-matching LP over row-major plan entries.

    The final column-sum row is omitted: with both marginals on the simplex
    it is implied by the others, and dropping it keeps the constraint matrix
    full rank.
    """
    n, m = cost.shape
    if p0.size != n or p1.size != m:
        raise ValueError("marginal sizes do not match the cost matrix")
    rows: list[list[tuple[int, float]]] = []
    rhs = []
    for i in range(n):
        rows.append([(i * m + j, 1.0) for j in range(m)])
        rhs.append(p0.weights[i])
    for j in range(m - 1):
        rows.append([(i * m + j, 1.0) for i in range(n)])
        rhs.append(p1.weights[j])
    return LinearProgram(cost.entries.ravel(), tuple(rows), np.asarray(rhs), n * m)


def solve_transport(
    cost: CostMatrix,
    p0: ProbabilityVector,
    p1: ProbabilityVector,
    config: LpConfig | None = None,
) -> TransportResult:
    """Minimize sum_ij cost_ij plan_ij over couplings of p0 and p1."""
    n, m = cost.shape
    lp = transport_program(cost, p0, p1)
    sol = solve_lp(lp, config)
    if sol.status != STATUS_OPTIMAL:
        raise RuntimeError(f"transport solve ended with status {sol.status!r}")
    plan = TransportPlan(sol.primal.reshape(n, m), p0, p1, tolerance=1e-8)
    report = SolveReport(sol.objective_value, sol.pivots, sol.status)
    return TransportResult(plan, report)


def wasserstein2(
    source: PointCloud,
    target: PointCloud,
    source_weights: ProbabilityVector | None = None,
    target_weights: ProbabilityVector | None = None,
) -> tuple[float, float]:
    """Squared 2-Wasserstein cost and its square root between two clouds.

    Weights default to uniform. The first value is the optimal transport
    objective under squared Euclidean cost; the second is the metric.
    """
    wa = source_weights or ProbabilityVector.uniform(source.size)
    wb = target_weights or ProbabilityVector.uniform(target.size)
    cost = build_cost_matrix(source, target)
    result = solve_transport(cost, wa, wb)
    value = max(result.report.objective, 0.0)
    return value, float(np.sqrt(value))


def northwest_corner(p0: ProbabilityVector, p1: ProbabilityVector) -> TransportPlan:
    """Greedy staircase coupling; feasible, generally suboptimal.

    Fills cells in row-major scan order, always exhausting the smaller
    remaining marginal, so at most size(p0) + size(p1) - 1 entries are
    nonzero.
    """
    a = p0.weights.copy()
    b = p1.weights.copy()
    n, m = a.size, b.size
    plan = np.zeros((n, m))
    i = j = 0
    while True:
        t = min(a[i], b[j])
        plan[i, j] = t
        a[i] -= t
        b[j] -= t
        if i == n - 1 and j == m - 1:
            break
        if j == m - 1:
            i += 1
        elif i == n - 1:
            j += 1
        elif a[i] <= b[j]:
            i += 1
        else:
            j += 1
    return TransportPlan(plan, p0, p1, tolerance=1e-8)
