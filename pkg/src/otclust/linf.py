"""Reciprocal-mass relaxation solved by per-column decomposition.

The penalty here is the reciprocal of the largest column mass of the plan:

    min  sum_jk cost_jk plan_jk + penalty / max_i (column mass i)

Fixing which column carries the maximum and how much mass t it holds leaves
a transport program whose value g_i(t) is convex piecewise-linear in t, so
each column yields a one-dimensional convex problem g_i(t) + penalty / t,
minimized by golden-section search; the relaxation value is the best over
columns, lowest index on ties.

The inner program is solved by the simplex method. Mass headed anywhere but
column i always takes the cheapest remaining destination of its row, so a
sorted greedy fill of column i is an optimal basic solution; it is handed to
the solver as the starting basis, which then certifies optimality (or, if
the construction were ever off, pivots to the true optimum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    STATUS_OPTIMAL,
    CostMatrix,
    ProbabilityVector,
    SolveReport,
    TransportPlan,
)
from .lp import LinearProgram, LpConfig, solve_lp

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_BOUNDARY_SLACK = 1e-12


@dataclass(frozen=True)
class LinfResult:
    """best_index is the column carrying the plan's largest mass t*
    (= best_mass); per_index_values holds every column's subproblem
    optimum, whose minimum is the reported objective."""

    plan: TransportPlan
    best_index: int
    best_mass: float
    report: SolveReport
    per_index_values: np.ndarray


def golden_section(f, lo: float, hi: float, tol: float):
    """Minimize a unimodal function on [lo, hi] to within tol in argument.

    Returns (argmin estimate, value there). Each step shrinks the bracket by
    the golden ratio and reuses the surviving interior evaluation.
    """
    if not (lo < hi):
        raise ValueError("need lo < hi")
    if tol <= 0:
        raise ValueError("tolerance must be positive")

    def checked(t):
        value = float(f(t))
        if not math.isfinite(value):
            raise RuntimeError(f"objective returned a nonfinite value at t={t}")
        return value

    a, b = float(lo), float(hi)
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = checked(x1), checked(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = checked(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = checked(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


class _ColumnProgram:
    """Transport program with row sums p0 and a pinned mass on one column.

    The constraint matrix never changes with the pinned mass t, so the
    program is built once and re-solved with a swapped right-hand side.
    """

    def __init__(self, cost: CostMatrix, p0: ProbabilityVector, index: int):
        n = cost.shape[0]
        self.n = n
        self.index = index
        self.costs = cost.entries
        self.weights = p0.weights
        rows = [
            tuple((j * n + k, 1.0) for k in range(n)) for j in range(n)
        ]
        rows.append(tuple((j * n + index, 1.0) for j in range(n)))
        self.rhs_template = np.concatenate([p0.weights, [0.0]])
        self.base = LinearProgram(
            objective=cost.entries.reshape(-1).astype(float),
            rows=tuple(rows),
            rhs=self.rhs_template,
            variable_count=n * n,
        )
        self.base.compiled()  # prime the cache shared by the rhs clones
        if n > 1:
            masked = self.costs.copy()
            masked[:, index] = np.inf
            self.alt_cols = np.argmin(masked, axis=1)
            self.alt_costs = masked[np.arange(n), self.alt_cols]
            pull = self.costs[:, index] - self.alt_costs
            self.fill_order = np.argsort(pull, kind="stable")

    def _starting_basis(self, t: float) -> np.ndarray:
        """Basic columns of the greedy fill: one carrier per row plus the
        boundary entry that completes the square basis."""
        n = self.n
        order = self.fill_order
        carriers = order * n + self.alt_cols[order]
        basis = np.empty(n + 1, dtype=np.int64)
        remaining = t
        extra = None
        for pos, row in enumerate(order):
            w = float(self.weights[row])
            if remaining > _BOUNDARY_SLACK and remaining >= w - _BOUNDARY_SLACK:
                basis[pos] = row * n + self.index
                remaining -= w
            elif remaining > _BOUNDARY_SLACK:
                # the split row carries mass on both destinations
                basis[pos] = carriers[pos]
                extra = row * n + self.index
                remaining = 0.0
            else:
                basis[pos] = carriers[pos]
        if extra is None:
            # t landed on a fill boundary; complete with a zero-level entry
            to_index = basis[:n] % n == self.index
            if to_index.all():
                extra = carriers[0]
            else:
                first_off = int(np.flatnonzero(~to_index)[0])
                extra = order[first_off] * n + self.index
        basis[n] = extra
        return basis

    def solve(self, t: float, config: LpConfig | None):
        rhs = self.rhs_template.copy()
        rhs[-1] = t
        lp = self.base.with_rhs(rhs)
        initial = self._starting_basis(t) if self.n > 1 else None
        solution = solve_lp(lp, config, initial_basis=initial)
        if solution.status != STATUS_OPTIMAL:
            raise RuntimeError(
                f"pinned-column program ended with {solution.status} at t={t}"
            )
        return solution


def inner_cost(
    cost: CostMatrix,
    p0: ProbabilityVector,
    index: int,
    t: float,
    config: LpConfig | None = None,
) -> float:
    """Cheapest transport with row sums p0 and exactly mass t on one column.

    Convex piecewise-linear in t on [0, 1].
    """
    n = cost.shape[0]
    if cost.shape[1] != n:
        raise ValueError("cost matrix must be square for self-transport")
    if p0.size != n:
        raise ValueError("marginal size does not match the cost matrix")
    if not 0 <= index < n:
        raise ValueError("column index out of range")
    if not 0.0 <= t <= 1.0:
        raise ValueError("pinned mass must lie in [0, 1]")
    program = _ColumnProgram(cost, p0, index)
    return float(program.solve(t, config).objective_value)


def solve_linf(
    cost: CostMatrix,
    p0: ProbabilityVector,
    penalty: float,
    search_tol: float = 1e-5,
    config: LpConfig | None = None,
) -> LinfResult:
    """Minimize transport cost plus penalty over the largest column mass.

    One convex search per column; the lowest index wins ties. The lower
    search bound keeps the reciprocal term finite and provably contains the
    minimizer for penalties that are not vanishingly small next to the
    costs.
    """
    n, m = cost.shape
    if n != m:
        raise ValueError("cost matrix must be square for self-transport")
    if p0.size != n:
        raise ValueError("marginal size does not match the cost matrix")
    if penalty <= 0:
        raise ValueError("penalty must be positive")
    if search_tol <= 0:
        raise ValueError("search tolerance must be positive")

    if n == 1:
        plan = TransportPlan(p0.weights.reshape(1, 1).copy(), p0)
        value = float(cost.entries[0, 0] * p0.weights[0]) + penalty
        report = SolveReport(objective=value, iterations=0, status=STATUS_OPTIMAL)
        return LinfResult(
            plan=plan,
            best_index=0,
            best_mass=1.0,
            report=report,
            per_index_values=np.array([value]),
        )

    t_min = max(1e-6, float(p0.weights.max()) / 10.0)
    per_index = np.empty(n)
    best_masses = np.empty(n)
    evaluations = 0
    for index in range(n):
        program = _ColumnProgram(cost, p0, index)

        def objective(t, program=program):
            nonlocal evaluations
            evaluations += 1
            return program.solve(t, config).objective_value + penalty / t

        t_star, value = golden_section(objective, t_min, 1.0, search_tol)
        per_index[index] = value
        best_masses[index] = t_star

    best_index = int(np.argmin(per_index))
    best_mass = float(best_masses[best_index])
    witness = _ColumnProgram(cost, p0, best_index).solve(best_mass, config)
    entries = np.clip(witness.primal[: n * n].reshape(n, n), 0.0, None)
    report = SolveReport(
        objective=float(per_index[best_index]),
        iterations=evaluations,
        status=STATUS_OPTIMAL,
    )
    return LinfResult(
        plan=TransportPlan(entries, p0, tolerance=1e-8),
        best_index=best_index,
        best_mass=best_mass,
        report=report,
        per_index_values=per_index,
    )
