"""Aggregated knapsack relaxations and their exact integer hulls.

A packing instance is ``Ax <= b, x >= 0`` and a covering instance is
``Ax >= b, x >= 0`` with A nonnegative integer and b positive integer.
Aggregating rows with nonnegative weights gives a knapsack relaxation whose
integer hull is computed exactly: packing feasible sets are finite over the
bounded coordinates (zero columns become rays), covering feasible sets are
up-closed so the hull is the convex hull of the domination-minimal points
plus the nonnegative orthant cone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

from .errors import (
    EmptyRelaxationError,
    ResourceBudgetError,
    TrivialAggregationError,
    UsageError,
)
from .polyhedra import (
    GE,
    LE,
    Polyhedron,
    empty_polyhedron,
    hrep_to_vrep,
    make_inequality,
    vrep_to_hrep,
)
from .rational import RatMatrix, RatVector, as_vector, int_clear, reduce_gcd, vdot

PACKING = "packing"
COVERING = "covering"

DEFAULT_CELL_BUDGET = 10**7


@dataclass(frozen=True)
class Aggregation:
    """Nonnegative aggregation weights: one column per aggregated row."""

    weights: tuple  # k columns, each a vector of length m
    normalized: bool = False

    @property
    def k(self) -> int:
        return len(self.weights)


def as_aggregation(weights, m: int) -> Aggregation:
    """Normalize a weight vector, a sequence of them, or an Aggregation."""
    if isinstance(weights, Aggregation):
        cols = [as_vector(c) for c in weights.weights]
        flag = weights.normalized
    else:
        seq = list(weights)
        if not seq:
            raise UsageError("empty aggregation")
        raw = seq if isinstance(seq[0], (list, tuple)) else [seq]
        cols = [as_vector(c) for c in raw]
        flag = False
    if not cols:
        raise UsageError("empty aggregation")
    for col in cols:
        if len(col) != m:
            raise UsageError("aggregation length does not match row count")
        if any(w < 0 for w in col):
            raise UsageError("aggregation weights must be nonnegative")
    return Aggregation(tuple(cols), flag)


def normalize_aggregation(agg: Aggregation) -> Aggregation:
    """Scale every column to sum 1 (hulls are invariant under the scaling)."""
    cols = []
    for col in agg.weights:
        total = sum(col)
        if total == 0:
            raise TrivialAggregationError("trivial aggregation")
        cols.append(tuple(w / total for w in col))
    return Aggregation(tuple(cols), True)


@dataclass(frozen=True)
class Instance:
    """One packing or covering integer program.

    Zero rows are stripped for packing (0 <= b_i is vacuous) and rejected
    for covering (0 >= b_i > 0 empties the feasible region).
    """

    sense: str
    A: tuple
    b: tuple
    instance_id: str = ""

    def __post_init__(self) -> None:
        if self.sense not in (PACKING, COVERING):
            raise UsageError(f"unknown sense {self.sense!r}")
        mat = tuple(tuple(row) for row in self.A)
        rhs = tuple(self.b)
        if not mat:
            raise UsageError("instance needs at least one row")
        if len(rhs) != len(mat):
            raise UsageError("rhs length does not match row count")
        width = len(mat[0])
        if width == 0:
            raise UsageError("instance needs at least one variable")
        for row in mat:
            if len(row) != width:
                raise UsageError("matrix rows have unequal length")
            for v in row:
                if v != int(v) or v < 0:
                    raise UsageError("matrix entries must be nonnegative integers")
        for v in rhs:
            if v != int(v) or v < 1:
                raise UsageError("rhs must be positive")
        mat = tuple(tuple(int(v) for v in row) for row in mat)
        rhs = tuple(int(v) for v in rhs)
        kept_rows = []
        kept_rhs = []
        for row, bi in zip(mat, rhs):
            if not any(row):
                if self.sense == COVERING:
                    raise UsageError("zero row infeasible for covering")
                continue
            kept_rows.append(row)
            kept_rhs.append(bi)
        if not kept_rows:
            raise UsageError("trivial instance: every row is zero")
        object.__setattr__(self, "A", tuple(kept_rows))
        object.__setattr__(self, "b", tuple(kept_rhs))

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.A[0])

    def key(self):
        return (self.sense, self.A, self.b)


@dataclass(frozen=True)
class KnapsackRelaxation:
    """k aggregated knapsack rows over the nonnegative orthant."""

    parent: Instance | None
    weights: Aggregation
    sense: str
    n: int
    aggregated_rows: RatMatrix
    aggregated_rhs: RatVector

    @property
    def k(self) -> int:
        return len(self.aggregated_rows)

    def canonical_key(self):
        # scale-free row set: hulls agree exactly on equal keys
        rows = set()
        for row, r in zip(self.aggregated_rows, self.aggregated_rhs):
            ints, _ = int_clear(tuple(row) + (r,))
            rows.add(reduce_gcd(ints))
        return (self.sense, self.n, tuple(sorted(rows)))


def build_relaxation(inst: Instance, weights) -> KnapsackRelaxation:
    agg = as_aggregation(weights, inst.m)
    kept = tuple(col for col in agg.weights if any(col))
    if not kept:
        raise TrivialAggregationError("trivial aggregation")
    rows = []
    rhs = []
    for lam in kept:
        rows.append(
            tuple(sum((w * inst.A[i][j] for i, w in enumerate(lam)), Fraction(0)) for j in range(inst.n))
        )
        rhs.append(vdot(lam, as_vector(inst.b)))
    return KnapsackRelaxation(
        parent=inst,
        weights=Aggregation(kept, agg.normalized),
        sense=inst.sense,
        n=inst.n,
        aggregated_rows=tuple(rows),
        aggregated_rhs=tuple(rhs),
    )


def _check_budget(bounds, budget) -> None:
    cells = 1
    for b in bounds:
        cells *= b + 1
        if cells > budget:
            raise ResourceBudgetError(
                f"enumeration box of {cells}+ cells exceeds budget {budget}"
            )


def _packing_bounds(rel: KnapsackRelaxation):
    free = set()
    bounds = []
    for j in range(rel.n):
        limit = None
        for row, r in zip(rel.aggregated_rows, rel.aggregated_rhs):
            if row[j] > 0:
                q = floor(r / row[j])
                limit = q if limit is None else min(limit, q)
        if limit is None:
            free.add(j)
            bounds.append(0)
        else:
            bounds.append(limit)
    return bounds, free


def _packing_points(rel: KnapsackRelaxation, bounds, free) -> list:
    # vacuous zero rows are fine for packing unless the rhs is negative
    for row, r in zip(rel.aggregated_rows, rel.aggregated_rhs):
        if not any(row) and r < 0:
            return []
    if any(b < 0 for b in bounds):
        return []
    n = rel.n
    cols = [[row[j] for row in rel.aggregated_rows] for j in range(n)]
    out: list = []
    x = [0] * n

    def descend(j: int, residual) -> None:
        if j == n:
            out.append(tuple(x))
            return
        limit = bounds[j]
        if j not in free:
            for t, c in enumerate(cols[j]):
                if c > 0:
                    limit = min(limit, floor(residual[t] / c))
        for v in range(limit + 1):
            x[j] = v
            if v:
                descend(j + 1, tuple(rt - v * ct for rt, ct in zip(residual, cols[j])))
            else:
                descend(j + 1, residual)
        x[j] = 0

    descend(0, tuple(rel.aggregated_rhs))
    return out


def _covering_minimal(rel: KnapsackRelaxation, bounds) -> list:
    n = rel.n
    rows = rel.aggregated_rows
    rhs = rel.aggregated_rhs

    def feasible(p) -> bool:
        return all(
            sum(c * v for c, v in zip(row, p)) >= r for row, r in zip(rows, rhs)
        )

    cells: list = [()]
    for j in range(n):
        cells = [p + (v,) for p in cells for v in range(bounds[j] + 1)]
    fset = {p for p in cells if feasible(p)}
    out = []
    for p in sorted(fset):
        lowered = (
            tuple(v - int(i == j) for i, v in enumerate(p))
            for j in range(n)
            if p[j] > 0
        )
        if all(q not in fset for q in lowered):
            out.append(p)
    return out


def lattice_points(rel: KnapsackRelaxation, budget: int = DEFAULT_CELL_BUDGET):
    """Feasible integer points of the relaxation.

    Packing returns every feasible point over the bounded coordinates (zero
    columns are reported as free and carry coordinate 0 in the points).
    Covering returns only the domination-minimal feasible points; together
    with the orthant cone they generate the full up-closed hull.
    """
    if rel.sense == COVERING:
        bounds = []
        for row, r in zip(rel.aggregated_rows, rel.aggregated_rhs):
            if not any(row) and r > 0:
                raise EmptyRelaxationError("empty relaxation")
        for j in range(rel.n):
            c = 0
            for row, r in zip(rel.aggregated_rows, rel.aggregated_rhs):
                if row[j] > 0 and r > 0:
                    c = max(c, ceil(r / row[j]))
            bounds.append(c)
        _check_budget(bounds, budget)
        return _covering_minimal(rel, bounds), set()
    bounds, free = _packing_bounds(rel)
    if all(b >= 0 for b in bounds):
        _check_budget(bounds, budget)
    points = _packing_points(rel, bounds, free)
    return points, free


_HULL_MEMO: dict = {}


def _unit(n: int, j: int):
    return tuple(int(i == j) for i in range(n))


# distinct aggregated rows collapse to very few distinct intervals, so the
# canonical-key memo alone has a poor hit rate here
_INTERVAL_MEMO: dict = {}


def _interval_hull(sense: str, c: int, bounded: bool) -> Polyhedron:
    key = (sense, c, bounded)
    hull = _INTERVAL_MEMO.get(key)
    if hull is None:
        if not bounded:
            hull = vrep_to_hrep([(Fraction(c),)], [(1,)], reduce_generators=False)
        else:
            points = [(Fraction(0),)] if c == 0 else [(Fraction(0),), (Fraction(c),)]
            hull = vrep_to_hrep(points, [], reduce_generators=False)
        _INTERVAL_MEMO[key] = hull
    return hull


def _hull_1d(rel: KnapsackRelaxation) -> Polyhedron:
    row_data = list(zip(rel.aggregated_rows, rel.aggregated_rhs))
    if rel.sense == COVERING:
        for row, r in row_data:
            if not any(row) and r > 0:
                raise EmptyRelaxationError("empty relaxation")
        c = 0
        for row, r in row_data:
            if row[0] > 0 and r > 0:
                c = max(c, ceil(r / row[0]))
        return _interval_hull(COVERING, c, bounded=False)
    for row, r in row_data:
        if not any(row) and r < 0:
            return empty_polyhedron(1)
    limits = [floor(r / row[0]) for row, r in row_data if row[0] > 0]
    if not limits:
        return _interval_hull(PACKING, 0, bounded=False)
    c = min(limits)
    if c < 0:
        return empty_polyhedron(1)
    return _interval_hull(PACKING, c, bounded=True)


def _packing_core(points, bounds, free) -> list:
    # keep p only when no unit increment inside its support stays feasible;
    # every hull vertex survives (a feasible increment plus down-closure
    # writes p as a midpoint) and survivors shrink the reduction workload
    fset = set(points)
    out = []
    for p in points:
        dominated = False
        for j, v in enumerate(p):
            if v > 0:
                q = tuple(v + int(i == j) for i, v in enumerate(p))
                if q in fset:
                    dominated = True
                    break
        if not dominated:
            out.append(p)
    return out


def integer_hull(rel: KnapsackRelaxation, budget: int = DEFAULT_CELL_BUDGET) -> Polyhedron:
    """Exact integer hull of the relaxation as a canonical polyhedron."""
    key = rel.canonical_key()
    cached = _HULL_MEMO.get(key)
    if cached is not None:
        return cached
    if rel.n == 1:
        hull = _hull_1d(rel)
    else:
        points, free = lattice_points(rel, budget)
        if not points:
            hull = empty_polyhedron(rel.n)
        elif rel.sense == COVERING:
            rays = [_unit(rel.n, j) for j in range(rel.n)]
            hull = vrep_to_hrep(points, rays)
        else:
            bounds, _ = _packing_bounds(rel)
            core = _packing_core(points, bounds, free)
            rays = [_unit(rel.n, j) for j in sorted(free)]
            hull = vrep_to_hrep(core, rays)
    _HULL_MEMO[key] = hull
    return hull


def integer_hull_multi(rel: KnapsackRelaxation, budget: int = DEFAULT_CELL_BUDGET) -> Polyhedron:
    """Integer hull of a k-row aggregated system (k >= 2)."""
    if rel.k < 2:
        raise UsageError("multi-row hull needs at least two aggregated rows")
    return integer_hull(rel, budget)


def relaxation_polyhedron(rel: KnapsackRelaxation) -> Polyhedron:
    """The fractional relaxation {x >= 0, aggregated rows} as a polyhedron."""
    sense = LE if rel.sense == PACKING else GE
    ineqs = [make_inequality(_unit(rel.n, j), 0, GE) for j in range(rel.n)]
    for row, r in zip(rel.aggregated_rows, rel.aggregated_rhs):
        if any(row):
            ineqs.append(make_inequality(row, r, sense))
        elif (rel.sense == PACKING and r < 0) or (rel.sense == COVERING and r > 0):
            return empty_polyhedron(rel.n, ineqs)
    return hrep_to_vrep(ineqs, rel.n)


def cg_cut(rel: KnapsackRelaxation):
    """Chvatal-Gomory rounding of a single aggregated row; None if it
    degenerates to the zero normal."""
    if rel.k != 1:
        raise UsageError("CG cut needs a single aggregated row")
    row = rel.aggregated_rows[0]
    r = rel.aggregated_rhs[0]
    if rel.sense == PACKING:
        coeffs = [floor(a) for a in row]
        bound, sense = floor(r), LE
    else:
        coeffs = [ceil(a) for a in row]
        bound, sense = ceil(r), GE
    if not any(coeffs):
        return None
    return make_inequality(coeffs, bound, sense)
