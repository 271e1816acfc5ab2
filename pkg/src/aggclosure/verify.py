"""Executable consistency checks for the closure construction.

Each check turns one structural fact about aggregated knapsack hulls
into an exact pass/fail test on a concrete instance: single-row
instances where the closure has a brute-force oracle, the sandwich
inclusions between the sampled closure and its two outer bodies, the
shift bound for covering instances, dominance over rounding cuts, and
the ratio between the per-row hull intersection and the sampled
closure.  Failures always carry a witness (a point, the aggregation
weights involved, and the violated inequality) that can be re-checked
by direct substitution.

Reports serialize to one tab-separated line per check plus a structured
mirror for tooling.  Timings are recorded only on request so report
bytes stay identical across runs.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction

from .closure import (
    SampleScheme,
    aggregation_closure,
    sample_lambdas,
    sampled_closure,
)
from .errors import ResourceBudgetError, UsageError
from .knapsack import (
    Aggregation,
    COVERING,
    DEFAULT_CELL_BUDGET,
    Instance,
    PACKING,
    build_relaxation,
    cg_cut,
    integer_hull,
)
from .polyhedra import (
    LinearInequality,
    Polyhedron,
    intersect,
    orthant,
    render_point,
)
from .rational import RatVector, as_vector, format_rat, vdot

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"

# feasibility probe boxes larger than this are not enumerated
PROBE_CELL_CAP = 50_000


@dataclass(frozen=True)
class CheckReport:
    check_name: str
    instance_id: str
    status: str
    witness_point: RatVector | None = None
    witness_lambda: Aggregation | None = None
    witness_inequality: LinearInequality | None = None
    timing_ms: int = 0
    note: str = ""

    def __post_init__(self):
        if self.status not in (PASS, FAIL, SKIPPED):
            raise UsageError(f"unknown status: {self.status!r}")
        if self.status == FAIL and self.witness_inequality is None:
            raise UsageError("fail reports must carry a witness")

    def witness_text(self) -> str:
        if self.witness_inequality is None and self.witness_point is None:
            return "-"
        parts = []
        if self.witness_point is not None:
            parts.append("point " + render_point(self.witness_point))
        if self.witness_lambda is not None:
            cols = "; ".join(
                " ".join(format_rat(w) for w in col)
                for col in self.witness_lambda.weights
            )
            parts.append("lambda " + cols)
        if self.witness_inequality is not None:
            parts.append("cut " + self.witness_inequality.render())
        return " | ".join(parts)

    def tsv_line(self) -> str:
        fields = [
            self.check_name,
            self.instance_id or "-",
            self.status,
            self.witness_text(),
            str(self.timing_ms),
        ]
        if self.note:
            fields.append(self.note)
        return "\t".join(fields)

    def record(self) -> dict:
        return {
            "check": self.check_name,
            "instance": self.instance_id,
            "status": self.status,
            "witness": {
                "point": None
                if self.witness_point is None
                else render_point(self.witness_point),
                "lambda": None
                if self.witness_lambda is None
                else [
                    [format_rat(w) for w in col]
                    for col in self.witness_lambda.weights
                ],
                "inequality": None
                if self.witness_inequality is None
                else self.witness_inequality.render(),
            },
            "timing_ms": self.timing_ms,
            "note": self.note,
        }


def _violated_row(poly: Polyhedron, point) -> LinearInequality | None:
    for ineq in poly.hrep:
        if not ineq.admits_point(point):
            return ineq
    return None


def _escape_witness(inner: Polyhedron, outer: Polyhedron):
    """A point of `inner` outside `outer`, with the violated inequality.

    Vertices are tried first; a vertex pushed along a recession ray with
    doubling step covers the case where only the recession cones differ.
    Returns None when the containment actually holds.
    """
    for v in inner.vrep_points:
        row = _violated_row(outer, v)
        if row is not None:
            return v, row
    base = inner.vrep_points[0] if inner.vrep_points else None
    if base is None:
        return None
    for ray in inner.vrep_rays:
        step = 1
        for _ in range(64):
            probe = tuple(c + step * r for c, r in zip(base, ray))
            row = _violated_row(outer, probe)
            if row is not None:
                return probe, row
            if all(ineq.admits_ray(ray) for ineq in outer.hrep):
                break
            step *= 2
    return None


def _feasible(inst: Instance, point) -> bool:
    for row, rhs in zip(inst.A, inst.b):
        lhs = vdot(as_vector(row), as_vector(point))
        if inst.sense == PACKING and lhs > rhs:
            return False
        if inst.sense == COVERING and lhs < rhs:
            return False
    return True


def _probe_box(inst: Instance, free_cap: int = 3):
    """Per-coordinate bounds inside which probing lattice feasibility
    is meaningful; columns no row constrains get a small fixed cap."""
    bounds = []
    for j in range(inst.n):
        best = None
        for i in range(inst.m):
            a = inst.A[i][j]
            if a == 0:
                continue
            if inst.sense == PACKING:
                r = inst.b[i] // a
                best = r if best is None or r < best else best
            else:
                r = -((-inst.b[i]) // a)
                best = r if best is None or r > best else best
        bounds.append(free_cap if best is None else best)
    return bounds


def _probe_points(inst: Instance):
    import itertools

    bounds = _probe_box(inst)
    cells = 1
    for c in bounds:
        cells *= c + 1
        if cells > PROBE_CELL_CAP:
            raise ResourceBudgetError("feasibility probe box too large")
    for p in itertools.product(*(range(c + 1) for c in bounds)):
        if _feasible(inst, p):
            yield p


def check_oracle_m1(
    inst: Instance,
    scheme: SampleScheme,
    budget: int = DEFAULT_CELL_BUDGET,
    threads: int = 1,
) -> CheckReport:
    """Single-row closure against the brute-force hull.

    With one row every aggregation is a positive scaling of it, so the
    closure must equal the integer hull of the row itself, as canonical
    inequality systems, exactly.
    """
    if inst.m != 1:
        raise UsageError("oracle check requires a single row")
    art = aggregation_closure(inst, scheme, budget=budget, threads=threads)
    unit = Aggregation(((Fraction(1),),), normalized=True)
    hull = integer_hull(build_relaxation(inst, unit), budget)
    if art.closure.hrep == hull.hrep and art.closure.feasible == hull.feasible:
        return CheckReport("oracle_m1", inst.instance_id, PASS)
    hit = _escape_witness(art.closure, hull) or _escape_witness(hull, art.closure)
    if hit is None:
        raise RuntimeError("representations differ but no escape point found")
    point, row = hit
    return CheckReport(
        "oracle_m1",
        inst.instance_id,
        FAIL,
        witness_point=point,
        witness_lambda=unit,
        witness_inequality=row,
    )


def check_sandwich(
    inst: Instance,
    scheme: SampleScheme,
    budget: int = DEFAULT_CELL_BUDGET,
    threads: int = 1,
) -> CheckReport:
    """Sampled closure against its two outer bodies.

    The sampled closure must sit inside the tuple body and inside the
    recursion bound, and every feasible lattice point in the probe box
    must satisfy both.  Whether the outer intersection collapses onto
    the sampled closure is reported as a note, not asserted: sampling
    guarantees it only for special classes.
    """
    art = aggregation_closure(inst, scheme, budget=budget, threads=threads)
    sc = sampled_closure(inst, scheme, budget=budget, threads=threads)
    name = "sandwich"

    hit = _escape_witness(sc, art.K)
    if hit is not None:
        return CheckReport(
            name, inst.instance_id, FAIL,
            witness_point=hit[0], witness_inequality=hit[1],
            note="sampled closure escapes the tuple body",
        )
    hit = _escape_witness(sc, art.L)
    if hit is not None:
        return CheckReport(
            name, inst.instance_id, FAIL,
            witness_point=hit[0], witness_inequality=hit[1],
            note="sampled closure escapes the recursion bound",
        )
    for p in _probe_points(inst):
        for body in (art.K, art.L):
            row = _violated_row(body, p)
            if row is not None:
                return CheckReport(
                    name, inst.instance_id, FAIL,
                    witness_point=as_vector(p), witness_inequality=row,
                    note="feasible lattice point cut off",
                )
    outer = intersect([art.K, art.L, orthant(inst.n)])
    saturated = outer.hrep == sc.hrep and outer.feasible == sc.feasible
    return CheckReport(
        name, inst.instance_id, PASS,
        note=f"saturation={'true' if saturated else 'false'}",
    )


def check_gamma(
    inst: Instance,
    scheme: SampleScheme,
    budget: int = DEFAULT_CELL_BUDGET,
    threads: int = 1,
    gamma_override: int | None = None,
) -> CheckReport:
    """Shift bound for covering instances.

    Adding the bound to any single coordinate of any vertex of the
    recursion bound must land inside every sampled hull.  An override
    value turns the check into a diagnostic probe of smaller shifts.
    """
    if inst.sense != COVERING:
        raise UsageError("shift bound check requires a covering instance")
    art = aggregation_closure(inst, scheme, budget=budget, threads=threads)
    if art.gamma is None:
        return CheckReport(
            "gamma", inst.instance_id, SKIPPED,
            note="free coordinate splits off; shift bound undefined",
        )
    gamma = art.gamma if gamma_override is None else gamma_override
    aggs = sample_lambdas(inst.m, scheme)
    hulls = [integer_hull(build_relaxation(inst, a), budget) for a in aggs]
    for v in art.L.vrep_points:
        for j in range(inst.n):
            shifted = tuple(
                c + (gamma if i == j else 0) for i, c in enumerate(v)
            )
            for agg, hull in zip(aggs, hulls):
                row = _violated_row(hull, shifted)
                if row is not None:
                    return CheckReport(
                        "gamma", inst.instance_id, FAIL,
                        witness_point=shifted,
                        witness_lambda=agg,
                        witness_inequality=row,
                        note=f"shift {gamma} leaves a sampled hull",
                    )
    return CheckReport("gamma", inst.instance_id, PASS, note=f"gamma={gamma}")


def check_cg_dominance(
    inst: Instance,
    scheme: SampleScheme,
    budget: int = DEFAULT_CELL_BUDGET,
    threads: int = 1,
) -> CheckReport:
    """Rounding cuts of sampled weights are valid for the sampled hulls,
    i.e. aggregation cuts are at least as strong."""
    if inst.sense != PACKING:
        raise UsageError("rounding dominance check requires a packing instance")
    single = SampleScheme(
        grid_denominator=scheme.grid_denominator,
        k=1,
        refinement_rounds=scheme.refinement_rounds,
    )
    for agg in sample_lambdas(inst.m, single):
        rel = build_relaxation(inst, agg)
        cut = cg_cut(rel)
        if cut is None:
            continue
        hull = integer_hull(rel, budget)
        for p in hull.vrep_points:
            if not cut.admits_point(p):
                return CheckReport(
                    "cg_dominance", inst.instance_id, FAIL,
                    witness_point=p, witness_lambda=agg, witness_inequality=cut,
                )
        for r in hull.vrep_rays:
            if not cut.admits_ray(r):
                probe = tuple(
                    a + b for a, b in zip(hull.vrep_points[0], r)
                )
                return CheckReport(
                    "cg_dominance", inst.instance_id, FAIL,
                    witness_point=probe, witness_lambda=agg, witness_inequality=cut,
                )
    return CheckReport("cg_dominance", inst.instance_id, PASS)


def _optimum(poly: Polyhedron, objective: RatVector, maximize: bool):
    """Exact optimum over a polyhedron by vertex evaluation.

    Returns None for an unbounded direction, raises on an empty body.
    """
    if not poly.feasible or not poly.vrep_points:
        raise UsageError("cannot optimize over an empty set")
    for r in poly.vrep_rays:
        drift = vdot(objective, as_vector(r))
        if (maximize and drift > 0) or (not maximize and drift < 0):
            return None
    values = [vdot(objective, as_vector(p)) for p in poly.vrep_points]
    return max(values) if maximize else min(values)


def check_onerow_ratio(
    inst: Instance,
    scheme: SampleScheme,
    objective=None,
    budget: int = DEFAULT_CELL_BUDGET,
    threads: int = 1,
) -> CheckReport:
    """Ratio between per-row hull intersection and sampled closure optima.

    Informational: the ratio is reported in the note; packing ratios
    above 2 are flagged for review but do not fail the check.
    """
    if objective is None:
        objective = tuple(Fraction(1) for _ in range(inst.n))
    c = as_vector(objective)
    if len(c) != inst.n:
        raise UsageError("objective dimension does not match the instance")
    if any(w < 0 for w in c):
        raise UsageError("objective must be nonnegative")

    unit_hulls = []
    for i in range(inst.m):
        col = tuple(Fraction(1 if t == i else 0) for t in range(inst.m))
        unit_hulls.append(
            integer_hull(build_relaxation(inst, Aggregation((col,))), budget)
        )
    rowwise = intersect(unit_hulls)
    sc = sampled_closure(inst, scheme, budget=budget, threads=threads)

    maximize = inst.sense == PACKING
    opt_rows = _optimum(rowwise, c, maximize)
    opt_closure = _optimum(sc, c, maximize)
    if opt_rows is None or opt_closure is None:
        return CheckReport(
            "onerow_ratio", inst.instance_id, SKIPPED,
            note="objective unbounded over the compared sets",
        )
    if maximize:
        ratio = None if opt_closure == 0 else opt_rows / opt_closure
    else:
        ratio = None if opt_rows == 0 else opt_closure / opt_rows
    if ratio is None:
        note = "ratio=1 (degenerate zero optimum)" if opt_rows == opt_closure else "ratio=inf"
    else:
        note = f"ratio={format_rat(ratio)}"
        if inst.sense == PACKING and ratio > 2:
            note += " anomaly: above the expected factor 2"
    return CheckReport("onerow_ratio", inst.instance_id, PASS, note=note)


def _applicable_checks(inst: Instance):
    checks = []
    if inst.m == 1:
        checks.append(check_oracle_m1)
    checks.append(check_sandwich)
    if inst.sense == COVERING:
        checks.append(check_gamma)
    if inst.sense == PACKING:
        checks.append(check_cg_dominance)
    checks.append(check_onerow_ratio)
    return checks


def run_suite(
    instances,
    scheme: SampleScheme,
    budget: int = DEFAULT_CELL_BUDGET,
    threads: int = 1,
    timings: bool = False,
) -> list[CheckReport]:
    """All applicable checks over all instances, deterministic order.

    A check that raises reports as skipped with the reason; timings are
    zero unless requested so that output is byte-stable.
    """
    reports = []
    for inst in instances:
        for check in _applicable_checks(inst):
            started = time.perf_counter()
            try:
                rep = check(inst, scheme, budget=budget, threads=threads)
            except (UsageError, ResourceBudgetError) as exc:
                rep = CheckReport(
                    check.__name__.removeprefix("check_"),
                    inst.instance_id,
                    SKIPPED,
                    note=str(exc),
                )
            if timings:
                elapsed = int((time.perf_counter() - started) * 1000)
                rep = CheckReport(
                    rep.check_name,
                    rep.instance_id,
                    rep.status,
                    rep.witness_point,
                    rep.witness_lambda,
                    rep.witness_inequality,
                    elapsed,
                    rep.note,
                )
            reports.append(rep)
    return reports


def suite_lines(reports) -> list[str]:
    return [rep.tsv_line() for rep in reports]


def suite_json(reports) -> str:
    return json.dumps([rep.record() for rep in reports], indent=2)


def failures(reports) -> int:
    return sum(1 for rep in reports if rep.status == FAIL)
