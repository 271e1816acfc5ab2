"""Aggregation closure of packing and covering knapsack systems.

The closure of an instance is the intersection, over every nonnegative
aggregation of its rows, of the integer hull of the resulting single-row
(or k-row) relaxation.  That intersection ranges over a continuum, so it
is approximated from outside by sampling aggregations on a rational grid
(`sampled_closure`) and computed exactly, grid permitting, as the
intersection of two finitely generated outer bodies:

* ``L``: for each coordinate j, the closure of the sub-instance obtained
  by relaxing coordinate j (drop the column for packing; keep only the
  rows that do not use the column for covering), embedded back with the
  coordinate left free.  Computed recursively on fewer variables.
* ``K``: the intersection of the inequalities spanned by the sampled
  facet tuples ``S`` (tight lattice-point tuples of sampled hulls that
  survive a domination filter).

Their intersection with the nonnegative orthant reproduces the closure
whenever the sample grid is fine enough to expose every needed facet;
for a single-row instance any grid does, which is what the verification
checks lean on.

All geometry is exact rational arithmetic; nothing here uses floats.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction

from .errors import UsageError
from .knapsack import (
    Aggregation,
    COVERING,
    DEFAULT_CELL_BUDGET,
    Instance,
    PACKING,
    build_relaxation,
    integer_hull,
    normalize_aggregation,
)
from .polyhedra import (
    GE,
    LE,
    LinearInequality,
    Polyhedron,
    contains,
    embed_with_free_axis,
    facet_lattice_tuple,
    hrep_to_vrep,
    intersect,
    make_inequality,
    orthant,
    positive_normal_facets,
    vrep_to_hrep,
    whole_space,
)
from .rational import Rat, RatVector, as_vector, solve_linear

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SampleScheme:
    """Grid of aggregation weights used to approximate the closure.

    ``grid_denominator`` D samples every weight vector v/D with v a
    nonnegative integer composition of D, so all sampled weights sum
    to one.  Unit vectors are the extreme compositions and therefore
    present for every D (``include_units`` records that guarantee).
    ``k`` picks how many aggregated rows are formed at once, and
    ``refinement_rounds`` bounds the local grid refinement performed
    by the separation routine.
    """

    grid_denominator: int = 4
    include_units: bool = True
    k: int = 1
    refinement_rounds: int = 1

    def __post_init__(self):
        if not isinstance(self.grid_denominator, int) or self.grid_denominator < 1:
            raise UsageError("grid denominator must be a positive integer")
        if not isinstance(self.k, int) or self.k < 1:
            raise UsageError("aggregation count k must be a positive integer")
        if not isinstance(self.refinement_rounds, int) or self.refinement_rounds < 0:
            raise UsageError("refinement rounds must be a nonnegative integer")

    def key(self):
        return (self.grid_denominator, self.k, self.refinement_rounds)


@dataclass(frozen=True)
class FacetTuple:
    """n affinely independent lattice points tight at a sampled facet.

    The points are stored in increasing lexicographic order.  The source
    fields record which sampled aggregation and which facet (in lowest
    integer terms) produced the tuple; they are None for tuples built
    directly from points.
    """

    points: tuple
    source_lambda: Aggregation | None = None
    source_facet: LinearInequality | None = None


@dataclass(frozen=True)
class ClosureArtifacts:
    """Everything the closure construction produces for one instance."""

    instance: Instance
    sample: SampleScheme
    L: Polyhedron
    K: Polyhedron
    closure: Polyhedron
    gamma: int | None
    T_sample: tuple
    S: tuple


@dataclass(frozen=True)
class SeparationResult:
    """Outcome of separating a point from the sampled closure."""

    inside: bool
    cut: LinearInequality | None = None
    violation: Rat | None = None
    witness: Aggregation | None = None


# closure artifacts keyed by (instance key, scheme key); sub-instances of
# different parents share entries, which is what makes the recursion cheap
_CLOSURE_MEMO: dict = {}


def _compositions(total: int, parts: int):
    # nonnegative integer vectors with the given sum, lexicographic order
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def sample_lambdas(m: int, scheme: SampleScheme) -> list[Aggregation]:
    """All grid aggregations for m rows, deduplicated and sorted.

    Columns are normalized to sum one before deduplication, so two
    compositions that differ only by scale collapse.  For k >= 2 the
    k-tuples of columns are deduplicated up to column order.
    """
    if m < 1:
        raise UsageError("need at least one row to aggregate")
    d = scheme.grid_denominator
    columns = sorted(
        {
            tuple(Fraction(v, d) for v in comp)
            for comp in _compositions(d, m)
            if any(comp)
        }
    )
    if scheme.k == 1:
        return [Aggregation((col,), normalized=True) for col in columns]
    return [
        Aggregation(cols, normalized=True)
        for cols in itertools.combinations_with_replacement(columns, scheme.k)
    ]


def _hulls(inst, aggs, budget, threads):
    rels = [build_relaxation(inst, agg) for agg in aggs]
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda rel: integer_hull(rel, budget), rels))
    return [integer_hull(rel, budget) for rel in rels]


def sampled_closure(
    inst: Instance,
    scheme: SampleScheme,
    budget: int = DEFAULT_CELL_BUDGET,
    threads: int = 1,
) -> Polyhedron:
    """Intersection of the integer hulls of all sampled aggregations.

    Outer approximation of the closure; exact for m = 1 at any grid and
    for one variable at any grid that includes the units (all do).
    """
    aggs = sample_lambdas(inst.m, scheme)
    return intersect(_hulls(inst, aggs, budget, threads))


def closure_1d(inst: Instance) -> Polyhedron:
    """Closed form in one variable.

    Every aggregated rhs/coefficient ratio is a weighted mediant of the
    row ratios, so the extreme rounding is attained at a unit weight:
    packing keeps 0 <= x <= min_i floor(b_i / a_i), covering keeps
    x >= max_i ceil(b_i / a_i).
    """
    if inst.n != 1:
        raise UsageError("closed form only applies to one variable")
    ratios = [(inst.b[i], inst.A[i][0]) for i in range(inst.m)]
    if inst.sense == PACKING:
        c = min(b // a for b, a in ratios)
        points = [(Fraction(0),)]
        if c > 0:
            points.append((Fraction(c),))
        return vrep_to_hrep(points, (), reduce_generators=False)
    c = max(-((-b) // a) for b, a in ratios)
    return vrep_to_hrep([(Fraction(c),)], [(Fraction(1),)], reduce_generators=False)


def build_Qj(inst: Instance, j: int) -> Instance | None:
    """Sub-instance with coordinate j (1-based) relaxed to be free.

    Packing drops column j and keeps every row; covering keeps only the
    rows with a zero in column j, then drops the column.  Returns None
    when nothing constrains the remaining variables, i.e. the relaxed
    set is the whole nonnegative orthant.
    """
    if not 1 <= j <= inst.n:
        raise UsageError("column index out of range")
    if inst.n < 2:
        raise UsageError("dropping the only column leaves no variables")
    axis = j - 1
    if inst.sense == PACKING:
        kept = []
        for row, rhs in zip(inst.A, inst.b):
            short = row[:axis] + row[axis + 1 :]
            if any(short):
                kept.append((short, rhs))
        if not kept:
            return None
        return Instance(
            PACKING,
            tuple(r for r, _ in kept),
            tuple(r for _, r in kept),
        )
    keep = [i for i in range(inst.m) if inst.A[i][axis] == 0]
    if not keep:
        return None
    rows = tuple(inst.A[i][:axis] + inst.A[i][axis + 1 :] for i in keep)
    return Instance(COVERING, rows, tuple(inst.b[i] for i in keep))


def build_L(
    inst: Instance,
    scheme: SampleScheme,
    budget: int = DEFAULT_CELL_BUDGET,
    threads: int = 1,
) -> Polyhedron:
    """Intersection over j of the closure of the j-relaxed sub-instance,
    each embedded with coordinate j free."""
    if inst.n < 2:
        raise UsageError("the recursive bound needs at least two variables")
    parts = []
    for j in range(1, inst.n + 1):
        sub = build_Qj(inst, j)
        if sub is None:
            parts.append(orthant(inst.n))
            continue
        art = aggregation_closure(sub, scheme, budget=budget, threads=threads)
        parts.append(embed_with_free_axis(art.closure, j - 1))
    return intersect(parts)


def compute_gamma(inst: Instance) -> int:
    """Ceiling of the worst rhs/coefficient ratio over all nonzero entries.

    For covering instances, adding gamma to any coordinate of a point of
    L lands inside every aggregated hull; columns that appear in no row
    are excluded from the maximum.
    """
    if inst.sense != COVERING:
        raise UsageError("the shift bound is defined for covering instances")
    worst = None
    for j in range(inst.n):
        for i in range(inst.m):
            if inst.A[i][j] > 0:
                ratio = Fraction(inst.b[i], inst.A[i][j])
                if worst is None or ratio > worst:
                    worst = ratio
    if worst is None:
        raise UsageError("every column is zero")
    return -((-worst.numerator) // worst.denominator)


def enumerate_tuples(
    inst: Instance,
    scheme: SampleScheme,
    budget: int = DEFAULT_CELL_BUDGET,
    threads: int = 1,
) -> list[FacetTuple]:
    """Tight lattice tuples of every positive-normal facet of every
    sampled hull, deduplicated by point tuple and sorted.

    Hulls that are not full-dimensional have no facets with strictly
    positive normals and contribute nothing.  A packing facet with a
    nonpositive offset cannot be rescaled to offset one; such facets do
    not arise for full-dimensional packing hulls (the origin is interior
    to the orthant face they would have to cut), but the guard keeps the
    construction honest and logs if it ever fires.
    """
    aggs = sample_lambdas(inst.m, scheme)
    hulls = _hulls(inst, aggs, budget, threads)
    found: dict = {}
    for agg, hull in zip(aggs, hulls):
        if not hull.feasible or hull.affine_dim < hull.dim:
            continue
        for facet in positive_normal_facets(hull):
            if inst.sense == PACKING and facet.rhs <= 0:
                log.info(
                    "skipping facet %s: nonpositive offset cannot scale to one",
                    facet.render(),
                )
                continue
            pts = facet_lattice_tuple(hull, facet)
            if pts not in found:
                found[pts] = FacetTuple(
                    points=pts, source_lambda=agg, source_facet=facet
                )
    return [found[key] for key in sorted(found)]


def _flat_key(t: FacetTuple):
    return tuple(itertools.chain.from_iterable(sorted(t.points)))


def _dominates(a, b) -> bool:
    # componentwise a <= b with a != b
    return a != b and all(x <= y for x, y in zip(a, b))


def filter_minimal_tuples(tuples, sense: str) -> list[FacetTuple]:
    """Domination antichain of a tuple family.

    Tuples are compared componentwise on the concatenation of their
    points in within-tuple lexicographic order.  Packing keeps the
    minimal tuples, covering keeps the tuples no other tuple strictly
    dominates from above.  Duplicates collapse to their first instance.
    """
    if sense not in (PACKING, COVERING):
        raise UsageError(f"unknown sense: {sense!r}")
    first: dict = {}
    for t in tuples:
        key = _flat_key(t)
        if key not in first:
            first[key] = t
    # a strict dominator has strictly smaller (packing) or larger
    # (covering) coordinate sum, so one sweep against kept tuples is
    # enough: domination is transitive through dropped tuples
    reverse = sense == COVERING
    ordered = sorted(first.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=reverse)
    kept_keys: list = []
    kept: list[FacetTuple] = []
    for key, t in ordered:
        if reverse:
            beaten = any(_dominates(key, other) for other in kept_keys)
        else:
            beaten = any(_dominates(other, key) for other in kept_keys)
        if not beaten:
            kept_keys.append(key)
            kept.append(t)
    return sorted(kept, key=_flat_key)


def tuple_to_inequality(t, sense: str) -> LinearInequality:
    """Inequality of the hyperplane through a tuple's points at offset one.

    The points are affinely independent and their hyperplane misses the
    origin, so they are linearly independent and the normal is the
    unique solution of the n-by-n system <a, p_i> = 1.
    """
    pts = t.points if isinstance(t, FacetTuple) else tuple(as_vector(p) for p in t)
    ones = tuple(Fraction(1) for _ in pts)
    normal = solve_linear(pts, ones)
    if normal is None:
        raise RuntimeError("tuple points do not determine a hyperplane")
    return make_inequality(normal, 1, LE if sense == PACKING else GE)


def build_K(tuples, sense: str, dim: int) -> Polyhedron:
    """Intersection of the tuple inequalities; whole space when empty."""
    ineqs = [tuple_to_inequality(t, sense) for t in tuples]
    return hrep_to_vrep(ineqs, dim)


def aggregation_closure(
    inst: Instance,
    scheme: SampleScheme,
    budget: int = DEFAULT_CELL_BUDGET,
    threads: int = 1,
) -> ClosureArtifacts:
    """Closure of an instance under all sampled aggregations.

    One variable uses the closed form directly.  A covering instance
    with a column no row uses splits off that coordinate as a free
    factor and recurses on the rest.  Otherwise the closure is the
    intersection of the recursive bound L, the tuple body K, and the
    nonnegative orthant.  The shift bound gamma is attached for
    covering instances; results are memoized per (instance, scheme).
    """
    memo_key = (inst.key(), scheme.key())
    cached = _CLOSURE_MEMO.get(memo_key)
    if cached is not None:
        return cached

    n = inst.n
    if n == 1:
        body = closure_1d(inst)
        art = ClosureArtifacts(
            instance=inst,
            sample=scheme,
            L=body,
            K=whole_space(1),
            closure=body,
            gamma=compute_gamma(inst) if inst.sense == COVERING else None,
            T_sample=(),
            S=(),
        )
        _CLOSURE_MEMO[memo_key] = art
        return art

    if inst.sense == COVERING:
        zero_cols = [j for j in range(n) if all(row[j] == 0 for row in inst.A)]
        if zero_cols:
            # the free coordinate factors out of every aggregated hull,
            # so the closure is a cylinder over the reduced closure
            axis = zero_cols[0]
            sub = Instance(
                COVERING,
                tuple(row[:axis] + row[axis + 1 :] for row in inst.A),
                inst.b,
            )
            inner = aggregation_closure(sub, scheme, budget=budget, threads=threads)
            body = embed_with_free_axis(inner.closure, axis)
            art = ClosureArtifacts(
                instance=inst,
                sample=scheme,
                L=body,
                K=whole_space(n),
                closure=body,
                gamma=None,
                T_sample=(),
                S=(),
            )
            _CLOSURE_MEMO[memo_key] = art
            return art

    L = build_L(inst, scheme, budget=budget, threads=threads)
    T = tuple(enumerate_tuples(inst, scheme, budget=budget, threads=threads))
    S = tuple(filter_minimal_tuples(T, inst.sense))
    K = build_K(S, inst.sense, n)
    body = intersect([K, L, orthant(n)])
    art = ClosureArtifacts(
        instance=inst,
        sample=scheme,
        L=L,
        K=K,
        closure=body,
        gamma=compute_gamma(inst) if inst.sense == COVERING else None,
        T_sample=T,
        S=S,
    )
    _CLOSURE_MEMO[memo_key] = art
    return art


def _violation(ineq: LinearInequality, x: RatVector) -> Rat:
    value = ineq.evaluate(x)
    return value - ineq.rhs if ineq.sense == LE else ineq.rhs - value


def separate(
    inst: Instance,
    scheme: SampleScheme,
    x_star,
    budget: int = DEFAULT_CELL_BUDGET,
    threads: int = 1,
) -> SeparationResult:
    """Look for a sampled hull facet that cuts off a nonnegative point.

    Scans the grid for the facet with the largest violation in lowest
    integer terms, then refines the grid locally around the best weight
    vector (step halved each round).  Refinement applies to single-row
    aggregation only; wider schemes use the plain scan.
    """
    x = as_vector(x_star)
    if len(x) != inst.n:
        raise UsageError("point dimension does not match the instance")
    if any(c < 0 for c in x):
        raise UsageError("point must be nonnegative")

    best: tuple[Rat, Aggregation, LinearInequality] | None = None

    def consider(agg: Aggregation) -> None:
        nonlocal best
        hull = integer_hull(build_relaxation(inst, agg), budget)
        if not hull.feasible:
            return
        for ineq in hull.hrep:
            gap = _violation(ineq, x)
            if gap > 0 and (best is None or gap > best[0]):
                best = (gap, agg, ineq)

    for agg in sample_lambdas(inst.m, scheme):
        consider(agg)

    if best is not None and scheme.k == 1:
        for round_no in range(1, scheme.refinement_rounds + 1):
            center = best[1].weights[0]
            step = Fraction(1, scheme.grid_denominator * 2**round_no)
            for delta in itertools.product((-1, 0, 1), repeat=inst.m):
                if not any(delta):
                    continue
                cand = tuple(w + step * d for w, d in zip(center, delta))
                if any(w < 0 for w in cand) or not any(cand):
                    continue
                consider(normalize_aggregation(Aggregation((cand,))))

    if best is None:
        return SeparationResult(inside=True)
    return SeparationResult(
        inside=False, cut=best[2], violation=best[0], witness=best[1]
    )
