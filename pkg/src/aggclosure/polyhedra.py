"""Exact rational polyhedra with both inequality and generator descriptions.

Conversions run by exhaustive subset enumeration over integer data, which is
the right trade at this scale (dimension <= 5, a few dozen generators): no
floating point, no external geometry dependency, and every representation is
canonical so polyhedra can be compared field-by-field.

An H-representation is a sorted tuple of canonical ``LinearInequality`` rows;
lower-dimensional sets carry each implied equality as an opposed pair of
inequalities.  A V-representation is the sorted tuple of vertices (points of
minimal faces when a lineality space is present) plus the sorted tuple of
gcd-reduced integer extreme rays.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DegenerateFacetError
from .rational import (
    IntEchelon,
    int_row_basis,
    IntVector,
    Rat,
    RatVector,
    affine_rank,
    as_vector,
    idot,
    int_clear,
    int_nullspace,
    reduce_gcd,
    vdot,
)

LE = "<="
GE = ">="

_SENSES = (LE, GE)


@dataclass(frozen=True)
class LinearInequality:
    """One canonical half-space: ``normal . x sense rhs``.

    Entries are integers with overall gcd 1 (rhs included) and the first
    nonzero coefficient is positive, so equal half-spaces compare equal.
    """

    normal: tuple[int, ...]
    rhs: int
    sense: str

    def __post_init__(self) -> None:
        if self.sense not in _SENSES:
            raise ValueError(f"bad sense {self.sense!r}")
        if not any(self.normal):
            raise ValueError("zero normal")
        first = next(a for a in self.normal if a)
        if first < 0:
            raise ValueError("normal not sign-normalized")
        g = 0
        for a in self.normal + (self.rhs,):
            g = gcd(g, a)
        if g != 1:
            raise ValueError("entries not gcd-reduced")

    def evaluate(self, x: RatVector) -> Rat:
        return vdot(as_vector(self.normal), x)

    def admits_point(self, x: RatVector) -> bool:
        v = self.evaluate(x)
        return v <= self.rhs if self.sense == LE else v >= self.rhs

    def admits_ray(self, r: IntVector) -> bool:
        v = idot(self.normal, r)
        return v <= 0 if self.sense == LE else v >= 0

    def tight_at(self, x: RatVector) -> bool:
        return self.evaluate(x) == self.rhs

    def render(self) -> str:
        coeffs = " ".join(str(a) for a in self.normal)
        return f"{coeffs} {self.sense} {self.rhs}"


def make_inequality(normal, rhs, sense: str) -> LinearInequality:
    """Canonicalize arbitrary rational data into a ``LinearInequality``."""
    if sense not in _SENSES:
        raise ValueError(f"bad sense {sense!r}")
    row = as_vector(tuple(normal) + (rhs,))
    ints, _ = int_clear(row)
    ints = reduce_gcd(ints)
    coeffs, r = ints[:-1], ints[-1]
    if not any(coeffs):
        raise ValueError("zero normal")
    first = next(a for a in coeffs if a)
    if first < 0:
        coeffs = tuple(-a for a in coeffs)
        r = -r
        sense = GE if sense == LE else LE
    return LinearInequality(coeffs, r, sense)


def _nonneg_axis(iq: LinearInequality) -> int | None:
    # Rows of the form x_j >= 0 sort ahead of everything else.
    if iq.sense != GE or iq.rhs != 0:
        return None
    support = [j for j, a in enumerate(iq.normal) if a]
    if len(support) == 1 and iq.normal[support[0]] == 1:
        return support[0]
    return None


def _hrep_sort_key(iq: LinearInequality):
    axis = _nonneg_axis(iq)
    if axis is not None:
        return (0, axis)
    return (1, iq.normal, iq.rhs, 0 if iq.sense == LE else 1)


def sort_hrep(ineqs) -> tuple[LinearInequality, ...]:
    return tuple(sorted(set(ineqs), key=_hrep_sort_key))


@dataclass(frozen=True)
class Polyhedron:
    """A polyhedron carrying both descriptions, kept mutually consistent."""

    dim: int
    hrep: tuple[LinearInequality, ...]
    vrep_points: tuple[RatVector, ...]
    vrep_rays: tuple[IntVector, ...]
    feasible: bool
    integral_flag: bool
    affine_dim: int

    def render_lines(self) -> list[str]:
        if not self.feasible:
            return ["infeasible"]
        return [iq.render() for iq in self.hrep]


def contains(poly: Polyhedron, x) -> bool:
    point = as_vector(x)
    if len(point) != poly.dim:
        raise ValueError("dimension mismatch")
    if not poly.feasible:
        return False
    return all(iq.admits_point(point) for iq in poly.hrep)


def _homogenize(points, rays) -> list[IntVector]:
    rows: list[IntVector] = []
    for p in points:
        ints, den = int_clear(p)
        rows.append(ints + (den,))
    for r in rays:
        rows.append(tuple(r) + (0,))
    return rows


def _canonical_rays(rays) -> list[IntVector]:
    out = set()
    for r in rays:
        vec = as_vector(r)
        ints, _ = int_clear(vec)
        ints = reduce_gcd(ints)
        if any(ints):
            out.add(ints)
    return sorted(out)


def _build(dim, points, rays, hrep, feasible) -> Polyhedron:
    points = tuple(points)
    integral = feasible and all(c.denominator == 1 for p in points for c in p)
    adim = affine_rank(points) - 1 + _ray_rank_beyond(points, rays) if feasible else -1
    return Polyhedron(
        dim=dim,
        hrep=sort_hrep(hrep),
        vrep_points=points,
        vrep_rays=tuple(rays),
        feasible=feasible,
        integral_flag=integral,
        affine_dim=adim,
    )


def _ray_rank_beyond(points, rays) -> int:
    # Extra affine dimensions contributed by rays beyond the point span.
    if not points:
        return 0
    ech = IntEchelon()
    base = points[0]
    for p in points[1:]:
        diff, _ = int_clear(tuple(a - b for a, b in zip(p, base)))
        ech.insert(diff)
    start = ech.rank
    for r in rays:
        ech.insert(tuple(r))
    return ech.rank - start


def empty_polyhedron(dim: int, hrep=()) -> Polyhedron:
    return Polyhedron(
        dim=dim,
        hrep=sort_hrep(hrep),
        vrep_points=(),
        vrep_rays=(),
        feasible=False,
        integral_flag=False,
        affine_dim=-1,
    )


# ---------------------------------------------------------------------------
# exact feasibility LP (phase one simplex, Bland's rule)


def lp_feasible(columns: list[RatVector], rhs: RatVector) -> bool:
    """Whether ``rhs`` is a nonnegative combination of ``columns``. Exact."""
    m = len(rhs)
    k = len(columns)
    rows: list[list[Fraction]] = []
    target: list[Fraction] = []
    for i in range(m):
        r = [Fraction(col[i]) for col in columns]
        t = Fraction(rhs[i])
        if t < 0:
            r = [-v for v in r]
            t = -t
        rows.append(r)
        target.append(t)
    # tableau columns: k structural + m artificial + rhs
    width = k + m
    tab = [rows[i] + [Fraction(int(i == j)) for j in range(m)] + [target[i]] for i in range(m)]
    basis = [k + i for i in range(m)]
    # objective: minimize sum of artificials; price out the starting basis
    cost = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            cost[j] -= tab[i][j]
    for i in range(m):
        cost[k + i] += 1
    while True:
        enter = -1
        for j in range(width):
            if cost[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best: Fraction | None = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][width] / tab[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            # cost unbounded below cannot happen in phase one
            raise RuntimeError("phase one lost boundedness")
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[leave])]
        if cost[enter]:
            f = cost[enter]
            cost = [a - f * b for a, b in zip(cost, tab[leave])]
        basis[leave] = enter
    return -cost[width] == 0


def in_generated_set(x, points, rays) -> bool:
    """Whether x lies in conv(points) + cone(rays), by exact feasibility."""
    point = as_vector(x)
    cols = [as_vector(tuple(p) + (1,)) for p in points]
    cols += [as_vector(tuple(r) + (0,)) for r in rays]
    if not cols:
        return False
    return lp_feasible(cols, point + (Fraction(1),))


def _extreme_generators(points, rays):
    # Drop points inside the hull of the others and rays inside the cone of
    # the others.  Removal order cannot change the surviving set: redundancy
    # certificates never rely on other redundant generators exclusively.
    pts = list(points)
    i = 0
    while i < len(pts):
        rest = pts[:i] + pts[i + 1 :]
        if rest and in_generated_set(pts[i], rest, rays):
            pts.pop(i)
        else:
            i += 1
    rys = list(rays)
    i = 0
    while i < len(rys):
        rest = rys[:i] + rys[i + 1 :]
        if rest and lp_feasible(
            [as_vector(r) for r in rest], as_vector(rys[i])
        ):
            rys.pop(i)
        else:
            i += 1
    return pts, rys


# ---------------------------------------------------------------------------
# V-rep -> H-rep


def vrep_to_hrep(points, rays=(), reduce_generators: bool = True) -> Polyhedron:
    """Facet description of conv(points) + cone(rays).

    Requires at least one point.  Facet normals come from rank-deficient
    generator subsets in homogeneous coordinates; implied equalities come
    from the integer nullspace of the generator span and are emitted as
    opposed inequality pairs.
    """
    pts = sorted(set(as_vector(p) for p in points))
    if not pts:
        raise ValueError("need at least one point")
    dim = len(pts[0])
    rys = _canonical_rays(rays)
    if reduce_generators and len(pts) + len(rys) > 2:
        pts, rys = _extreme_generators(pts, rys)
    homog = _homogenize(pts, rys)
    width = dim + 1
    # RREF'd orthogonal-complement basis: equality rows come out axis-aligned
    # whenever the span allows it
    nullbasis = int_row_basis(int_nullspace(homog, width), width)
    span_rank = width - len(nullbasis)
    ineqs: list[LinearInequality] = []
    for nu in nullbasis:
        a, c = nu[:dim], nu[dim]
        if not any(a):
            # span misses the homogenizing coordinate entirely: impossible
            # while at least one point is present
            raise RuntimeError("generator span lost homogenizing axis")
        ineqs.append(make_inequality(a, -c, LE))
        ineqs.append(make_inequality(a, -c, GE))
    facets: set[LinearInequality] = set()
    depth_target = span_rank - 1
    if depth_target >= 1:
        base = IntEchelon()
        for nu in nullbasis:
            base.insert(nu)

        def descend(start: int, ech: IntEchelon, depth: int) -> None:
            if depth == depth_target:
                cand = int_nullspace(ech.rows, width)
                if len(cand) != 1:
                    raise RuntimeError("hyperplane candidate not unique")
                _orient_and_add(cand[0], homog, dim, facets)
                return
            remaining = len(homog) - start
            if remaining < depth_target - depth:
                return
            for i in range(start, len(homog)):
                red = ech.reduce(homog[i])
                if any(red):
                    descend(i + 1, ech.extended(red), depth + 1)

        descend(0, base, 0)
    return _build(dim, pts, rys, ineqs + sorted(facets, key=_hrep_sort_key), True)


def _orient_and_add(direction: IntVector, homog, dim, facets) -> None:
    pos = neg = False
    for g in homog:
        v = idot(direction, g)
        if v > 0:
            pos = True
        elif v < 0:
            neg = True
        if pos and neg:
            return
    if pos:
        direction = tuple(-a for a in direction)
    a, c = direction[:dim], direction[dim]
    if not any(a):
        return
    facets.add(make_inequality(a, -c, LE))


# ---------------------------------------------------------------------------
# H-rep -> V-rep


def _canonical_system(ineqs) -> list[LinearInequality]:
    # Dedup and keep only the binding bound among parallel same-sense rows.
    best: dict[tuple, int] = {}
    for iq in ineqs:
        key = (iq.normal, iq.sense)
        if key not in best:
            best[key] = iq.rhs
        elif iq.sense == LE:
            best[key] = min(best[key], iq.rhs)
        else:
            best[key] = max(best[key], iq.rhs)
    out = [LinearInequality(nrm, rhs, sen) for (nrm, sen), rhs in best.items()]
    return sorted(out, key=_hrep_sort_key)


def _satisfies_all(nums: IntVector, den: int, canon) -> bool:
    for iq in canon:
        v = idot(iq.normal, nums)
        bound = iq.rhs * den
        if iq.sense == LE:
            if v > bound:
                return False
        elif v < bound:
            return False
    return True


def _enum_vertices(canon, dim) -> list[RatVector]:
    rows = [iq.normal + (iq.rhs,) for iq in canon]
    found: set[RatVector] = set()

    def descend(start: int, ech: IntEchelon, depth: int) -> None:
        if depth == dim:
            x = _solve_square_echelon(ech, dim)
            if x is not None:
                nums, den = int_clear(x)
                if _satisfies_all(nums, den, canon):
                    found.add(x)
            return
        if len(rows) - start < dim - depth:
            return
        for i in range(start, len(rows)):
            red = ech.reduce(rows[i])
            if any(red[:dim]):
                descend(i + 1, ech.extended(red), depth + 1)

    descend(0, IntEchelon(), 0)
    return sorted(found)


def _solve_square_echelon(ech: IntEchelon, dim) -> RatVector | None:
    # Echelon rows span the tight subsystem; pivots must stay off the rhs
    # column for a unique solution.
    if any(p == dim for p in ech.pivots):
        return None
    if len(ech.rows) != dim:
        return None
    x: list[Fraction] = [Fraction(0)] * dim
    order = sorted(range(dim), key=lambda t: -ech.pivots[t])
    for t in order:
        row = ech.rows[t]
        piv = ech.pivots[t]
        acc = Fraction(row[dim])
        for j in range(piv + 1, dim):
            if row[j]:
                acc -= row[j] * x[j]
        x[piv] = acc / row[piv]
    return tuple(x)


def _enum_rays(canon, dim) -> list[IntVector]:
    rows = [iq.normal for iq in canon]
    found: set[IntVector] = set()

    def admit(r: IntVector) -> bool:
        for iq in canon:
            v = idot(iq.normal, r)
            if iq.sense == LE:
                if v > 0:
                    return False
            elif v < 0:
                return False
        return True

    def at_depth(ech: IntEchelon) -> None:
        cand = int_nullspace(ech.rows, dim)
        if len(cand) != 1:
            return
        r = cand[0]
        if admit(r):
            found.add(r)
        else:
            neg = tuple(-a for a in r)
            if admit(neg):
                found.add(neg)

    def descend(start: int, ech: IntEchelon, depth: int) -> None:
        if depth == dim - 1:
            at_depth(ech)
            return
        if len(rows) - start < dim - 1 - depth:
            return
        for i in range(start, len(rows)):
            red = ech.reduce(rows[i])
            if any(red):
                descend(i + 1, ech.extended(red), depth + 1)

    descend(0, IntEchelon(), 0)
    return sorted(found)


def hrep_to_vrep(ineqs, dim: int) -> Polyhedron:
    """Vertex/ray description of an inequality system.

    Splits off the lineality space first (each basis direction becomes an
    opposed ray pair plus an equality restriction for the recursive call),
    then enumerates vertices as solutions of n independent tight rows and
    extreme rays from (n-1)-fold tight subsystems of the recession cone.
    """
    if dim < 1:
        raise ValueError("dimension must be positive")
    canon = _canonical_system(ineqs)
    lineality = int_nullspace([iq.normal for iq in canon], dim)
    if lineality:
        aug = list(canon)
        for ell in lineality:
            aug.append(make_inequality(ell, 0, LE))
            aug.append(make_inequality(ell, 0, GE))
        sub = hrep_to_vrep(aug, dim)
        if not sub.feasible:
            return empty_polyhedron(dim, canon)
        rays = list(sub.vrep_rays)
        for ell in lineality:
            rays.append(ell)
            rays.append(tuple(-a for a in ell))
        return vrep_to_hrep(sub.vrep_points, rays, reduce_generators=False)
    verts = _enum_vertices(canon, dim)
    if not verts:
        return empty_polyhedron(dim, canon)
    rays = _enum_rays(canon, dim)
    return vrep_to_hrep(verts, rays, reduce_generators=False)


# ---------------------------------------------------------------------------
# derived operations


def intersect(polys) -> Polyhedron:
    """Intersection of polyhedra over a shared ambient space."""
    polys = list(polys)
    if not polys:
        raise ValueError("nothing to intersect")
    dim = polys[0].dim
    if any(p.dim != dim for p in polys):
        raise ValueError("dimension mismatch")
    current = polys[0]
    for nxt in polys[1:]:
        if not current.feasible:
            return current
        if not nxt.feasible:
            return nxt
        if poly_subset(current, nxt):
            continue
        if poly_subset(nxt, current):
            current = nxt
            continue
        current = hrep_to_vrep(current.hrep + nxt.hrep, dim)
    return current


def poly_subset(inner: Polyhedron, outer: Polyhedron) -> bool:
    """Exact containment test via generators against inequalities."""
    if inner.dim != outer.dim:
        raise ValueError("dimension mismatch")
    if not inner.feasible:
        return True
    if not outer.feasible:
        return False
    for p in inner.vrep_points:
        for iq in outer.hrep:
            if not iq.admits_point(p):
                return False
    for r in inner.vrep_rays:
        for iq in outer.hrep:
            if not iq.admits_ray(r):
                return False
    return True


def poly_equal(a: Polyhedron, b: Polyhedron) -> bool:
    if not a.feasible or not b.feasible:
        return a.feasible == b.feasible
    return a.dim == b.dim and a.hrep == b.hrep


def positive_normal_facets(poly: Polyhedron) -> list[LinearInequality]:
    """Facets whose normal is strictly positive in every coordinate.

    Only meaningful (and only allowed) for full-dimensional polyhedra; such
    a facet can never be tight along a recession ray of a polyhedron drawn
    from the nonnegative orthant, and that is enforced rather than assumed.
    """
    if not poly.feasible:
        raise ValueError("infeasible polyhedron")
    if poly.affine_dim != poly.dim:
        raise ValueError("polyhedron is not full-dimensional")
    out = []
    for iq in poly.hrep:
        if all(a > 0 for a in iq.normal):
            for r in poly.vrep_rays:
                if idot(iq.normal, r) == 0:
                    raise RuntimeError("positive-normal facet tight along a ray")
            out.append(iq)
    return out


def facet_lattice_tuple(poly: Polyhedron, facet: LinearInequality) -> tuple[IntVector, ...]:
    """n affinely independent integer vertices tight at a positive facet.

    The polyhedron must be integral and full-dimensional with ``facet`` one
    of its positive-normal facets.  Vertices are scanned in lexicographic
    order and kept greedily while the affine rank grows, so the result is
    deterministic and lex-sorted.
    """
    if facet not in poly.hrep:
        raise ValueError("inequality is not a facet of this polyhedron")
    if not poly.integral_flag:
        raise ValueError("polyhedron has fractional vertices")
    if poly.affine_dim != poly.dim:
        raise ValueError("polyhedron is not full-dimensional")
    if not all(a > 0 for a in facet.normal):
        raise ValueError("facet normal is not strictly positive")
    tight = [p for p in poly.vrep_points if facet.tight_at(p)]
    chosen: list[RatVector] = []
    for v in tight:
        if affine_rank(chosen + [v]) == len(chosen) + 1:
            chosen.append(v)
            if len(chosen) == poly.dim:
                break
    if len(chosen) < poly.dim:
        raise DegenerateFacetError("degenerate facet")
    return tuple(tuple(int(c) for c in v) for v in chosen)


def embed_with_free_axis(poly: Polyhedron, axis: int) -> Polyhedron:
    """Cylinder ``{x : x_axis >= 0, drop(x, axis) in poly}`` one dimension up."""
    if not poly.feasible:
        raise ValueError("cannot embed an infeasible polyhedron")
    if not 0 <= axis <= poly.dim:
        raise ValueError("axis out of range")
    n = poly.dim + 1

    def widen(vec, fill):
        return tuple(vec[:axis]) + (fill,) + tuple(vec[axis:])

    hrep = [LinearInequality(widen(iq.normal, 0), iq.rhs, iq.sense) for iq in poly.hrep]
    unit = tuple(int(j == axis) for j in range(n))
    hrep.append(LinearInequality(unit, 0, GE))
    points = tuple(widen(p, Fraction(0)) for p in poly.vrep_points)
    rays = [widen(r, 0) for r in poly.vrep_rays]
    rays.append(unit)
    return _build(n, points, sorted(rays), hrep, True)


def orthant(dim: int) -> Polyhedron:
    zero = tuple(Fraction(0) for _ in range(dim))
    units = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    return vrep_to_hrep([zero], units, reduce_generators=False)


def whole_space(dim: int) -> Polyhedron:
    zero = tuple(Fraction(0) for _ in range(dim))
    rays = []
    for i in range(dim):
        unit = tuple(int(i == j) for j in range(dim))
        rays.append(unit)
        rays.append(tuple(-a for a in unit))
    return vrep_to_hrep([zero], rays, reduce_generators=False)


def render_point(p: RatVector) -> str:
    return " ".join(str(c) for c in p)
