"""Exact rational scalars, vectors, and small dense linear algebra.

Every quantity in this package is exact: scalars are ``fractions.Fraction``
(arbitrary-precision integer numerator and denominator, always reduced,
denominator >= 1), vectors are tuples of Fraction, matrices are tuples of row
tuples.  No floating point is used anywhere.

The integer kernels at the bottom (gcd-reduced fraction-free elimination) keep
intermediate coefficient growth under control and are shared by the polyhedral
conversion routines.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

Rat = Fraction
RatVector = tuple[Fraction, ...]
RatMatrix = tuple[RatVector, ...]

IntVector = tuple[int, ...]

_CMP_OPS = ("add", "sub", "mul", "div", "cmp")


def rat(numerator: int | str | Fraction, denominator: int = 1) -> Rat:
    """Build an exact rational.  Accepts ints, ``"p/q"`` strings, Fractions."""
    return Fraction(numerator, denominator) if denominator != 1 else Fraction(numerator)


def parse_rat(text: str) -> Rat:
    """Parse ``"3"``, ``"-4/7"``, ... into a Fraction.

    Raises ValueError on malformed input (including a zero denominator).
    """
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}: {exc}") from None


def format_rat(x: Rat) -> str:
    """Render ``p/q`` with the denominator omitted when it is 1."""
    return str(Fraction(x))


def rat_arith(x: Rat, y: Rat, op: str) -> Rat | int:
    """Exact scalar arithmetic.  ``op`` is one of add/sub/mul/div/cmp.

    ``cmp`` returns -1, 0, or 1.  ``div`` raises ZeroDivisionError on a zero
    divisor.
    """
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "cmp":
        return (x > y) - (x < y)
    raise ValueError(f"unknown op {op!r}, expected one of {_CMP_OPS}")


def as_vector(values: Iterable) -> RatVector:
    return tuple(Fraction(v) for v in values)


def as_matrix(rows: Iterable[Iterable]) -> RatMatrix:
    mat = tuple(as_vector(r) for r in rows)
    if mat and any(len(r) != len(mat[0]) for r in mat):
        raise ValueError("ragged matrix")
    return mat


def vdot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def idot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def int_clear(vec: Sequence[Fraction]) -> tuple[IntVector, int]:
    """Scale a rational vector to integers by the lcm of denominators.

    Returns ``(ints, den)`` with ``ints[i] / den == vec[i]`` and ``den >= 1``.
    """
    fracs = [Fraction(v) for v in vec]
    den = 1
    for f in fracs:
        den = lcm(den, f.denominator)
    return tuple(f.numerator * (den // f.denominator) for f in fracs), den


def reduce_gcd(vec: Sequence[int]) -> IntVector:
    """Divide an integer vector by the gcd of its entries (gcd 1 afterwards)."""
    g = 0
    for a in vec:
        g = gcd(g, a)
    if g > 1:
        return tuple(a // g for a in vec)
    return tuple(vec)


def _sign_normalize(vec: Sequence[int]) -> IntVector:
    for a in vec:
        if a:
            return tuple(vec) if a > 0 else tuple(-x for x in vec)
    return tuple(vec)


class IntEchelon:
    """Incremental fraction-free row reduction over the integers.

    Rows are inserted one at a time; each inserted row is stored gcd-reduced
    with entries at all earlier pivot columns eliminated.  Supports cheap
    copy-and-extend so subset-enumeration searches can share prefixes.
    """

    __slots__ = ("rows", "pivots")

    def __init__(self, rows: tuple = (), pivots: tuple = ()):
        self.rows = rows
        self.pivots = pivots

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, row: Sequence[int]) -> IntVector:
        """Eliminate the row against stored pivots.  Zero result = dependent."""
        r = list(row)
        for prow, pcol in zip(self.rows, self.pivots):
            f = r[pcol]
            if f:
                p = prow[pcol]
                r = [p * a - f * b for a, b in zip(r, prow)]
        return _sign_normalize(reduce_gcd(r))

    def extended(self, reduced_row: IntVector) -> "IntEchelon":
        """New echelon with an already-reduced nonzero row appended."""
        pcol = next(i for i, a in enumerate(reduced_row) if a)
        return IntEchelon(self.rows + (reduced_row,), self.pivots + (pcol,))

    def insert(self, row: Sequence[int]) -> bool:
        """Reduce and append if independent.  Returns True when rank grew."""
        r = self.reduce(row)
        if not any(r):
            return False
        pcol = next(i for i, a in enumerate(r) if a)
        self.rows = self.rows + (r,)
        self.pivots = self.pivots + (pcol,)
        return True


def int_rank(rows: Iterable[Sequence[int]]) -> int:
    ech = IntEchelon()
    for row in rows:
        ech.insert(row)
    return ech.rank


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Fraction with deterministic pivoting."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    width = len(mat[0]) if mat else 0
    pivot_cols: list[int] = []
    r = 0
    for c in range(width):
        pivot = next((i for i in range(r, nrows) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [a * inv for a in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break
    return mat, pivot_cols


def int_row_basis(rows: Iterable[Sequence[int]], width: int) -> list[IntVector]:
    """Canonical gcd-reduced integer basis of the row space (RREF rows).

    Depends only on the span, so different generating sets of the same
    space produce identical output.
    """
    dense = [list(map(Fraction, r)) for r in rows if any(r)]
    if not dense:
        return []
    rref, pivot_cols = _rref(dense)
    out: list[IntVector] = []
    for row in rref[: len(pivot_cols)]:
        ints, _ = int_clear(tuple(row))
        out.append(reduce_gcd(ints))
    return out


def int_nullspace(rows: Iterable[Sequence[int]], width: int) -> list[IntVector]:
    """Deterministic gcd-reduced integer basis of the right nullspace.

    The basis vector for free column f has a positive entry at f.
    """
    rows = [list(map(Fraction, r)) for r in rows if any(r)]
    if not rows:
        return [tuple(1 if i == f else 0 for i in range(width)) for f in range(width)]
    rref, pivot_cols = _rref(rows)
    pivot_set = set(pivot_cols)
    basis: list[IntVector] = []
    for f in range(width):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * width
        v[f] = Fraction(1)
        for i, c in enumerate(pivot_cols):
            v[c] = -rref[i][f]
        ints, _ = int_clear(v)
        ints = reduce_gcd(ints)
        if ints[f] < 0:
            ints = tuple(-a for a in ints)
        basis.append(ints)
    return basis


def solve_linear(matrix: Sequence[Sequence], rhs: Sequence) -> Optional[RatVector]:
    """Solve a square exact linear system; None reports a singular matrix.

    Fraction-free (Bareiss-style) forward elimination on the integer-cleared
    augmented system bounds intermediate growth; back-substitution is exact.
    """
    mat = as_matrix(matrix)
    b = as_vector(rhs)
    n = len(mat)
    if n == 0:
        return ()
    if len(mat[0]) != n or len(b) != n:
        raise ValueError("solve_linear expects a square system")
    ech = IntEchelon()
    for row, rhs_entry in zip(mat, b):
        ints, _ = int_clear(tuple(row) + (rhs_entry,))
        ech.insert(ints)
    if any(pcol == n for pcol in ech.pivots):
        return None  # 0 = nonzero row: inconsistent, matrix necessarily singular
    if len([p for p in ech.pivots if p < n]) < n:
        return None
    # back-substitution in pivot order
    x: list[Optional[Fraction]] = [None] * n
    for prow, pcol in sorted(zip(ech.rows, ech.pivots), key=lambda t: -t[1]):
        acc = Fraction(prow[n])
        for c in range(pcol + 1, n):
            acc -= prow[c] * x[c]
        x[pcol] = acc / prow[pcol]
    return tuple(x)  # type: ignore[arg-type]


def affine_rank(points: Sequence[Sequence]) -> int:
    """Largest count of affinely independent points in the list.

    Empty input has affine rank 0; a single point has affine rank 1.
    Invariant under translation and permutation of the input.
    """
    pts = [as_vector(p) for p in points]
    if not pts:
        return 0
    base = pts[0]
    ech = IntEchelon()
    for p in pts[1:]:
        diff = tuple(a - b for a, b in zip(p, base))
        ints, _ = int_clear(diff)
        ech.insert(ints)
    return ech.rank + 1
