"""Exact rational convex-polytope calculus.

Every coordinate is a `fractions.Fraction`; no floating point appears
anywhere in this module, so all predicates (membership, tightness,
emptiness) and all measures (determinants, volumes) are exact.

Conventions:

* vectors are tuples of Fractions, matrices are tuples of row vectors;
* halfspaces are written ``a . x <= b``;
* polytopes are closed sets, possibly empty or lower-dimensional;
  the volume of a non-full-dimensional polytope is 0 by definition;
* a ``Polytope`` stores exactly its extreme points, sorted
  lexicographically, which makes vertex-set equality canonical.

Enumeration is exhaustive (``O(C(m, d))`` over d-subsets) which is the
right trade-off at desk scale: every body handled here has at most a
few dozen facets and lives in dimension <= 4.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import DegenerateInput, Infeasible, SingularMatrix, Unbounded

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# vectors and matrices


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def as_vec(xs: Iterable) -> Vec:
    return tuple(frac(x) for x in xs)


def as_mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(as_vec(r) for r in rows)


def zero_vec(d: int) -> Vec:
    return (ZERO,) * d


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vneg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def vscale(c: Fraction, u: Vec) -> Vec:
    return tuple(c * a for a in u)


def vdot(u: Vec, v: Vec) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), ZERO)


def identity_matrix(d: int) -> Mat:
    return tuple(
        tuple(ONE if i == j else ZERO for j in range(d)) for i in range(d)
    )


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(vdot(row, v) for row in m)


def mat_mul(a: Mat, b: Mat) -> Mat:
    cols = list(zip(*b))
    return tuple(tuple(vdot(row, as_vec(c)) for c in cols) for row in a)


def mat_from_columns(cols: Sequence[Vec]) -> Mat:
    return tuple(as_vec(row) for row in zip(*cols))


def determinant(m: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    rows = [list(map(frac, r)) for r in m]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DegenerateInput("determinant requires a square matrix")
    if n == 0:
        return ONE
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k] != 0:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return ZERO
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]) / prev
        prev = rows[k][k]
    return sign * rows[-1][-1]


def solve_square(rows: Sequence[Vec], rhs: Sequence[Fraction]) -> Optional[Vec]:
    """Solve a square linear system exactly; None when singular."""
    n = len(rows)
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col]
        a[col] = [x / inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return tuple(a[i][n] for i in range(n))


def matrix_inverse(m: Mat) -> Mat:
    n = len(m)
    cols = []
    for j in range(n):
        e = [ONE if i == j else ZERO for i in range(n)]
        x = solve_square(m, e)
        if x is None:
            raise SingularMatrix("matrix is not invertible")
        cols.append(x)
    return mat_from_columns(cols)


def _row_echelon_rank(rows: Sequence[Vec]) -> int:
    work = [list(r) for r in rows]
    rank = 0
    ncols = len(work[0]) if work else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(work)) if work[i][col] != 0), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = work[rank][col]
        work[rank] = [x / inv for x in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][col] != 0:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def _span_nullspace(basis: Sequence[Vec], dim: int) -> list[Vec]:
    """Vectors a with a . b = 0 for every b in `basis` (standard RREF basis)."""
    if not basis:
        return [tuple(ONE if i == j else ZERO for j in range(dim)) for i in range(dim)]
    work = [list(r) for r in basis]
    pivots: list[int] = []
    rank = 0
    for col in range(dim):
        piv = next((i for i in range(rank, len(work)) if work[i][col] != 0), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = work[rank][col]
        work[rank] = [x / inv for x in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][col] != 0:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(dim) if c not in pivots]
    out = []
    for fc in free:
        v = [ZERO] * dim
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -work[r][fc]
        out.append(tuple(v))
    return out


def _hyperplane_normal(points: Sequence[Vec]) -> Optional[Vec]:
    """Normal of the hyperplane through d points in R^d (generalized cross
    product); None when the points do not affinely span it."""
    d = len(points[0])
    if d == 1:
        return (ONE,)
    rows = [vsub(p, points[0]) for p in points[1:]]
    normal = []
    for j in range(d):
        minor = [[row[c] for c in range(d) if c != j] for row in rows]
        normal.append((-ONE) ** j * determinant(minor))
    n = tuple(normal)
    if all(x == 0 for x in n):
        return None
    return n


# ---------------------------------------------------------------------------
# halfspaces


@dataclass(frozen=True)
class HalfSpace:
    """Closed halfspace ``normal . x <= offset``."""

    normal: Vec
    offset: Fraction

    def value(self, x: Vec) -> Fraction:
        """<= 0 inside, 0 on the boundary hyperplane."""
        return vdot(self.normal, x) - self.offset

    def flipped(self) -> "HalfSpace":
        return HalfSpace(vneg(self.normal), -self.offset)

    def translated(self, t: Vec) -> "HalfSpace":
        return HalfSpace(self.normal, self.offset + vdot(self.normal, t))

    def canonical(self) -> "HalfSpace":
        """Positive rescaling to coprime integer coefficients.

        Only positive scalings preserve the inequality, so the sign is kept;
        use `plane_key` for an orientation-free hyperplane identifier.
        """
        nums = list(self.normal) + [self.offset]
        den = math.lcm(*(f.denominator for f in nums))
        ints = [int(f * den) for f in nums]
        g = math.gcd(*ints)
        if g > 1:
            ints = [x // g for x in ints]
        return HalfSpace(tuple(Fraction(x) for x in ints[:-1]), Fraction(ints[-1]))

    def key(self) -> tuple:
        c = self.canonical()
        return (c.normal, c.offset)

    def plane_key(self) -> tuple:
        """Orientation-free identifier of the boundary hyperplane."""
        c = self.canonical()
        lead = next((x for x in c.normal if x != 0), ONE)
        if lead < 0:
            c = HalfSpace(vneg(c.normal), -c.offset)
        return (c.normal, c.offset)


def halfspace(normal: Iterable, offset) -> HalfSpace:
    n = as_vec(normal)
    if all(x == 0 for x in n):
        raise DegenerateInput("halfspace normal must be nonzero")
    return HalfSpace(n, frac(offset))


# ---------------------------------------------------------------------------
# point-set helpers (index based so callers can map results back)


def _affine_span(points: Sequence[Vec]):
    """Greedy affine basis of a point set.

    Returns (rank r, basis difference vectors, pivot columns, inverse of the
    r x r pivot submatrix).  Coordinates of any point of the affine hull in
    this basis come from `_span_coords`.
    """
    v0 = points[0]
    basis: list[Vec] = []
    ech: list[tuple[int, list[Fraction]]] = []
    for p in points[1:]:
        w = list(vsub(p, v0))
        for pc, row in ech:
            if w[pc] != 0:
                f = w[pc]
                w = [x - f * y for x, y in zip(w, row)]
        lead = next((c for c, x in enumerate(w) if x != 0), None)
        if lead is None:
            continue
        inv = w[lead]
        ech.append((lead, [x / inv for x in w]))
        basis.append(vsub(p, v0))
    pivots = [pc for pc, _ in ech]
    r = len(basis)
    if r == 0:
        return 0, [], [], ()
    m = tuple(tuple(basis[b][pc] for b in range(r)) for pc in pivots)
    return r, basis, pivots, matrix_inverse(m)


def _span_coords(points: Sequence[Vec], v0: Vec, pivots, minv) -> list[Vec]:
    out = []
    for p in points:
        rhs = tuple(p[pc] - v0[pc] for pc in pivots)
        out.append(mat_vec(minv, rhs))
    return out


def _facet_search(d: int, points: Sequence[Vec]) -> list[HalfSpace]:
    """All facets of conv(points), assumed full-dimensional in R^d.

    Exhaustive over d-subsets spanning a hyperplane with every point on one
    side, deduplicated by canonical coefficients.
    """
    found: dict[tuple, HalfSpace] = {}
    for subset in itertools.combinations(range(len(points)), d):
        n = _hyperplane_normal([points[i] for i in subset])
        if n is None:
            continue
        b = vdot(n, points[subset[0]])
        pos = neg = False
        for p in points:
            v = vdot(n, p) - b
            if v > 0:
                pos = True
            elif v < 0:
                neg = True
            if pos and neg:
                break
        if pos and neg:
            continue
        hs = HalfSpace(n, b) if not pos else HalfSpace(vneg(n), -b)
        c = hs.canonical()
        found[(c.normal, c.offset)] = c
    return list(found.values())


def _extreme_indices(points: Sequence[Vec]) -> list[int]:
    """Indices of the extreme points of conv(points), any affine rank."""
    if len(points) == 1:
        return [0]
    r, basis, pivots, minv = _affine_span(points)
    if r == 0:
        return [0]
    coords = _span_coords(points, points[0], pivots, minv)
    if r == 1:
        vals = [c[0] for c in coords]
        return sorted({vals.index(min(vals)), vals.index(max(vals))})
    facets = _facet_search(r, coords)
    out = []
    for i, c in enumerate(coords):
        tight = [hs.normal for hs in facets if hs.value(c) == 0]
        if len(tight) >= r and _row_echelon_rank(tight) == r:
            out.append(i)
    return out


# ---------------------------------------------------------------------------
# the polytope type


class Polytope:
    """Convex polytope given by its extreme points, with cached facet data.

    Instances are immutable after construction; the lazy caches are
    idempotent, so concurrent readers are safe.
    """

    __slots__ = (
        "dim",
        "vertices",
        "_facet_hint",
        "_facets",
        "_span",
        "_description",
        "_int_ineqs",
        "_volume",
        "_triangulation",
    )

    def __init__(
        self,
        dim: int,
        points: Iterable[Iterable],
        *,
        facet_hint: Optional[Sequence[HalfSpace]] = None,
        skip_normalization: bool = False,
    ):
        pts = sorted({as_vec(p) for p in points})
        for p in pts:
            if len(p) != dim:
                raise DegenerateInput(
                    f"point of length {len(p)} in ambient dimension {dim}"
                )
        if pts and not skip_normalization and len(pts) > 2:
            keep = _extreme_indices(pts)
            pts = [pts[i] for i in keep]
        self.dim = dim
        self.vertices: tuple[Vec, ...] = tuple(pts)
        self._facet_hint = tuple(facet_hint) if facet_hint is not None else None
        self._facets = None
        self._span = None
        self._description = None
        self._int_ineqs = None
        self._volume = None
        self._triangulation = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_vertices(cls, dim: int, points: Iterable[Iterable]) -> "Polytope":
        return cls(dim, points)

    @classmethod
    def empty(cls, dim: int) -> "Polytope":
        return cls(dim, ())

    @classmethod
    def from_halfspaces(
        cls, halfspaces: Sequence[HalfSpace], dim: int
    ) -> "Polytope":
        return vertices_from_facets(halfspaces, dim)

    # -- basic queries ------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def is_lattice(self) -> bool:
        return all(c.denominator == 1 for v in self.vertices for c in v)

    def _affine(self):
        if self._span is None:
            self._span = _affine_span(self.vertices)
        return self._span

    @property
    def rank(self) -> int:
        """Dimension of the affine hull (-1 for the empty polytope)."""
        if self.is_empty:
            return -1
        if len(self.vertices) == 1:
            return 0
        return self._affine()[0]

    @property
    def is_full_dim(self) -> bool:
        return self.rank == self.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polytope)
            and self.dim == other.dim
            and self.vertices == other.vertices
        )

    def __hash__(self) -> int:
        return hash((self.dim, self.vertices))

    def __repr__(self) -> str:
        return f"Polytope(dim={self.dim}, vertices={len(self.vertices)})"

    # -- facets and descriptions ---------------------------------------------

    def facets(self) -> tuple[HalfSpace, ...]:
        """Irredundant facet halfspaces; full-dimensional polytopes only."""
        if self._facets is not None:
            return self._facets
        if not self.is_full_dim:
            raise DegenerateInput("facets() requires a full-dimensional polytope")
        if self._facet_hint is not None:
            seen: dict[tuple, HalfSpace] = {}
            for hs in self._facet_hint:
                c = hs.canonical()
                k = (c.normal, c.offset)
                if k in seen:
                    continue
                tight = [v for v in self.vertices if c.value(v) == 0]
                if len(tight) < self.dim:
                    continue
                diffs = [vsub(p, tight[0]) for p in tight[1:]]
                if _row_echelon_rank(diffs) == self.dim - 1:
                    seen[k] = c
            self._facets = tuple(seen.values())
        else:
            self._facets = tuple(_facet_search(self.dim, self.vertices))
        return self._facets

    def linear_description(self) -> tuple[tuple[HalfSpace, ...], tuple[HalfSpace, ...]]:
        """(equalities, inequalities) cutting out this polytope exactly.

        Equalities are halfspaces read as ``a . x == b`` (the affine hull);
        for full-dimensional polytopes there are none and the inequalities
        are the facets.  Lower-dimensional faces get their facet system
        computed inside the hull and lifted back to ambient coordinates.
        """
        if self._description is not None:
            return self._description
        if self.is_empty:
            raise DegenerateInput("empty polytope has no linear description")
        d = self.dim
        if self.is_full_dim:
            self._description = ((), self.facets())
            return self._description
        v0 = self.vertices[0]
        if len(self.vertices) == 1:
            eqs = tuple(
                HalfSpace(tuple(ONE if j == i else ZERO for j in range(d)), v0[i])
                for i in range(d)
            )
            self._description = (eqs, ())
            return self._description
        r, basis, pivots, minv = self._affine()
        eqs = tuple(
            HalfSpace(n, vdot(n, v0)).canonical()
            for n in _span_nullspace(basis, d)
        )
        coords = _span_coords(self.vertices, v0, pivots, minv)
        sub = Polytope(r, coords, skip_normalization=True)
        ineqs = []
        for hs in sub.facets():
            u = mat_vec(tuple(zip(*minv)), hs.normal)  # row vector g . Minv
            a = [ZERO] * d
            for j, pc in enumerate(pivots):
                a[pc] = u[j]
            b = hs.offset + sum((u[j] * v0[pc] for j, pc in enumerate(pivots)), ZERO)
            ineqs.append(HalfSpace(tuple(a), b).canonical())
        self._description = (eqs, tuple(ineqs))
        return self._description

    def integer_description(self):
        """linear_description rescaled to integer coefficients, as plain ints.

        Returns (equalities, inequalities), each a list of (coeffs, rhs).
        """
        if self._int_ineqs is None:
            eqs, ineqs = self.linear_description()

            def to_int(hs: HalfSpace):
                c = hs.canonical()
                return (
                    tuple(int(x) for x in c.normal),
                    int(c.offset),
                )

            self._int_ineqs = (
                [to_int(h) for h in eqs],
                [to_int(h) for h in ineqs],
            )
        return self._int_ineqs

    # -- membership ---------------------------------------------------------

    def contains(self, x: Iterable) -> bool:
        if self.is_empty:
            return False
        p = as_vec(x)
        eqs, ineqs = self.linear_description()
        return all(h.value(p) == 0 for h in eqs) and all(
            h.value(p) <= 0 for h in ineqs
        )

    def on_boundary(self, x: Iterable) -> bool:
        """True when x lies on the topological boundary of the polytope.

        Every point of a lower-dimensional polytope is boundary.
        """
        p = as_vec(x)
        if not self.contains(p):
            return False
        if not self.is_full_dim:
            return True
        return any(h.value(p) == 0 for h in self.facets())

    # -- geometry -----------------------------------------------------------

    def bounding_box(self) -> tuple[Vec, Vec]:
        if self.is_empty:
            raise DegenerateInput("empty polytope has no bounding box")
        lo = tuple(min(v[i] for v in self.vertices) for i in range(self.dim))
        hi = tuple(max(v[i] for v in self.vertices) for i in range(self.dim))
        return lo, hi

    def translated(self, t: Iterable) -> "Polytope":
        tv = as_vec(t)
        out = Polytope(
            self.dim,
            (vadd(v, tv) for v in self.vertices),
            skip_normalization=True,
        )
        # facets translate exactly, no re-pruning needed
        if self._facets is not None:
            out._facets = tuple(h.translated(tv) for h in self._facets)
        elif self._facet_hint is not None:
            out._facet_hint = tuple(h.translated(tv) for h in self._facet_hint)
        return out

    def negated(self) -> "Polytope":
        out = Polytope(
            self.dim,
            (vneg(v) for v in self.vertices),
            skip_normalization=True,
        )
        if self._facets is not None:
            out._facets = tuple(
                HalfSpace(vneg(h.normal), h.offset) for h in self._facets
            )
        elif self._facet_hint is not None:
            out._facet_hint = tuple(
                HalfSpace(vneg(h.normal), h.offset) for h in self._facet_hint
            )
        return out

    def volume(self) -> Fraction:
        if self._volume is None:
            self._volume = _volume_of(self)
        return self._volume


@dataclass(frozen=True)
class PolytopeUnion:
    """Finite family of polytopes treated additively.

    Counts and volumes add over the parts; the families produced by the
    scaling decomposition have pairwise interior-disjoint parts, which is
    validated through volume bookkeeping rather than pairwise tests.
    """

    parts: tuple[Polytope, ...]
    meta: str = ""

    def __post_init__(self):
        if not self.parts:
            raise DegenerateInput("union needs at least one part")
        d = self.parts[0].dim
        if any(p.dim != d for p in self.parts):
            raise DegenerateInput("union parts must share the ambient dimension")

    @property
    def dim(self) -> int:
        return self.parts[0].dim


Body = Union[Polytope, PolytopeUnion]


# ---------------------------------------------------------------------------
# triangulation and volume


def _order_polygon(coords: Sequence[Vec]) -> list[int]:
    """Indices of a planar point set in counterclockwise order around the
    centroid (exact sign comparisons, no angles)."""
    n = len(coords)
    cx = sum((c[0] for c in coords), ZERO) / n
    cy = sum((c[1] for c in coords), ZERO) / n

    def half(i: int) -> int:
        x, y = coords[i][0] - cx, coords[i][1] - cy
        return 0 if (y > 0 or (y == 0 and x > 0)) else 1

    def cross(i: int, j: int) -> Fraction:
        xi, yi = coords[i][0] - cx, coords[i][1] - cy
        xj, yj = coords[j][0] - cx, coords[j][1] - cy
        return xi * yj - xj * yi

    import functools

    def cmp(i: int, j: int) -> int:
        hi, hj = half(i), half(j)
        if hi != hj:
            return -1 if hi < hj else 1
        c = cross(i, j)
        return 0 if c == 0 else (-1 if c > 0 else 1)

    return sorted(range(n), key=functools.cmp_to_key(cmp))


def _triangulate_point_set(
    points: Sequence[Vec], hints: Optional[Sequence[HalfSpace]] = None
) -> list[tuple[int, ...]]:
    """Simplices (as index tuples) triangulating conv(points) inside its
    affine hull; fan from the lexicographically smallest point.

    `hints`, when given, must be ambient halfspaces whose boundary
    hyperplanes induce every proper face of conv(points) (the facet list
    of an enclosing polytope qualifies at every recursion depth, since
    faces of a face come from the other facets).  Without hints the
    facets are searched exhaustively.
    """
    n = len(points)
    if n == 1:
        return [(0,)]
    r, basis, pivots, minv = _affine_span(points)
    if r == 0:
        return [(0,)]
    if r == 1:
        # lexicographic order is monotone along a line
        lo = min(range(n), key=lambda i: points[i])
        hi = max(range(n), key=lambda i: points[i])
        return [(lo, hi)]
    if r == 2:
        coords = _span_coords(points, points[0], pivots, minv)
        order = _order_polygon(coords)
        lead = min(range(len(order)), key=lambda k: points[order[k]])
        order = order[lead:] + order[:lead]
        return [(order[0], order[i], order[i + 1]) for i in range(1, len(order) - 1)]
    faces: list[list[int]] = []
    if hints is not None:
        by_tight_set: dict[frozenset, list[int]] = {}
        for hs in hints:
            tight = [i for i in range(n) if hs.value(points[i]) == 0]
            if r <= len(tight) < n:
                by_tight_set.setdefault(frozenset(tight), tight)
        for tight in by_tight_set.values():
            diffs = [vsub(points[i], points[tight[0]]) for i in tight[1:]]
            if _row_echelon_rank(diffs) == r - 1:
                faces.append(tight)
    else:
        coords = _span_coords(points, points[0], pivots, minv)
        for hs in _facet_search(r, coords):
            faces.append([i for i in range(n) if hs.value(coords[i]) == 0])
    i0 = min(range(n), key=lambda i: points[i])
    out: list[tuple[int, ...]] = []
    for tight in faces:
        if i0 in tight:
            continue
        sub = _triangulate_point_set([points[i] for i in tight], hints)
        for s in sub:
            out.append((i0,) + tuple(tight[k] for k in s))
    return out


def triangulate(p: Polytope) -> list[tuple[Vec, ...]]:
    """Full-dimensional triangulation into simplices on the polytope's own
    vertices, fanned from the lexicographically smallest vertex."""
    if not p.is_full_dim:
        raise DegenerateInput("triangulate requires a full-dimensional polytope")
    if p._triangulation is None:
        idx = _triangulate_point_set(p.vertices, hints=p.facets())
        p._triangulation = [tuple(p.vertices[i] for i in s) for s in idx]
    return p._triangulation


def _volume_of(p: Polytope) -> Fraction:
    if p.is_empty or not p.is_full_dim:
        return ZERO
    d = p.dim
    total = ZERO
    for simplex in triangulate(p):
        rows = [vsub(v, simplex[0]) for v in simplex[1:]]
        total += abs(determinant(rows))
    return total / math.factorial(d)


def volume(body: Body) -> Fraction:
    """Exact d-volume; 0 for lower-dimensional or empty polytopes.

    Union volume is the sum over parts.
    """
    if isinstance(body, PolytopeUnion):
        return sum((part.volume() for part in body.parts), ZERO)
    return body.volume()


# ---------------------------------------------------------------------------
# enumeration between representations


def facets_from_vertices(p: Polytope) -> list[HalfSpace]:
    """Complete irredundant facet list of a full-dimensional polytope."""
    if not p.is_full_dim:
        raise DegenerateInput("vertices are not full-dimensional")
    return list(p.facets())


def _enumerate_vertices(halfspaces: Sequence[HalfSpace], dim: int) -> list[Vec]:
    cand: dict[Vec, None] = {}
    for subset in itertools.combinations(halfspaces, dim):
        x = solve_square([h.normal for h in subset], [h.offset for h in subset])
        if x is None:
            continue
        if all(h.value(x) <= 0 for h in halfspaces):
            cand[x] = None
    return list(cand)


def _has_recession_direction(halfspaces: Sequence[HalfSpace], dim: int) -> bool:
    cone = [HalfSpace(h.normal, ZERO) for h in halfspaces]
    box = []
    for i in range(dim):
        e = tuple(ONE if j == i else ZERO for j in range(dim))
        box.append(HalfSpace(e, ONE))
        box.append(HalfSpace(vneg(e), ONE))
    for v in _enumerate_vertices(cone + box, dim):
        if any(c != 0 for c in v):
            return True
    return False


def vertices_from_facets(halfspaces: Sequence[HalfSpace], dim: int) -> Polytope:
    """All vertices of a bounded halfspace system, by exhaustive d-subset
    solves of tight systems with feasibility filtering."""
    verts = _enumerate_vertices(halfspaces, dim)
    if _has_recession_direction(halfspaces, dim):
        raise Unbounded("halfspace system admits a recession direction")
    if not verts:
        raise Infeasible("halfspace system has no solution")
    return Polytope(
        dim, verts, facet_hint=halfspaces, skip_normalization=True
    )


# ---------------------------------------------------------------------------
# clipping, intersection, Minkowski sums, affine maps


def _clip_new_vertices(p: Polytope, h: HalfSpace) -> list[Vec]:
    """Vertices of p's clip that lie on the hyperplane of h.

    Each one is the crossing point of an edge of p whose endpoints sit
    strictly on opposite sides; two vertices span an edge exactly when
    their common tight constraints have rank d-1.  The crossing point
    u + t (v - u) with t = val(u) / (val(u) - val(v)) is exact.
    """
    verts = p.vertices
    vals = [h.value(v) for v in verts]
    inside = [i for i, val in enumerate(vals) if val < 0]
    outside = [i for i, val in enumerate(vals) if val > 0]
    if not inside or not outside:
        return []
    eqs, ineqs = p.linear_description()
    eq_rows = [e.normal for e in eqs]
    masks = []
    for v in verts:
        m = 0
        for b, q in enumerate(ineqs):
            if q.value(v) == 0:
                m |= 1 << b
        masks.append(m)
    need = p.dim - 1
    out: dict[Vec, None] = {}
    for i in inside:
        for j in outside:
            common = masks[i] & masks[j]
            if common.bit_count() + len(eq_rows) < need:
                continue
            rows = eq_rows + [
                ineqs[b].normal for b in range(len(ineqs)) if common >> b & 1
            ]
            if need > 0 and _row_echelon_rank(rows) != need:
                continue
            t = vals[i] / (vals[i] - vals[j])
            point = vadd(verts[i], vscale(t, vsub(verts[j], verts[i])))
            out[point] = None
    return list(out)


def clip(p: Polytope, h: HalfSpace) -> Polytope:
    """p intersected with the closed halfspace h; may be empty or flat."""
    if p.is_empty:
        return p
    vals = [h.value(v) for v in p.vertices]
    if all(v <= 0 for v in vals):
        return p
    kept = [v for v, val in zip(p.vertices, vals) if val <= 0]
    if not kept:
        return Polytope.empty(p.dim)
    if all(val >= 0 for val in vals):
        # only the face lying on the hyperplane survives; its points are
        # vertices of p, hence already extreme
        return Polytope(p.dim, kept, skip_normalization=True)
    new = _clip_new_vertices(p, h)
    hint = None
    if p.is_full_dim:
        hint = tuple(p.linear_description()[1]) + (h,)
    return Polytope(p.dim, kept + new, facet_hint=hint, skip_normalization=True)


def clip_both(p: Polytope, h: HalfSpace) -> tuple[Polytope, Polytope]:
    """(p cut to h's <= side, p cut to the >= side), sharing the boundary
    vertex computation; intended for cell splitting."""
    vals = [h.value(v) for v in p.vertices]
    below = [v for v, val in zip(p.vertices, vals) if val <= 0]
    above = [v for v, val in zip(p.vertices, vals) if val >= 0]
    if all(v <= 0 for v in vals):
        return p, Polytope(p.dim, above, skip_normalization=True)
    if all(v >= 0 for v in vals):
        return Polytope(p.dim, below, skip_normalization=True), p
    new = _clip_new_vertices(p, h)
    ineqs = tuple(p.linear_description()[1]) if p.is_full_dim else None
    lo = Polytope(
        p.dim,
        below + new,
        facet_hint=(ineqs + (h,)) if ineqs is not None else None,
        skip_normalization=True,
    )
    hi = Polytope(
        p.dim,
        above + new,
        facet_hint=(ineqs + (h.flipped(),)) if ineqs is not None else None,
        skip_normalization=True,
    )
    return lo, hi


def intersect(p: Polytope, q: Polytope) -> Polytope:
    """Exact intersection via successive clipping; empty is a value."""
    if p.dim != q.dim:
        raise DegenerateInput("intersection requires equal ambient dimensions")
    if p.is_empty or q.is_empty:
        return Polytope.empty(p.dim)
    plo, phi = p.bounding_box()
    qlo, qhi = q.bounding_box()
    if any(plo[i] > qhi[i] or qlo[i] > phi[i] for i in range(p.dim)):
        return Polytope.empty(p.dim)
    out = p
    eqs, ineqs = q.linear_description()
    for e in eqs:
        out = clip(out, e)
        if out.is_empty:
            return out
        out = clip(out, e.flipped())
        if out.is_empty:
            return out
    for h in ineqs:
        out = clip(out, h)
        if out.is_empty:
            return out
    return out


def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    """Convex hull of pairwise vertex sums, normalized to extreme points."""
    if p.dim != q.dim:
        raise DegenerateInput("Minkowski sum requires equal ambient dimensions")
    if p.is_empty or q.is_empty:
        return Polytope.empty(p.dim)
    return Polytope(p.dim, (vadd(a, b) for a in p.vertices for b in q.vertices))


def affine_image(p: Polytope, m: Mat, t: Iterable) -> Polytope:
    """Image of p under x -> m x + t; m must be invertible."""
    mm = as_mat(m)
    tv = as_vec(t)
    if determinant(mm) == 0:
        raise SingularMatrix("affine image requires an invertible matrix")
    return Polytope(
        p.dim,
        (vadd(mat_vec(mm, v), tv) for v in p.vertices),
        skip_normalization=True,
    )


def dilate(p: Polytope, n: int) -> Polytope:
    if n <= 0:
        raise DegenerateInput("dilation factor must be positive")
    out = Polytope(
        p.dim,
        (vscale(Fraction(n), v) for v in p.vertices),
        skip_normalization=True,
    )
    if p._facets is not None:
        out._facets = tuple(HalfSpace(h.normal, n * h.offset) for h in p._facets)
    elif p._facet_hint is not None:
        out._facet_hint = tuple(
            HalfSpace(h.normal, n * h.offset) for h in p._facet_hint
        )
    return out


def bounding_box(p: Polytope) -> tuple[Vec, Vec]:
    return p.bounding_box()


def unit_cube(d: int) -> Polytope:
    verts = [as_vec(bits) for bits in itertools.product((0, 1), repeat=d)]
    hint = []
    for i in range(d):
        e = tuple(ONE if j == i else ZERO for j in range(d))
        hint.append(HalfSpace(vneg(e), ZERO))
        hint.append(HalfSpace(e, ONE))
    return Polytope(d, verts, facet_hint=hint, skip_normalization=True)


def segment(a: Iterable, b: Iterable, dim: Optional[int] = None) -> Polytope:
    av, bv = as_vec(a), as_vec(b)
    return Polytope(dim if dim is not None else len(av), [av, bv])


# ---------------------------------------------------------------------------
# JSON form: {"dim": d, "vertices": [["p/q" | "k", ...], ...]}


def _parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise DegenerateInput(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise DegenerateInput(f"bad rational {x!r}: {exc}") from exc
    raise DegenerateInput(f"not a rational: {x!r}")


def polytope_from_json(data: dict) -> Polytope:
    try:
        dim = data["dim"]
        raw = data["vertices"]
    except (KeyError, TypeError) as exc:
        raise DegenerateInput(f"polytope JSON needs dim and vertices: {exc}") from exc
    if not isinstance(dim, int) or dim < 1:
        raise DegenerateInput("polytope dim must be a positive integer")
    verts = []
    for row in raw:
        v = tuple(_parse_rational(x) for x in row)
        if len(v) != dim:
            raise DegenerateInput("vertex length does not match dim")
        verts.append(v)
    if not verts:
        raise DegenerateInput("polytope JSON has no vertices")
    return Polytope(dim, verts)


def polytope_to_json(p: Polytope) -> dict:
    return {
        "dim": p.dim,
        "vertices": [[str(c) for c in v] for v in p.vertices],
    }
