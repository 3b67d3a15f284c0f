"""Exact lattice-polytope machinery for Newton polytopes.

Convex hulls, face lattices, inward facet normals, lattice-point
enumeration, the normality scaling, face span lattices and cones, and the
modified simple condition.  All arithmetic is integer or rational; no
tolerances appear anywhere in this module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ._intlinalg import (
    integer_kernel,
    primitive,
    rank_rational,
    saturate_rows,
    solve_rational,
)

__all__ = [
    "BudgetExceededError",
    "LatticePolytope",
    "FaceDescriptor",
    "ConeDescriptor",
    "newton_polytope",
    "scale_to_normal",
    "verify_normality",
    "lattice_points",
    "face_lattice",
    "sigma_cone",
    "cone_contains",
    "modified_simple_test",
]

DEFAULT_POINT_BUDGET = 100_000


class BudgetExceededError(RuntimeError):
    """Raised when an enumeration would exceed the configured point budget."""


def _affine_rank(points):
    points = list(points)
    if len(points) <= 1:
        return 0
    base = points[0]
    diffs = [[p[i] - base[i] for i in range(len(base))] for p in points[1:]]
    return rank_rational(diffs)


def _facet_halfspaces(points, d):
    """All facet halfspaces (primitive inward normal, offset) of the hull.

    Assumes the points affinely span R^d.  Every facet of the hull is
    spanned by d of the input points, so scanning d-subsets finds each one.
    """
    halfspaces = {}
    for subset in itertools.combinations(points, d):
        base = subset[0]
        diffs = [[p[i] - base[i] for i in range(d)] for p in subset[1:]]
        if not diffs:
            diffs = [[0] * d]
        kernel = integer_kernel(diffs)
        if len(kernel) != 1:
            continue
        normal = primitive(kernel[0])
        offset = sum(n * x for n, x in zip(normal, base))
        side = 0
        ok = True
        for p in points:
            v = sum(n * x for n, x in zip(normal, p)) - offset
            if v == 0:
                continue
            s = 1 if v > 0 else -1
            if side == 0:
                side = s
            elif side != s:
                ok = False
                break
        if not ok or side == 0:
            continue
        if side < 0:
            normal = tuple(-n for n in normal)
            offset = -offset
        halfspaces[normal] = offset
    return tuple(sorted(halfspaces.items()))


@dataclass(frozen=True, eq=False)
class FaceDescriptor:
    """One face of a lattice polytope, with its lattice data.

    span_basis is a canonical saturated basis of the integer points of the
    face's direction space, so integer vectors of that space always have
    integer coordinates in the basis.
    """

    polytope: "LatticePolytope"
    face_id: int
    dim: int
    tight_halfspace_indices: frozenset
    lattice_points: tuple
    vertices: tuple
    vertex_anchor: tuple
    span_basis: tuple
    containing_facets: tuple

    @property
    def codim(self):
        return self.polytope.dim - self.dim

    @property
    def is_proper(self):
        return self.dim < self.polytope.dim

    def inward_normals(self):
        """Inward normals of the facets containing this face."""
        return tuple(
            self.polytope.halfspaces[i][0] for i in self.containing_facets
        )

    def point_on_face(self, point):
        return tuple(point) in self._point_set

    @property
    def _point_set(self):
        return frozenset(self.lattice_points)

    def __repr__(self):
        return (
            f"FaceDescriptor(id={self.face_id}, dim={self.dim}, "
            f"vertices={list(self.vertices)})"
        )


@dataclass(frozen=True)
class ConeDescriptor:
    """Cone as lineality span plus nonnegative span of generators."""

    generators: tuple
    lineality_basis: tuple


class LatticePolytope:
    """Lattice polytope given by vertices and inward facet halfspaces.

    Only full-dimensional polytopes carry a halfspace description; lower
    dimensional hulls keep their vertices and a full_dim=False flag, and
    the caller is expected to change coordinates before face analysis.
    """

    def __init__(self, ambient_dim, vertices, halfspaces, dim):
        self.ambient_dim = ambient_dim
        self.vertices = tuple(sorted(tuple(map(int, v)) for v in vertices))
        self.halfspaces = tuple(
            (tuple(map(int, n)), int(c)) for n, c in halfspaces
        )
        self.dim = dim
        self._lattice_points = None
        self._faces = None

    @property
    def full_dim(self):
        return self.dim == self.ambient_dim

    @classmethod
    def from_points(cls, points):
        points = sorted({tuple(map(int, p)) for p in points})
        if not points:
            raise ValueError("cannot build a polytope from no points")
        d = len(points[0])
        if any(len(p) != d for p in points):
            raise ValueError("points of mixed dimension")
        adim = _affine_rank(points)
        if adim == d:
            halfspaces = _facet_halfspaces(points, d)
            vertices = _extreme_points(points, halfspaces, d)
            return cls(d, vertices, halfspaces, d)
        vertices = _extreme_points_degenerate(points, adim)
        return cls(d, vertices, (), adim)

    # -- basic geometry ---------------------------------------------------

    def contains(self, point):
        if not self.full_dim:
            raise ValueError("membership test needs a full-dimensional polytope")
        return all(
            sum(n * x for n, x in zip(normal, point)) >= offset
            for normal, offset in self.halfspaces
        )

    def tight_set(self, point):
        """Indices of the halfspaces tight at the point."""
        return frozenset(
            i
            for i, (normal, offset) in enumerate(self.halfspaces)
            if sum(n * x for n, x in zip(normal, point)) == offset
        )

    def scale(self, k):
        """The dilated polytope k * Q (same normals, scaled offsets)."""
        if k < 1:
            raise ValueError("scale factor must be a positive integer")
        return LatticePolytope(
            self.ambient_dim,
            [tuple(k * x for x in v) for v in self.vertices],
            [(n, k * c) for n, c in self.halfspaces],
            self.dim,
        )

    def bounding_box_size(self):
        lows = [min(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        highs = [max(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        size = 1
        for lo, hi in zip(lows, highs):
            size *= hi - lo + 1
        return size

    def lattice_points(self, budget=DEFAULT_POINT_BUDGET):
        """All integer points of the polytope, in ascending lexicographic
        order.  This order fixes the projective coordinate indexing used
        by the toric embedding."""
        if self._lattice_points is not None:
            return self._lattice_points
        if self.dim == 0:
            self._lattice_points = self.vertices
            return self._lattice_points
        if not self.full_dim:
            raise ValueError(
                "lattice point enumeration needs a full-dimensional polytope"
            )
        if self.bounding_box_size() > budget:
            raise BudgetExceededError(
                f"bounding box exceeds the point budget of {budget}"
            )
        lows = [min(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        highs = [max(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        ranges = [range(lo, hi + 1) for lo, hi in zip(lows, highs)]
        pts = tuple(
            p for p in itertools.product(*ranges) if self.contains(p)
        )
        self._lattice_points = pts
        return pts

    def point_index(self, point):
        """Index of a lattice point in the canonical enumeration."""
        return self.lattice_points().index(tuple(point))

    # -- face lattice -------------------------------------------------------

    def face_lattice(self):
        """All nonempty faces, the polytope itself included.

        Faces are returned sorted by (dim, vertex list); the position in
        this ordering is the face id used across reports.
        """
        if self._faces is not None:
            return self._faces
        if not self.full_dim:
            raise ValueError("face lattice needs a full-dimensional polytope")
        pts = self.lattice_points()
        tight = {p: self.tight_set(p) for p in pts}
        point_sets = {frozenset(pts)}
        for i in range(len(self.halfspaces)):
            s = frozenset(p for p in pts if i in tight[p])
            if s:
                point_sets.add(s)
        # Faces are exactly the intersections of facet subsets, so close
        # the facet point sets under pairwise intersection.
        frontier = set(point_sets)
        while frontier:
            fresh = set()
            for a in frontier:
                for b in point_sets:
                    c = a & b
                    if c and c not in point_sets and c not in fresh:
                        fresh.add(c)
            point_sets |= fresh
            frontier = fresh
        vertex_set = set(self.vertices)
        described = []
        for s in point_sets:
            face_pts = tuple(sorted(s))
            verts = tuple(v for v in face_pts if v in vertex_set)
            described.append((_affine_rank(face_pts), verts, face_pts))
        described.sort()
        faces = []
        for face_id, (dim, verts, face_pts) in enumerate(described):
            anchor = verts[0]
            diffs = [
                [p[i] - anchor[i] for i in range(self.ambient_dim)]
                for p in face_pts
                if p != anchor
            ]
            basis = tuple(tuple(b) for b in saturate_rows(diffs)) if diffs else ()
            tight_idx = frozenset.intersection(*(tight[p] for p in face_pts))
            faces.append(
                FaceDescriptor(
                    polytope=self,
                    face_id=face_id,
                    dim=dim,
                    tight_halfspace_indices=tight_idx,
                    lattice_points=face_pts,
                    vertices=verts,
                    vertex_anchor=anchor,
                    span_basis=basis,
                    containing_facets=tuple(sorted(tight_idx)),
                )
            )
        self._faces = tuple(faces)
        return self._faces

    def face_of_point(self, point):
        """The unique face whose relative interior contains the point."""
        t = self.tight_set(point)
        for face in self.face_lattice():
            if face.tight_halfspace_indices == t:
                return face
        raise ValueError(f"{point} is not in the polytope")

    def face_by_vertices(self, vertices):
        key = tuple(sorted(tuple(v) for v in vertices))
        for face in self.face_lattice():
            if face.vertices == key:
                return face
        raise ValueError("no face with those vertices")

    def __eq__(self, other):
        if not isinstance(other, LatticePolytope):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.vertices == other.vertices
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.vertices))

    def __repr__(self):
        return (
            f"LatticePolytope(dim={self.dim}/{self.ambient_dim}, "
            f"{len(self.vertices)} vertices)"
        )

    def face_lattice_json(self):
        return [
            {
                "face_id": f.face_id,
                "dim": f.dim,
                "codim": f.codim,
                "vertices": [list(v) for v in f.vertices],
                "lattice_points": [list(p) for p in f.lattice_points],
                "inward_normals": [list(n) for n in f.inward_normals()],
                "span_basis": [list(b) for b in f.span_basis],
            }
            for f in self.face_lattice()
        ]


def _extreme_points(points, halfspaces, d):
    """Vertices of a full-dimensional hull: points whose tight facet
    normals span the whole space."""
    vertices = []
    for p in points:
        normals = [
            n
            for n, c in halfspaces
            if sum(a * b for a, b in zip(n, p)) == c
        ]
        if len(normals) >= d and rank_rational(normals) == d:
            vertices.append(p)
    return vertices


def _extreme_points_degenerate(points, adim):
    """Vertices of a lower-dimensional hull via projection to a lattice
    basis of the affine span."""
    anchor = points[0]
    d = len(anchor)
    if adim == 0:
        return [anchor]
    diffs = [[p[i] - anchor[i] for i in range(d)] for p in points[1:]]
    basis = saturate_rows(diffs)
    projected = []
    for p in points:
        rhs = [p[i] - anchor[i] for i in range(d)]
        coords = solve_rational([list(col) for col in zip(*basis)], rhs)
        projected.append(tuple(int(c) for c in coords))
    inner = LatticePolytope.from_points(projected)
    keep = set(inner.vertices)
    return [p for p, q in zip(points, projected) if q in keep]


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------


def newton_polytope(H):
    """Convex hull of the exponent vectors of a nonzero Laurent polynomial.

    The hull may have dimension lower than the ambient one; it is then
    flagged via full_dim=False and face analysis refuses to run until a
    monomial change of coordinates reduces the dimension.
    """
    if H.is_zero:
        raise ValueError("the zero polynomial has no Newton polytope")
    return LatticePolytope.from_points(H.support())


def scale_to_normal(P):
    """Dilate P by kappa = max(1, d-1), which is always enough to make the
    result normal for a full-dimensional polytope in dimension d."""
    if not P.full_dim:
        raise ValueError("normality scaling needs a full-dimensional polytope")
    kappa = max(1, P.ambient_dim - 1)
    return P.scale(kappa), kappa


def lattice_points(Q, budget=DEFAULT_POINT_BUDGET):
    return Q.lattice_points(budget=budget)


def face_lattice(Q):
    return Q.face_lattice()


def verify_normality(Q, k_max, budget=DEFAULT_POINT_BUDGET):
    """Brute-force normality audit up to k_max.

    Checks that every lattice point of k*Q is a sum of k lattice points of
    Q, for 2 <= k <= k_max, using memoized sumsets.  Returns True or False
    accordingly, or None when k_max*Q exceeds the point budget, which is an
    explicit "unverified" outcome distinct from a failure.
    """
    if k_max < 1:
        raise ValueError("k_max must be positive")
    if Q.scale(max(k_max, 1)).bounding_box_size() > budget:
        return None
    base = set(Q.lattice_points(budget=budget))
    sums = set(base)
    for k in range(2, k_max + 1):
        sums = {
            tuple(a + b for a, b in zip(s, p)) for s in sums for p in base
        }
        target = Q.scale(k).lattice_points(budget=budget)
        if not set(target) <= sums:
            return False
    return True


def sigma_cone(F):
    """The cone of directions from the face F into its polytope.

    Lineality is the span of F; one generator is contributed by each face
    one dimension higher that contains F (those faces correspond to the
    extreme rays of the pointed quotient cone).
    """
    Q = F.polytope
    anchor = F.vertex_anchor
    fset = F._point_set
    generators = []
    for G in Q.face_lattice():
        if G.dim != F.dim + 1 or not fset <= G._point_set:
            continue
        outside = [v for v in G.vertices if v not in fset]
        m = min(outside)
        generators.append(primitive([a - b for a, b in zip(m, anchor)]))
    return ConeDescriptor(
        generators=tuple(sorted(generators)),
        lineality_basis=F.span_basis,
    )


def cone_contains(cone, vector):
    """Exact membership test: vector in lineality span + nonneg span.

    Rewrites the cone as the conic hull of the generators together with
    both signs of the lineality basis, then scans linearly independent
    subsets of size at most d (enough by Caratheodory) for a nonnegative
    representation.
    """
    rays = [list(g) for g in cone.generators]
    for b in cone.lineality_basis:
        rays.append(list(b))
        rays.append([-v for v in b])
    if not rays:
        return not any(vector)
    d = len(vector)
    if not any(vector):
        return True
    for size in range(1, min(d, len(rays)) + 1):
        for subset in itertools.combinations(range(len(rays)), size):
            cols = [[rays[j][i] for j in subset] for i in range(d)]
            if rank_rational([[rays[j][i] for i in range(d)] for j in subset]) != size:
                continue
            sol = solve_rational(cols, list(vector))
            if sol is not None and all(v >= 0 for v in sol):
                return True
    return False


def modified_simple_test(F):
    """True when the proper face F lies in exactly codim(F) facets."""
    if not F.is_proper:
        raise ValueError("the modified simple condition applies to proper faces")
    return len(F.containing_facets) == F.codim
