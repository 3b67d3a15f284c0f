"""Bookkeeping for the toric compactification of the torus.

The lattice points of the scaled Newton polytope Q define an embedding of
the torus into projective space.  Points at infinity live on faces of Q;
which Laurent monomials extend continuously to such a point, what their
values are, and how to invert the embedding are all decided here by exact
lattice computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._intlinalg import solve_integer, solve_rational
from ._projective import normalize
from .laurent import GaussianRational

__all__ = [
    "InfinityPoint",
    "LimitClass",
    "UnrealizableSupportError",
    "phi",
    "classify_support",
    "monomial_limit_class",
    "height_limit",
    "reconstruct_point",
    "integer_combination_in_face",
    "span_coordinates",
    "infinity_point",
]


class UnrealizableSupportError(ValueError):
    """The support pattern does not match any face interior."""


@dataclass(frozen=True)
class InfinityPoint:
    """A point in the interior of the face at infinity attached to a face.

    face_coordinates are the values of the span-basis monomials of the
    face; they determine every monomial value that extends continuously to
    the point.  Entries may be exact GaussianRationals or complex floats.
    """

    face: object
    face_coordinates: tuple
    support_pattern: frozenset

    def coordinate_complex(self):
        return tuple(complex(u) for u in self.face_coordinates)

    @property
    def is_exact(self):
        return all(
            isinstance(u, GaussianRational) for u in self.face_coordinates
        )


@dataclass(frozen=True)
class LimitClass:
    """Trichotomy for a monomial limit toward a point at infinity.

    Not every monomial converges or diverges for all sequences: outside
    the face span and its cone the behavior is sequence-dependent, which
    the explicit undetermined tag records.
    """

    kind: str  # "nonzero" | "zero" | "undetermined"
    value: object = None

    @classmethod
    def nonzero(cls, value):
        if not complex(value):
            raise ValueError("nonzero limit class needs a nonzero value")
        return cls("nonzero", value)

    @classmethod
    def zero(cls):
        return cls("zero", 0)

    @classmethod
    def undetermined(cls):
        return cls("undetermined", None)


def phi(Q, point):
    """Toric embedding: the vector of lattice-point monomials at a torus
    point, normalized so the maximum-modulus coordinate is 1."""
    point = [complex(z) for z in point]
    if any(z == 0 for z in point):
        raise ValueError("the toric embedding needs a torus point")
    values = []
    for m in Q.lattice_points():
        w = 1 + 0j
        for z, e in zip(point, m):
            if e:
                w *= z**e
        values.append(w)
    return normalize(values)


def classify_support(Q, support_pattern):
    """The unique face whose lattice points are exactly the support.

    Any realizable support pattern of a point of the compactification
    equals the full lattice-point index set of one face; anything else is
    rejected.
    """
    support = frozenset(int(i) for i in support_pattern)
    if not support:
        raise UnrealizableSupportError("empty support pattern")
    pts = Q.lattice_points()
    if max(support) >= len(pts) or min(support) < 0:
        raise UnrealizableSupportError("support index out of range")
    candidates = []
    for face in Q.face_lattice():
        idx = frozenset(Q.point_index(p) for p in face.lattice_points)
        if support <= idx:
            candidates.append((face.dim, face, idx))
    dim, face, idx = min(candidates, key=lambda t: t[0])
    if idx != support:
        raise UnrealizableSupportError(
            "support pattern is not the full lattice-point set of a face"
        )
    return face


def infinity_point(F, face_coordinates):
    """Build an InfinityPoint on the interior of F's face at infinity."""
    if len(face_coordinates) != len(F.span_basis):
        raise ValueError("one coordinate per span-basis vector is required")
    if any(not complex(u) for u in face_coordinates):
        raise ValueError("face coordinates must be nonzero")
    Q = F.polytope
    support = frozenset(Q.point_index(p) for p in F.lattice_points)
    return InfinityPoint(
        face=F, face_coordinates=tuple(face_coordinates), support_pattern=support
    )


def span_coordinates(F, vector):
    """Coordinates of an integer vector in the face's span basis.

    Returns a tuple of ints when the vector lies in the integer span (the
    basis is saturated, so integrality is automatic for integer vectors of
    the rational span), and None when the vector is outside the span.
    """
    basis = F.span_basis
    vector = [int(v) for v in vector]
    if not basis:
        return () if not any(vector) else None
    cols = [list(col) for col in zip(*basis)]
    sol = solve_rational(cols, vector)
    if sol is None:
        return None
    assert all(v.denominator == 1 for v in sol), "span basis is not saturated"
    return tuple(int(v) for v in sol)


def _in_sigma_cone(F, vector):
    """Halfspace test for the cone of the face: nonnegative dot product
    with the inward normal of every facet containing the face."""
    return all(
        sum(n * x for n, x in zip(normal, vector)) >= 0
        for normal in F.inward_normals()
    )


def _power_product(coordinates, exponents):
    exact = all(isinstance(u, GaussianRational) for u in coordinates)
    if exact:
        out = GaussianRational(1)
        for u, a in zip(coordinates, exponents):
            out = out * u**a
        return out
    out = 1 + 0j
    for u, a in zip(coordinates, exponents):
        out *= complex(u) ** a
    return out


def monomial_limit_class(F, m, p):
    """Limit of the monomial z^m toward the infinity point p on face F.

    Monomials of the face span converge to nonzero values determined by
    the face coordinates; other monomials of the face cone converge to
    zero; everything else is sequence-dependent.
    """
    coords = span_coordinates(F, m)
    if coords is not None:
        return LimitClass.nonzero(_power_product(p.face_coordinates, coords))
    if _in_sigma_cone(F, m):
        return LimitClass.zero()
    return LimitClass.undetermined()


def height_limit(F, p, direction):
    """Limit of the height function h_r toward the infinity point p.

    Rational directions in the face span have a finite limit -log|p^r|
    (denominators cleared through positive real roots); directions in the
    cone but outside the span diverge with a definite sign; anything else
    is sequence-dependent, reported as None.
    """
    r = [Fraction(v) for v in direction]
    if not any(r):
        return 0.0
    lam = 1
    for f in r:
        lam = lam * f.denominator // math.gcd(lam, f.denominator)
    x = [int(f * lam) for f in r]
    coords = span_coordinates(F, x)
    if coords is not None:
        value = _power_product(p.face_coordinates, coords)
        if isinstance(value, GaussianRational):
            modulus_sq = float(value.norm2())
        else:
            modulus_sq = abs(value) ** 2
        return -0.5 * math.log(modulus_sq) / lam
    if _in_sigma_cone(F, x):
        return math.inf
    if _in_sigma_cone(F, [-v for v in x]):
        return -math.inf
    return None


def reconstruct_point(Q, projective_point):
    """Invert the toric embedding on a full-support projective point.

    Each torus coordinate is a product of powers of the projective
    coordinates with exponents summing to zero, so the answer ignores the
    projective scaling.  Normality of Q makes the integer solves feasible.
    """
    values = [complex(v) for v in projective_point]
    pts = Q.lattice_points()
    if len(values) != len(pts):
        raise ValueError("projective point length does not match lattice points")
    if any(v == 0 for v in values):
        raise ValueError("reconstruction needs full support")
    d = Q.ambient_dim
    out = []
    for i in range(d):
        rows = [[p[j] for p in pts] for j in range(d)]
        rows.append([1] * len(pts))
        rhs = [1 if j == i else 0 for j in range(d)] + [0]
        n = solve_integer(rows, rhs)
        if n is None:
            raise RuntimeError(
                "internal error: integer reconstruction infeasible on a "
                "normal full-dimensional polytope"
            )
        w = 1 + 0j
        for v, e in zip(values, n):
            if e:
                w *= v**e
        out.append(w)
    return tuple(out)


def integer_combination_in_face(F, x):
    """Certificate that x lies in the face's integer span: coefficients
    over the face's lattice points summing to zero with weighted exponent
    sum x.  Exact; raises when x is outside the integer span."""
    x = [int(v) for v in x]
    if span_coordinates(F, x) is None:
        raise ValueError("vector is not in the integer span of the face")
    pts = F.lattice_points
    d = F.polytope.ambient_dim
    rows = [[p[j] for p in pts] for j in range(d)]
    rows.append([1] * len(pts))
    rhs = list(x) + [0]
    n = solve_integer(rows, rhs)
    if n is None:
        raise RuntimeError(
            "internal error: no integer certificate although the vector is "
            "in the face span (is the polytope normal?)"
        )
    return tuple(n)
