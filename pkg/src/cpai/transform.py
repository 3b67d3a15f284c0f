"""Monomial coordinate changes built from integer linear algebra.

A face of codimension k that satisfies the modified simple condition can
be moved onto the intersection of the last k coordinate hyperplanes by an
invertible integer matrix whose last k columns are the inward normals of
the facets containing the face.  This module builds such matrices
(unimodular whenever the normal lattice is saturated), applies them to
polynomials, and pushes projective directions through them.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from . import _intlinalg as ila
from ._intlinalg import hermite_normal_form
from .laurent import LaurentPolynomial, mul_monomial, substitute_monomial_map
from .polytope import modified_simple_test

__all__ = [
    "CompletionInfeasible",
    "StructuralWarning",
    "MonomialTransform",
    "hermite_normal_form",
    "unimodular_completion",
    "build_face_transform",
    "transform_polynomial",
    "pushforward_direction",
    "pullback_direction",
    "pure_axis_gaps",
    "reduce_to_full_dimension",
]


class CompletionInfeasible(ValueError):
    """No unimodular completion exists; carries the saturation index."""

    def __init__(self, saturation_index):
        super().__init__(
            "the given columns span a lattice of saturation index "
            f"{saturation_index}; no unimodular completion exists"
        )
        self.saturation_index = saturation_index


class StructuralWarning(UserWarning):
    """A transformed polynomial is missing a structurally expected term."""


def _greedy_standard_completion(cols):
    """Complete with standard basis vectors in ascending index order when
    that already yields a unimodular matrix; None otherwise."""
    d = len(cols[0])
    chosen = []
    for i in range(d):
        if len(chosen) == d - len(cols):
            break
        e = [1 if j == i else 0 for j in range(d)]
        trial = chosen + [e] + [list(c) for c in cols]
        if ila.rank_rational(trial) == len(trial):
            chosen.append(e)
    if len(chosen) != d - len(cols):
        return None
    N = ila.transpose(chosen + [list(c) for c in cols])
    if abs(ila.det_int(N)) != 1:
        return None
    return tuple(tuple(row) for row in N)


def unimodular_completion(cols):
    """A d x d unimodular integer matrix whose last k columns are ``cols``.

    The completion exists exactly when the lattice generated by the
    columns is saturated; otherwise CompletionInfeasible reports the
    saturation index.  Linearly dependent columns raise ValueError.
    Standard basis vectors are preferred for the free columns, so a face
    already aligned with the coordinate axes gets the identity matrix.
    """
    cols = [list(map(int, c)) for c in cols]
    k = len(cols)
    d = len(cols[0])
    if any(len(c) != d for c in cols):
        raise ValueError("columns of mixed dimension")
    if k > d:
        raise ValueError("more columns than the ambient dimension")
    greedy = _greedy_standard_completion(cols)
    if greedy is not None:
        return greedy
    # Row-reduce the columns: V C = [T; 0] with V unimodular, via the
    # column HNF of the transpose.
    H1, U1 = hermite_normal_form(cols)
    T_rows = [row[:k] for row in H1]
    index = abs(ila.det_int(T_rows))
    if index == 0:
        raise ValueError("columns are linearly dependent")
    if index != 1:
        raise CompletionInfeasible(index)
    u1_inv = [[int(v) for v in row] for row in ila.rational_inverse(U1)]
    v_inv = ila.transpose(u1_inv)
    T = ila.transpose(T_rows)
    block = [[0] * (d - k) + list(T[i]) for i in range(k)]
    block += [
        [1 if j == i else 0 for j in range(d - k)] + [0] * k
        for i in range(d - k)
    ]
    N = ila.matmul(v_inv, block)
    assert abs(ila.det_int(N)) == 1
    return tuple(tuple(row) for row in N)


def _invertible_completion(cols):
    """Fallback: extend the columns with standard basis vectors until the
    matrix is invertible (used when no unimodular completion exists)."""
    d = len(cols[0])
    chosen = []
    for i in range(d):
        e = [1 if j == i else 0 for j in range(d)]
        trial = chosen + [e] + [list(c) for c in cols]
        if ila.rank_rational(trial) == len(trial):
            chosen.append(e)
        if len(chosen) == d - len(cols):
            break
    matrix_cols = chosen + [list(c) for c in cols]
    N = ila.transpose(matrix_cols)
    assert ila.det_int(N) != 0
    return tuple(tuple(row) for row in N)


@dataclass(frozen=True)
class MonomialTransform:
    """Invertible integer change of torus coordinates attached to a face.

    The last ``codim`` columns of ``matrix`` are the inward normals of the
    facets containing the face.  ``inverse_transpose`` is exact and pulls
    transformed directions back to the original coordinates.
    """

    matrix: tuple
    face: object
    codim: int
    unimodular: bool
    inverse_transpose: tuple
    warnings: tuple = ()

    @property
    def dimension(self):
        return len(self.matrix)

    @property
    def matrix_transpose(self):
        return tuple(tuple(row) for row in ila.transpose(self.matrix))

    @classmethod
    def from_matrix(cls, matrix, face=None, codim=None, warnings=()):
        rows = tuple(tuple(int(v) for v in row) for row in matrix)
        det = ila.det_int(rows)
        if det == 0:
            raise ValueError("transform matrix is singular")
        inv_t = tuple(
            tuple(Fraction(v) for v in row)
            for row in ila.transpose(ila.rational_inverse(rows))
        )
        if codim is None:
            codim = face.codim if face is not None else len(rows)
        return cls(
            matrix=rows,
            face=face,
            codim=codim,
            unimodular=abs(det) == 1,
            inverse_transpose=inv_t,
            warnings=tuple(warnings),
        )


def build_face_transform(F):
    """Monomial transform for a face satisfying the modified simple test.

    The last k columns are the inward normals of the k facets containing
    F, in descending lexicographic order (so normals along coordinate
    axes appear in axis order).  When the normals span a saturated
    lattice the matrix is unimodular; otherwise any invertible completion
    is used and a sublattice caveat is attached to the transform.
    """
    if not modified_simple_test(F):
        raise ValueError(
            f"face {F.face_id} lies in {len(F.containing_facets)} facets but has "
            f"codimension {F.codim}; the modified simple condition fails"
        )
    normals = sorted((list(n) for n in F.inward_normals()), reverse=True)
    notes = []
    try:
        N = unimodular_completion(normals)
    except CompletionInfeasible as exc:
        N = _invertible_completion(normals)
        notes.append(
            "no unimodular completion (saturation index "
            f"{exc.saturation_index}); transformed exponents lie in a proper "
            "sublattice"
        )
    return MonomialTransform.from_matrix(N, face=F, codim=F.codim, warnings=notes)


def transform_polynomial(H, anchor, T):
    """Shift the anchor vertex to the origin and change coordinates.

    Returns the polynomial whose exponents are N^T (m - anchor).  The
    result must have a constant term and no negative powers of the last k
    variables; each of those variables should also appear alone in some
    term, and a StructuralWarning is emitted for every variable that does
    not (the transformed face then does not pin that coordinate to zero).
    """
    anchor = tuple(int(v) for v in anchor)
    if anchor not in set(H.support()):
        raise ValueError("anchor must be an exponent of the polynomial")
    shifted = mul_monomial(H, tuple(-v for v in anchor))
    hbar = substitute_monomial_map(shifted, T.matrix)
    d = T.dimension
    k = T.codim
    if (0,) * d not in set(hbar.support()):
        raise ValueError("transformed polynomial lost its constant term")
    for m in hbar.support():
        if any(m[d - k + j] < 0 for j in range(k)):
            raise ValueError(
                "transformed polynomial has negative powers of the last "
                f"{k} variables; the transform does not match the face"
            )
    for j in pure_axis_gaps(hbar, k):
        warnings.warn(
            f"no term involving y_{j} alone: coordinate {d - k + j} is not "
            "forced to zero at the transformed face",
            StructuralWarning,
            stacklevel=2,
        )
    return hbar


def pure_axis_gaps(hbar, k):
    """Indices j (1-based, within the last k variables) with no term that
    touches y_j alone among the last k variables."""
    d = hbar.dimension
    gaps = []
    for j in range(1, k + 1):
        col = d - k + j - 1
        found = any(
            m[col] > 0
            and all(m[d - k + jj] == 0 for jj in range(k) if d - k + jj != col)
            for m in hbar.support()
        )
        if not found:
            gaps.append(j)
    return gaps


def pushforward_direction(T, direction):
    """Image of a projective direction under the transform: N^T r."""
    if not any(complex(v) != 0 for v in direction):
        raise ValueError("zero vector has no projective direction")
    nt = T.matrix_transpose
    return tuple(
        sum(nt[i][j] * complex(direction[j]) for j in range(T.dimension))
        for i in range(T.dimension)
    )


def pullback_direction(T, direction):
    """Preimage of a projective direction: (N^T)^{-1} r, exact matrix."""
    inv = T.inverse_transpose
    return tuple(
        sum(float(inv[i][j]) * complex(direction[j]) for j in range(T.dimension))
        for i in range(T.dimension)
    )


def reduce_to_full_dimension(H):
    """Change coordinates so the Newton polytope becomes full-dimensional.

    Returns (H, None) when no reduction is needed.  Otherwise returns
    (H_reduced, info) where H_reduced lives in g = dim(Newton polytope)
    variables and info records the anchor exponent and the saturated
    integer basis: original exponents are anchor + coords . basis.
    """
    support = H.support()
    if not support:
        raise ValueError("the zero polynomial cannot be reduced")
    d = H.dimension
    anchor = support[0]
    diffs = [[m[i] - anchor[i] for i in range(d)] for m in support[1:]]
    basis = ila.saturate_rows(diffs)
    g = len(basis)
    if g == d:
        return H, None
    if g == 0:
        raise ValueError("a single monomial has a point Newton polytope")
    cols = [list(col) for col in zip(*basis)]
    terms = {}
    for m, c in H.terms():
        rhs = [m[i] - anchor[i] for i in range(d)]
        coords = ila.solve_rational(cols, rhs)
        terms[tuple(int(v) for v in coords)] = c
    info = {
        "anchor": anchor,
        "basis": tuple(tuple(b) for b in basis),
    }
    return LaurentPolynomial(g, terms), info
