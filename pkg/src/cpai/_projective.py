"""Projective-space numerics: canonical representatives, the chordal
metric, and subspace comparisons via principal angles."""

from __future__ import annotations

import numpy as np


def normalize(vector):
    """Canonical representative: divide by the maximum-modulus coordinate,
    ties broken by smallest index."""
    v = np.asarray(vector, dtype=complex)
    mags = np.abs(v)
    top = mags.max()
    if top == 0:
        raise ValueError("zero vector has no projective representative")
    pivot = int(np.argmax(mags >= top * (1 - 1e-15)))
    return tuple(v / v[pivot])


def chordal_distance(u, v):
    """Sine of the angle between the lines spanned by u and v.

    Computed as the residual of one unit vector against the other, which
    stays accurate down to machine precision for tiny angles.
    """
    a = np.asarray(u, dtype=complex)
    b = np.asarray(v, dtype=complex)
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ValueError("zero vector has no projective direction")
    a = a / na
    b = b / nb
    return float(np.linalg.norm(b - np.vdot(a, b) * a))


def orthonormal_basis(vectors):
    """Orthonormal basis (columns) of the span of the given vectors."""
    a = np.array(vectors, dtype=complex).T
    if a.size == 0:
        raise ValueError("no vectors given")
    q, r = np.linalg.qr(a)
    keep = np.abs(np.diag(r)) > 1e-12 * max(1.0, np.abs(r).max())
    return q[:, keep]


def distance_to_subspace(vector, basis):
    """Chordal distance from a direction to a subspace given by spanning
    vectors: the sine of the smallest angle to the subspace."""
    q = orthonormal_basis(basis)
    v = np.asarray(vector, dtype=complex)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("zero vector has no projective direction")
    v = v / n
    proj = q @ (q.conj().T @ v)
    return float(np.linalg.norm(v - proj))


def subspace_distance(basis_a, basis_b):
    """Largest principal-angle sine between two subspaces.

    Computed from orthogonal-complement residuals, which stays accurate
    for tiny angles.  Subspaces of different dimensions are at distance 1.
    """
    qa = orthonormal_basis(basis_a)
    qb = orthonormal_basis(basis_b)
    if qa.shape[1] != qb.shape[1]:
        return 1.0
    if qa.shape[1] == 0:
        return 0.0
    ra = qb - qa @ (qa.conj().T @ qb)
    rb = qa - qb @ (qb.conj().T @ qa)
    return float(
        max(np.linalg.svd(ra, compute_uv=False).max(),
            np.linalg.svd(rb, compute_uv=False).max())
    )


def contains_direction(basis, vector, tol):
    return distance_to_subspace(vector, basis) <= tol
