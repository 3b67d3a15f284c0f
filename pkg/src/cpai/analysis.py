"""Per-face analysis of critical points at infinity.

For each proper positive-dimensional face of the scaled Newton polytope:
decide whether the face polynomial has torus singularities (the generic
test), and either conclude that limiting log-gradient directions are
parallel to the face and heighted, or run the Jacobian analysis at each
singular point to produce the codimension-1 space of possible directions.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import _unipoly as up
from ._intlinalg import solve_rational
from ._projective import distance_to_subspace, normalize
from .laurent import (
    GaussianRational,
    LaurentPolynomial,
    evaluate,
    evaluate_exact,
    gradient,
    log_gradient,
    to_text,
)
from .polytope import modified_simple_test, newton_polytope, scale_to_normal
from .toric import height_limit, infinity_point, span_coordinates
from .transform import (
    MonomialTransform,
    build_face_transform,
    pure_axis_gaps,
    transform_polynomial,
)

__all__ = [
    "DirectionSet",
    "SingularPointRecord",
    "FaceVerdict",
    "CpaiReport",
    "face_polynomial",
    "face_singularities",
    "generic_analysis",
    "nongeneric_analysis",
    "analyze",
    "rescaled_limit_direction",
    "jacobian_fd_error",
    "HEIGHTED_ALL",
    "HEIGHTED_CURVE_DEPENDENT",
    "HEIGHTED_UNDETERMINED",
]

HEIGHTED_ALL = "AllHeighted"
HEIGHTED_CURVE_DEPENDENT = "CurveDependent"
HEIGHTED_UNDETERMINED = "Undetermined"

DEFAULT_RANK_TOL = 1e-8


@dataclass(frozen=True)
class DirectionSet:
    """Possible CPAI directions attached to a face or a singular point.

    kind "face_parallel": directions parallel to the face, spanned by the
    given basis (a single projective direction when the face is an edge).
    kind "subspace": an explicit codimension-1 complex subspace.
    kind "undetermined": no conclusion; the reason says why.
    """

    kind: str
    basis: tuple = ()
    codim: int = None
    reason: str = ""

    @classmethod
    def face_parallel(cls, face):
        basis = tuple(tuple(complex(v) for v in b) for b in face.span_basis)
        return cls(
            kind="face_parallel",
            basis=basis,
            codim=face.polytope.ambient_dim - face.dim,
        )

    @classmethod
    def subspace(cls, basis, codim=1):
        return cls(
            kind="subspace",
            basis=tuple(tuple(complex(v) for v in b) for b in basis),
            codim=codim,
        )

    @classmethod
    def undetermined(cls, reason):
        return cls(kind="undetermined", reason=reason)

    @property
    def is_single(self):
        return self.kind == "face_parallel" and len(self.basis) == 1

    def contains(self, direction, tol=1e-8):
        if self.kind == "undetermined":
            return False
        return distance_to_subspace(direction, self.basis) <= tol

    def to_json(self):
        return {
            "kind": self.kind,
            "codim": self.codim,
            "basis": [_cvec_json(b) for b in self.basis],
            "reason": self.reason,
        }


@dataclass(frozen=True)
class SingularPointRecord:
    """One torus singularity of a face polynomial and its local analysis."""

    face_coordinates: tuple
    exact: bool
    transform: MonomialTransform
    limit_point: tuple
    gradient_at_limit: tuple
    jacobian: tuple
    directions: DirectionSet
    caveats: tuple = ()

    def to_json(self):
        return {
            "face_coordinates": [_c_json(u) for u in self.face_coordinates],
            "exact": self.exact,
            "matrix": [list(r) for r in self.transform.matrix],
            "unimodular": self.transform.unimodular,
            "limit_point": [_c_json(z) for z in self.limit_point],
            "gradient": [_c_json(g) for g in self.gradient_at_limit],
            "jacobian": [
                _cvec_json(row) for row in self.jacobian
            ] if self.jacobian else None,
            "directions": self.directions.to_json(),
            "caveats": list(self.caveats),
        }


@dataclass(frozen=True)
class FaceVerdict:
    """Verdict for one proper face of the scaled polytope."""

    face: object
    face_id: int
    dim: int
    codim: int
    generic: bool
    singular_points: tuple
    directions: DirectionSet
    heighted: str
    cvai: tuple
    caveats: tuple = ()

    def to_json(self):
        return {
            "face_id": self.face_id,
            "dim": self.dim,
            "codim": self.codim,
            "vertices": [list(v) for v in self.face.vertices]
            if self.face is not None
            else None,
            "generic": self.generic,
            "singular_points": [s.to_json() for s in self.singular_points],
            "direction_set": self.directions.to_json(),
            "heighted": self.heighted,
            "cvai": {key: value for key, value in self.cvai},
            "caveats": list(self.caveats),
        }


@dataclass(frozen=True)
class CpaiReport:
    """Full analysis output for one polynomial."""

    polynomial: LaurentPolynomial
    variables: tuple
    newton: object
    scaled: object
    kappa: int
    verdicts: tuple
    assumptions: tuple

    def verdict_for(self, face_id):
        for v in self.verdicts:
            if v.face_id == face_id:
                return v
        raise KeyError(f"no verdict for face {face_id}")

    def heightedness(self):
        kinds = {v.heighted for v in self.verdicts}
        if HEIGHTED_CURVE_DEPENDENT in kinds:
            return HEIGHTED_CURVE_DEPENDENT
        if HEIGHTED_UNDETERMINED in kinds:
            return HEIGHTED_UNDETERMINED
        return HEIGHTED_ALL

    def summary(self):
        directions = [
            {
                "face_id": v.face_id,
                "dim": v.dim,
                "codim": v.codim,
                "generic": v.generic,
                "direction_set": v.directions.to_json(),
            }
            for v in self.verdicts
        ]
        return {
            "cpai_directions": directions,
            "heightedness": self.heightedness(),
        }

    def to_json(self):
        return {
            "schema": "cpai.report.v1",
            "polynomial": to_text(self.polynomial, self.variables),
            "variables": list(self.variables),
            "newton_polytope": {
                "dim": self.newton.dim,
                "vertices": [list(v) for v in self.newton.vertices],
            },
            "kappa": self.kappa,
            "scaled_polytope": {
                "vertices": [list(v) for v in self.scaled.vertices],
            },
            "assumptions": list(self.assumptions),
            "faces": [v.to_json() for v in self.verdicts],
            "summary": self.summary(),
        }


def _c_json(value):
    z = complex(value)
    return [z.real, z.imag]


def _cvec_json(vec):
    return [_c_json(v) for v in vec]


# ---------------------------------------------------------------------------
# face polynomials and their torus singularities
# ---------------------------------------------------------------------------


def face_polynomial(H, F):
    """Terms of H supported on the face F, in span-basis coordinates.

    The anchor vertex maps to the origin, so the result is a Laurent
    polynomial in g = dim(F) variables with the same coefficients.
    """
    points = set(F.lattice_points)
    anchor = F.vertex_anchor
    g = max(1, F.dim)
    terms = {}
    found = False
    for m, c in H.terms():
        if m not in points:
            continue
        found = True
        coords = span_coordinates(F, [a - b for a, b in zip(m, anchor)])
        if coords is None:
            raise RuntimeError("face lattice point outside the face span")
        terms[coords if coords else (0,) * g] = c
    if not found:
        raise ValueError("no terms of the polynomial lie on the face")
    return LaurentPolynomial(g, terms)


def _univariate_singularities(h):
    """Exact torus singularities of a one-variable face polynomial."""
    p = up.from_laurent_univariate(h)
    p, _ = p.shift_down()
    if p.degree <= 0:
        return []
    common = up.poly_gcd(p, p.derivative())
    common, _ = common.shift_down()
    if common.degree <= 0:
        return []
    return [(r,) for r in up.roots(common)]


def _bivariate_polynomials(h):
    """Clear negative exponents and return (p, p_u, p_v) as exponent maps."""
    lows = [min(m[i] for m in h.support()) for i in range(2)]
    shifted = {
        (m[0] - lows[0], m[1] - lows[1]): c for m, c in h.terms()
    }
    p = LaurentPolynomial(2, shifted)
    return p, p.derivative(0), p.derivative(1)


def _as_unipoly_in_u(p):
    """Coefficient list of p in the first variable; entries are UniPoly in
    the second variable."""
    du = max(m[0] for m in p.support())
    dv = max(m[1] for m in p.support())
    coeffs = []
    for i in range(du + 1):
        col = [GaussianRational(0)] * (dv + 1)
        for (a, b), c in p.terms():
            if a == i:
                col[b] = c
        coeffs.append(up.UniPoly(col))
    while len(coeffs) > 1 and coeffs[-1].is_zero:
        coeffs.pop()
    return coeffs


def _newton_polish_2d(p, pu, pv, z, steps=60):
    """Gauss-Newton refinement of a common zero of (p, p_u, p_v)."""
    grads = {
        "p": (p.derivative(0), p.derivative(1)),
        "pu": (pu.derivative(0), pu.derivative(1)),
        "pv": (pv.derivative(0), pv.derivative(1)),
    }
    z = np.array([complex(v) for v in z])
    for _ in range(steps):
        residual = np.array(
            [evaluate(p, z), evaluate(pu, z), evaluate(pv, z)]
        )
        if np.abs(residual).max() < 1e-15:
            break
        jac = np.array(
            [
                [evaluate(grads["p"][0], z), evaluate(grads["p"][1], z)],
                [evaluate(grads["pu"][0], z), evaluate(grads["pu"][1], z)],
                [evaluate(grads["pv"][0], z), evaluate(grads["pv"][1], z)],
            ]
        )
        step, *_ = np.linalg.lstsq(jac, -residual, rcond=None)
        z = z + step
        if np.abs(step).max() < 1e-14 * max(1.0, np.abs(z).max()):
            break
    return tuple(z)


def _bivariate_singularities(h):
    """Torus singularities of a two-variable face polynomial.

    Exact resultant elimination produces candidate second coordinates;
    candidates are completed numerically, polished on all three residuals,
    cluster-merged, and snapped back to exact values when possible.
    Returns None when the singular locus is not zero-dimensional.
    """
    p, pu, pv = _bivariate_polynomials(h)
    f = _as_unipoly_in_u(p)
    fu = _as_unipoly_in_u(pu)
    if len(fu) == 1 and fu[0].is_zero:
        return None
    res = up.sylvester_resultant(f, fu)
    if isinstance(res, up.UniPoly):
        res_poly = res
    else:
        res_poly = up.UniPoly((res,))
    res_poly, _ = res_poly.shift_down()
    if res_poly.is_zero:
        return None
    if res_poly.degree == 0:
        return []
    candidates = []
    for v0 in up.roots(res_poly):
        v0c = complex(v0)
        if v0c == 0:
            continue
        # Roots of p(., v0) are the u-candidates over this v0.
        slice_coeffs = [c(v0c) for c in f]
        deg = len(slice_coeffs) - 1
        while deg > 0 and abs(slice_coeffs[deg]) < 1e-12:
            deg -= 1
        if deg <= 0:
            continue
        for u0 in np.roots(np.array(slice_coeffs[: deg + 1][::-1])):
            if u0 == 0:
                continue
            candidates.append((complex(u0), v0c))
    solutions = []
    scale = max(1.0, max(float(c.norm2()) ** 0.5 for _, c in p.terms()))
    for z in candidates:
        z = _newton_polish_2d(p, pu, pv, z)
        if any(abs(v) < 1e-10 for v in z):
            continue
        residual = max(
            abs(evaluate(p, z)), abs(evaluate(pu, z)), abs(evaluate(pv, z))
        )
        if residual > 1e-8 * scale:
            continue
        snapped = tuple(
            up.try_snap(v) if up.try_snap(v) is not None else v for v in z
        )
        if all(isinstance(v, GaussianRational) for v in snapped):
            if (
                evaluate_exact(p, snapped)
                or evaluate_exact(pu, snapped)
                or evaluate_exact(pv, snapped)
            ):
                snapped = z
        else:
            snapped = z
        solutions.append(
            snapped if isinstance(snapped, tuple) else tuple(snapped)
        )
    return up.cluster(solutions)


def face_singularities(H, F):
    """Torus singular points of the face polynomial of F.

    Empty list: the face passes the generic test.  None: undetermined
    (face dimension 3 or higher, or a positive-dimensional singular
    locus).  Solutions are exact Gaussian rationals when they snap.
    """
    g = F.dim
    if g < 1:
        raise ValueError("vertices have no witness sequences; dim must be >= 1")
    if g > 2:
        return None
    h = face_polynomial(H, F)
    if h.is_zero:
        raise ValueError("face polynomial is identically zero")
    if g == 1:
        return _univariate_singularities(h)
    return _bivariate_singularities(h)


def rescaled_limit_direction(H, F, face_coordinates):
    """Limit of the rescaled log-gradient at the infinity point with the
    given face coordinates: sum of c_m u^{a(m)} m over face terms."""
    points = set(F.lattice_points)
    anchor = F.vertex_anchor
    d = F.polytope.ambient_dim
    out = np.zeros(d, dtype=complex)
    coords_c = [complex(u) for u in face_coordinates]
    for m, c in H.terms():
        if m not in points:
            continue
        a = span_coordinates(F, [x - y for x, y in zip(m, anchor)])
        value = complex(c)
        for u, e in zip(coords_c, a):
            value *= u**e
        out += value * np.array(m, dtype=float)
    return tuple(out)


# ---------------------------------------------------------------------------
# non-generic Jacobian analysis
# ---------------------------------------------------------------------------


def _is_exact_vector(values):
    return all(isinstance(v, GaussianRational) for v in values)


def _eval_any(P, point):
    if _is_exact_vector(point):
        return evaluate_exact(P, point)
    return evaluate(P, point)


def _limit_point(F, T, ustar):
    """Limit of the first d-k transformed coordinates at the singular
    point, padded with zeros: exact when the transform is unimodular."""
    d = T.dimension
    k = T.codim
    inv_t = T.inverse_transpose
    caveats = []
    X = []
    for j in range(d - k):
        col = [Fraction(inv_t[i][j]) for i in range(d)]
        lam = 1
        for f in col:
            lam = lam * f.denominator // math.gcd(lam, f.denominator)
        x_int = [int(f * lam) for f in col]
        coords = span_coordinates(F, x_int)
        if coords is None:
            raise RuntimeError(
                "transformed coordinate monomial is outside the face span"
            )
        if _is_exact_vector(ustar):
            value = GaussianRational(1)
            for u, a in zip(ustar, coords):
                value = value * u**a
        else:
            value = 1 + 0j
            for u, a in zip(ustar, coords):
                value *= complex(u) ** a
        if lam > 1:
            value = np.exp(np.log(complex(value)) / lam)
            caveats.append(
                f"coordinate {j} required a degree-{lam} root; principal "
                "branch taken"
            )
        X.append(value)
    if _is_exact_vector(X):
        Z = tuple(X) + (GaussianRational(0),) * k
    else:
        Z = tuple(complex(v) for v in X) + (0j,) * k
    return Z, tuple(caveats)


def _unitary_frame(grad, d, k):
    """Unitary matrix whose first d-k columns are standard basis vectors,
    last column the normalized gradient, middle columns a deterministic
    orthonormal complement seeded from the remaining basis vectors."""
    g = np.asarray([complex(v) for v in grad])
    gn = g / np.linalg.norm(g)
    cols = [np.eye(d, dtype=complex)[:, j] for j in range(d - k)]
    middle = []
    for seed in range(d - k, d):
        if len(middle) == k - 1:
            break
        v = np.eye(d, dtype=complex)[:, seed].copy()
        for c in cols + middle + [gn]:
            v -= np.vdot(c, v) * c
        norm = np.linalg.norm(v)
        if norm > 1e-10:
            middle.append(v / norm)
    if len(middle) != k - 1:
        raise RuntimeError("failed to complete a unitary frame")
    return np.column_stack(cols + middle + [gn])


def _gaussian_rank(rows):
    """Exact rank of a matrix with GaussianRational entries."""
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for j in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][j]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = GaussianRational(1) / m[rank][j]
        m[rank] = [v * inv for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][j]:
                f = m[i][j]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def _log_jacobian_entries(Hbar):
    dH = [Hbar.derivative(i) for i in range(Hbar.dimension)]
    d2H = [[dH[i].derivative(j) for j in range(Hbar.dimension)] for i in
           range(Hbar.dimension)]
    return dH, d2H


def _exact_rank_on_variety(dH, d2H, Z, grad):
    """Exact rank of the log-gradient Jacobian restricted to the tangent
    space, available when the limit point is exact."""
    d = len(Z)
    D = [
        [
            (GaussianRational(1) if i == j else GaussianRational(0))
            * evaluate_exact(dH[i], Z)
            + Z[i] * evaluate_exact(d2H[i][j], Z)
            for j in range(d)
        ]
        for i in range(d)
    ]
    pivot = next(i for i in range(d) if grad[i])
    tangent = []
    for j in range(d):
        if j == pivot:
            continue
        w = [GaussianRational(0)] * d
        w[j] = GaussianRational(1)
        w[pivot] = -(grad[j].conjugate() / grad[pivot].conjugate())
        tangent.append(w)
    DW = [
        [sum((D[i][l] * w[l] for l in range(d)), GaussianRational(0))
         for w in tangent]
        for i in range(d)
    ]
    return _gaussian_rank(DW)


def nongeneric_analysis(H, F, ustar, rank_tol=DEFAULT_RANK_TOL):
    """Jacobian analysis at a face singularity.

    Builds the face transform, moves the singular point to an affine limit
    point Z, and when the variety is smooth there with a full-rank
    log-gradient Jacobian, returns the codimension-1 space of possible
    limiting directions (containing everything parallel to the face).
    """
    record, caveats = _nongeneric_point(H, F, ustar, rank_tol)
    directions = record.directions
    if directions.kind == "undetermined":
        heighted = HEIGHTED_UNDETERMINED
    elif F.codim == 1:
        heighted = HEIGHTED_ALL
    else:
        heighted = HEIGHTED_CURVE_DEPENDENT
    cvai = _cvai_entries(F, ustar)
    return FaceVerdict(
        face=F,
        face_id=F.face_id,
        dim=F.dim,
        codim=F.codim,
        generic=False,
        singular_points=(record,),
        directions=directions,
        heighted=heighted,
        cvai=cvai,
        caveats=caveats,
    )


def _cvai_entries(F, ustar):
    """Heights at the singular point for the span-basis directions."""
    if not F.span_basis:
        return ()
    point = infinity_point(F, ustar)
    entries = []
    for b in F.span_basis:
        value = height_limit(F, point, b)
        entries.append((",".join(str(v) for v in b), value))
    return tuple(entries)


def _nongeneric_point(H, F, ustar, rank_tol):
    T = build_face_transform(F)
    anchor = F.vertex_anchor
    d = T.dimension
    k = T.codim
    caveats = list(T.warnings)
    import warnings as _w

    with _w.catch_warnings(record=True) as caught:
        _w.simplefilter("always")
        Hbar = transform_polynomial(H, anchor, T)
    caveats.extend(str(c.message) for c in caught)
    Z, z_caveats = _limit_point(F, T, ustar)
    caveats.extend(z_caveats)
    exact = _is_exact_vector(Z)

    scale = max(1.0, max(float(c.norm2()) ** 0.5 for _, c in Hbar.terms()))
    log_grad = [_eval_any(g, Z) for g in log_gradient(Hbar)]
    if any(abs(complex(v)) > 1e-9 * scale for v in log_grad):
        # The rescaled limit does not actually vanish here: the limiting
        # direction is unique and parallel to the face.
        direction = _pullback(T, [complex(v) for v in log_grad])
        record = SingularPointRecord(
            face_coordinates=tuple(ustar),
            exact=exact,
            transform=T,
            limit_point=Z,
            gradient_at_limit=(),
            jacobian=(),
            directions=DirectionSet.subspace([direction], codim=d - 1),
            caveats=(
                "rescaled log-gradient limit is nonzero at this point; its "
                "single direction is reported",
            ),
        )
        return record, tuple(caveats)

    grad = [_eval_any(g, Z) for g in gradient(Hbar)]
    if all(abs(complex(v)) <= 1e-12 * scale for v in grad):
        record = SingularPointRecord(
            face_coordinates=tuple(ustar),
            exact=exact,
            transform=T,
            limit_point=Z,
            gradient_at_limit=tuple(grad),
            jacobian=(),
            directions=DirectionSet.undetermined(
                "gradient vanishes at the limit point; the variety is "
                "singular there and no conclusion is drawn"
            ),
            caveats=tuple(caveats),
        )
        return record, tuple(caveats)

    dH, d2H = _log_jacobian_entries(Hbar)
    Zc = np.array([complex(v) for v in Z])
    D = np.empty((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            entry = Zc[i] * complex(_eval_any(d2H[i][j], Z))
            if i == j:
                entry += complex(_eval_any(dH[i], Z))
            D[i, j] = entry
    B = _unitary_frame([complex(v) for v in grad], d, k)
    J = D @ B[:, : d - 1]

    if exact and all(isinstance(v, GaussianRational) for v in grad):
        rank = _exact_rank_on_variety(dH, d2H, Z, grad)
    else:
        sigma = np.linalg.svd(J, compute_uv=False)
        rank = int(np.sum(sigma > rank_tol * sigma.max())) if sigma.max() else 0

    if rank < d - 1:
        directions = DirectionSet.undetermined(
            f"log-gradient Jacobian has rank {rank} < {d - 1}; the space of "
            "limiting directions is not resolved by the first-order analysis"
        )
    else:
        pulled = [_pullback(T, J[:, j]) for j in range(d - 1)]
        directions = DirectionSet.subspace(pulled, codim=1)
        for b in F.span_basis:
            if distance_to_subspace(b, pulled) > 1e-8:
                caveats.append(
                    "face-parallel direction "
                    + str(list(b))
                    + " is unexpectedly far from the computed subspace"
                )
    record = SingularPointRecord(
        face_coordinates=tuple(ustar),
        exact=exact,
        transform=T,
        limit_point=Z,
        gradient_at_limit=tuple(grad),
        jacobian=tuple(tuple(row) for row in J),
        directions=directions,
        caveats=tuple(caveats),
    )
    return record, tuple(caveats)


def _pullback(T, vector):
    inv = T.inverse_transpose
    d = T.dimension
    return tuple(
        sum(float(inv[i][j]) * complex(vector[j]) for j in range(d))
        for i in range(d)
    )


def jacobian_fd_error(Hbar, Z, B, J, step=1e-5):
    """Largest relative deviation between J and central finite differences
    of the log-gradient along the implicit variety parameterization."""
    d = Hbar.dimension
    grads = [Hbar.derivative(i) for i in range(d)]
    Zc = np.array([complex(v) for v in Z])
    B = np.asarray(B, dtype=complex)
    normal = B[:, d - 1]

    def point_on_variety(w):
        # One-dimensional Newton refinement along the gradient direction.
        g = 0j
        for _ in range(60):
            z = Zc + B[:, : d - 1] @ w + g * normal
            value = evaluate(Hbar, z)
            slope = sum(
                complex(evaluate(gi, z)) * normal[i] for i, gi in enumerate(grads)
            )
            delta = value / slope
            g -= delta
            if abs(delta) < 1e-16:
                break
        return Zc + B[:, : d - 1] @ w + g * normal

    def log_grad_at(z):
        return np.array(
            [z[i] * complex(evaluate(grads[i], z)) for i in range(d)]
        )

    J = np.asarray(J, dtype=complex)
    scale = max(1.0, float(np.abs(J).max()))
    worst = 0.0
    for j in range(d - 1):
        w = np.zeros(d - 1, dtype=complex)
        w[j] = step
        plus = log_grad_at(point_on_variety(w))
        minus = log_grad_at(point_on_variety(-w))
        fd = (plus - minus) / (2 * step)
        worst = max(worst, float(np.abs(fd - J[:, j]).max()) / scale)
    return worst


# ---------------------------------------------------------------------------
# the generic verdict and the orchestrating engine
# ---------------------------------------------------------------------------


def generic_analysis(H, F):
    """Verdict for a face whose face polynomial is smooth on the torus:
    limiting directions are parallel to the face and every CPAI witnessed
    on it is heighted."""
    singular = face_singularities(H, F)
    if singular is None or singular:
        raise ValueError("generic analysis requires an empty singular set")
    return FaceVerdict(
        face=F,
        face_id=F.face_id,
        dim=F.dim,
        codim=F.codim,
        generic=True,
        singular_points=(),
        directions=DirectionSet.face_parallel(F),
        heighted=HEIGHTED_ALL,
        cvai=(),
        caveats=(),
    )


def _undetermined_verdict(F, reason):
    return FaceVerdict(
        face=F,
        face_id=F.face_id,
        dim=F.dim,
        codim=F.codim,
        generic=False,
        singular_points=(),
        directions=DirectionSet.undetermined(reason),
        heighted=HEIGHTED_UNDETERMINED,
        cvai=(),
        caveats=(reason,),
    )


def _analyze_face(H, F, rank_tol):
    if F.dim > 2:
        return _undetermined_verdict(
            F, "face dimension exceeds 2; the singular set is not computed"
        )
    singular = face_singularities(H, F)
    if singular is None:
        return _undetermined_verdict(
            F,
            "face polynomial has a positive-dimensional singular locus; "
            "no pointwise analysis applies",
        )
    if not singular:
        return generic_analysis(H, F)
    if not modified_simple_test(F):
        return _undetermined_verdict(
            F,
            f"face lies in {len(F.containing_facets)} facets but has "
            f"codimension {F.codim}; the modified simple condition fails",
        )
    verdicts = [
        nongeneric_analysis(H, F, u, rank_tol=rank_tol) for u in singular
    ]
    if len(verdicts) == 1:
        return verdicts[0]
    records = tuple(r for v in verdicts for r in v.singular_points)
    kinds = {v.directions.kind for v in verdicts}
    if kinds == {"subspace"}:
        bases = [v.directions.basis for v in verdicts]
        from ._projective import subspace_distance

        if all(subspace_distance(bases[0], b) <= 1e-8 for b in bases[1:]):
            directions = verdicts[0].directions
        else:
            directions = DirectionSet.undetermined(
                "distinct singular points yield different direction spaces; "
                "see the per-point records"
            )
    else:
        directions = DirectionSet.undetermined(
            "mixed outcomes across singular points; see the per-point records"
        )
    heighted_kinds = {v.heighted for v in verdicts}
    if HEIGHTED_CURVE_DEPENDENT in heighted_kinds:
        heighted = HEIGHTED_CURVE_DEPENDENT
    elif HEIGHTED_UNDETERMINED in heighted_kinds:
        heighted = HEIGHTED_UNDETERMINED
    else:
        heighted = HEIGHTED_ALL
    cvai = tuple(entry for v in verdicts for entry in v.cvai)
    caveats = tuple(c for v in verdicts for c in v.caveats)
    return FaceVerdict(
        face=F,
        face_id=F.face_id,
        dim=F.dim,
        codim=F.codim,
        generic=False,
        singular_points=records,
        directions=directions,
        heighted=heighted,
        cvai=cvai,
        caveats=caveats,
    )


def _face_pairs(P, Q, kappa):
    """Proper positive-dimensional faces of Q paired with the matching
    faces of P (vertices divided by kappa)."""
    pairs = []
    for FQ in Q.face_lattice():
        if not FQ.is_proper or FQ.dim < 1:
            continue
        verts = []
        for v in FQ.vertices:
            if any(x % kappa for x in v):
                raise RuntimeError("scaled vertex not divisible by kappa")
            verts.append(tuple(x // kappa for x in v))
        pairs.append((FQ, P.face_by_vertices(verts)))
    return pairs


def analyze(H, variables=None, rank_tol=DEFAULT_RANK_TOL, workers=None):
    """Full CPAI report for a Laurent polynomial with smooth torus zero set.

    Every proper face of the scaled Newton polytope with dimension at
    least one receives a verdict (sequences on the variety cannot converge
    to a vertex at infinity).  Smoothness of the variety on the torus is
    assumed, not checked.
    """
    if H.is_zero:
        raise ValueError("cannot analyze the zero polynomial")
    if len(H) == 1:
        raise ValueError("a single monomial has no zero set in the torus")
    P = newton_polytope(H)
    if not P.full_dim:
        raise ValueError(
            "Newton polytope is not full-dimensional; reduce the number of "
            "variables with a monomial change of coordinates first"
        )
    if variables is None:
        from .laurent import _default_variables

        variables = _default_variables(H.dimension)
    Q, kappa = scale_to_normal(P)
    pairs = _face_pairs(P, Q, kappa)

    def run(pair):
        FQ, FP = pair
        verdict = _analyze_face(H, FP, rank_tol)
        return replace(verdict, face=FQ, face_id=FQ.face_id)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(run, pairs))
    else:
        verdicts = [run(pair) for pair in pairs]
    verdicts.sort(key=lambda v: v.face_id)

    # A generic face whose closure meets a non-generic sub-face defers to
    # the sub-face for sequences that drift into the smaller face.
    by_id = {v.face_id: v for v in verdicts}
    final = []
    for v in verdicts:
        if v.generic:
            face_pts = set(v.face.lattice_points)
            notes = [
                f"closure contains non-generic face {w.face_id}"
                for w in verdicts
                if w.face_id != v.face_id
                and not w.generic
                and set(w.face.lattice_points) < face_pts
            ]
            if notes:
                v = replace(v, caveats=v.caveats + tuple(notes))
        final.append(v)

    return CpaiReport(
        polynomial=H,
        variables=tuple(variables),
        newton=P,
        scaled=Q,
        kappa=kappa,
        verdicts=tuple(final),
        assumptions=(
            "smoothness of the zero set in the torus is assumed, not checked",
        ),
    )
