"""Numeric witness-curve harness.

Parameterized curves on the variety give concrete sequences approaching
points at infinity.  Sampling the log-gradient and the height function
along a curve, with geometric step shrinking and extrapolation, produces
numeric limits that cross-check the symbolic face verdicts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from ._projective import chordal_distance, distance_to_subspace, normalize
from .laurent import (
    LaurentPolynomial,
    evaluate,
    log_gradient,
    mul_monomial,
    parse,
)
from .toric import UnrealizableSupportError, classify_support, phi

__all__ = [
    "WitnessCurve",
    "ConvergenceEstimate",
    "witness_curve",
    "curves_from_json",
    "curve_point",
    "verify_on_variety",
    "default_schedule",
    "sample_limits",
    "paraboloid_probe",
    "cross_check",
]

DEFAULT_T0 = 0.125
DEFAULT_STEPS = 41
DEFAULT_CONV_TOL = 1e-7
DEFAULT_DECAY = 0.9


@dataclass(frozen=True)
class WitnessCurve:
    """Curve t -> (c_1(t), ..., c_d(t)) with Laurent-polynomial coordinates.

    Laurent-polynomial coordinates keep the on-variety check exact; curves
    that only admit rational or series parameterizations can be passed to
    the samplers as plain callables instead.
    """

    coordinate_maps: tuple
    label: str = ""

    @property
    def dimension(self):
        return len(self.coordinate_maps)

    def __call__(self, t):
        return tuple(evaluate(c, (t,)) for c in self.coordinate_maps)


def witness_curve(texts, label=""):
    """Build a curve from coordinate expressions in the parameter t."""
    maps = tuple(parse(text, ["t"]) for text in texts)
    if any(m.is_zero for m in maps):
        raise ValueError("curve coordinates must be nonzero polynomials")
    return WitnessCurve(coordinate_maps=maps, label=label or ",".join(texts))


def curves_from_json(data):
    """Parse curve specifications from a JSON object or list.

    Format: {"vars": [...], "maps": ["1+t", "t", "t+t^2"], "r": [-2,-1,1]}
    or {"curves": [...]} with a list of such objects.  Returns a list of
    (curve, direction-or-None) pairs.
    """
    if isinstance(data, str):
        data = json.loads(data)
    entries = data["curves"] if isinstance(data, dict) and "curves" in data else data
    if isinstance(entries, dict):
        entries = [entries]
    out = []
    for entry in entries:
        curve = witness_curve(entry["maps"], label=entry.get("label", ""))
        r = entry.get("r")
        out.append((curve, tuple(r) if r is not None else None))
    return out


def curve_point(curve, t):
    return curve(t)


def verify_on_variety(H, curve):
    """Exact check that the composition of H with the curve vanishes.

    Negative exponents of H are cleared by a monomial factor first, which
    does not change vanishing since the coordinate maps are nonzero.
    """
    if curve.dimension != H.dimension:
        raise ValueError("curve dimension does not match the polynomial")
    shift = tuple(
        max(0, -min(m[i] for m in H.support())) for i in range(H.dimension)
    )
    cleared = mul_monomial(H, shift)
    total = LaurentPolynomial.zero(1)
    for m, c in cleared.terms():
        term = LaurentPolynomial.constant(1, c)
        for cm, e in zip(curve.coordinate_maps, m):
            term = term * cm**e
        total = total + term
    return total.is_zero


def default_schedule(t0=DEFAULT_T0, steps=DEFAULT_STEPS):
    return tuple(t0 * 2.0**-j for j in range(steps))


@dataclass(frozen=True)
class ConvergenceEstimate:
    """Extrapolated limits along one curve.

    status / height_status: "converged", "divergent", or "inconclusive".
    samples hold (t, direction, height) rows at strictly decreasing t.
    confidence carries the geometric-decay diagnostics behind the verdict.
    """

    projective_limit: tuple
    status: str
    height_limit: object
    height_status: str
    samples: tuple
    confidence: dict
    notes: tuple = ()

    def to_json(self):
        return {
            "projective_limit": [
                [complex(v).real, complex(v).imag] for v in self.projective_limit
            ]
            if self.projective_limit is not None
            else None,
            "status": self.status,
            "height_limit": self.height_limit,
            "height_status": self.height_status,
            "confidence": self.confidence,
            "notes": list(self.notes),
            "samples": len(self.samples),
        }


def _aitken(values):
    """One Aitken delta-squared step on the last three values."""
    v0, v1, v2 = values[-3], values[-2], values[-1]
    denom = (v2 - v1) - (v1 - v0)
    if abs(denom) < 1e-300:
        return v2
    return v2 - (v2 - v1) ** 2 / denom


def _extrapolate_directions(directions):
    """Componentwise Aitken extrapolation of canonical representatives."""
    pivot = int(np.argmax(np.abs(np.asarray(directions[-1]))))
    aligned = []
    for v in directions[-3:]:
        v = np.asarray(v, dtype=complex)
        if abs(v[pivot]) < 1e-14:
            return directions[-1]
        aligned.append(v / v[pivot])
    est = np.array(
        [_aitken([a[i] for a in aligned]) for i in range(len(aligned[0]))]
    )
    return tuple(est)


def sample_limits(
    H,
    curve,
    r=None,
    t_schedule=None,
    tol_conv=DEFAULT_CONV_TOL,
    decay=DEFAULT_DECAY,
):
    """Sample the log-gradient direction and height along a curve.

    The curve may be a WitnessCurve or any callable t -> point.  At each t
    the log-gradient is normalized to its canonical projective
    representative; the height -sum(r_i log|z_i|) is recorded when a
    direction r is supplied.  Limits are accepted only when the tail
    samples sit within tol_conv of the extrapolated value and successive
    distances decay geometrically.
    """
    if t_schedule is None:
        t_schedule = default_schedule()
    lg = log_gradient(H)
    notes = []
    samples = []
    for t in t_schedule:
        z = curve(t)
        if any(v == 0 for v in z):
            notes.append(f"skipped t={t!r}: zero coordinate on the curve")
            continue
        values = [evaluate(g, z) for g in lg]
        if not any(values):
            notes.append(f"skipped t={t!r}: zero log-gradient")
            continue
        direction = normalize(values)
        height = None
        if r is not None:
            height = -sum(
                float(ri) * math.log(abs(zi)) for ri, zi in zip(r, z)
            )
        samples.append((t, direction, height))

    if len(samples) < 6:
        return ConvergenceEstimate(
            projective_limit=None,
            status="inconclusive",
            height_limit=None,
            height_status="inconclusive",
            samples=tuple(samples),
            confidence={"reason": "fewer than six usable samples"},
            notes=tuple(notes),
        )

    directions = [s[1] for s in samples]
    limit = _extrapolate_directions(directions)
    tail = [chordal_distance(v, limit) for v in directions[-5:]]
    ratios = [
        tail[i + 1] / tail[i] for i in range(len(tail) - 1) if tail[i] > 1e-14
    ]
    dir_converged = max(tail) <= tol_conv and all(q < decay for q in ratios)
    status = "converged" if dir_converged else "inconclusive"
    confidence = {
        "direction_tail": tail,
        "direction_decay": max(ratios) if ratios else 0.0,
    }

    height_limit = None
    height_status = "inconclusive"
    if r is not None:
        heights = [s[2] for s in samples]
        h_est = _aitken(heights)
        h_tail = [abs(h - h_est) for h in heights[-5:]]
        h_ratios = [
            h_tail[i + 1] / h_tail[i]
            for i in range(len(h_tail) - 1)
            if h_tail[i] > 1e-14
        ]
        growing = all(
            abs(heights[i + 1]) > abs(heights[i]) + 0.01
            for i in range(len(heights) - 6, len(heights) - 1)
        )
        if max(h_tail) <= max(tol_conv, 1e-9 * max(1.0, abs(h_est))) and all(
            q < decay for q in h_ratios
        ):
            height_limit = float(h_est.real if isinstance(h_est, complex) else h_est)
            height_status = "converged"
        elif growing:
            height_status = "divergent"
        confidence["height_tail"] = h_tail
    return ConvergenceEstimate(
        projective_limit=tuple(limit) if dir_converged else normalize(directions[-1]),
        status=status,
        height_limit=height_limit,
        height_status=height_status,
        samples=tuple(samples),
        confidence=confidence,
        notes=tuple(notes),
    )


def paraboloid_probe(H, center=(1, 1), t_schedule=None):
    """Limits along the two axis curves through a base-facet singularity.

    Expects a three-variable polynomial that is linear in the last
    variable, so the last coordinate solves the variety equation exactly
    on each axis line through the center and both curves stay
    Laurent-polynomial.  The two limits differ, demonstrating that the
    direction map has no continuous extension to the singular point.
    """
    if H.dimension != 3:
        raise ValueError("the axis probe expects three variables")
    from .laurent import GaussianRational

    a = GaussianRational(center[0])
    b = GaussianRational(center[1])
    estimates = []
    for fixed_first in (True, False):
        fixed_val = a if fixed_first else b
        base_val = b if fixed_first else a
        moving = LaurentPolynomial(1, {(0,): base_val, (1,): 1})
        A = LaurentPolynomial.zero(1)
        B = LaurentPolynomial.zero(1)
        for m, c in H.terms():
            if m[2] not in (0, 1):
                raise ValueError("polynomial must be linear in the last variable")
            fixed_exp = m[0] if fixed_first else m[1]
            move_exp = m[1] if fixed_first else m[0]
            if move_exp < 0:
                raise ValueError(
                    "negative powers of the moving variable are not supported"
                )
            poly = moving**move_exp * (c * fixed_val**fixed_exp)
            if m[2] == 0:
                A = A + poly
            else:
                B = B + poly
        z_map = -A / B
        const = LaurentPolynomial.constant(1, fixed_val)
        maps = (const, moving, z_map) if fixed_first else (moving, const, z_map)
        curve = WitnessCurve(
            coordinate_maps=maps,
            label="first coordinate fixed" if fixed_first else
            "second coordinate fixed",
        )
        estimates.append(sample_limits(H, curve, t_schedule=t_schedule))
    return tuple(estimates)


def cross_check(report, curves, tol=1e-5, t_schedule=None):
    """Compare curve limits against the report's face verdicts.

    Each curve's projective limit must lie in the direction set of the
    face its image converges to; every violation is returned as one
    discrepancy record.
    """
    H = report.polynomial
    Q = report.scaled
    discrepancies = []
    estimates = []
    for idx, item in enumerate(curves):
        curve, r = item if isinstance(item, tuple) else (item, None)
        label = getattr(curve, "label", "") or f"curve {idx}"
        if isinstance(curve, WitnessCurve) and not verify_on_variety(H, curve):
            discrepancies.append(
                {"curve": label, "kind": "off_variety",
                 "detail": "curve does not lie on the zero set"}
            )
            estimates.append(None)
            continue
        est = sample_limits(H, curve, r=r, t_schedule=t_schedule)
        estimates.append(est)
        if est.status != "converged":
            discrepancies.append(
                {"curve": label, "kind": "no_limit",
                 "detail": "direction samples did not converge"}
            )
            continue
        face = _face_of_curve(Q, curve)
        if face is None:
            discrepancies.append(
                {"curve": label, "kind": "no_face",
                 "detail": "could not classify the limiting support pattern"}
            )
            continue
        try:
            verdict = report.verdict_for(face.face_id)
        except KeyError:
            discrepancies.append(
                {"curve": label, "kind": "no_verdict",
                 "detail": f"face {face.face_id} (dim {face.dim}) has no verdict"}
            )
            continue
        if verdict.directions.kind == "undetermined":
            continue
        dist = distance_to_subspace(est.projective_limit, verdict.directions.basis)
        if dist > tol:
            discrepancies.append(
                {
                    "curve": label,
                    "kind": "direction_outside_set",
                    "detail": (
                        f"limit is {dist:.3e} from the face {face.face_id} "
                        "direction set"
                    ),
                }
            )
    return discrepancies, estimates


def _face_of_curve(Q, curve, t_probe=2.0**-30, zero_tol=1e-6):
    """Classify which face at infinity the curve's image approaches."""
    z = curve(t_probe)
    if any(v == 0 for v in z):
        return None
    p = phi(Q, z)
    support = frozenset(
        j for j, v in enumerate(p) if abs(v) > zero_tol
    )
    try:
        return classify_support(Q, support)
    except UnrealizableSupportError:
        return None
