"""Dense univariate polynomials over the Gaussian rationals.

Supports the exact gcd and resultant computations behind the face
singularity solver: Euclidean gcd in one variable, Bareiss determinants of
Sylvester matrices with polynomial entries for bivariate elimination, and
numeric root extraction with exact snapping of rational roots.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .laurent import GaussianRational

_ZERO = GaussianRational(0)
_ONE = GaussianRational(1)


class UniPoly:
    """Polynomial sum c_k u^k with exact Gaussian-rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cleaned = [c if isinstance(c, GaussianRational) else GaussianRational(c)
                   for c in coeffs]
        while cleaned and not cleaned[-1]:
            cleaned.pop()
        object.__setattr__(self, "coeffs", tuple(cleaned))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls((_ONE,))

    @classmethod
    def monomial(cls, degree, coeff=_ONE):
        return cls((_ZERO,) * degree + (coeff,))

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -1

    @property
    def leading(self):
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly(out)

    def __neg__(self):
        return UniPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return UniPoly(tuple(c * other for c in self.coeffs))
        if self.is_zero or other.is_zero:
            return UniPoly()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    def __divmod__(self, other):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly(), self
        quo = [_ZERO] * (dq + 1)
        lead = other.leading
        for k in range(dq, -1, -1):
            top = rem[k + other.degree]
            if not top:
                continue
            f = top / lead
            quo[k] = f
            for j, c in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - f * c
        return UniPoly(quo), UniPoly(rem)

    def __floordiv__(self, other):
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ValueError("inexact polynomial division")
        return q

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        if self.is_zero:
            return self
        inv = _ONE / self.leading
        return self * inv

    def derivative(self):
        return UniPoly(tuple(c * k for k, c in enumerate(self.coeffs) if k))

    def shift_down(self):
        """Strip the lowest power-of-u factors (roots at zero removed)."""
        k = 0
        while k < len(self.coeffs) and not self.coeffs[k]:
            k += 1
        return UniPoly(self.coeffs[k:]), k

    def __call__(self, value):
        if isinstance(value, GaussianRational):
            out = GaussianRational(0)
            for c in reversed(self.coeffs):
                out = out * value + c
            return out
        out = 0j
        z = complex(value)
        for c in reversed(self.coeffs):
            out = out * z + complex(c)
        return out

    def to_complex(self):
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    def __repr__(self):
        return f"UniPoly({[str(c) for c in self.coeffs]})"


def poly_gcd(a, b):
    """Monic gcd over the Gaussian rationals (Euclid, exact)."""
    while not b.is_zero:
        a, b = b, a % b
    if a.is_zero:
        return a
    return a.monic()


def from_laurent_univariate(H):
    """Clear negative powers of a one-variable Laurent polynomial.

    Returns the shifted ordinary polynomial; torus zeros are unchanged.
    """
    if H.dimension != 1:
        raise ValueError("expected a univariate Laurent polynomial")
    if H.is_zero:
        return UniPoly()
    exps = [m[0] for m in H.support()]
    low = min(exps)
    size = max(exps) - low + 1
    coeffs = [_ZERO] * size
    for (e,), c in H.terms():
        coeffs[e - low] = c
    return UniPoly(coeffs)


def bareiss_determinant(rows):
    """Fraction-free determinant over any ring with exact floordiv
    (used with UniPoly entries for resultants)."""
    n = len(rows)
    if n == 0:
        return UniPoly.one()
    a = [list(r) for r in rows]
    sign = 1
    prev = None
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return a[0][0] - a[0][0]  # ring zero
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num if prev is None else num // prev
        prev = a[k][k]
    det = a[-1][-1]
    return -det if sign < 0 else det


def sylvester_resultant(f_coeffs, g_coeffs):
    """Resultant of two polynomials given by coefficient lists over a ring
    (entries may themselves be UniPoly, giving bivariate elimination)."""
    f = list(f_coeffs)
    g = list(g_coeffs)
    df = len(f) - 1
    dg = len(g) - 1
    if df < 0 or dg < 0:
        raise ValueError("resultant of the zero polynomial")
    n = df + dg
    if n == 0:
        return UniPoly.one() if isinstance(f[0], UniPoly) else _ONE
    zero = f[0] - f[0]
    rows = []
    for i in range(dg):
        row = [zero] * n
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        rows.append(row)
    for i in range(df):
        row = [zero] * n
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        rows.append(row)
    return bareiss_determinant(rows)


def try_snap(value, poly=None, max_denominator=10**6):
    """Snap a complex number to a nearby Gaussian rational when the given
    exact polynomial vanishes there; returns None if no exact root fits."""
    z = complex(value)
    re = Fraction(z.real).limit_denominator(max_denominator)
    im = Fraction(z.imag).limit_denominator(max_denominator)
    candidate = GaussianRational(re, im)
    if abs(complex(candidate) - z) > 1e-6:
        return None
    if poly is not None and poly(candidate):
        return None
    return candidate


def roots(poly, polish_steps=50, tol=1e-13):
    """Numeric roots of an exact polynomial, Newton-polished, with exact
    Gaussian-rational roots snapped back to exact values."""
    if poly.degree <= 0:
        return []
    c = poly.to_complex()
    raw = np.roots(c[::-1])
    deriv = poly.derivative()
    scale = max(1.0, float(np.abs(c).max()))
    out = []
    for z in raw:
        z = complex(z)
        for _ in range(polish_steps):
            fz = poly(z)
            dz = deriv(z)
            if abs(dz) < 1e-300:
                break
            step = fz / dz
            z -= step
            if abs(step) < tol * max(1.0, abs(z)):
                break
        snapped = try_snap(z, poly)
        out.append(snapped if snapped is not None else z)
    return out


def _is_exact_point(p):
    values = p if isinstance(p, tuple) else (p,)
    return all(isinstance(v, GaussianRational) for v in values)


def cluster(points, tol=1e-8):
    """Merge numerically coincident points; exact values win over floats."""
    kept = []
    for p in points:
        pc = np.array([complex(v) for v in (p if isinstance(p, tuple) else (p,))])
        for idx, q in enumerate(kept):
            qc = np.array([complex(v) for v in (q if isinstance(q, tuple) else (q,))])
            if np.linalg.norm(pc - qc) <= tol * max(1.0, np.linalg.norm(qc)):
                if _is_exact_point(p) and not _is_exact_point(q):
                    kept[idx] = p
                break
        else:
            kept.append(p)
    return kept
