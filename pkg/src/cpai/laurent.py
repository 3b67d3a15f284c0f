"""Exact multivariate Laurent polynomials over the Gaussian rationals.

A Laurent polynomial is stored as a map from integer exponent vectors to
nonzero Gaussian-rational coefficients.  All calculus here (gradients,
log-gradients, monomial substitution) is exact; floating point enters only
through :func:`evaluate`.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = [
    "GaussianRational",
    "LaurentPolynomial",
    "ParseError",
    "parse",
    "to_text",
    "evaluate",
    "evaluate_exact",
    "gradient",
    "log_gradient",
    "mul_monomial",
    "substitute_monomial_map",
    "monomial_map_point",
]


class ParseError(ValueError):
    """Syntax or semantic error in polynomial text, with a position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_RationalLike = (int, Fraction)


class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            assert im == 0
            object.__setattr__(self, "re", re.re)
            object.__setattr__(self, "im", re.im)
            return
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, _RationalLike):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm2()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return GaussianRational(1) / self ** (-n)
        result = GaussianRational(1)
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structure --------------------------------------------------------

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm2(self):
        """Squared modulus, as an exact Fraction."""
        return self.re * self.re + self.im * self.im

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return _coeff_text(self, standalone=True)


_ZERO = GaussianRational(0)
_ONE = GaussianRational(1)
_I = GaussianRational(0, 1)


def _as_coefficient(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, _RationalLike):
        return GaussianRational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


class LaurentPolynomial:
    """Immutable Laurent polynomial in a fixed number of variables.

    Terms are held as a dict mapping exponent tuples (entries may be
    negative) to nonzero GaussianRational coefficients.  The zero
    polynomial has an empty term map.
    """

    __slots__ = ("dimension", "_terms")

    def __init__(self, dimension, terms=None):
        if dimension < 1:
            raise ValueError("dimension must be at least 1")
        object.__setattr__(self, "dimension", dimension)
        clean = {}
        for exponent, coeff in (terms or {}).items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != dimension:
                raise ValueError(
                    f"exponent {exponent} does not match dimension {dimension}"
                )
            coeff = _as_coefficient(coeff)
            if coeff:
                clean[exponent] = coeff
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPolynomial is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, dimension):
        return cls(dimension, {})

    @classmethod
    def constant(cls, dimension, value):
        return cls(dimension, {(0,) * dimension: _as_coefficient(value)})

    @classmethod
    def monomial(cls, dimension, exponent, coeff=1):
        return cls(dimension, {tuple(exponent): _as_coefficient(coeff)})

    @classmethod
    def variable(cls, dimension, index):
        e = [0] * dimension
        e[index] = 1
        return cls.monomial(dimension, e)

    # -- inspection -------------------------------------------------------

    @property
    def is_zero(self):
        return not self._terms

    def terms(self):
        """Terms in canonical (ascending lexicographic) exponent order."""
        return tuple(sorted(self._terms.items()))

    def support(self):
        return tuple(sorted(self._terms))

    def coefficient(self, exponent):
        return self._terms.get(tuple(exponent), _ZERO)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.dimension == other.dimension and self._terms == other._terms

    def __hash__(self):
        return hash((self.dimension, frozenset(self._terms.items())))

    def __repr__(self):
        return f"LaurentPolynomial({self.dimension}, {to_text(self)!r})"

    def __str__(self):
        return to_text(self)

    # -- ring operations --------------------------------------------------

    def _check_same_space(self, other):
        if self.dimension != other.dimension:
            raise ValueError("polynomials live in different variable counts")

    def __add__(self, other):
        if isinstance(other, _RationalLike + (GaussianRational,)):
            other = LaurentPolynomial.constant(self.dimension, other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        self._check_same_space(other)
        terms = dict(self._terms)
        for m, c in other._terms.items():
            s = terms.get(m, _ZERO) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return LaurentPolynomial(self.dimension, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(
            self.dimension, {m: -c for m, c in self._terms.items()}
        )

    def __sub__(self, other):
        return self + (-other if isinstance(other, LaurentPolynomial) else -_as_coefficient(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _RationalLike + (GaussianRational,)):
            c = _as_coefficient(other)
            if not c:
                return LaurentPolynomial.zero(self.dimension)
            return LaurentPolynomial(
                self.dimension, {m: co * c for m, co in self._terms.items()}
            )
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        self._check_same_space(other)
        terms = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = terms.get(m, _ZERO) + c1 * c2
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return LaurentPolynomial(self.dimension, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Exact division by a single-term (monomial) polynomial."""
        if isinstance(other, _RationalLike + (GaussianRational,)):
            c = _as_coefficient(other)
            if not c:
                raise ZeroDivisionError("division by zero")
            return self * (GaussianRational(1) / c)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        if len(other) != 1:
            raise ValueError("can only divide by a monomial")
        (m, c), = other._terms.items()
        return mul_monomial(self, tuple(-e for e in m), GaussianRational(1) / c)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if len(self) != 1:
                raise ValueError("negative power of a non-monomial")
            (m, c), = self._terms.items()
            return LaurentPolynomial.monomial(
                self.dimension, tuple(e * n for e in m), c ** n
            )
        result = LaurentPolynomial.constant(self.dimension, 1)
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self, index):
        """Exact partial derivative with respect to variable ``index``."""
        terms = {}
        for m, c in self._terms.items():
            if m[index] == 0:
                continue
            e = list(m)
            e[index] -= 1
            terms[tuple(e)] = c * m[index]
        return LaurentPolynomial(self.dimension, terms)


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------


def evaluate(H, point):
    """Evaluate H at a point with complex coordinates.

    Zero coordinates are allowed only where no negative exponent touches
    them; a zero coordinate raised to a negative power raises ValueError.
    """
    point = [complex(z) for z in point]
    if len(point) != H.dimension:
        raise ValueError("point dimension mismatch")
    total = 0j
    for m, c in H._terms.items():
        factor = complex(c)
        for z, e in zip(point, m):
            if e == 0:
                continue
            if z == 0:
                if e < 0:
                    raise ValueError("zero coordinate raised to a negative power")
                factor = 0j
                break
            factor *= z ** e
        total += factor
    return total


def evaluate_exact(H, point):
    """Evaluate H at a point with GaussianRational coordinates, exactly."""
    point = [_as_coefficient(z) for z in point]
    if len(point) != H.dimension:
        raise ValueError("point dimension mismatch")
    total = GaussianRational(0)
    for m, c in H._terms.items():
        factor = c
        for z, e in zip(point, m):
            if e == 0:
                continue
            if not z:
                if e < 0:
                    raise ValueError("zero coordinate raised to a negative power")
                factor = _ZERO
                break
            factor = factor * z ** e
        total = total + factor
    return total


def gradient(H):
    """Tuple of the d exact partial derivatives of H."""
    return tuple(H.derivative(i) for i in range(H.dimension))


def log_gradient(H):
    """The vector (z_1 dH/dz_1, ..., z_d dH/dz_d), exact.

    Component i keeps every exponent of H and scales each coefficient by
    that exponent's i-th entry.
    """
    out = []
    for i in range(H.dimension):
        terms = {}
        for m, c in H._terms.items():
            if m[i] != 0:
                terms[m] = c * m[i]
        out.append(LaurentPolynomial(H.dimension, terms))
    return tuple(out)


def mul_monomial(H, m, c=1):
    """Multiply H by c * z^m: shift every exponent by m, scale by c."""
    c = _as_coefficient(c)
    if not c:
        raise ValueError("monomial coefficient must be nonzero")
    m = tuple(int(e) for e in m)
    if len(m) != H.dimension:
        raise ValueError("exponent dimension mismatch")
    return LaurentPolynomial(
        H.dimension,
        {tuple(a + b for a, b in zip(e, m)): co * c for e, co in H._terms.items()},
    )


def _int_det(rows):
    # Bareiss fraction-free determinant of a small integer matrix.
    n = len(rows)
    a = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def substitute_monomial_map(H, matrix):
    """Apply the monomial substitution induced by an integer matrix N.

    The result equals H composed with the torus map whose i-th coordinate
    is the product of z_j^{N[i][j]}; every exponent vector m becomes N^T m.
    N must be invertible over the rationals.
    """
    rows = [tuple(int(v) for v in r) for r in matrix]
    d = H.dimension
    if len(rows) != d or any(len(r) != d for r in rows):
        raise ValueError("matrix must be square of the polynomial's dimension")
    if _int_det(rows) == 0:
        raise ValueError("singular substitution matrix")
    terms = {}
    for m, c in H._terms.items():
        new = tuple(sum(rows[i][j] * m[i] for i in range(d)) for j in range(d))
        s = terms.get(new, _ZERO) + c
        if s:
            terms[new] = s
        else:
            terms.pop(new, None)
    return LaurentPolynomial(d, terms)


def monomial_map_point(matrix, point):
    """Numeric torus map z -> (prod z_j^{N[i][j]})_i for an integer matrix.

    Integer powers make this single-valued, so no logarithm branch choice
    is involved.
    """
    point = [complex(z) for z in point]
    out = []
    for row in matrix:
        w = 1 + 0j
        for z, e in zip(point, row):
            e = int(e)
            if e == 0:
                continue
            if z == 0:
                raise ValueError("monomial map needs nonzero coordinates")
            w *= z ** e
        out.append(w)
    return tuple(out)


def is_torus_point(point):
    return all(complex(z) != 0 for z in point)


# ---------------------------------------------------------------------------
# parsing and printing
# ---------------------------------------------------------------------------

_TOKEN_INT = "int"
_TOKEN_NAME = "name"


def _tokenize(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append((_TOKEN_INT, int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append((_TOKEN_NAME, text[i:j], i))
            i = j
            continue
        if ch in "+-*/^()":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    """Recursive-descent parser for the polynomial grammar.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/')? factor)*     adjacency multiplies
    factor := ('+'|'-') factor | power
    power  := atom ('^' exponent)*
    atom   := INT | NAME | '(' expr ')'

    Exponents must be (possibly parenthesized, possibly signed) integer
    literals; 'i' denotes the imaginary unit unless declared a variable.
    """

    def __init__(self, text, variables):
        # Normalize the unicode minus sign, which shows up in pasted input.
        self.tokens = _tokenize(text.replace("−", "-"))
        self.pos = 0
        self.variables = list(variables)
        self.dimension = len(self.variables)
        if self.dimension < 1:
            raise ValueError("at least one variable name is required")
        if len(set(self.variables)) != self.dimension:
            raise ValueError("duplicate variable names")

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.advance()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing input {tok[1]!r}", tok[2])
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while True:
            kind = self.peek()[0]
            if kind in ("*", "/"):
                op = self.advance()[0]
                rhs = self.factor()
                value = value * rhs if op == "*" else self._divide(value, rhs)
            elif kind in (_TOKEN_INT, _TOKEN_NAME, "("):
                value = value * self.factor()
            else:
                return value

    def _divide(self, numerator, denominator):
        tok = self.peek()
        try:
            return numerator / denominator
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc), tok[2]) from None

    def factor(self):
        tok = self.peek()
        if tok[0] in ("+", "-"):
            self.advance()
            value = self.factor()
            return value if tok[0] == "+" else -value
        return self.power()

    def power(self):
        value = self.atom()
        while self.peek()[0] == "^":
            self.advance()
            e = self.exponent()
            try:
                value = value ** e
            except ValueError as exc:
                raise ParseError(str(exc), self.peek()[2]) from None
        return value

    def exponent(self):
        tok = self.peek()
        if tok[0] == "(":
            self.advance()
            e = self.exponent()
            self.expect(")")
            return e
        sign = 1
        while self.peek()[0] in ("+", "-"):
            if self.advance()[0] == "-":
                sign = -sign
        tok = self.advance()
        if tok[0] != _TOKEN_INT:
            raise ParseError("exponent must be an integer literal", tok[2])
        return sign * tok[1]

    def atom(self):
        tok = self.advance()
        if tok[0] == _TOKEN_INT:
            return LaurentPolynomial.constant(self.dimension, tok[1])
        if tok[0] == _TOKEN_NAME:
            name = tok[1]
            if name in self.variables:
                return LaurentPolynomial.variable(
                    self.dimension, self.variables.index(name)
                )
            if name == "i":
                return LaurentPolynomial.constant(self.dimension, _I)
            raise ParseError(f"unknown variable {name!r}", tok[2])
        if tok[0] == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected token {tok[1]!r}", tok[2])


def parse(text, variables):
    """Parse polynomial text into an expanded, collected LaurentPolynomial.

    ``variables`` fixes both the ambient dimension and the exponent-slot
    order.  Accepts ``+ - * / ^ ( )``, integer literals, rational constants
    written with ``/``, the imaginary unit ``i``, and negative exponents as
    in ``x^-1``.  Division is exact and restricted to monomial divisors.
    """
    return _Parser(text, variables).parse()


def _fraction_text(q):
    return str(q)


def _coeff_text(c, standalone):
    re, im = c.re, c.im
    if im == 0:
        return _fraction_text(re)
    if re == 0:
        if im == 1:
            return "i"
        if im == -1:
            return "-i"
        return f"{_fraction_text(im)}i"
    sign = "+" if im > 0 else "-"
    imag = abs(im)
    imag_text = "i" if imag == 1 else f"{_fraction_text(imag)}i"
    text = f"({_fraction_text(re)}{sign}{imag_text})"
    return text


def _term_text(m, c, variables):
    vars_text = "*".join(
        name if e == 1 else f"{name}^{e}"
        for name, e in zip(variables, m)
        if e != 0
    )
    if not vars_text:
        return _coeff_text(c, standalone=True)
    if c == _ONE:
        return vars_text
    if c == -_ONE:
        return f"-{vars_text}"
    return f"{_coeff_text(c, standalone=False)}*{vars_text}"


def to_text(H, variables=None):
    """Canonical printer: ascending lexicographic terms, explicit powers.

    ``parse(to_text(H), variables)`` reproduces H exactly.
    """
    if variables is None:
        variables = _default_variables(H.dimension)
    if len(variables) != H.dimension:
        raise ValueError("variable list does not match dimension")
    if H.is_zero:
        return "0"
    parts = []
    for m, c in H.terms():
        # Pull a leading minus out of the coefficient so terms join cleanly.
        negative = c.re < 0 or (c.re == 0 and c.im < 0)
        body = _term_text(m, -c if negative else c, variables)
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return "".join(parts)


def _default_variables(dimension):
    if dimension <= 3:
        return ("x", "y", "z")[:dimension]
    return tuple(f"x{i}" for i in range(1, dimension + 1))
