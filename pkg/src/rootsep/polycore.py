"""Exact arithmetic on univariate integer polynomials.

Coefficients are stored in ascending order: ``coeffs[i]`` multiplies ``x**i``.
The zero polynomial is the empty tuple. The canonical text form is the same
ascending list joined by commas, e.g. ``"2,-8,7,0,4,1"`` for
``x^5+4x^4+7x^2-8x+2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd as int_gcd
from typing import Iterable, Sequence

from .balls import Ball
from .errors import PolynomialParseError, UndefinedQuantityError


@dataclass(frozen=True)
class IntegerPolynomial:
    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = []
        for c in coeffs:
            if isinstance(c, bool) or int(c) != c:
                raise TypeError(f"non-integer coefficient {c!r}")
            cs.append(int(c))
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntegerPolynomial":
        return cls([0] * degree + [coeff])

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "IntegerPolynomial":
        return reduce(multiply, (cls([-r, 1]) for r in roots), cls([1]))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.leading == 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntegerPolynomial(self[i] + other[i] for i in range(n))

    def __neg__(self) -> "IntegerPolynomial":
        return IntegerPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntegerPolynomial":
        if isinstance(other, int):
            return IntegerPolynomial(c * other for c in self.coeffs)
        return multiply(self, other)

    __rmul__ = __mul__

    def __call__(self, x):
        """Exact Horner evaluation at an int, Fraction or complex-like value."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def reflect(self) -> "IntegerPolynomial":
        """``(-1)**deg * P(-x)``: monic stays monic, heights are unchanged."""
        d = self.degree
        return IntegerPolynomial(c if (d - i) % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def to_text(self) -> str:
        return format_poly(self)

    def pretty(self) -> str:
        return pretty_poly(self)

    def __str__(self) -> str:
        return self.pretty()


@dataclass(frozen=True)
class FactoredPolynomial:
    """A product of monic factors kept together with its expansion."""

    factors: tuple[IntegerPolynomial, ...]
    product: IntegerPolynomial

    def __init__(self, factors: Sequence[IntegerPolynomial], product: IntegerPolynomial | None = None):
        factors = tuple(factors)
        if not factors:
            raise ValueError("a factored polynomial needs at least one factor")
        for f in factors:
            if f.degree < 1 or not f.is_monic():
                raise ValueError(f"factor {f} is not monic of positive degree")
        expanded = reduce(multiply, factors)
        if product is not None and product != expanded:
            raise ValueError("product does not match the factor list")
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "product", expanded)

    @property
    def degree(self) -> int:
        return self.product.degree

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(sorted(f.degree for f in self.factors))


# -- parsing and printing --------------------------------------------------


def parse_poly(text: str) -> IntegerPolynomial:
    """Parse the comma-separated ascending coefficient form."""
    cleaned = text.strip().replace("−", "-")
    if not cleaned:
        raise PolynomialParseError("empty polynomial text")
    try:
        coeffs = [int(tok.strip()) for tok in cleaned.split(",")]
    except ValueError as exc:
        raise PolynomialParseError(f"cannot parse polynomial {text!r}: {exc}") from None
    return IntegerPolynomial(coeffs)


def format_poly(p: IntegerPolynomial) -> str:
    return ",".join(str(c) for c in p.coeffs) if p.coeffs else "0"


def pretty_poly(p: IntegerPolynomial, var: str = "x") -> str:
    if p.is_zero():
        return "0"
    terms = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = str(a)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if a == 1 else f"{a}{mono}"
        terms.append((sign, body))
    first_sign, first_body = terms[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        out += sign + body
    return out


# -- basic operations ------------------------------------------------------


def height(p: IntegerPolynomial) -> int:
    if p.is_zero():
        raise UndefinedQuantityError("undefined height of zero polynomial")
    return max(abs(c) for c in p.coeffs)


def multiply(a: IntegerPolynomial, b: IntegerPolynomial) -> IntegerPolynomial:
    if a.is_zero() or b.is_zero():
        return IntegerPolynomial()
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                out[i + j] += x * y
    return IntegerPolynomial(out)


def derivative(p: IntegerPolynomial) -> IntegerPolynomial:
    return IntegerPolynomial(i * c for i, c in enumerate(p.coeffs) if i > 0)


def content(p: IntegerPolynomial) -> int:
    return reduce(int_gcd, p.coeffs, 0)


def primitive_part(p: IntegerPolynomial) -> IntegerPolynomial:
    """``p / content(p)`` with a positive leading coefficient."""
    if p.is_zero():
        return p
    g = content(p)
    if p.leading < 0:
        g = -g
    return IntegerPolynomial(c // g for c in p.coeffs)


def pseudo_remainder(a: IntegerPolynomial, b: IntegerPolynomial) -> IntegerPolynomial:
    """``lc(b)**(deg a - deg b + 1) * a mod b`` computed in Z[x]."""
    if b.is_zero():
        raise ZeroDivisionError("pseudo-remainder by zero polynomial")
    r = list(a.coeffs)
    db, lb = b.degree, b.leading
    steps = max(a.degree - db + 1, 0)
    while len(r) - 1 >= db and any(r):
        shift = len(r) - 1 - db
        lead = r[-1]
        r = [c * lb for c in r]
        for j, bc in enumerate(b.coeffs):
            r[j + shift] -= lead * bc
        steps -= 1
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    scale = lb ** steps if steps > 0 else 1
    return IntegerPolynomial(c * scale for c in r)


def divmod_exact(a: IntegerPolynomial, b: IntegerPolynomial) -> IntegerPolynomial:
    """Quotient ``a / b`` in Z[x]; raises if ``b`` does not divide ``a`` exactly."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    r = list(a.coeffs)
    db, lb = b.degree, b.leading
    if a.degree < db:
        if a.is_zero():
            return a
        raise ArithmeticError("inexact polynomial division")
    q = [0] * (a.degree - db + 1)
    for shift in range(a.degree - db, -1, -1):
        lead = r[shift + db]
        if lead % lb:
            raise ArithmeticError("inexact polynomial division")
        coef = lead // lb
        q[shift] = coef
        if coef:
            for j, bc in enumerate(b.coeffs):
                r[j + shift] -= coef * bc
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return IntegerPolynomial(q)


def gcd(a: IntegerPolynomial, b: IntegerPolynomial) -> IntegerPolynomial:
    """Greatest common divisor in Z[x], normalised to a positive leading coefficient.

    Uses a primitive remainder sequence, which keeps coefficient growth under
    control by dividing out the content after every pseudo-division.
    """
    if a.is_zero():
        return primitive_part(b) * content(b) if not b.is_zero() else b
    if b.is_zero():
        return primitive_part(a) * content(a)
    c = int_gcd(content(a), content(b))
    u, v = primitive_part(a), primitive_part(b)
    if u.degree < v.degree:
        u, v = v, u
    while not v.is_zero():
        r = pseudo_remainder(u, v)
        u, v = v, primitive_part(r)
    return primitive_part(u) * c


def squarefree_part(p: IntegerPolynomial) -> IntegerPolynomial:
    """Primitive polynomial with exactly the distinct roots of ``p``, each simple."""
    if p.degree < 1:
        raise ValueError("squarefree part needs degree >= 1")
    g = gcd(p, derivative(p))
    return primitive_part(divmod_exact(primitive_part(p), primitive_part(g)))


def squarefree_decomposition(p: IntegerPolynomial) -> list[tuple[IntegerPolynomial, int]]:
    """Yun's algorithm: pairwise coprime squarefree ``(factor, multiplicity)`` pairs.

    The factors are primitive with positive leading coefficient, and their
    product with multiplicities equals ``primitive_part(p)``.
    """
    if p.degree < 1:
        raise ValueError("squarefree decomposition needs degree >= 1")
    f = primitive_part(p)
    df = derivative(f)
    a0 = primitive_part(gcd(f, df))
    b = divmod_exact(f, a0)
    c = divmod_exact(df, a0)
    d = c - derivative(b)
    out = []
    i = 1
    while b.degree > 0:
        a = primitive_part(gcd(b, d))
        b = divmod_exact(b, a)
        c = divmod_exact(d, a)
        d = c - derivative(b)
        if a.degree > 0:
            out.append((a, i))
        i += 1
    return out


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def resultant(a: IntegerPolynomial, b: IntegerPolynomial) -> int:
    """Resultant via the Sylvester determinant (fraction-free elimination)."""
    m, n = a.degree, b.degree
    if m < 0 or n < 0:
        return 0
    if m == 0 and n == 0:
        return 1
    size = m + n
    rows = []
    ad = list(reversed(a.coeffs))
    bd = list(reversed(b.coeffs))
    for i in range(n):
        rows.append([0] * i + ad + [0] * (size - i - len(ad)))
    for i in range(m):
        rows.append([0] * i + bd + [0] * (size - i - len(bd)))
    return _bareiss_det(rows)


def discriminant(p: IntegerPolynomial) -> int:
    d = p.degree
    if d < 2:
        raise ValueError("discriminant needs degree >= 2")
    res = resultant(p, derivative(p))
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    q, rem = divmod(sign * res, p.leading)
    assert rem == 0
    return q


def evaluate(p: IntegerPolynomial, point, prec: int | None = 256) -> Ball:
    """Horner evaluation in ball arithmetic.

    The result contains ``p(z)`` for every ``z`` in ``point``. With ``prec``
    set, each Horner step rounds the midpoint outward to ``prec`` bits; with
    ``prec=None`` the computation is exact apart from radius bookkeeping.
    """
    z = Ball.exact(point)
    if p.is_zero():
        return Ball(Fraction(0))
    acc = Ball(Fraction(p.leading))
    for c in reversed(p.coeffs[:-1]):
        acc = (acc * z + c).rounded(prec)
    return acc.rounded(prec)
