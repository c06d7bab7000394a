"""Reducible monic families of odd degree with badly separated roots.

Three families are generated here:

* ``s``: ``(x^3 - 2n x^2 + (2-2n) x + 2)(x^2 - (2n^2+2n) x + 2n + 2)``
* ``p``: ``(x^3 + n x - 1)(x^2 + n^2 x - n)``
* ``QR``: ``Q_{k,n} R_{k,n}`` of degree ``2k+1`` with
  ``Q = x^2 + n^k x - n`` and ``R = (x^{2k+1} - Q)/(x^2 - n)``.

For ``d = 5`` the ``QR`` family coincides with ``p``. The quadratic ``Q`` has a
root ``alpha`` just below ``n^(1-k)`` and ``R`` has a root ``beta`` in
``(alpha, 2 alpha)`` with ``beta - alpha < 2 n^(1-2k^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from .balls import Ball
from .errors import PrecisionError
from .polycore import FactoredPolynomial, IntegerPolynomial, derivative, evaluate, height
from .rootfinder import (
    DEFAULT_REL_WIDTH,
    RootEnclosure,
    SeparationReport,
    decimal_str,
    exponent,
    isolate_roots,
    refine,
)

FAMILY_IDS = ("s", "p", "QR")


@dataclass(frozen=True)
class FamilyRecord:
    family_id: str
    d: int
    n: int
    factored: FactoredPolynomial
    predicted_exponent: Fraction
    predicted_sep_bound: Fraction
    k: int | None = None

    @property
    def product(self) -> IntegerPolynomial:
        return self.factored.product


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"family parameter n must be an integer >= 2, got {n!r}")


def _check_k(k: int) -> None:
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"family parameter k must be an integer >= 2, got {k!r}")


def predicted_exponent(d: int) -> Fraction:
    """Exponent ``(d^2 - 2d - 1)/(2d - 4)`` approached by ``P_{d,n}`` as n grows."""
    return Fraction(d * d - 2 * d - 1, 2 * d - 4)


def family_s(n: int) -> FactoredPolynomial:
    _check_n(n)
    cubic = IntegerPolynomial([2, 2 - 2 * n, -2 * n, 1])
    quadratic = IntegerPolynomial([2 * n + 2, -2 * n * n - 2 * n, 1])
    return FactoredPolynomial([cubic, quadratic])


def family_p(n: int) -> FactoredPolynomial:
    _check_n(n)
    return FactoredPolynomial([IntegerPolynomial([-1, n, 0, 1]), IntegerPolynomial([-n, n * n, 1])])


def family_Q(k: int, n: int) -> IntegerPolynomial:
    _check_k(k)
    _check_n(n)
    return IntegerPolynomial([-n, n**k, 1])


def family_R(k: int, n: int) -> IntegerPolynomial:
    """``x (x^(2k-2) + n x^(2k-4) + ... + n^(k-1)) - 1``."""
    _check_k(k)
    _check_n(n)
    coeffs = [0] * (2 * k)
    coeffs[0] = -1
    for j in range(k):
        coeffs[2 * j + 1] = n ** (k - 1 - j)
    return IntegerPolynomial(coeffs)


def family_P(d: int, n: int) -> FamilyRecord:
    if not isinstance(d, int) or d < 5 or d % 2 == 0:
        raise ValueError(f"degree d must be odd and >= 5, got {d!r}")
    _check_n(n)
    k = (d - 1) // 2
    factored = FactoredPolynomial([family_Q(k, n), family_R(k, n)])
    return FamilyRecord("QR", d, n, factored, predicted_exponent(d), 2 * Fraction(n) ** (1 - 2 * k * k), k)


def family_record(family_id: str, n: int, d: int = 5) -> FamilyRecord:
    """Uniform constructor used by sweeps.

    For ``s`` there is no proven bound; ``predicted_sep_bound`` is the gap
    ``1/(4n^7)`` between the leading terms of the two close-root expansions.
    """
    if family_id == "QR":
        return family_P(d, n)
    if d != 5:
        raise ValueError(f"family {family_id!r} only exists in degree 5")
    if family_id == "p":
        return FamilyRecord("p", 5, n, family_p(n), Fraction(7, 3), 2 * Fraction(1, n**7), 2)
    if family_id == "s":
        return FamilyRecord("s", 5, n, family_s(n), Fraction(7, 3), Fraction(1, 4 * n**7))
    raise ValueError(f"unknown family {family_id!r}; expected one of {FAMILY_IDS}")


# -- the roots alpha and beta ----------------------------------------------------


def alpha_enclosure(k: int, n: int, rel_width=Fraction(1, 10**30)) -> Ball:
    """Real ball around ``alpha = 2n / (n^k + sqrt(n^(2k) + 4n))``.

    The square root is bracketed with integer square roots, so the bounds are
    exact rationals. Raises if the enclosure is not inside
    ``(n^(1-k)/2, n^(1-k))``.
    """
    _check_k(k)
    _check_n(n)
    rel_width = Fraction(rel_width)
    disc = n ** (2 * k) + 4 * n
    t = 64
    while True:
        s = isqrt(disc << (2 * t))
        exact = s * s == disc << (2 * t)
        root_lo = Fraction(s, 1 << t)
        root_hi = root_lo if exact else Fraction(s + 1, 1 << t)
        lo = 2 * n / (n**k + root_hi)
        hi = 2 * n / (n**k + root_lo)
        if hi - lo <= rel_width * lo:
            break
        t *= 2
    upper = Fraction(n) ** (1 - k)
    if not (upper / 2 < lo and hi < upper):
        raise AssertionError(f"alpha enclosure [{float(lo)}, {float(hi)}] escapes its window")
    return Ball.from_interval(lo, hi)


@dataclass(frozen=True)
class BetaBracket:
    """Certified location of the root ``beta`` of ``R_{k,n}`` next to ``alpha``."""

    alpha: Ball
    lo: Fraction
    hi: Fraction
    r_at_alpha: Ball
    r_at_two_alpha: Ball

    @property
    def gap_lo(self) -> Fraction:
        """Lower bound for ``beta - alpha``."""
        return self.lo - self.alpha.real_hi

    @property
    def gap_hi(self) -> Fraction:
        """Upper bound for ``beta - alpha``."""
        return self.hi - self.alpha.real_lo


def beta_localization(k: int, n: int, rel_width=Fraction(1, 2**20)) -> BetaBracket:
    """Bracket ``beta`` inside ``(alpha, 2 alpha)`` by certified sign changes of R.

    ``rel_width`` bounds the bracket width relative to ``beta - alpha``.
    """
    R = family_R(k, n)
    scale = Fraction(n) ** (k - 2 * k * k) / 2**20
    alpha = alpha_enclosure(k, n, scale)
    r_alpha = evaluate(R, alpha, prec=None)
    r_two = evaluate(R, alpha.scale(2), prec=None)
    if r_alpha.real_sign() >= 0 or r_two.real_sign() <= 0:
        raise PrecisionError("sign change of R on (alpha, 2 alpha) not certified")
    a = alpha.real_hi
    b = 2 * alpha.real_lo
    if not (R(a) < 0 < R(b)):
        raise PrecisionError("sign change of R at the bracket endpoints not certified")
    rel_width = Fraction(rel_width)
    while True:
        gap = a - alpha.real_hi
        if gap > 0 and b - a <= rel_width * gap:
            break
        mid = (a + b) / 2
        v = R(mid)
        if v == 0:
            a = b = mid
            break
        if v < 0:
            a = mid
        else:
            b = mid
    return BetaBracket(alpha, a, b, r_alpha, r_two)


def min_derivative_lower_bound(k: int, n: int, max_depth: int = 24) -> Fraction:
    """Certified lower bound for ``min R'(t)`` over ``[alpha, 2 alpha]``.

    Intervals whose ball bound does not yet clear ``n^(k-1)`` are bisected.
    """
    R1 = derivative(family_R(k, n))
    alpha = alpha_enclosure(k, n, Fraction(1, 2**40))
    target = Fraction(n) ** (k - 1)
    stack = [(alpha.real_lo, 2 * alpha.real_hi, 0)]
    lowest = None
    while stack:
        lo, hi, depth = stack.pop()
        bound = evaluate(R1, Ball.from_interval(lo, hi), prec=None).real_lo
        if bound <= target and depth < max_depth:
            mid = (lo + hi) / 2
            stack.append((lo, mid, depth + 1))
            stack.append((mid, hi, depth + 1))
            continue
        lowest = bound if lowest is None else min(lowest, bound)
    assert lowest is not None
    return lowest


# -- the close root pair -------------------------------------------------------


def _window(record: FamilyRecord) -> tuple[Fraction, Fraction]:
    if record.family_id == "s":
        return Fraction(1, 2 * record.n), Fraction(2, record.n)
    k = record.k if record.k is not None else 2
    base = Fraction(record.n) ** (1 - k)
    return base / 2, 2 * base


def _root_in_window(f: IntegerPolynomial, lo: Fraction, hi: Fraction, target: Fraction) -> RootEnclosure:
    rs = isolate_roots(f, target)
    for _ in range(8):
        inside = [e for e in rs if lo < e.re - e.radius and e.re + e.radius < hi and abs(e.im) <= e.radius]
        touching = [e for e in rs if e.ball.overlaps(Ball.from_interval(lo, hi))]
        if len(inside) == 1 and len(touching) == 1:
            return inside[0]
        rs = refine(rs, rs.max_radius / 2**32)
    raise PrecisionError("close root of the factor is not uniquely located in its window")


def close_pair(record: FamilyRecord, target_radius=None) -> dict[str, RootEnclosure]:
    """Enclosures of the two close roots, keyed by the factor that owns them.

    Keys are ``"quadratic"`` and ``"cubic"`` for ``s``/``p`` and ``"Q"``/``"R"``
    for ``QR``.
    """
    lo, hi = _window(record)
    if target_radius is None:
        target_radius = record.predicted_sep_bound / 2**40
    target = Fraction(target_radius)
    out = {}
    for f in record.factored.factors:
        if record.family_id == "QR":
            name = "Q" if f.degree == 2 else "R"
        else:
            name = "quadratic" if f.degree == 2 else "cubic"
        out[name] = _root_in_window(f, lo, hi, target)
    return out


# Printed truncations of the close-root expansions. Keys: (family, root index).
_SERIES = {
    ("p", 1): ((1, 1), (-1, 4), (3, 7)),
    ("p", 2): ((1, 1), (-1, 4), (2, 7)),
    ("s", 1): ((1, 1), (Fraction(1, 2), 4), (Fraction(-1, 2), 5), (Fraction(1, 2), 6)),
    ("s", 2): ((1, 1), (Fraction(1, 2), 4), (Fraction(-1, 2), 5), (Fraction(1, 2), 6), (Fraction(1, 4), 7)),
}
# Which factor owns each expansion (checked in the test-suite by evaluation).
_OWNER = {("p", 1): "cubic", ("p", 2): "quadratic", ("s", 1): "quadratic", ("s", 2): "cubic"}
_ERROR_ORDER = {"p": 10, "s": 8}


def truncated_series(family_id: str, n: int, which_root: int) -> Fraction:
    terms = _SERIES[(family_id, which_root)]
    return sum((Fraction(c) / Fraction(n) ** e for c, e in terms), Fraction(0))


def expansion_residual(family_id: str, n: int, which_root: int) -> Ball:
    """``(root - truncated series) * n^order`` as a ball; order is 10 for p, 8 for s."""
    if family_id not in ("p", "s"):
        raise ValueError("expansions are printed only for the s and p families")
    if which_root not in (1, 2):
        raise ValueError("which_root must be 1 or 2")
    if n < 3:
        raise ValueError("the close pair is only tracked for n >= 3")
    record = family_record(family_id, n)
    order = _ERROR_ORDER[family_id]
    target = Fraction(1, n**order) / 2**30
    roots = close_pair(record, target)
    root = roots[_OWNER[(family_id, which_root)]]
    scale = Fraction(n) ** order
    diff = root.ball - truncated_series(family_id, n, which_root)
    return diff.scale(scale)


# -- sweeps ---------------------------------------------------------------------

SWEEP_HEADER = ("family", "d", "k", "n", "height", "sep_lo", "sep_hi", "e_lo", "e_hi", "predicted_e", "bound_ok")


@dataclass(frozen=True)
class SweepRow:
    record: FamilyRecord
    report: SeparationReport

    @property
    def bound_ok(self) -> bool:
        return self.report.sep_hi < self.record.predicted_sep_bound

    def as_row(self) -> list[str]:
        r, rep = self.record, self.report
        return [
            r.family_id,
            str(r.d),
            "" if r.k is None else str(r.k),
            str(r.n),
            str(rep.height),
            decimal_str(rep.sep_lo),
            decimal_str(rep.sep_hi),
            "" if rep.e_lo is None else decimal_str(rep.e_lo),
            "" if rep.e_hi is None else decimal_str(rep.e_hi),
            str(r.predicted_exponent),
            "1" if self.bound_ok else "0",
        ]


def sweep_one(family_id: str, n: int, d: int = 5, rel_width=DEFAULT_REL_WIDTH) -> SweepRow:
    record = family_record(family_id, n, d)
    return SweepRow(record, exponent(record.product, rel_width))


def family_sweep(
    family_id: str, ns: Iterable[int], d: int = 5, rel_width=DEFAULT_REL_WIDTH, jobs: int = 1
) -> list[SweepRow]:
    """Rows in increasing ``n``; ``jobs > 1`` spreads the work over processes."""
    ns = sorted(set(ns))
    for n in ns:
        family_record(family_id, n, d)
    if jobs <= 1:
        return [sweep_one(family_id, n, d, rel_width) for n in ns]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(sweep_one, family_id, n, d, rel_width) for n in ns]
        return [f.result() for f in futures]


def height_formula(k: int, n: int) -> int:
    """Height ``n^(2k-1) - 1`` of ``Q_{k,n} R_{k,n}``; exact for n >= 3."""
    return n ** (2 * k - 1) - 1


def heights_table(ks: Sequence[int], ns: Sequence[int]) -> list[tuple[int, int, int, int]]:
    """``(k, n, exact height, formula value)`` for each parameter pair."""
    out = []
    for k in ks:
        for n in ns:
            out.append((k, n, height(family_P(2 * k + 1, n).product), height_formula(k, n)))
    return out
