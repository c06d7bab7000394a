"""Exact LLL reduction and the lattice search for quadratics close to a cubic root.

Given a real root ``gamma`` of a monic cubic and a scale ``N``, the rows

    (1, 0, 0, N), (0, 1, 0, round(N gamma)), (0, 0, 1, round(N gamma^2))

span a lattice whose vector for coefficients ``(a, b, c)`` is
``(a, b, c, ~N (a + b gamma + c gamma^2))``. Short vectors therefore decode to
quadratics ``c x^2 + b x + a`` with small coefficients that nearly vanish at
``gamma``. Monic ones are multiplied by the cubic and scored by their
separation exponent.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd
from typing import Iterable, Sequence

from .balls import Ball
from .errors import PrecisionError, UndefinedQuantityError
from .polycore import IntegerPolynomial, format_poly, height, multiply, primitive_part, squarefree_part
from .rootfinder import DEFAULT_REL_WIDTH, SeparationReport, decimal_str, exponent, isolate_roots, refine

log = logging.getLogger(__name__)

DEFAULT_DELTA = Fraction(99, 100)
DEFAULT_LADDER = tuple(10**e for e in range(3, 13))
DEFAULT_COMBO_BOUND = 2


@dataclass(frozen=True)
class LatticeBasis:
    rows: tuple[tuple[int, ...], ...]

    def __init__(self, rows: Iterable[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("lattice rows must have equal length")
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.rows[i]


def _dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def gram_schmidt(rows: Sequence[Sequence[int]]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Squared Gram-Schmidt norms and the ``mu`` coefficients, exactly."""
    n = len(rows)
    star: list[list[Fraction]] = []
    norms: list[Fraction] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        v = [Fraction(x) for x in rows[i]]
        for j in range(i):
            if norms[j] == 0:
                continue
            mu[i][j] = _dot(rows[i], star[j]) / norms[j]
            v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
        star.append(v)
        norms.append(_dot(v, v))
    return norms, mu


def lll_reduce(basis: LatticeBasis, delta=DEFAULT_DELTA) -> LatticeBasis:
    """LLL-reduce ``basis`` in exact rational arithmetic.

    The output is size reduced (``|mu_ij| <= 1/2``) and satisfies the Lovász
    condition ``|b*_k|^2 >= (delta - mu_{k,k-1}^2) |b*_{k-1}|^2``.
    """
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta <= 1:
        raise ValueError("delta must lie in (1/4, 1]")
    b = [list(r) for r in basis.rows]
    n = len(b)
    if n == 0:
        return basis
    norms, mu = gram_schmidt(b)
    if any(x == 0 for x in norms):
        raise ValueError("lattice rows are linearly dependent")
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = floor(mu[k][j] + Fraction(1, 2))
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                for l in range(j):
                    mu[k][l] -= q * mu[j][l]
                mu[k][j] -= q
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            norms, mu = gram_schmidt(b)
            k = max(k - 1, 1)
    return LatticeBasis(b)


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of an integer matrix (zero rows dropped).

    Two bases span the same lattice exactly when their forms coincide.
    """
    a = [list(r) for r in rows]
    m = len(a)
    ncols = len(a[0]) if a else 0
    pivot_row = 0
    for col in range(ncols):
        if pivot_row >= m:
            break
        # Euclid on the column below pivot_row
        while True:
            nz = [i for i in range(pivot_row, m) if a[i][col] != 0]
            if not nz:
                break
            i_min = min(nz, key=lambda i: abs(a[i][col]))
            a[pivot_row], a[i_min] = a[i_min], a[pivot_row]
            done = True
            for i in range(pivot_row + 1, m):
                if a[i][col]:
                    q = a[i][col] // a[pivot_row][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[pivot_row])]
                    if a[i][col]:
                        done = False
            if done:
                break
        if a[pivot_row][col] == 0:
            continue
        if a[pivot_row][col] < 0:
            a[pivot_row] = [-x for x in a[pivot_row]]
        p = a[pivot_row][col]
        for i in range(pivot_row):
            q = a[i][col] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[pivot_row])]
        pivot_row += 1
    return [r for r in a if any(r)]


# -- gamma lattice ---------------------------------------------------------------


def _round_unique(ball: Ball) -> int:
    lo = floor(ball.real_lo + Fraction(1, 2))
    hi = floor(ball.real_hi + Fraction(1, 2))
    if lo != hi:
        raise PrecisionError("insufficient gamma precision")
    return lo


def build_gamma_lattice(gamma, N: int) -> LatticeBasis:
    """Augmented-identity basis for quadratic relations at ``gamma``.

    ``gamma`` may be an exact rational or a real :class:`Ball`; the roundings of
    ``N gamma`` and ``N gamma^2`` must be unambiguous over the whole ball.
    """
    if N <= 0:
        raise ValueError("N must be positive")
    g = Ball.exact(gamma) if not isinstance(gamma, Ball) else gamma
    g = Ball(g.re, 0, g.rad + abs(g.im))
    g1 = _round_unique(g.scale(N))
    g2 = _round_unique((g * g).scale(N))
    return LatticeBasis([(1, 0, 0, N), (0, 1, 0, g1), (0, 0, 1, g2)])


def quadratic_candidates(
    reduced: LatticeBasis, N: int, gamma, coeff_combo_bound: int = DEFAULT_COMBO_BOUND
) -> list[IntegerPolynomial]:
    """Quadratics decoded from small integer combinations of the reduced rows.

    Every combination with coefficients in ``[-B, B]`` (``B = coeff_combo_bound``)
    is decoded to ``c x^2 + b x + a``, made primitive with ``c > 0``; decodes
    with ``c = 0`` are dropped. Output is deduplicated and sorted by height.
    ``N`` and ``gamma`` are accepted for interface symmetry with the builder.
    """
    seen = set()
    out = []
    rows = reduced.rows
    for combo in itertools.product(range(-coeff_combo_bound, coeff_combo_bound + 1), repeat=len(rows)):
        if not any(combo):
            continue
        v = [sum(c * r[i] for c, r in zip(combo, rows)) for i in range(3)]
        a, b, c = v
        if c == 0:
            continue
        q = primitive_part(IntegerPolynomial([a, b, c]))
        if q.coeffs not in seen:
            seen.add(q.coeffs)
            out.append(q)
    out.sort(key=lambda q: (height(q), q.coeffs))
    return out


def decode_bound(vector: Sequence[int], N: int) -> Fraction:
    """Upper bound on ``|c gamma^2 + b gamma + a|`` for a lattice vector ``(a, b, c, m)``."""
    a, b, c, m = vector
    return (abs(m) + Fraction(abs(b) + abs(c), 2)) / N


# -- search ---------------------------------------------------------------------


@dataclass(frozen=True)
class SearchHit:
    cubic: IntegerPolynomial
    quadratic: IntegerPolynomial
    gamma_enclosure: Ball
    pair_exponent: SeparationReport
    lattice_N: int

    @property
    def product(self) -> IntegerPolynomial:
        return multiply(self.cubic, self.quadratic)

    def to_json(self) -> dict:
        g = self.gamma_enclosure
        return {
            "cubic": format_poly(self.cubic),
            "quadratic": format_poly(self.quadratic),
            "gamma_lo": decimal_str(g.real_lo),
            "gamma_hi": decimal_str(g.real_hi),
            "lattice_N": str(self.lattice_N),
            "report": self.pair_exponent.to_json(),
        }


def _real_root_balls(cubic: IntegerPolynomial, radius: Fraction) -> list[Ball]:
    rs = isolate_roots(cubic, radius)
    for _ in range(32):
        flags = rs.realness()
        if all(f is not None for f in flags):
            return [Ball(e.re, 0, e.radius) for e, f in zip(rs, flags) if f]
        rs = refine(rs, rs.max_radius / 2**16)
    raise PrecisionError("could not separate real and non-real roots of the cubic")


def close_root_search(
    cubic: IntegerPolynomial,
    N_ladder: Sequence[int] | None = None,
    exponent_threshold=Fraction(2),
    coeff_combo_bound: int = DEFAULT_COMBO_BOUND,
    delta=DEFAULT_DELTA,
    rel_width=DEFAULT_REL_WIDTH,
) -> list[SearchHit]:
    """Mine monic quadratics with a root near a real root of ``cubic``.

    Hits are products whose certified exponent lower bound reaches
    ``exponent_threshold``, sorted by ``e_lo`` descending, then by the
    quadratic's coefficients. A quadratic found at several scales keeps the
    smallest ``N``.
    """
    if cubic.degree != 3 or not cubic.is_monic():
        raise ValueError("close_root_search needs a monic cubic")
    ladder = tuple(sorted(N_ladder)) if N_ladder else DEFAULT_LADDER
    threshold = Fraction(exponent_threshold)
    gammas = _real_root_balls(cubic, Fraction(1, 8 * ladder[-1] ** 2))
    if not gammas:
        raise UndefinedQuantityError("cubic has no real root")
    scored: dict[tuple[int, ...], SeparationReport | None] = {}
    hits: dict[tuple[int, ...], SearchHit] = {}
    for gamma in gammas:
        for N in ladder:
            g = gamma
            basis = None
            for _ in range(16):
                try:
                    basis = build_gamma_lattice(g, N)
                    break
                except PrecisionError:
                    g = _tighten(cubic, g)
            if basis is None:
                log.warning("skipping N=%d: gamma rounding stays ambiguous", N)
                continue
            reduced = lll_reduce(basis, delta)
            for q in quadratic_candidates(reduced, N, g, coeff_combo_bound):
                if not q.is_monic():
                    continue
                key = q.coeffs
                if key not in scored:
                    scored[key] = _score(cubic, q, rel_width)
                report = scored[key]
                if report is None or report.e_lo is None or report.e_lo < threshold:
                    continue
                if key not in hits:
                    hits[key] = SearchHit(cubic, q, g, report, N)
    return sorted(hits.values(), key=lambda h: (-h.pair_exponent.e_lo, h.quadratic.coeffs))


def _tighten(cubic: IntegerPolynomial, g: Ball) -> Ball:
    rs = isolate_roots(cubic, g.rad / 2**32 if g.rad else Fraction(1, 2**64))
    for e in rs:
        if abs(e.im) <= e.radius and g.overlaps(Ball(e.re, 0, e.radius)):
            return Ball(e.re, 0, e.radius)
    raise PrecisionError("lost track of the real root while tightening")


def _score(cubic: IntegerPolynomial, q: IntegerPolynomial, rel_width) -> SeparationReport | None:
    product = multiply(cubic, q)
    if height(product) < 2 or squarefree_part(product).degree < 2:
        return None
    return exponent(product, rel_width)
