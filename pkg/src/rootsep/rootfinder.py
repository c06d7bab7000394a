"""Certified complex root isolation and root-separation enclosures.

Approximations come from Aberth-Ehrlich simultaneous iteration (first in
hardware floats, then in mpmath at escalating precision). Correctness rests on
an a-posteriori certificate computed in exact integer arithmetic: the centres
are rounded to a dyadic grid ``2**-s``, the Weierstrass corrections

    W_i = f(z_i) / (lc(f) * prod_{j != i} (z_i - z_j))

are evaluated exactly as Gaussian integers, and the disks ``D(z_i, deg f * |W_i|)``
are used. Their union contains every root of the squarefree ``f`` and a
connected component made of ``m`` disks holds exactly ``m`` roots
(Braess-Hadeler / Carstensen inclusion), so pairwise disjoint disks each hold
exactly one root.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

import mpmath

from .balls import Ball, mpf_to_fraction, sqrt_bounds
from .errors import PrecisionError, UndefinedQuantityError
from .polycore import IntegerPolynomial, format_poly, height, squarefree_decomposition

DEFAULT_REL_WIDTH = Fraction(1, 1000)
REPORT_DIGITS = 30
MAX_PRECISION = 1 << 15


@dataclass(frozen=True)
class RootEnclosure:
    """Closed disk holding exactly one distinct root."""

    re: Fraction
    im: Fraction
    radius: Fraction
    multiplicity: int = 1

    @property
    def ball(self) -> Ball:
        return Ball(self.re, self.im, self.radius)

    @property
    def center(self) -> mpmath.mpc:
        bits = max(53, self.re.denominator.bit_length(), self.im.denominator.bit_length()) + 64
        return self.ball.mid_mpc(bits)

    def approx(self) -> complex:
        return complex(float(self.re), float(self.im))

    def contains(self, z) -> bool:
        return self.ball.contains(z)

    def __repr__(self) -> str:
        return (
            f"RootEnclosure({mpmath.nstr(self.center, 15)}, "
            f"r={float(self.radius):.3g}, mult={self.multiplicity})"
        )


@dataclass(frozen=True)
class RootSet:
    enclosures: tuple[RootEnclosure, ...]
    source: IntegerPolynomial
    precision: int = 53

    def __len__(self) -> int:
        return len(self.enclosures)

    def __iter__(self):
        return iter(self.enclosures)

    def __getitem__(self, i: int) -> RootEnclosure:
        return self.enclosures[i]

    @property
    def max_radius(self) -> Fraction:
        return max((e.radius for e in self.enclosures), default=Fraction(0))

    def realness(self) -> list[bool | None]:
        """``True``/``False`` when certified real/non-real, ``None`` when undecided.

        A disk meeting the real axis whose mirror image meets no other disk
        must hold a real root, because the conjugate of its root is also a root
        and can only live in the mirrored disk.
        """
        out: list[bool | None] = []
        encs = self.enclosures
        for i, e in enumerate(encs):
            if abs(e.im) > e.radius:
                out.append(False)
                continue
            mirror = Ball(e.re, -e.im, e.radius)
            clash = any(mirror.overlaps(o.ball) for j, o in enumerate(encs) if j != i)
            out.append(None if clash else True)
        return out

    def real_roots(self) -> list[RootEnclosure]:
        flags = self.realness()
        if any(f is None for f in flags):
            raise PrecisionError("real/non-real status of some disks is undecided")
        return [e for e, f in zip(self.enclosures, flags) if f]


@dataclass(frozen=True)
class SeparationReport:
    """Rigorous enclosures of sep(P), and of e(P) when the height is at least 2.

    Enclosure endpoints are rounded outward to ``REPORT_DIGITS`` significant
    decimal digits, so each stored endpoint has an exact decimal string.
    """

    poly: IntegerPolynomial
    height: int
    sep_lo: Fraction
    sep_hi: Fraction
    e_lo: Fraction | None
    e_hi: Fraction | None
    witness: tuple[int, int]
    roots: RootSet = field(repr=False, compare=False)
    witness_kind: str = "undetermined"

    @property
    def witness_pair(self) -> tuple[RootEnclosure, RootEnclosure]:
        i, j = self.witness
        return self.roots[i], self.roots[j]

    @property
    def rel_width(self) -> Fraction:
        return (self.sep_hi - self.sep_lo) / self.sep_lo

    @property
    def sep_mid(self) -> Fraction:
        return (self.sep_lo + self.sep_hi) / 2

    def to_json(self) -> dict:
        return {
            "poly": format_poly(self.poly),
            "height": str(self.height),
            "sep_lo": decimal_str(self.sep_lo),
            "sep_hi": decimal_str(self.sep_hi),
            "e_lo": None if self.e_lo is None else decimal_str(self.e_lo),
            "e_hi": None if self.e_hi is None else decimal_str(self.e_hi),
            "witness": list(self.witness),
            "witness_kind": self.witness_kind,
        }


# -- decimal helpers -------------------------------------------------------


def _decimal_round(q: Fraction, rounding: str, digits: int = REPORT_DIGITS) -> Fraction:
    ctx = Context(prec=digits, rounding=rounding)
    d = ctx.divide(Decimal(q.numerator), Decimal(q.denominator))
    return Fraction(d)


def outward_decimal(lo: Fraction, hi: Fraction, digits: int = REPORT_DIGITS) -> tuple[Fraction, Fraction]:
    return _decimal_round(lo, ROUND_FLOOR, digits), _decimal_round(hi, ROUND_CEILING, digits)


def decimal_str(q: Fraction) -> str:
    """Exact decimal string of a rational with a terminating expansion."""
    q = Fraction(q)
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        raise ValueError(f"{q} has no terminating decimal expansion")
    k = max(twos, fives)
    n = (q * 10**k).numerator
    sign = "-" if n < 0 else ""
    digits = str(abs(n)).rjust(k + 1, "0")
    whole, frac = digits[: len(digits) - k], digits[len(digits) - k :].rstrip("0")
    return sign + whole + ("." + frac if frac else "") if n else "0"


# -- approximation -----------------------------------------------------------


def _initial_guesses(coeffs: Sequence[int]) -> list[complex]:
    """Points on a circle inside the Fujiwara root bound, rotated off the axes."""
    d = len(coeffs) - 1
    lc = abs(coeffs[-1])
    bound = 0.0
    for i in range(d):
        c = abs(coeffs[i])
        if c:
            k = d - i
            factor = 2.0 if i > 0 else 2.0 ** (1.0 / k)
            bound = max(bound, factor * math.exp((math.log(c) - math.log(lc)) / k))
    radius = bound / 2 if bound else 1.0
    center = -coeffs[d - 1] / (d * coeffs[d]) if d > 0 else 0.0
    return [center + radius * cmath.exp(2j * math.pi * (i + 0.25) / d + 0.4j) for i in range(d)]


def _aberth_float(coeffs: Sequence[int], z: list[complex], max_iter: int = 600) -> list[complex]:
    fc = [float(c) for c in coeffs]
    dfc = [i * fc[i] for i in range(1, len(fc))]
    d = len(coeffs) - 1
    z = list(z)
    done = [False] * d
    for _ in range(max_iter):
        moved = False
        for i in range(d):
            if done[i]:
                continue
            zi = z[i]
            p = 0j
            for c in reversed(fc):
                p = p * zi + c
            dp = 0j
            for c in reversed(dfc):
                dp = dp * zi + c
            if p == 0:
                done[i] = True
                continue
            s = 0j
            for j in range(d):
                if j != i:
                    diff = zi - z[j]
                    if diff == 0:
                        diff = 1e-300 + 0j
                    s += 1.0 / diff
            ratio = p / dp if dp != 0 else complex(1e-8, 1e-8)
            denom = 1 - ratio * s
            w = ratio / denom if denom != 0 else ratio
            if not (math.isfinite(w.real) and math.isfinite(w.imag)):
                continue
            z[i] = zi - w
            if abs(w) <= 1e-15 * max(abs(z[i]), 1e-300):
                done[i] = True
            else:
                moved = True
        if not moved:
            break
    return z


def _aberth_mp(coeffs: Sequence[int], z: list[mpmath.mpc], prec: int, max_iter: int) -> list[mpmath.mpc]:
    d = len(coeffs) - 1
    with mpmath.workprec(prec):
        cs = [mpmath.mpf(c) for c in coeffs]
        dcs = [i * cs[i] for i in range(1, d + 1)]
        z = [mpmath.mpc(x) for x in z]
        tol = mpmath.ldexp(1, -prec + 8)
        done = [False] * d
        for _ in range(max_iter):
            moved = False
            for i in range(d):
                if done[i]:
                    continue
                zi = z[i]
                p = mpmath.mpc(0)
                for c in reversed(cs):
                    p = p * zi + c
                if p == 0:
                    done[i] = True
                    continue
                dp = mpmath.mpc(0)
                for c in reversed(dcs):
                    dp = dp * zi + c
                s = mpmath.mpc(0)
                for j in range(d):
                    if j != i:
                        diff = zi - z[j]
                        if diff == 0:
                            diff = mpmath.mpc(mpmath.ldexp(1, -prec))
                        s += 1 / diff
                ratio = p / dp if dp != 0 else mpmath.mpc(mpmath.ldexp(1, -prec // 2))
                denom = 1 - ratio * s
                w = ratio / denom if denom != 0 else ratio
                z[i] = zi - w
                if abs(w) <= tol * max(abs(z[i]), tol):
                    done[i] = True
                else:
                    moved = True
            if not moved:
                break
        return z


# -- certification -----------------------------------------------------------


def _gauss_mul(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    return a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def _ceil_sqrt(n: int) -> int:
    r = isqrt(n)
    return r if r * r == n else r + 1


def _certify(coeffs: Sequence[int], grid: list[tuple[int, int]], scale: int) -> list[int] | None:
    """Radii (in units of ``2**-(scale + RAD_EXTRA)``) for grid points ``(a + bi) / 2**scale``.

    Returns ``None`` when two grid points coincide.
    """
    d = len(coeffs) - 1
    lc = coeffs[-1]
    extra = _RAD_EXTRA
    radii = []
    for i, zi in enumerate(grid):
        acc = (lc, 0)
        for k in range(d - 1, -1, -1):
            acc = _gauss_mul(acc, zi)
            acc = (acc[0] + (coeffs[k] << (scale * (d - k))), acc[1])
        den = (lc, 0)
        for j, zj in enumerate(grid):
            if j != i:
                den = _gauss_mul(den, (zi[0] - zj[0], zi[1] - zj[1]))
        den2 = den[0] * den[0] + den[1] * den[1]
        if den2 == 0:
            return None
        num2 = acc[0] * acc[0] + acc[1] * acc[1]
        # r = d * |acc| / (|den| * 2**scale), expressed on the finer 2**-(scale+extra) grid
        q_num = d * d * num2 << (2 * extra)
        q = -((-q_num) // den2)
        radii.append(_ceil_sqrt(q) + 1)
    return radii


_RAD_EXTRA = 8


def _disjoint(grid: list[tuple[int, int]], radii: list[int]) -> bool:
    """Pairwise strict disjointness; centres and radii on a common grid."""
    n = len(grid)
    for i in range(n):
        ai, bi = grid[i]
        for j in range(i + 1, n):
            dx = (ai - grid[j][0]) << _RAD_EXTRA
            dy = (bi - grid[j][1]) << _RAD_EXTRA
            s = radii[i] + radii[j]
            if dx * dx + dy * dy <= s * s:
                return False
    return True


def _to_grid(z: mpmath.mpc, scale: int) -> tuple[int, int]:
    return (
        round(mpf_to_fraction(z.real) * (1 << scale)),
        round(mpf_to_fraction(z.imag) * (1 << scale)),
    )


@dataclass
class _FactorState:
    coeffs: list[int]
    multiplicity: int
    approx: list


def _magnitude_bits(states: list[_FactorState]) -> int:
    big = 1.0
    for st in states:
        for z in st.approx:
            big = max(big, abs(complex(z)))
    return max(0, int(math.ceil(math.log2(big))) + 1)


def _run_isolation(
    states: list[_FactorState],
    target: Fraction,
    scale: int,
    old: list[RootEnclosure] | None = None,
) -> tuple[list[RootEnclosure], int]:
    """Escalate precision until every disk is certified, disjoint and small enough."""
    while scale <= MAX_PRECISION:
        work = scale + _magnitude_bits(states) + 32
        grids: list[list[tuple[int, int]]] = []
        for st in states:
            st.approx = _aberth_mp(st.coeffs, st.approx, work, max_iter=60 + 10 * len(st.coeffs))
            grids.append([_to_grid(z, scale) for z in st.approx])
        radii_all: list[list[int]] | None = []
        for st, grid in zip(states, grids):
            radii = _certify(st.coeffs, grid, scale)
            if radii is None:
                radii_all = None
                break
            radii_all.append(radii)
        if radii_all is not None:
            flat_grid = [g for grid in grids for g in grid]
            flat_rad = [r for radii in radii_all for r in radii]
            unit = Fraction(1, 1 << (scale + _RAD_EXTRA))
            small = all(r * unit <= target for r in flat_rad)
            if small and _disjoint(flat_grid, flat_rad):
                encs = []
                for st, grid, radii in zip(states, grids, radii_all):
                    for (a, b), r in zip(grid, radii):
                        encs.append(
                            RootEnclosure(
                                Fraction(a, 1 << scale), Fraction(b, 1 << scale), r * unit, st.multiplicity
                            )
                        )
                if old is None or _nested(encs, old):
                    return encs, scale
        scale *= 2
    raise PrecisionError(f"root isolation did not certify below {MAX_PRECISION} bits")


def _nested(new: list[RootEnclosure], old: list[RootEnclosure]) -> bool:
    """Every new disk sits inside some old disk of the same multiplicity, one-to-one."""
    used = set()
    for e in new:
        hit = None
        for k, o in enumerate(old):
            if k not in used and o.multiplicity == e.multiplicity and o.ball.contains(e.ball):
                hit = k
                break
        if hit is None:
            return False
        used.add(hit)
    return True


def _sort_key(e: RootEnclosure):
    return (e.re, e.im, e.multiplicity)


def _neg_log2(q: Fraction) -> int:
    """Integer close to ``-log2(q)`` for positive rational ``q``."""
    return q.denominator.bit_length() - q.numerator.bit_length()


def _bits_for_radius(target: Fraction) -> int:
    if target <= 0:
        raise ValueError("target radius must be positive")
    return max(53, _neg_log2(target) + 8)


def _initial_states(p: IntegerPolynomial) -> list[_FactorState]:
    states = []
    for fac, mult in squarefree_decomposition(p):
        coeffs = list(fac.coeffs)
        if max(abs(c) for c in coeffs) < 2**1000:
            approx = _aberth_float(coeffs, _initial_guesses(coeffs))
        else:
            approx = [complex(z) for z in _initial_guesses(coeffs)]
        states.append(_FactorState(coeffs, mult, [mpmath.mpc(z) for z in approx]))
    return states


def isolate_roots(p: IntegerPolynomial, target_radius=Fraction(1, 2**20)) -> RootSet:
    """Certified pairwise-disjoint disks, one per distinct root of ``p``."""
    if p.degree < 1:
        raise ValueError("root isolation needs degree >= 1")
    target = Fraction(target_radius)
    states = _initial_states(p)
    encs, scale = _run_isolation(states, target, _bits_for_radius(target))
    return RootSet(tuple(sorted(encs, key=_sort_key)), p, scale)


def refine(rs: RootSet, target_radius) -> RootSet:
    """Shrink every disk below ``target_radius``; each new disk lies inside its old one."""
    target = Fraction(target_radius)
    if rs.max_radius <= target:
        return rs
    states = []
    for fac, mult in squarefree_decomposition(rs.source):
        warm = [e.center for e in rs.enclosures if e.multiplicity == mult]
        states.append(_FactorState(list(fac.coeffs), mult, warm))
    start = max(rs.precision, _bits_for_radius(target))
    encs, scale = _run_isolation(states, target, start, old=list(rs.enclosures))
    return RootSet(tuple(sorted(encs, key=_sort_key)), rs.source, scale)


# -- separation ----------------------------------------------------------------


def _pair_interval(a: RootEnclosure, b: RootEnclosure, bits: int) -> tuple[Fraction, Fraction]:
    d2 = (a.re - b.re) ** 2 + (a.im - b.im) ** 2
    lo, hi = sqrt_bounds(d2, bits)
    return lo - a.radius - b.radius, hi + a.radius + b.radius


def pair_distance(a: RootEnclosure, b: RootEnclosure, bits: int = 96) -> tuple[Fraction, Fraction]:
    """Enclosure of the distance between the roots held by two disks."""
    lo, hi = _pair_interval(a, b, bits)
    return max(lo, Fraction(0)), hi


def _witness(rs: RootSet, bits: int) -> tuple[tuple[int, int], Fraction, Fraction]:
    best = None
    encs = rs.enclosures
    for i in range(len(encs)):
        for j in range(i + 1, len(encs)):
            lo, hi = _pair_interval(encs[i], encs[j], bits)
            if best is None or (lo, hi) < (best[1], best[2]):
                best = ((i, j), lo, hi)
    assert best is not None
    return best


def _log_enclosure(lo: Fraction, hi: Fraction, h: int) -> tuple[Fraction, Fraction]:
    """Rigorous bounds on ``-ln(x)/ln(h)`` over ``x`` in ``[lo, hi]``."""
    iv = mpmath.iv
    with mpmath.workprec(160):
        old = iv.prec
        iv.prec = 160
        try:
            x_hi = iv.mpf(hi.numerator) / iv.mpf(hi.denominator)
            x_lo = iv.mpf(lo.numerator) / iv.mpf(lo.denominator)
            lh = iv.log(iv.mpf(h))
            e_from_hi = -iv.log(x_hi) / lh
            e_from_lo = -iv.log(x_lo) / lh
            e_lo = mpmath.mpf(e_from_hi._mpi_[0])
            e_hi = mpmath.mpf(e_from_lo._mpi_[1])
            return mpf_to_fraction(e_lo), mpf_to_fraction(e_hi)
        finally:
            iv.prec = old


def _real_filtered(rs: RootSet) -> RootSet:
    flags = rs.realness()
    if any(f is None for f in flags):
        raise PrecisionError("undecided")
    return RootSet(tuple(e for e, f in zip(rs.enclosures, flags) if f), rs.source, rs.precision)


def separation_from_roots(rs: RootSet, rel_width=None) -> SeparationReport:
    """Separation report built from an existing certified root set (no refinement)."""
    if len(rs) < 2:
        raise UndefinedQuantityError("sep undefined: fewer than two distinct roots")
    bits = 64
    if rel_width is not None:
        bits = max(bits, _neg_log2(Fraction(rel_width)) + 40)
    bits = max(bits, rs.precision + 16)
    (i, j), lo, hi = _witness(rs, bits)
    h = height(rs.source)
    if lo <= 0:
        lo_out, hi_out = Fraction(0), _decimal_round(hi, ROUND_CEILING)
    else:
        lo_out, hi_out = outward_decimal(lo, hi)
    e_lo = e_hi = None
    if h >= 2 and lo_out > 0:
        el, eh = _log_enclosure(lo_out, hi_out, h)
        e_lo, e_hi = outward_decimal(el, eh)
    kind = "undetermined"
    flags = rs.realness()
    if flags[i] is not None and flags[j] is not None:
        kind = "real" if (flags[i] and flags[j]) else "complex"
    return SeparationReport(rs.source, h, lo_out, hi_out, e_lo, e_hi, (i, j), rs, kind)


def sep(p: IntegerPolynomial, rel_width=DEFAULT_REL_WIDTH, real_only: bool = False) -> SeparationReport:
    """Certified enclosure of the minimum distance between distinct roots of ``p``.

    With ``real_only`` the minimum runs over real roots only; witness indices
    then refer to the real-root subset.
    """
    rel_width = Fraction(rel_width)
    if not 0 < rel_width < 1:
        raise ValueError("rel_width must lie in (0, 1)")
    if p.degree < 2:
        raise UndefinedQuantityError("sep undefined: fewer than two distinct roots")
    rs = isolate_roots(p, Fraction(1, 2**40))
    if len(rs) < 2:
        raise UndefinedQuantityError("sep undefined: fewer than two distinct roots")
    for _ in range(64):
        view = rs
        if real_only:
            flags = rs.realness()
            if any(f is None for f in flags):
                rs = refine(rs, rs.max_radius / 2**16)
                continue
            view = RootSet(tuple(e for e, f in zip(rs.enclosures, flags) if f), rs.source, rs.precision)
            if len(view) < 2:
                raise UndefinedQuantityError("sep undefined: fewer than two distinct real roots")
        report = separation_from_roots(view, rel_width)
        if report.sep_lo > 0 and report.rel_width <= rel_width:
            return report
        # Shrink the radii to a fraction of the current separation estimate.
        est = report.sep_hi
        target = min(rs.max_radius / 2**8, est * rel_width / 16)
        rs = refine(rs, target)
    raise PrecisionError("separation enclosure did not reach the requested width")


def exponent(p: IntegerPolynomial, rel_width=DEFAULT_REL_WIDTH, real_only: bool = False) -> SeparationReport:
    """Separation report with a certified enclosure of e(P), where sep(P) = H(P)**-e(P)."""
    h = height(p)
    if h <= 1:
        raise UndefinedQuantityError("exponent undefined at height 1")
    return sep(p, rel_width, real_only=real_only)


def nearest_root_distance(p: IntegerPolynomial, point, rel_width=DEFAULT_REL_WIDTH) -> tuple[Fraction, Fraction]:
    """Enclosure of ``min |point - root|`` over roots of ``p`` (``point`` exact, not a root)."""
    z = Ball.exact(point)
    if z.im == 0 and p(z.re) == 0:
        raise UndefinedQuantityError("point is a root")
    rs = isolate_roots(p, Fraction(1, 2**40))
    rel_width = Fraction(rel_width)
    for _ in range(64):
        los, his = [], []
        for e in rs:
            d2 = (e.re - z.re) ** 2 + (e.im - z.im) ** 2
            lo, hi = sqrt_bounds(d2, 96)
            los.append(lo - e.radius)
            his.append(hi + e.radius)
        lo, hi = min(los), min(his)
        if lo > 0 and (hi - lo) <= rel_width * lo:
            return lo, hi
        rs = refine(rs, min(rs.max_radius / 2**8, hi * rel_width / 16))
    raise PrecisionError("distance enclosure did not converge")
