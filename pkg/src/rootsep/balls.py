"""Complex disk ("ball") arithmetic over exact dyadic rationals.

A :class:`Ball` is a closed disk ``{z : |z - mid| <= rad}`` with a rational
midpoint and a rational radius. Arithmetic is exact by default; passing a
precision to :meth:`Ball.rounded` (or to :func:`rootsep.polycore.evaluate`)
rounds the midpoint to that many significant bits and folds the rounding error
into the radius, so the enclosure property is never lost.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from numbers import Rational
from typing import Union

import mpmath

Number = Union[int, Fraction, "Ball"]

RADIUS_BITS = 32


def sqrt_bounds(q: Fraction, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Return ``(lo, hi)`` with ``lo <= sqrt(q) <= hi`` and relative gap below ``2**-bits``."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative number")
    if q == 0:
        return Fraction(0), Fraction(0)
    num, den = q.numerator, q.denominator
    m = num * den
    shift = max(0, bits + 2 - m.bit_length() // 2)
    big = m << (2 * shift)
    s = isqrt(big)
    lo = Fraction(s, den << shift)
    if s * s == big:
        return lo, lo
    return lo, Fraction(s + 1, den << shift)


def round_to_bits(x: Fraction, prec: int, mode: str = "nearest") -> Fraction:
    """Round ``x`` to a dyadic rational with ``prec`` significant bits.

    ``mode`` is ``"nearest"``, ``"up"`` (toward +inf) or ``"down"``.
    """
    x = Fraction(x)
    if x == 0:
        return x
    num, den = x.numerator, x.denominator
    exp = num.bit_length() - den.bit_length()
    shift = prec - exp
    if shift >= 0:
        scaled_num, scaled_den = num << shift, den
    else:
        scaled_num, scaled_den = num, den << -shift
    if mode == "nearest":
        m = (2 * scaled_num + scaled_den) // (2 * scaled_den)
    elif mode == "up":
        m = -((-scaled_num) // scaled_den)
    elif mode == "down":
        m = scaled_num // scaled_den
    else:
        raise ValueError(f"unknown rounding mode {mode!r}")
    if shift >= 0:
        return Fraction(m, 1 << shift)
    return Fraction(m << -shift)


def _as_fraction_pair(z) -> tuple[Fraction, Fraction]:
    if isinstance(z, (int, Rational)):
        return Fraction(z), Fraction(0)
    if isinstance(z, tuple) and len(z) == 2:
        return Fraction(z[0]), Fraction(z[1])
    if isinstance(z, complex):
        return Fraction(z.real), Fraction(z.imag)
    if isinstance(z, float):
        return Fraction(z), Fraction(0)
    if isinstance(z, mpmath.mpc):
        return mpf_to_fraction(z.real), mpf_to_fraction(z.imag)
    if isinstance(z, mpmath.mpf):
        return mpf_to_fraction(z), Fraction(0)
    raise TypeError(f"cannot interpret {type(z).__name__} as an exact complex number")


def mpf_to_fraction(x: mpmath.mpf) -> Fraction:
    """Exact conversion of a finite mpmath float."""
    if not mpmath.isfinite(x):
        raise ValueError("non-finite value")
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return Fraction(0)
    if sign:
        man = -man
    if exp >= 0:
        return Fraction(int(man) << exp)
    return Fraction(int(man), 1 << -exp)


@dataclass(frozen=True)
class Ball:
    re: Fraction
    im: Fraction = Fraction(0)
    rad: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))
        object.__setattr__(self, "rad", Fraction(self.rad))
        if self.rad < 0:
            raise ValueError("negative radius")

    @classmethod
    def exact(cls, z) -> "Ball":
        if isinstance(z, Ball):
            return z
        re, im = _as_fraction_pair(z)
        return cls(re, im, Fraction(0))

    @classmethod
    def from_interval(cls, lo, hi) -> "Ball":
        """Smallest real-centred disk covering the interval ``[lo, hi]``."""
        lo, hi = Fraction(lo), Fraction(hi)
        if hi < lo:
            raise ValueError("empty interval")
        return cls((lo + hi) / 2, Fraction(0), (hi - lo) / 2)

    # -- queries ---------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.rad == 0

    @property
    def real_lo(self) -> Fraction:
        return self.re - self.rad

    @property
    def real_hi(self) -> Fraction:
        return self.re + self.rad

    def abs_mid_upper(self, bits: int = 64) -> Fraction:
        return sqrt_bounds(self.re * self.re + self.im * self.im, bits)[1]

    def abs_upper(self, bits: int = 64) -> Fraction:
        return self.abs_mid_upper(bits) + self.rad

    def abs_lower(self, bits: int = 64) -> Fraction:
        return max(Fraction(0), sqrt_bounds(self.re * self.re + self.im * self.im, bits)[0] - self.rad)

    def contains(self, z) -> bool:
        """Exact containment test for a point or a ball."""
        if isinstance(z, Ball):
            if z.rad > self.rad:
                return False
            gap = self.rad - z.rad
            return (z.re - self.re) ** 2 + (z.im - self.im) ** 2 <= gap * gap
        re, im = _as_fraction_pair(z)
        return (re - self.re) ** 2 + (im - self.im) ** 2 <= self.rad * self.rad

    def contains_zero(self) -> bool:
        return self.re * self.re + self.im * self.im <= self.rad * self.rad

    def overlaps(self, other: "Ball") -> bool:
        s = self.rad + other.rad
        return (self.re - other.re) ** 2 + (self.im - other.im) ** 2 <= s * s

    def real_sign(self) -> int:
        """Certified sign of the real part, or 0 when it is not determined."""
        if self.real_lo > 0:
            return 1
        if self.real_hi < 0:
            return -1
        return 0

    def mid_mpc(self, prec: int = 53) -> mpmath.mpc:
        with mpmath.workprec(prec):
            return mpmath.mpc(_frac_to_mpf(self.re), _frac_to_mpf(self.im))

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: Number) -> "Ball":
        o = Ball.exact(other) if not isinstance(other, Ball) else other
        return Ball(self.re + o.re, self.im + o.im, self.rad + o.rad)

    __radd__ = __add__

    def __neg__(self) -> "Ball":
        return Ball(-self.re, -self.im, self.rad)

    def __sub__(self, other: Number) -> "Ball":
        return self + (-(Ball.exact(other)))

    def __rsub__(self, other: Number) -> "Ball":
        return Ball.exact(other) + (-self)

    def __mul__(self, other: Number) -> "Ball":
        o = Ball.exact(other) if not isinstance(other, Ball) else other
        re = self.re * o.re - self.im * o.im
        im = self.re * o.im + self.im * o.re
        if self.rad == 0 and o.rad == 0:
            return Ball(re, im)
        rad = (
            self.abs_mid_upper(RADIUS_BITS) * o.rad
            + o.abs_mid_upper(RADIUS_BITS) * self.rad
            + self.rad * o.rad
        )
        return Ball(re, im, round_to_bits(rad, RADIUS_BITS, "up"))

    __rmul__ = __mul__

    def scale(self, q) -> "Ball":
        """Multiply by an exact rational."""
        q = Fraction(q)
        return Ball(self.re * q, self.im * q, self.rad * abs(q))

    def rounded(self, prec: int | None) -> "Ball":
        """Round the midpoint to ``prec`` significant bits, enlarging the radius."""
        if prec is None:
            return self
        re = round_to_bits(self.re, prec)
        im = round_to_bits(self.im, prec)
        err = abs(re - self.re) + abs(im - self.im)
        return Ball(re, im, round_to_bits(self.rad + err, RADIUS_BITS, "up"))

    def __repr__(self) -> str:
        mid = self.mid_mpc(64)
        return f"Ball({mpmath.nstr(mid, 12)} +/- {mpmath.nstr(_frac_to_mpf(self.rad), 3)})"


def _frac_to_mpf(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator
