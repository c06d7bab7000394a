"""Enumerations, sampled inequality checks and exponent fits for reducible polynomials."""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import mpmath
import numpy as np

from .balls import sqrt_bounds
from .errors import UndefinedQuantityError
from .polycore import (
    FactoredPolynomial,
    IntegerPolynomial,
    discriminant,
    height,
    multiply,
    squarefree_part,
)
from .rootfinder import (
    DEFAULT_REL_WIDTH,
    RootSet,
    SeparationReport,
    exponent,
    isolate_roots,
    nearest_root_distance,
)

FIT_MAX_REL_WIDTH = Fraction(1, 1000)
DEFAULT_TOP_K = 30


@dataclass(frozen=True)
class SurveyRecord:
    factored: FactoredPolynomial
    report: SeparationReport
    shape: tuple[int, ...]


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    points: list[tuple[float, float]]
    residual_max: float
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if len(self.points) < 3:
            raise ValueError("a fit needs at least three points")


def _parse_shape(d: int, shape: Sequence[int]) -> tuple[int, ...]:
    shape = tuple(sorted(int(s) for s in shape))
    if not shape or any(s < 1 for s in shape):
        raise ValueError(f"invalid shape {shape}: parts must be positive")
    if sum(shape) != d:
        raise ValueError(f"shape {shape} does not sum to degree {d}")
    return shape


def monic_polys(degree: int, bound: int) -> list[IntegerPolynomial]:
    """All monic polynomials of the given degree and height at most ``bound``."""
    if bound < 1:
        return []
    rng = range(-bound, bound + 1)
    return [IntegerPolynomial(list(low) + [1]) for low in itertools.product(rng, repeat=degree)]


def enumerate_reducible(d: int, shape: Sequence[int], factor_height_bound: int) -> Iterator[FactoredPolynomial]:
    """Every canonical monic factor tuple of the given shape with factor heights <= bound.

    Factors of equal degree are taken as multisets, so each unordered tuple
    appears once; factors are ordered by (degree, coefficients).
    """
    shape = _parse_shape(d, shape)
    groups = sorted(Counter(shape).items())
    pools = []
    for deg, mult in groups:
        polys = monic_polys(deg, factor_height_bound)
        pools.append(list(itertools.combinations_with_replacement(polys, mult)))
    for choice in itertools.product(*pools):
        factors = [f for group in choice for f in group]
        yield FactoredPolynomial(factors)


def count_reducible(d: int, shape: Sequence[int], factor_height_bound: int) -> int:
    shape = _parse_shape(d, shape)
    total = 1
    for deg, mult in Counter(shape).items():
        pool = (2 * factor_height_bound + 1) ** deg if factor_height_bound >= 1 else 0
        total *= math.comb(pool + mult - 1, mult) if pool else 0
    return total


# -- exact inequality checks --------------------------------------------------


@dataclass(frozen=True)
class GelfondCheck:
    passed: bool
    lower_margin: Fraction
    upper_margin: Fraction
    height_q: int
    height_r: int
    height_p: int


def check_gelfond(Q: IntegerPolynomial, R: IntegerPolynomial) -> GelfondCheck:
    """Exact check of ``2^-(m+n) H(Q)H(R) <= H(QR) <= 2^(m+n) H(Q)H(R)``.

    Margins are the slack on each side; both are non-negative on a pass.
    """
    n, m = Q.degree, R.degree
    hq, hr = height(Q), height(R)
    hp = height(multiply(Q, R))
    scale = 2 ** (m + n)
    lower = hp - Fraction(hq * hr, scale)
    upper = Fraction(scale * hq * hr - hp)
    return GelfondCheck(lower >= 0 and upper >= 0, lower, upper, hq, hr, hp)


def mahler_measure_upper(p: IntegerPolynomial, rs: RootSet | None = None) -> Fraction:
    """Upper bound on ``|lc| * prod max(1, |root|)`` (roots counted with multiplicity)."""
    if rs is None:
        rs = isolate_roots(p, Fraction(1, 2**30))
    m = Fraction(abs(p.leading))
    for e in rs:
        r = sqrt_bounds(e.re * e.re + e.im * e.im, 64)[1] + e.radius
        m *= max(Fraction(1), r) ** e.multiplicity
    return m


def mahler_floor(p: IntegerPolynomial, rs: RootSet | None = None) -> Fraction:
    """Lower bound ``sqrt(3 |disc|) d^(-(d+2)/2) M(P)^(-(d-1))`` for sep(P).

    This is Mahler's classical explicit separation bound for squarefree
    integer polynomials; the constant comes from outside this package and is
    checked empirically in the test-suite.
    """
    d = p.degree
    if d < 2:
        raise ValueError("mahler_floor needs degree >= 2")
    disc = discriminant(p)
    if disc == 0:
        raise UndefinedQuantityError("mahler_floor needs a squarefree polynomial")
    root_part = sqrt_bounds(Fraction(3 * abs(disc), d ** (d + 2)), 64)[0]
    return root_part / mahler_measure_upper(p, rs) ** (d - 1)


# -- linear factor sampling ------------------------------------------------------


@dataclass(frozen=True)
class LinearSample:
    c: int
    R: IntegerPolynomial
    eps_lo: Fraction
    eps_hi: Fraction

    @property
    def product(self) -> IntegerPolynomial:
        return multiply(IntegerPolynomial([-self.c, 1]), self.R)


def _log_uniform_int(rng: random.Random, lo: int, hi: int) -> int:
    return int(round(math.exp(rng.uniform(math.log(lo), math.log(hi)))))


def linear_factor_samples(
    d: int, samples: int, height_range: tuple[int, int] = (100, 10**4), seed: int = 0
) -> list[LinearSample]:
    """Seeded samples ``(x - c) R`` aimed at the close linear-factor configuration.

    ``R = (x - c) S + s`` with ``S`` monic of degree ``d - 2`` and small
    ``s != 0``, so ``R(c) = s`` and ``R`` has a root near ``c``. ``|c|`` is
    log-uniform on ``[lo, sqrt(lo hi)]`` and the coefficient bound ``h`` of
    ``S`` is log-uniform on ``[1, sqrt(hi / lo)]``, drawn independently so the
    fit is not biased by a coupling between them. Samples whose factor
    heights leave ``height_range`` are redrawn.
    """
    if d < 3:
        raise ValueError("linear_factor_samples needs d >= 3")
    lo, hi = height_range
    c_hi = max(lo, math.isqrt(lo * hi))
    h_hi = max(1, math.isqrt(hi // lo))
    rng = random.Random(seed)
    out: list[LinearSample] = []
    tries = 0
    while len(out) < samples:
        tries += 1
        if tries > 50 * samples + 100:
            raise UndefinedQuantityError("could not draw enough valid samples")
        c = _log_uniform_int(rng, lo, c_hi) * rng.choice((-1, 1))
        h = _log_uniform_int(rng, 1, h_hi)
        S = IntegerPolynomial([rng.randint(-h, h) for _ in range(d - 2)] + [1])
        s = rng.choice((-3, -2, -1, 1, 2, 3))
        R = multiply(IntegerPolynomial([-c, 1]), S) + IntegerPolynomial([s])
        if R(c) == 0 or not lo <= height(R) <= hi:
            continue
        eps_lo, eps_hi = nearest_root_distance(R, c)
        out.append(LinearSample(c, R, eps_lo, eps_hi))
    return out


def _ln(q: Fraction) -> float:
    with mpmath.workprec(80):
        return float(mpmath.log(mpmath.mpf(q.numerator)) - mpmath.log(mpmath.mpf(q.denominator)))


def _least_squares(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float, float]:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if len(x) < 3:
        raise ValueError("a fit needs at least three points")
    if np.ptp(x) == 0:
        raise ValueError("degenerate abscissae: all ln H values coincide")
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.max(np.abs(y - (slope * x + intercept))))
    return float(slope), float(intercept), residual


def linear_factor_ceiling(
    d: int, samples: int, height_range: tuple[int, int] = (100, 10**4), seed: int = 0
) -> FitResult:
    """Fit ``ln eps`` against ``ln H((x - c) R)`` over seeded samples."""
    data = linear_factor_samples(d, samples, height_range, seed)
    xs = [math.log(height(s.product)) for s in data]
    ys = [_ln((s.eps_lo + s.eps_hi) / 2) for s in data]
    slope, intercept, residual = _least_squares(xs, ys)
    return FitResult(slope, intercept, list(zip(xs, ys)), residual, {"seed": seed, "d": d, "samples": samples})


def exponent_fit(records: Iterable[tuple[int, Fraction, Fraction]]) -> FitResult:
    """Least-squares slope of ``ln sep`` against ``ln H`` using enclosure midpoints.

    ``records`` holds ``(H, sep_lo, sep_hi)``; each enclosure must be relatively
    narrower than ``FIT_MAX_REL_WIDTH``.
    """
    xs, ys = [], []
    for h, lo, hi in records:
        lo, hi = Fraction(lo), Fraction(hi)
        if h < 2:
            raise ValueError("fit points need H >= 2")
        if lo <= 0 or (hi - lo) > FIT_MAX_REL_WIDTH * lo:
            raise ValueError("separation enclosure too wide for fitting")
        xs.append(math.log(h))
        ys.append(_ln((lo + hi) / 2))
    slope, intercept, residual = _least_squares(xs, ys)
    return FitResult(slope, intercept, list(zip(xs, ys)), residual)


def fit_reports(reports: Iterable[SeparationReport]) -> FitResult:
    return exponent_fit((r.height, r.sep_lo, r.sep_hi) for r in reports)


# -- exhaustive exponent survey ------------------------------------------------------


def _float_exponent(p: IntegerPolynomial) -> float | None:
    """Hardware-float estimate of e(P); ``None`` when sep or e is undefined."""
    h = height(p)
    if h < 2:
        return None
    sf = squarefree_part(p)
    if sf.degree < 2:
        return None
    roots = np.roots(np.array(list(reversed(sf.coeffs)), dtype=float))
    diffs = np.abs(roots[:, None] - roots[None, :])
    np.fill_diagonal(diffs, np.inf)
    s = float(diffs.min())
    if s <= 0:
        return math.inf
    return -math.log(s) / math.log(h)


def _screen_chunk(chunk: list[FactoredPolynomial]) -> list[tuple[float, FactoredPolynomial]]:
    out = []
    for fp in chunk:
        e = _float_exponent(fp.product)
        if e is not None:
            out.append((e, fp))
    return out


def _certify_one(fp: FactoredPolynomial, rel_width) -> SurveyRecord:
    return SurveyRecord(fp, exponent(fp.product, rel_width), fp.shape)


@dataclass(frozen=True)
class SurveyResult:
    records: list[SurveyRecord]
    scored: int
    skipped: int
    certified: int

    @property
    def max_e_lo(self) -> Fraction | None:
        return self.records[0].report.e_lo if self.records else None


def _record_key(r: SurveyRecord):
    return (-r.report.e_lo, tuple(f.coeffs for f in r.factored.factors))


def max_exponent_survey(
    d: int,
    shape: Sequence[int],
    factor_height_bound: int,
    top_k: int = DEFAULT_TOP_K,
    rel_width=DEFAULT_REL_WIDTH,
    screen: bool = True,
    margin: float = 0.05,
    jobs: int = 1,
) -> SurveyResult:
    """Top-``top_k`` products of the enumerated space by certified ``e_lo``.

    With ``screen`` every product is first scored in hardware floats; products
    are then certified in decreasing score order until ``top_k`` are certified
    and the next score falls ``margin`` below the ``top_k``-th certified e_lo.
    Without ``screen`` every product is certified. Products with fewer than two
    distinct roots or height 1 are skipped.
    """
    space = list(enumerate_reducible(d, shape, factor_height_bound))
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        size = max(1, len(space) // (4 * jobs))
        chunks = [space[i : i + size] for i in range(0, len(space), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            scored = [x for part in pool.map(_screen_chunk, chunks) for x in part]
    else:
        scored = _screen_chunk(space)
    skipped = len(space) - len(scored)
    order = sorted(range(len(scored)), key=lambda i: (-scored[i][0], tuple(f.coeffs for f in scored[i][1].factors)))

    certified: list[SurveyRecord] = []
    if not screen:
        certified = [_certify_one(scored[i][1], rel_width) for i in order]
    else:
        for pos, i in enumerate(order):
            est, fp = scored[i]
            if len(certified) >= top_k:
                kth = sorted(certified, key=_record_key)[top_k - 1].report.e_lo
                if est < float(kth) - margin:
                    break
            certified.append(_certify_one(fp, rel_width))
    certified.sort(key=_record_key)
    return SurveyResult(certified[:top_k], len(scored), skipped, len(certified))


SURVEY_HEADER = ("shape", "hQ", "hR", "height", "e_lo", "e_hi", "polys")


def survey_row(rec: SurveyRecord) -> list[str]:
    from .rootfinder import decimal_str

    factors = rec.factored.factors
    hq = height(factors[0])
    rest = factors[1:]
    hr = height(multiply_all(rest)) if rest else ""
    return [
        "+".join(str(s) for s in rec.shape),
        str(hq),
        str(hr),
        str(rec.report.height),
        decimal_str(rec.report.e_lo),
        decimal_str(rec.report.e_hi),
        " * ".join(f.to_text() for f in factors),
    ]


def multiply_all(polys: Sequence[IntegerPolynomial]) -> IntegerPolynomial:
    out = IntegerPolynomial([1])
    for p in polys:
        out = multiply(out, p)
    return out


# -- random squarefree polynomials ------------------------------------------------


def random_squarefree(rng: random.Random, degree: int, coeff_bound: int) -> IntegerPolynomial:
    """Random integer polynomial of exact degree with nonzero discriminant."""
    while True:
        coeffs = [rng.randint(-coeff_bound, coeff_bound) for _ in range(degree)]
        lead = 0
        while lead == 0:
            lead = rng.randint(-coeff_bound, coeff_bound)
        p = IntegerPolynomial(coeffs + [lead])
        if discriminant(p) != 0:
            return p


def random_monic(rng: random.Random, degree: int, height_bound: int) -> IntegerPolynomial:
    """Random monic polynomial whose height is at most ``height_bound``."""
    return IntegerPolynomial([rng.randint(-height_bound, height_bound) for _ in range(degree)] + [1])


# -- verification suites -----------------------------------------------------


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    samples: int
    violations: int
    statistic: str
    seed: int

    @property
    def passed(self) -> bool:
        return self.violations == 0


SUITE_HEADER = ("suite", "samples", "violations", "statistic", "seed", "passed")


def suite_row(r: SuiteResult) -> list[str]:
    return [r.suite, str(r.samples), str(r.violations), r.statistic, str(r.seed), "1" if r.passed else "0"]


def _map(fn, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (8 * jobs))))


def gelfond_pairs(samples: int, seed: int, height_bound: int = 1000, max_degree: int = 5):
    rng = random.Random(seed)
    out = []
    for _ in range(samples):
        q = random_monic(rng, rng.randint(1, max_degree), height_bound)
        r = random_monic(rng, rng.randint(1, max_degree), height_bound)
        out.append((q, r))
    return out


def gelfond_suite(samples: int = 10**4, seed: int = 0, height_bound: int = 1000) -> SuiteResult:
    checks = [check_gelfond(q, r) for q, r in gelfond_pairs(samples, seed, height_bound)]
    worst = min(min(c.lower_margin, c.upper_margin) for c in checks) if checks else Fraction(0)
    return SuiteResult("gelfond", samples, sum(not c.passed for c in checks), f"min_margin={worst}", seed)


def _mahler_one(args) -> tuple[bool, float]:
    p, rel_width = args
    from .rootfinder import sep

    report = sep(p, rel_width)
    floor = mahler_floor(p, report.roots)
    ratio = float(mpmath.log10(mpmath.mpf(report.sep_lo.numerator) / report.sep_lo.denominator)) - float(
        mpmath.log10(mpmath.mpf(floor.numerator) / floor.denominator)
    )
    return floor < report.sep_lo, ratio


def mahler_polys(samples: int, seed: int, coeff_bound: int = 1000) -> list[IntegerPolynomial]:
    rng = random.Random(seed)
    return [random_squarefree(rng, rng.randint(2, 6), coeff_bound) for _ in range(samples)]


def mahler_suite(
    samples: int = 10**4,
    seed: int = 0,
    extra: Sequence[IntegerPolynomial] = (),
    rel_width=Fraction(1, 2),
    jobs: int = 1,
) -> SuiteResult:
    """``mahler_floor < sep_lo`` on seeded random squarefree polynomials plus ``extra``.

    The statistic is the smallest observed ``log10(sep_lo / floor)``.
    """
    polys = mahler_polys(samples, seed) + list(extra)
    results = _map(_mahler_one, [(p, rel_width) for p in polys], jobs)
    slack = min(r[1] for r in results) if results else 0.0
    return SuiteResult("mahler", len(polys), sum(not ok for ok, _ in results), f"min_log10_slack={slack:.6f}", seed)


def linear_suite(d: int = 5, samples: int = 1000, seed: int = 0, height_range=(100, 10**4)) -> tuple[SuiteResult, FitResult]:
    fit = linear_factor_ceiling(d, samples, height_range, seed)
    floor = -Fraction(d - 1, 2) - Fraction(1, 4)
    ok = fit.slope >= floor
    return SuiteResult("linear", samples, 0 if ok else 1, f"slope={fit.slope:.6f}", seed), fit


FIT_HEADER = ("slope", "intercept", "residual_max", "n_points")


def fit_row(fit: FitResult) -> list[str]:
    return [repr(fit.slope), repr(fit.intercept), repr(fit.residual_max), str(len(fit.points))]
