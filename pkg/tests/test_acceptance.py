"""Acceptance suite: one test and one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the summary lines are shown at
the end of the session) or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from rootsep.families import expansion_residual, family_P, height_formula
from rootsep.lattice import LatticeBasis, close_root_search, gram_schmidt, hermite_normal_form, lll_reduce
from rootsep.polycore import IntegerPolynomial, height
from rootsep.rootfinder import exponent, sep
from rootsep.survey import exponent_fit, gelfond_suite, linear_factor_ceiling, mahler_suite

P = IntegerPolynomial
ACCEPT_WIDTH = Fraction(1, 10**6)
RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def criterion_family_members() -> list[IntegerPolynomial]:
    members = {}
    for d, n in [(5, 100), (7, 20), (9, 10)]:
        members[(d, n)] = family_P(d, n).product
    for k in (2, 3, 4):
        for n in range(2, 51):
            members[(2 * k + 1, n)] = family_P(2 * k + 1, n).product
    for n in (10, 20, 40, 80, 160, 320):
        members[(5, n)] = family_P(5, n).product
    for n in (5, 10, 20, 40):
        members[(7, n)] = family_P(7, n).product
    return [members[key] for key in sorted(members)]


def test_criterion_1_exponent_windows():
    t0 = time.perf_counter()
    cases = [(5, 100, Fraction(7, 3), Fraction(1, 100)), (7, 20, Fraction(17, 5), Fraction(2, 100)), (9, 10, Fraction(31, 7), Fraction(3, 100))]
    ok, parts = True, []
    for d, n, target, tol in cases:
        r = exponent(family_P(d, n).product, ACCEPT_WIDTH)
        inside = target - tol <= r.e_lo and r.e_hi <= target + tol
        ok &= inside
        parts.append(f"P_{d},{n}: e in [{float(r.e_lo):.6f}, {float(r.e_hi):.6f}] vs {target}+-{float(tol)}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    record(1, ok, "; ".join(parts) + f"; {elapsed:.1f}s")


def test_criterion_2_sep_bound():
    violations = []
    for k in (2, 3, 4):
        for n in range(2, 51):
            r = sep(family_P(2 * k + 1, n).product)
            if not r.sep_hi < 2 * Fraction(n) ** (1 - 2 * k * k):
                violations.append((k, n))
    record(2, not violations, f"{3 * 49} cases, violations: {violations or 'none'}")


def test_criterion_3_heights():
    bad = []
    for k in (2, 3, 4):
        for n in range(3, 51):
            if height(family_P(2 * k + 1, n).product) != height_formula(k, n):
                bad.append((k, n))
    h22 = height(family_P(5, 2).product)
    ok = not bad and h22 == 8
    record(3, ok, f"formula mismatches for n>=3: {bad or 'none'}; H(P_5,2) = {h22}")


def _fit(d, ns):
    reports = [exponent(family_P(d, n).product, ACCEPT_WIDTH) for n in ns]
    return exponent_fit((r.height, r.sep_lo, r.sep_hi) for r in reports)


def test_criterion_4_loglog_fits():
    f5 = _fit(5, [10, 20, 40, 80, 160, 320])
    f7 = _fit(7, [5, 10, 20, 40])
    ok5 = abs(f5.slope + 7 / 3) <= 0.02
    ok7 = abs(f7.slope + 17 / 5) <= 0.05
    record(4, ok5 and ok7, f"d=5 slope {f5.slope:.5f} (target -7/3+-0.02); d=7 slope {f7.slope:.5f} (target -17/5+-0.05)")


def test_criterion_5_lattice_rediscovery():
    hits_p = close_root_search(P([-1, 10, 0, 1]), exponent_threshold=Fraction(22, 10))
    found_p = [h for h in hits_p if h.quadratic == P([-10, 100, 1])]
    hits_s = close_root_search(P([2, -2, -4, 1]), exponent_threshold=Fraction(2))
    found_s = [h for h in hits_s if h.quadratic == P([6, -12, 1])]
    e_s = exponent(P([2, -2, -4, 1]) * P([6, -12, 1]))
    detail = (
        f"x^3+10x-1 @2.2: {'found' if found_p else 'missing'} x^2+100x-10"
        + (f" (e_lo {float(found_p[0].pair_exponent.e_lo):.4f}, N={found_p[0].lattice_N})" if found_p else "")
        + f"; s_2 cubic @2.0: {'found' if found_s else 'missing'} x^2-12x+6"
        + f" (its certified e is in [{float(e_s.e_lo):.5f}, {float(e_s.e_hi):.5f}])"
    )
    record(5, bool(found_p) and bool(found_s), detail)


def test_criterion_6_inequality_suites():
    g = gelfond_suite(10**4, seed=0, height_bound=1000)
    extra = criterion_family_members()
    m = mahler_suite(10**4, seed=0, extra=extra)
    ok = g.passed and m.passed
    record(
        6,
        ok,
        f"gelfond {g.samples} pairs, {g.violations} failures; mahler {m.samples} polys "
        f"({len(extra)} family members), {m.violations} violations, {m.statistic}",
    )


def test_criterion_7_linear_factor_ceiling():
    fit = linear_factor_ceiling(5, 1000, (100, 10**4), seed=0)
    record(7, fit.slope >= -2.25, f"slope {fit.slope:.4f} over {len(fit.points)} samples (floor -2.25)")


def _trend(ns, values):
    return float(np.polyfit(np.log(ns), np.log(np.abs(values)), 1)[0])


def test_criterion_8_residual_boundedness():
    ns = list(range(10, 101))
    ok, parts = True, []
    for fam in ("p", "s"):
        for which in (1, 2):
            vals = []
            for n in ns:
                b = expansion_residual(fam, n, which)
                vals.append(float(b.re))
                ok &= b.abs_upper() <= 100
            slope = _trend(ns, vals)
            half = len(vals) // 2
            no_growth = max(map(abs, vals[half:])) <= 1.1 * max(map(abs, vals[:half])) and slope < 0.25
            ok &= no_growth
            parts.append(f"{fam}{which}: range [{min(vals):.3f}, {max(vals):.3f}], log-trend {slope:.3f}")
    record(8, ok, "; ".join(parts))


def test_criterion_9_lll_oracle():
    from oracles import shortest_vector_norm2

    rng = random.Random(0)
    worst, hnf_bad, factor_bad, done = 0.0, 0, 0, 0
    while done < 100:
        rows = [[rng.randint(-50, 50) for _ in range(3)] for _ in range(3)]
        if not all(gram_schmidt(rows)[0]):
            continue
        done += 1
        red = lll_reduce(LatticeBasis(rows)).rows
        lam2 = shortest_vector_norm2(red)
        b2 = sum(x * x for x in red[0])
        ratio = math.sqrt(b2 / lam2)
        worst = max(worst, ratio)
        if b2 > 2 ** (3 - 1) * lam2:
            factor_bad += 1
        if hermite_normal_form(rows) != hermite_normal_form(red):
            hnf_bad += 1
    ok = factor_bad == 0 and hnf_bad == 0
    record(9, ok, f"100 bases: worst |b1|/lambda1 = {worst:.4f} (guarantee 2^((dim-1)/2) = 2), HNF mismatches {hnf_bad}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
