"""End-to-end acceptance checks, one test per criterion.

Each test appends a PASS/FAIL line to ``conftest.ACCEPTANCE_LINES``; the lines
are printed in the terminal summary.
"""

import random
import time

import gmpy2
import mpmath
import numpy as np
import pytest
from conftest import ACCEPTANCE_LINES, to_mp
from gmpy2 import mpc, mpfr

from heckezeta.bounds import total_bound
from heckezeta.precision import PrecisionContext, format_fixed
from heckezeta.roots import bisect_delta
from heckezeta.special import polylog_neg, zeta_complex
from heckezeta.spectral import one_minus_u, rank_analysis, ruelle_at_zero, vanishing_order_probe
from heckezeta.transfer import Basis, f_n, lu_det

TABLE = {
    "3": "0.75194008038202898753355087134612238565071248482239",
    "4": "0.68367105376320840963103084607448961221631125476496",
    "5": "0.64665638884984061955006624797665443932208623918330",
    "6": "0.62296896860108742758578970214133058127260612238989",
    "8": "0.59395687467303202626541162773916197787885310359836",
    "10": "0.57660658272884532239298217889172324836908688431275",
    "16": "0.55011004182730371669178285114466116320309677135534",
    "40": "0.52182151093148260901879103287698690165007405447213",
    "100": "0.50927941737580653723736709527094585385489171074337",
}


def record(k, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.mark.slow
def test_criterion_1_table():
    start = time.perf_counter()
    bad, worst_n, worst_bits = [], 0, 0
    for w, want in TABLE.items():
        enc = bisect_delta(w, 50)
        lo, hi = format_fixed(enc.lo, 50, "down"), format_fixed(enc.hi, 50, "down")
        if not (lo == hi == want and enc.lo_cert.verify() and enc.hi_cert.verify()):
            bad.append(f"w={w}: [{lo}, {hi}]")
        for cert in (enc.lo_cert, enc.hi_cert):
            worst_n = max(worst_n, cert.n)
            worst_bits = max(worst_bits, cert.f_value.real.precision)
    elapsed = time.perf_counter() - start
    ok = not bad and worst_n <= 400 and worst_bits <= 400 and elapsed <= 3600
    detail = f"9 rows, max N={worst_n}, max bits={worst_bits}, {elapsed:.0f}s"
    record(1, ok, detail + ("" if not bad else "; mismatches " + "; ".join(bad)))


def test_criterion_2_n_sufficiency():
    ctx = PrecisionContext(50)
    a = total_bound(ctx.real("0.75"), 350, 3, ctx).total
    b = total_bound(ctx.real("0.55"), 100, 8, ctx).total
    eps = mpfr("1e-50")
    record(2, a < eps and b < eps, f"bounds {float(a):.3e} (w=3, N=350) and {float(b):.3e} (w=8, N=100)")


def test_criterion_3_golden_ratio():
    enc = bisect_delta("2pi", 6)
    with gmpy2.context(precision=400):
        inv_phi = (gmpy2.sqrt(mpfr(5)) - 1) / 2
        near = min(abs(enc.lo - inv_phi), abs(enc.hi - inv_phi))
        far = max(abs(enc.lo - inv_phi), abs(enc.hi - inv_phi))
        straddles = enc.lo <= inv_phi <= enc.hi
    ok = not straddles and near > mpfr("1e-5") and far < mpfr("3.5e-4")
    record(3, ok, f"delta in [{format_fixed(enc.lo, 8)}, {format_fixed(enc.hi, 8)}], gap {float(near):.2e}..{float(far):.2e}")


def test_criterion_4_ruelle():
    ctx = PrecisionContext()
    worst = 0.0
    ok = True
    for w in (3, 8):
        for n in (5, 20, 100):
            rep = ruelle_at_zero(w, n, ctx)
            with ctx.nearest():
                tol = gmpy2.mul_2exp(mpfr(1), ctx.guard_bits + 8 - ctx.working_bits) * max(1, abs(rep.f0))
                ok &= rep.defect <= tol and abs(rep.ratio - 2) <= tol
                worst = max(worst, float(rep.defect / tol))
    record(4, ok, f"6 cases, worst defect/tolerance {worst:.2e}")


def test_criterion_5_trivial_zeros():
    ctx = PrecisionContext(40)
    shown = [[1, 0, 1], [0, 0, 0], [1, 0, 1]]
    tol = gmpy2.mul_2exp(mpfr(1), ctx.guard_bits - ctx.working_bits)
    a = one_minus_u(1, 0, 3, ctx)
    with ctx.nearest():
        ok = all(abs(a[i, j] - shown[i][j]) <= tol for i in range(3) for j in range(3))
    ranks = {}
    for m in (1, 2, 3, 4):
        rep = rank_analysis(m, 3, ctx)
        ranks[m] = rep.observed_rank
        ok &= (rep.degree_lower, rep.degree_upper) == (m, 2 * m + 1) and rep.pattern_ok
    ok &= ranks == {1: 1, 2: 3, 3: 3, 4: 5}
    slopes = []
    for m in (1, 2, 3):
        for w in (3, 10):
            slope = vanishing_order_probe(m, w, ctx).slope
            slopes.append(f"{slope:.2f}")
            ok &= m - 0.25 <= slope <= 2 * m + 1.25
    record(5, ok, f"ranks {ranks}, probe slopes {', '.join(slopes)}")


def cofactor(rows):
    if len(rows) == 1:
        return rows[0][0]
    return mpmath.fsum(
        (-1) ** j * rows[0][j] * cofactor([r[:j] + r[j + 1:] for r in rows[1:]]) for j in range(len(rows))
    )


def test_criterion_6_oracles():
    ctx = PrecisionContext(40)
    rng = random.Random(20260101)
    tol = gmpy2.mul_2exp(mpfr(1), -(ctx.working_bits // 2))
    ok, worst = True, 0.0
    for _ in range(100):
        n = rng.randint(1, 6)
        with ctx.nearest():
            a = np.array(
                [[mpc(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(n)] for _ in range(n)],
                dtype=object,
            )
        ours = lu_det(a, ctx)
        with mpmath.workprec(2 * ctx.working_bits):
            ref = cofactor([[to_mp(x) for x in row] for row in a])
            err = abs(to_mp(ours) - ref)
            ok &= err <= to_mp(tol)
            worst = max(worst, float(err))
    ws = ["2.5", "3", "4.75", "8", "2pi", "40"]
    for _ in range(20):
        s = ctx.complex(str(round(rng.uniform(0.55, 2.0), 3)), str(round(rng.uniform(-4, 4), 3)))
        n, w = rng.randint(1, 30), rng.choice(ws)
        v = f_n(s, n, w, ctx, Basis.PLAIN).value
        u = f_n(s, n, w, ctx, Basis.SYMMETRIC).value
        with ctx.nearest():
            ok &= abs(v - u) <= ctx.tolerance * max(1, abs(u))
    record(6, ok, f"100 LU/cofactor pairs (worst {worst:.1e}) and 20 basis pairs")


def test_criterion_7_special_functions():
    ctx = PrecisionContext(50)
    tol = ctx.tolerance
    with ctx.nearest():
        pi = gmpy2.const_pi()
        exact = {0: mpfr(-1) / 2, 2: pi**2 / 6, 4: pi**4 / 90}
        ok = all(abs(zeta_complex(k, ctx) - v) <= tol for k, v in exact.items())
        zero = ctx.complex("0.5", "14.134725141734693790457251983562470270784257115699")
        at_zero = abs(zeta_complex(zero, ctx))
    ok &= at_zero < mpfr("1e-10")
    # partial sums of n^(-order) x^n for 10^6 terms, rounded down
    coarse = PrecisionContext(15)
    for order in ("-1/2", "-3/2"):
        p = 1 if order == "-3/2" else 0
        for x in (mpfr(2) / 3, mpfr(1) / 2, mpfr(1) / 4, mpfr(1) / 7):
            bound = polylog_neg(order, x, ctx)
            with coarse.downward():
                xv, s, x_pow = mpfr(x), mpfr(0), mpfr(1)
                for n in range(1, 10**6 + 1):
                    x_pow *= xv
                    s += n**p * gmpy2.sqrt(mpfr(n)) * x_pow
            ok &= s <= bound
    record(7, ok, f"zeta exact values, |zeta(first zero)| = {float(at_zero):.1e}, 8 polylog dominance checks")


def test_criterion_8_bound_consistency():
    ctx = PrecisionContext(50)
    ok, worst = True, 0.0
    for s in (("0.3", "2"), ("-0.25", 0), ("0.75", 0)):
        z = ctx.complex(*s)
        for w in (3, 8):
            for n in (50, 100):
                a = f_n(z, n, w, ctx).value
                b = f_n(z, 2 * n, w, ctx).value
                budget = total_bound(z, n, w, ctx).total
                with ctx.upward():
                    budget += total_bound(z, 2 * n, w, ctx).total
                with ctx.nearest():
                    gap = abs(a - b)
                ok &= gap <= budget
                if budget:
                    worst = max(worst, float(gap / budget))
    record(8, ok, f"12 cases, worst gap/bound {worst:.2e}")
