"""Special functions needed by the transfer matrices and the error bounds.

* Riemann zeta at complex arguments (Euler-Maclaurin with Backlund's
  remainder estimate),
* binomial coefficients with a complex upper argument,
* upper bounds for the polylogarithms of order -1/2 and -3/2,
* a computable upper bound for ``sup_{n even} |zeta(2s + n)|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr, mpq

from .errors import DomainError, PoleAt1, PoleProximity, PrecisionExhausted
from .precision import PrecisionContext, exact_integer, to_complex

#: Hard ceiling on the Euler-Maclaurin cutoff before giving up.
EM_MAX_CUTOFF = 1 << 14


# Bernoulli numbers -------------------------------------------------------------

_bern_over_fact: list[mpq] = [mpq(1)]  # B_n / n!


def _extend_bernoulli(n_max: int) -> None:
    # x/(e^x - 1) = sum b_n x^n  =>  sum_{j<=n} b_j / (n+1-j)! = 0  for n >= 1
    b = _bern_over_fact
    inv_fact = [mpq(1, math.factorial(k)) for k in range(n_max + 2)]
    for n in range(len(b), n_max + 1):
        acc = mpq(0)
        for j in range(n):
            if b[j]:
                acc += b[j] * inv_fact[n + 1 - j]
        b.append(-acc)


def bernoulli_over_factorial(n: int) -> mpq:
    """Exact ``B_n / n!`` (with ``B_1 = -1/2``)."""
    if n >= len(_bern_over_fact):
        _extend_bernoulli(max(n, 2 * len(_bern_over_fact)))
    return _bern_over_fact[n]


def bernoulli(n: int) -> Fraction:
    q = bernoulli_over_factorial(n) * math.factorial(n)
    return Fraction(int(q.numerator), int(q.denominator))


# zeta ----------------------------------------------------------------------------


def _exact_zeta(s) -> mpfr | None:
    k = exact_integer(s)
    if k is None:
        return None
    if k == 1:
        raise PoleAt1("zeta has a pole at s = 1")
    if k == 0:
        return mpfr(-0.5)
    if k < 0 and k % 2 == 0:
        return mpfr(0)
    return None


def em_cutoff(s, working_bits: int) -> int:
    """Euler-Maclaurin summation cutoff ``M`` for argument ``s``."""
    t = abs(float(s.imag)) if isinstance(s, mpc) else 0.0
    return max(math.ceil(t / math.pi), math.ceil(working_bits * math.log(2) / 4), 2)


def _zeta_em(s, working_bits: int, target_exp: int):
    """Euler-Maclaurin evaluation of zeta(s) with |error| <= 2**target_exp.

    ``s`` is an mpfr (real path) or mpc.  Returns a value of the same kind.
    The caller is responsible for the pole and the exact special values.
    """
    complex_arg = isinstance(s, mpc)
    sigma = float(s.real) if complex_arg else float(s)
    abs_s = float(abs(s))
    m_cut = em_cutoff(s, working_bits)
    threshold = gmpy2.mul_2exp(mpfr(1, 32), target_exp - 1)

    while m_cut <= EM_MAX_CUTOFF:
        # partial sums grow like M**(1 - sigma) when sigma < 1: buy the lost bits back
        lost = max(0.0, 1.0 - sigma) * math.log2(m_cut + 1) + math.log2(2 + abs_s)
        bits = max(working_bits, -target_exp + 16) + 16 + math.ceil(lost)
        nu_max = math.ceil(math.pi * m_cut) + math.ceil(abs_s) + 2
        with gmpy2.context(precision=bits, round=gmpy2.RoundToNearest, allow_complex=False):
            if complex_arg:
                s = mpc(s, (bits, bits))
            else:
                s = mpfr(s, bits)
            neg_s = -s
            total = s * 0 + 1
            for n in range(2, m_cut):
                total += gmpy2.exp(neg_s * gmpy2.log(mpfr(n)))
            m = mpfr(m_cut)
            m_pow = gmpy2.exp(neg_s * gmpy2.log(m))  # M**-s
            total += m * m_pow / (s - 1) + m_pow / 2
            inv_m2 = 1 / (m * m)
            poch = s  # s (s+1) ... (s+2k-2)
            m_pow = m_pow / m  # M**(-s-2k+1) for k = 1
            done = False
            for k in range(1, nu_max + 1):
                term = mpfr(bernoulli_over_factorial(2 * k)) * poch * m_pow
                total += term
                denom = sigma + 2 * k - 1
                if denom > 0:
                    rem = abs(term) * abs(s + (2 * k - 1)) / mpfr(denom)
                    if rem < threshold:
                        done = True
                        break
                poch *= (s + (2 * k - 1)) * (s + 2 * k)
                m_pow *= inv_m2
            if done:
                return total
        m_cut *= 2
    raise PrecisionExhausted(
        f"Euler-Maclaurin could not reach 2^{target_exp} at s={s} (cutoff cap {EM_MAX_CUTOFF})"
    )


def _zeta_raw(s, working_bits: int, target_exp: int):
    """zeta for an mpfr/mpc argument already at working precision."""
    exact = _exact_zeta(s)
    if exact is not None:
        return exact
    one_gap = abs(s - 1)
    if one_gap == 0 or gmpy2.get_exp(one_gap) < target_exp:
        raise PoleAt1(f"argument {s} is within 2^{target_exp} of the pole at 1")
    return _zeta_em(s, working_bits, target_exp)


def zeta_complex(s, ctx: PrecisionContext) -> mpc:
    """Riemann zeta at a complex point, absolute error <= ``ctx.tolerance``.

    The nonpositive even integers and 0 return exact values.  Real input
    takes the (cheaper) real arithmetic path.

    Raises:
        PoleAt1: if ``s`` equals 1 to within the working tolerance.
        PrecisionExhausted: if no summation cutoff meets the target.
    """
    z = to_complex(s, 0, ctx)
    arg = z.real if z.imag == 0 else z
    val = _zeta_raw(arg, ctx.working_bits, ctx.tolerance_exp)
    with ctx.nearest():
        return mpc(val)


# binomials -------------------------------------------------------------------------


def _binom(z, k: int):
    acc = z * 0 + 1
    for t in range(k):
        acc *= z - t
    return acc / math.factorial(k)


def binom_complex(z, k: int, ctx: PrecisionContext) -> mpc:
    """``binom(z, k) = z (z-1) ... (z-k+1) / k!`` for complex ``z``."""
    if k < 0:
        raise DomainError("binomial lower index must be nonnegative")
    zc = to_complex(z, 0, ctx)
    with ctx.nearest():
        return mpc(_binom(zc, k))


def binom_ladder(z, k_max: int):
    """``[binom(z, 0), ..., binom(z, k_max)]`` via ``b_{k+1} = b_k (z-k)/(k+1)``.

    Works in the caller's gmpy2 context; ``z`` may be mpfr or mpc.
    """
    out = [z * 0 + 1]
    b = out[0]
    for k in range(k_max):
        b = b * (z - k) / (k + 1)
        out.append(b)
    return out


# polylogarithms -----------------------------------------------------------------


def _order_power(order) -> Fraction:
    p = -Fraction(order) if not isinstance(order, str) else -Fraction(order.replace(" ", ""))
    if p not in (Fraction(1, 2), Fraction(3, 2)):
        raise DomainError(f"polylog order must be -1/2 or -3/2, got {order}")
    return p


def polylog_partial(order, x, terms: int | None, ctx: PrecisionContext) -> tuple[mpfr, mpfr]:
    """Upward-rounded partial sum and tail bound of ``sum n**(-order) x**n``.

    With ``terms=None`` the summation stops once the tail bound falls below
    ``ctx.tolerance``.  The tail after ``n`` terms is bounded geometrically
    by ``t_n r / (1 - r)`` with ``r = x (1 + 1/n)**p``, which is valid as
    soon as ``r < 1``; until then the tail is reported as infinite.
    """
    p = _order_power(order)
    with ctx.upward():
        xv = mpfr(x) if not isinstance(x, mpfr) else mpfr(x, ctx.working_bits)
        if xv < 0 or xv >= 1:
            raise DomainError(f"polylog argument must lie in [0, 1), got {xv}")
        if xv == 0:
            return mpfr(0), mpfr(0)
        target = ctx.tolerance
        partial = mpfr(0)
        x_pow = mpfr(1)
        tail = gmpy2.inf()
        n = 0
        while True:
            n += 1
            x_pow *= xv
            root = gmpy2.sqrt(mpfr(n))
            weight = root if p == Fraction(1, 2) else n * root
            t = weight * x_pow
            partial += t
            ratio_base = 1 + mpfr(1) / n
            r = xv * (gmpy2.sqrt(ratio_base) if p == Fraction(1, 2) else ratio_base * gmpy2.sqrt(ratio_base))
            if r < 1:
                with ctx.downward():
                    gap = 1 - r
                tail = t * r / gap
            else:
                tail = gmpy2.inf()
            if terms is not None:
                if n >= terms:
                    return partial, tail
            elif tail < target:
                return partial, tail


def polylog_neg(order, x, ctx: PrecisionContext) -> mpfr:
    """Certified upper bound for ``Li_order(x)``, ``order`` in {-1/2, -3/2}.

    The result exceeds the true value by at most ``ctx.tolerance`` plus
    upward rounding.
    """
    partial, tail = polylog_partial(order, x, None, ctx)
    with ctx.upward():
        return partial + tail


# C(s) ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class CBound:
    """Upper bound for ``sup_{n in 2N_0} |zeta(2s + n)|``.

    ``scan_cutoff`` is the first even shift ``n0`` at which the argument's
    real part reaches 2; shifts below it are scanned explicitly and the rest
    are dominated by ``zeta(2 Re s + n0)``.
    """

    value: mpfr
    scan_cutoff: int


def _upper_abs(z) -> mpfr:
    # call inside an upward context
    if isinstance(z, mpc):
        return gmpy2.sqrt(z.real * z.real + z.imag * z.imag)
    return abs(z)


def scan_cutoff(sigma: mpfr) -> int:
    exact = Fraction(*sigma.as_integer_ratio())
    return max(0, 2 * int(math.ceil(1 - exact)))


def c_upper(s, ctx: PrecisionContext) -> CBound:
    """Upper bound for ``C(s)`` by a finite scan plus a monotone tail.

    Raises:
        PoleProximity: if some ``2s + n`` with even ``n`` below the scan cutoff
            lies within ``2**-guard_bits`` of 1.
    """
    sc = to_complex(s, 0, ctx)
    sigma = sc.real
    n0 = scan_cutoff(sigma)
    tol = ctx.tolerance
    pole_gap = gmpy2.mul_2exp(mpfr(1, 32), -ctx.guard_bits)
    best = mpfr(0)
    for n in range(0, n0, 2):
        with ctx.nearest():
            arg = 2 * sc + n
            if abs(arg - 1) < pole_gap:
                raise PoleProximity(f"2s + {n} = {arg} is too close to the pole of zeta at 1")
            arg = arg.real if arg.imag == 0 else arg
        val = _zeta_raw(arg, ctx.working_bits, ctx.tolerance_exp)
        with ctx.upward():
            best = max(best, _upper_abs(val) + tol)
    with ctx.downward():
        # zeta decreases on (1, inf): a smaller argument gives a larger value
        tail_arg = 2 * sigma + n0
    tail = _zeta_raw(tail_arg, ctx.working_bits, ctx.tolerance_exp)
    with ctx.upward():
        best = max(best, tail + tol)
    return CBound(value=best, scan_cutoff=n0)
