"""Explicit bound on ``|Z(s) - F_N(s)|``.

With ``C = c_upper(s)`` and ``L_p(x)`` the polylogarithm,

    P_N(s) = (2/w)**N sqrt(N+1) w C 2**ceil(2|s|) w**(-2 Re s)
             * L_{-1/2}(2/w) (1 + sqrt(2) L_{-1/2}(2/w))
    Q(s)   = 2 C w**(2|s| - 2 Re s) / (w-1)**(2|s| - 1) * L_{-3/2}(1/(w-1))
    total  = P_N exp(P_N + Q + 1)

Every quantity is evaluated with directed rounding so that the computed
number is an upper bound of the exact one.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpc, mpfr

from .errors import BoundUnreachable, DomainError
from .precision import PrecisionContext, format_sci, to_complex, to_real
from .special import CBound, c_upper, polylog_neg
from .transfer import GroupParam, as_group

#: Largest matrix size :func:`choose_n` will consider by default.
N_MAX = 5000


@dataclass(frozen=True)
class ErrorBudget:
    p_n: mpfr
    q: mpfr
    c: CBound
    total: mpfr
    n: int
    s: mpc
    w: GroupParam


def _modulus_bounds(s: mpc, ctx: PrecisionContext) -> tuple[mpfr, mpfr]:
    with ctx.upward():
        hi = gmpy2.sqrt(s.real * s.real + s.imag * s.imag)
    with ctx.downward():
        lo = gmpy2.sqrt(s.real * s.real + s.imag * s.imag)
    return lo, hi


class BoundTerms:
    """N-independent factors of the bound, computed once per ``(s, w)``."""

    def __init__(self, s, w, ctx: PrecisionContext, c: CBound | None = None):
        self.ctx = ctx
        self.s = to_complex(s, 0, ctx)
        self.group = as_group(w, ctx)
        wv = self.group.value(ctx)
        if not wv > 2:
            raise DomainError("bounds require w > 2")
        self.c = c if c is not None else c_upper(self.s, ctx)
        sigma = self.s.real
        abs_lo, abs_hi = _modulus_bounds(self.s, ctx)
        with ctx.upward():
            self.ratio = 2 / wv
            two_abs = 2 * abs_hi
            ceil_two_abs = int(gmpy2.ceil(two_abs))
        li_half = polylog_neg("-1/2", self.ratio, ctx)
        with ctx.downward():
            w_minus_1_lo = wv - 1
            b_lo = 2 * abs_lo - 1
        with ctx.upward():
            w_minus_1_hi = wv - 1
            x_q = 1 / w_minus_1_lo
        li_three_halves = polylog_neg("-3/2", x_q, ctx)
        with ctx.upward():
            cv = self.c.value
            self.prefactor = (
                wv
                * cv
                * gmpy2.mul_2exp(mpfr(1), ceil_two_abs)
                * wv ** (-2 * sigma)
                * li_half
                * (1 + gmpy2.sqrt(mpfr(2)) * li_half)
            )
            a_up = 2 * abs_hi - 2 * sigma
            base = w_minus_1_lo if b_lo >= 0 else w_minus_1_hi
            self.q = 2 * cv * wv ** a_up * base ** (-b_lo) * li_three_halves

    def p_n(self, n: int) -> mpfr:
        with self.ctx.upward():
            return self.ratio**n * gmpy2.sqrt(mpfr(n + 1)) * self.prefactor

    def total(self, n: int) -> mpfr:
        p = self.p_n(n)
        with self.ctx.upward():
            return p * gmpy2.exp(p + self.q + 1)

    def budget(self, n: int) -> ErrorBudget:
        p = self.p_n(n)
        with self.ctx.upward():
            total = p * gmpy2.exp(p + self.q + 1)
        return ErrorBudget(p, self.q, self.c, total, n, self.s, self.group)


def p_n(s, n: int, w, c: CBound, ctx: PrecisionContext) -> mpfr:
    """Upper bound for the trace norm of the truncation remainder."""
    return BoundTerms(s, w, ctx, c).p_n(n)


def q(s, w, c: CBound, ctx: PrecisionContext) -> mpfr:
    """Upper bound for the trace norm of the full operator (independent of N)."""
    return BoundTerms(s, w, ctx, c).q


def total_bound(s, n: int, w, ctx: PrecisionContext, c: CBound | None = None) -> ErrorBudget:
    """Certified ``|Z(s) - F_N(s)| <= total`` together with its ingredients."""
    return BoundTerms(s, w, ctx, c).budget(n)


def choose_n(s, w, eps, ctx: PrecisionContext, n_max: int = N_MAX, terms: BoundTerms | None = None) -> int:
    """Smallest N (doubling, then bisection) whose total bound is below ``eps``.

    Raises:
        BoundUnreachable: if even ``n_max`` does not get below ``eps``.
    """
    terms = terms or BoundTerms(s, w, ctx)
    eps = to_real(eps, ctx)
    if not eps > 0:
        raise DomainError("eps must be positive")
    if terms.total(1) < eps:
        return 1
    lo, hi = 1, 2
    while terms.total(hi) >= eps:
        lo = hi
        if hi >= n_max:
            raise BoundUnreachable(
                f"bound {_show(terms.total(n_max))} at N={n_max} is not below {_show(eps, 'nearest')}",
                n=n_max,
                achieved=terms.total(n_max),
            )
        hi = min(2 * hi, n_max)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if terms.total(mid) < eps:
            hi = mid
        else:
            lo = mid
    return hi


def _show(x: mpfr, rounding: str = "up") -> str:
    return format_sci(x, 4, rounding) if gmpy2.is_finite(x) else str(x)
