"""Certified signs of the Selberg zeta function on the real line and a
bisection enclosure of the Hausdorff dimension of the limit set.

A sign certificate at ``s1`` records ``F_N(s1)`` together with a bound on
``|Z(s1) - F_N(s1)|`` that is strictly smaller than ``|F_N(s1)|``; then
``Z(s1)`` has the sign of ``F_N(s1)``.  Two certificates of opposite sign
enclose a zero of ``Z`` by the intermediate value theorem.
"""

from __future__ import annotations

import enum
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from .bounds import N_MAX, BoundTerms, choose_n
from .errors import BoundUnreachable, BracketFailure, HeckeZetaError, Undetermined
from .precision import LOG2_10, PrecisionContext, format_fixed, to_real
from .transfer import GroupParam, as_group, f_n

log = logging.getLogger(__name__)


def _exceeds(x: mpfr, bound: mpfr) -> bool:
    """``bound < |x|``, decided exactly (no rounding of ``|x|``)."""
    return gmpy2.cmp_abs(x, bound) > 0

#: w values of the published table of Hausdorff dimensions.
TABLE_WS = (3, 4, 5, 6, 8, 10, 16, 40, 100)

#: Multiplicative tightening of the error target after a failed certification.
EPS_TIGHTEN = mpfr("1e-5")

UPPER_ENDPOINT_EXP = 10
LOWER_ENDPOINT_EXPS = range(4, 41)

#: Extra halvings allowed once the width target is met, so that lo and hi
#: also agree in their leading decimals.
MAX_EXTRA_HALVINGS = 64


class Sign(enum.IntEnum):
    NEGATIVE = -1
    POSITIVE = 1


@dataclass(frozen=True)
class SignCertificate:
    s1: mpfr
    n: int
    f_value: mpfr
    bound: mpfr
    sign: Sign

    def verify(self) -> bool:
        """Re-check the stored inequality ``bound < |f_value|``."""
        return _exceeds(self.f_value, self.bound) and Sign(gmpy2.sign(self.f_value)) == self.sign


@dataclass(frozen=True)
class RootEnclosure:
    w: GroupParam
    lo: mpfr
    hi: mpfr
    lo_cert: SignCertificate
    hi_cert: SignCertificate

    @property
    def width(self) -> mpfr:
        with gmpy2.context(precision=max(self.lo.precision, self.hi.precision), round=gmpy2.RoundUp):
            return self.hi - self.lo

    @property
    def digits(self) -> int:
        """Number of decimals fixed by the enclosure: ``floor(-log10(hi - lo))``."""
        return math.floor(-float(gmpy2.log10(self.width)))

    def decimal(self, places: int) -> str:
        """Midpoint truncated to ``places`` decimals."""
        with gmpy2.context(precision=max(self.lo.precision, self.hi.precision) + 2):
            mid = (self.lo + self.hi) / 2
        return format_fixed(mid, places, "down")

    def agrees_to(self, places: int) -> bool:
        """Whether lo and hi share their first ``places`` decimals."""
        return _truncate(self.lo, places) == _truncate(self.hi, places)


def _truncate(x: mpfr, places: int) -> int:
    return math.floor(Fraction(*x.as_integer_ratio()) * 10**places)


def _eps_context(ctx: PrecisionContext, eps: mpfr) -> PrecisionContext:
    """Working precision large enough to resolve values of size ``eps``."""
    digits = max(1, math.ceil(-float(gmpy2.log10(eps))))
    bits = math.ceil((digits + 20) * LOG2_10) + ctx.guard_bits
    return ctx.with_bits(bits)


def certified_sign(
    s1,
    w,
    ctx: PrecisionContext | None = None,
    eps_hint=None,
    max_retries: int = 6,
    n_max: int = N_MAX,
    cache=None,
) -> SignCertificate:
    """Certify the sign of ``Z(s1)`` at a real point.

    The matrix size is chosen so that the bound falls below ``eps_hint``.
    When the bound does not separate ``F_N(s1)`` from zero the target is
    tightened (to ``min(eps * 1e-5, |F_N| / 100)``) and the evaluation
    repeated, up to ``max_retries`` times.

    Raises:
        Undetermined: if no attempt certifies the sign.
    """
    ctx = ctx or PrecisionContext()
    group = as_group(w, ctx)
    s1 = to_real(s1, ctx)
    with ctx.nearest():
        eps = to_real(eps_hint, ctx) if eps_hint is not None else mpfr(10) ** -(ctx.target_digits + 10)
    last = None
    for attempt in range(max_retries + 1):
        run_ctx = _eps_context(ctx, eps)
        s_run = mpfr(s1, max(run_ctx.working_bits, s1.precision))
        terms = BoundTerms(s_run, group, run_ctx)
        try:
            n = choose_n(s_run, group, eps, run_ctx, n_max=n_max, terms=terms)
        except BoundUnreachable as exc:
            raise Undetermined(f"cannot certify the sign at s={s1}: {exc}") from exc
        bound = terms.total(n)
        f_val = f_n(s_run, n, group, run_ctx, cache=cache).real
        log.debug("sign attempt %d at s=%s: N=%d bits=%d F=%s bound=%s",
                  attempt, s1, n, run_ctx.working_bits, f_val, bound)
        if _exceeds(f_val, bound):
            return SignCertificate(s1, n, f_val, bound, Sign(gmpy2.sign(f_val)))
        last = (n, f_val, bound)
        with ctx.nearest():
            eps = eps * EPS_TIGHTEN
            if f_val != 0:
                eps = min(eps, abs(f_val) / 100)
    n, f_val, bound = last
    raise Undetermined(
        f"sign of Z({s1}) undetermined: F_{n} = {f_val} does not exceed bound {bound} in modulus"
    )


def _endpoint_bits(digits: int, guard_bits: int) -> int:
    return math.ceil((digits + 10) * LOG2_10) + guard_bits


def bisect_delta(
    w,
    digits: int = 50,
    ctx: PrecisionContext | None = None,
    cache=None,
    n_max: int = N_MAX,
) -> RootEnclosure:
    """Certified enclosure ``[lo, hi]`` of the zero of ``Z`` in ``(1/2, 1)``.

    The bracket starts at ``[1/2 + 2**-k, 1 - 2**-10]`` where ``k`` grows from
    4 until the lower endpoint certifies a negative sign (lower endpoints that
    certify positive tighten the upper end instead).  Bisection then halves
    the bracket until ``hi - lo < 10**-digits``.  At each midpoint the error
    target is a thousandth of the current width; a midpoint that cannot be
    certified is shifted by ``width/1000`` and retried.

    Raises:
        BracketFailure: if no admissible initial bracket is found.
        Undetermined: if a midpoint and its perturbations all fail.
    """
    ctx = ctx or PrecisionContext(target_digits=digits)
    group = as_group(w, ctx)
    bits = _endpoint_bits(digits, ctx.guard_bits)

    def cert(s, eps):
        return certified_sign(s, group, ctx, eps_hint=eps, n_max=n_max, cache=cache)

    with gmpy2.context(precision=bits):
        hi = 1 - gmpy2.mul_2exp(mpfr(1), -UPPER_ENDPOINT_EXP)
    try:
        hi_cert = cert(hi, mpfr("1e-3"))
    except Undetermined as exc:
        raise BracketFailure(f"upper endpoint {hi} could not be certified") from exc
    if hi_cert.sign is not Sign.POSITIVE:
        raise BracketFailure(f"Z({hi}) is negative; expected positivity near s = 1")

    lo = lo_cert = None
    for k in LOWER_ENDPOINT_EXPS:
        with gmpy2.context(precision=bits):
            s = mpfr("0.5") + gmpy2.mul_2exp(mpfr(1), -k)
        if s >= hi:
            continue
        try:
            c = cert(s, mpfr("1e-3"))
        except Undetermined:
            continue
        if c.sign is Sign.NEGATIVE:
            lo, lo_cert = s, c
            break
        hi, hi_cert = s, c
    if lo is None:
        raise BracketFailure(f"no lower endpoint with negative certified sign for w={group.label}")

    with gmpy2.context(precision=bits):
        target = mpfr(10) ** -digits
        extra = 0
        while hi - lo >= target or _truncate(lo, digits) != _truncate(hi, digits):
            if hi - lo < target:
                extra += 1
                if extra > MAX_EXTRA_HALVINGS:
                    break
            width = hi - lo
            mid = (lo + hi) / 2
            eps = min(width / 1000, mpfr("1e-3"))
            for shift in (0, 1, -1, 2, -2):
                s = mid + shift * width / 1000
                try:
                    c = cert(s, eps)
                    break
                except Undetermined:
                    log.info("midpoint %s undetermined, perturbing", s)
            else:
                raise Undetermined(f"bisection stalled at width {width} for w={group.label}")
            if c.sign == lo_cert.sign:
                lo, lo_cert = s, c
            else:
                hi, hi_cert = s, c
            log.debug("w=%s width=%s N=%d", group.label, hi - lo, c.n)
    return RootEnclosure(group, lo, hi, lo_cert, hi_cert)


@dataclass(frozen=True)
class TableRow:
    w: str
    enclosure: RootEnclosure | None
    error: str | None = None


def _table_job(args):
    w, digits, ctx = args
    try:
        return TableRow(str(w), bisect_delta(w, digits, ctx))
    except HeckeZetaError as exc:
        return TableRow(str(w), None, f"{type(exc).__name__}: {exc}")


def hausdorff_table(
    ws=TABLE_WS,
    digits: int = 50,
    ctx: PrecisionContext | None = None,
    workers: int = 1,
) -> list[TableRow]:
    """Enclosures of the Hausdorff dimension for each ``w``; failures are
    reported per row instead of aborting the table."""
    jobs = [(w, digits, ctx) for w in ws]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_table_job, jobs))
    return [_table_job(j) for j in jobs]
