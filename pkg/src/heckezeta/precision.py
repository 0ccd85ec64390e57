"""Working precision and conversions for multiprecision arithmetic.

All arithmetic goes through gmpy2 (MPFR/MPC).  There is deliberately no
module-level precision: every operation takes a :class:`PrecisionContext`
and enters its own gmpy2 context for the duration of the call.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, ROUND_FLOOR, ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

LOG2_10 = math.log2(10)

_ROUNDING = {
    "nearest": ROUND_HALF_EVEN,
    "up": ROUND_CEILING,
    "down": ROUND_FLOOR,
}


@dataclass(frozen=True)
class PrecisionContext:
    """Binary working precision plus the guard bits reserved for error.

    ``working_bits`` defaults to the smallest value compatible with
    ``target_digits`` and ``guard_bits``; an explicit smaller value is
    rejected.
    """

    target_digits: int = 50
    guard_bits: int = 64
    working_bits: int = field(default=0)

    def __post_init__(self) -> None:
        if self.target_digits < 1:
            raise ValueError("target_digits must be positive")
        if self.guard_bits < 32:
            raise ValueError("guard_bits must be at least 32")
        floor_bits = self.min_bits(self.target_digits, self.guard_bits)
        if self.working_bits == 0:
            object.__setattr__(self, "working_bits", floor_bits)
        elif self.working_bits < floor_bits:
            raise ValueError(
                f"working_bits={self.working_bits} is below the minimum "
                f"{floor_bits} for {self.target_digits} digits"
            )

    @staticmethod
    def min_bits(digits: int, guard_bits: int) -> int:
        return math.ceil(digits * LOG2_10) + guard_bits

    @classmethod
    def from_bits(cls, working_bits: int, guard_bits: int = 64) -> "PrecisionContext":
        """Context with a given binary precision and the largest digit target it supports."""
        digits = max(1, math.floor((working_bits - guard_bits) / LOG2_10))
        return cls(target_digits=digits, guard_bits=guard_bits, working_bits=working_bits)

    def with_bits(self, working_bits: int) -> "PrecisionContext":
        if working_bits <= self.working_bits:
            return self
        return PrecisionContext(self.target_digits, self.guard_bits, working_bits)

    def raised(self, extra_bits: int) -> "PrecisionContext":
        return PrecisionContext(
            self.target_digits, self.guard_bits, self.working_bits + extra_bits
        )

    # gmpy2 contexts -------------------------------------------------------

    def _gmp(self, bits: int | None, rnd) -> gmpy2.context:
        return gmpy2.context(
            precision=bits or self.working_bits,
            round=rnd,
            allow_complex=False,
        )

    def nearest(self, bits: int | None = None) -> gmpy2.context:
        return self._gmp(bits, gmpy2.RoundToNearest)

    def upward(self, bits: int | None = None) -> gmpy2.context:
        return self._gmp(bits, gmpy2.RoundUp)

    def downward(self, bits: int | None = None) -> gmpy2.context:
        return self._gmp(bits, gmpy2.RoundDown)

    @property
    def tolerance(self) -> mpfr:
        """Absolute error allotment ``2**(guard_bits - working_bits)``."""
        with self.nearest():
            return gmpy2.mul_2exp(mpfr(1), self.guard_bits - self.working_bits)

    @property
    def tolerance_exp(self) -> int:
        return self.guard_bits - self.working_bits

    # conversions ----------------------------------------------------------

    def real(self, x) -> mpfr:
        return to_real(x, self)

    def complex(self, re, im=0) -> mpc:
        return to_complex(re, im, self)


_SYMBOLIC = re.compile(r"^\s*([+-]?\d*\.?\d*)\s*\*?\s*pi\s*$", re.IGNORECASE)


def to_real(x, ctx: PrecisionContext) -> mpfr:
    """Convert ``x`` to an mpfr at the context's precision.

    Accepts ints, floats, Fractions, decimal strings, gmpy2 numbers and the
    symbolic forms ``"pi"``/``"2pi"``/``"2*pi"``.
    """
    with ctx.nearest():
        if isinstance(x, mpfr):
            return mpfr(x, ctx.working_bits)
        if isinstance(x, Fraction):
            return mpfr(gmpy2.mpq(x.numerator, x.denominator))
        if isinstance(x, Decimal):
            x = str(x)
        if isinstance(x, str):
            m = _SYMBOLIC.match(x)
            if m:
                coeff = m.group(1)
                factor = mpfr(coeff) if coeff not in ("", "+", "-") else mpfr(-1 if coeff == "-" else 1)
                return factor * gmpy2.const_pi()
            return mpfr(x.strip().replace("_", ""))
        return mpfr(x)


def to_complex(re_part, im_part, ctx: PrecisionContext) -> mpc:
    if isinstance(re_part, mpc) and not im_part:
        with ctx.nearest():
            return mpc(re_part, (ctx.working_bits, ctx.working_bits))
    if isinstance(re_part, complex) and not im_part:
        re_part, im_part = re_part.real, re_part.imag
    re_v = to_real(re_part, ctx)
    im_v = to_real(im_part, ctx)
    with ctx.nearest():
        return mpc(re_v, im_v)


def parse_complex(text: str, ctx: PrecisionContext) -> mpc:
    """Parse ``"re,im"`` (or a bare real) into an mpc."""
    parts = [p for p in text.split(",")]
    if len(parts) == 1:
        return to_complex(parts[0], 0, ctx)
    if len(parts) != 2:
        raise ValueError(f"expected 're,im', got {text!r}")
    return to_complex(parts[0], parts[1], ctx)


def is_real(z) -> bool:
    return isinstance(z, mpfr) or (isinstance(z, mpc) and z.imag == 0)


def exact_integer(z) -> int | None:
    """Return ``z`` as a Python int if it is exactly an integer, else None."""
    if isinstance(z, mpc):
        if z.imag != 0:
            return None
        z = z.real
    if isinstance(z, int):
        return z
    if gmpy2.is_finite(z) and gmpy2.is_integer(z):
        return int(z)
    return None


# exact decimal rendering ------------------------------------------------------


def to_decimal(x) -> Decimal:
    """Exact decimal value of a finite mpfr (binary fractions terminate)."""
    x = mpfr(x) if not isinstance(x, mpfr) else x
    if gmpy2.is_zero(x):
        return Decimal(0)
    m, e = x.as_mantissa_exp()
    m, e = int(m), int(e)
    if e >= 0:
        return Decimal(m << e)
    return Decimal(f"{m * 5 ** (-e)}E{e}")


def format_fixed(x, decimals: int, rounding: str = "nearest") -> str:
    """Fixed-point rendering with ``decimals`` digits after the point."""
    d = to_decimal(x)
    with localcontext() as dctx:
        dctx.prec = max(28, len(d.as_tuple().digits) + decimals + 10)
        out = d.quantize(Decimal(1).scaleb(-decimals), rounding=_ROUNDING[rounding])
        if out.is_zero():
            out = out.copy_abs()
        return format(out, "f")


def format_sci(x, sig: int = 6, rounding: str = "up") -> str:
    """Scientific rendering with ``sig`` significant digits (rounded up by default)."""
    d = to_decimal(x)
    if d == 0:
        return "0"
    with localcontext() as dctx:
        dctx.prec = sig
        dctx.rounding = _ROUNDING[rounding]
        out = +d
        exp = out.adjusted()
        mant = out.scaleb(-exp)
        return f"{mant:f}e{exp:+d}"


# hex codec (used by the zeta cache) ---------------------------------------------


def mpfr_to_hex(x: mpfr) -> str:
    """Lossless encoding ``<hex mantissa>p<binary exponent>``."""
    if gmpy2.is_zero(x):
        return "0x0p0"
    m, e = x.as_mantissa_exp()
    sign = "-" if m < 0 else ""
    return f"{sign}{hex(abs(int(m)))}p{int(e)}"


def hex_to_mpfr(text: str, bits: int) -> mpfr:
    mant, _, exp = text.partition("p")
    m = int(mant, 16)
    with gmpy2.context(precision=max(bits, m.bit_length() + 1)):
        return gmpy2.mul_2exp(mpfr(m), int(exp))
