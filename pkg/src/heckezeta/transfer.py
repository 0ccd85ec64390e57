"""Finite sections of the Hecke transfer operator and their Fredholm determinants.

Two bases are supported.  In the symmetric basis the ``(i, j)`` entry is ::

    l_ij(s) = 2 sqrt((j+1)/(i+1)) zeta(2s+i+j) w**-(2s+i+j) binom(2s+i+j-1, i)

for ``i + j`` even and 0 otherwise; the plain basis drops the square-root
factor.  The two matrices are diagonally similar, so ``det(1 - M)`` agrees.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .errors import DomainError, PoleProximity
from .precision import PrecisionContext, exact_integer, to_complex, to_real
from .special import _binom, _zeta_raw, binom_ladder

#: Exact-power re-anchoring interval for w**-(2s+k).
REANCHOR_EVERY = 64


class Basis(str, enum.Enum):
    SYMMETRIC = "symmetric"
    PLAIN = "plain"


@dataclass(frozen=True)
class GroupParam:
    """Hecke parameter ``w > 2``.

    ``source`` is kept so the value can be re-evaluated at any precision;
    this matters for symbolic input such as ``"2pi"``.
    """

    source: object
    w: mpfr = field(compare=False)

    @classmethod
    def parse(cls, value, ctx: PrecisionContext | None = None) -> "GroupParam":
        if isinstance(value, GroupParam):
            return value
        ctx = ctx or PrecisionContext()
        w = to_real(value, ctx)
        if not w > 2:
            raise DomainError(f"the Hecke parameter must satisfy w > 2, got {value}")
        return cls(source=value, w=w)

    def value(self, ctx: PrecisionContext) -> mpfr:
        return to_real(self.source, ctx)

    @property
    def label(self) -> str:
        return str(self.source)


def as_group(w, ctx: PrecisionContext) -> GroupParam:
    return w if isinstance(w, GroupParam) else GroupParam.parse(w, ctx)


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    n: int
    s: mpc
    w: GroupParam
    basis: Basis
    entries: np.ndarray
    working_bits: int

    def __repr__(self) -> str:
        return (
            f"TransferMatrix(n={self.n}, s={self.s}, w={self.w.label}, "
            f"basis={self.basis.value}, bits={self.working_bits})"
        )


@dataclass(frozen=True)
class FNValue:
    """``det(1 - L(s))`` for the ``n x n`` section."""

    value: mpc
    n: int
    s: mpc
    w: GroupParam

    @property
    def real(self) -> mpfr:
        return self.value.real


def _reduce_arg(s: mpc):
    """mpfr when ``s`` is real (cheaper arithmetic), else the mpc itself."""
    return s.real if s.imag == 0 else s


def _entry(i: int, j: int, s, w, ctx: PrecisionContext, basis: Basis):
    if i < 0 or j < 0:
        raise DomainError("matrix indices must be nonnegative")
    sc = to_complex(s, 0, ctx)
    wv = as_group(w, ctx).value(ctx)
    k = i + j
    if k % 2:
        with ctx.nearest():
            return mpc(0)
    with ctx.nearest():
        arg = _reduce_arg(2 * sc + k)
    zeta_val = _zeta_raw(arg, ctx.working_bits, ctx.tolerance_exp)
    with ctx.nearest():
        int_arg = exact_integer(arg)
        w_pow = wv ** (-int_arg) if int_arg is not None else gmpy2.exp(-arg * gmpy2.log(wv))
        val = 2 * zeta_val * w_pow * _binom(arg - 1, i)
        if basis is Basis.SYMMETRIC:
            val *= gmpy2.sqrt(mpfr(j + 1) / (i + 1))
        return mpc(val)


def entry_l(i: int, j: int, s, w, ctx: PrecisionContext) -> mpc:
    """Symmetric-basis entry ``l_ij(s)``; exactly zero when ``i + j`` is odd."""
    return _entry(i, j, s, w, ctx, Basis.SYMMETRIC)


def entry_a(i: int, j: int, s, w, ctx: PrecisionContext) -> mpc:
    """Plain-basis entry ``a_ij(s) = sqrt((i+1)/(j+1)) l_ij(s)``."""
    return _entry(i, j, s, w, ctx, Basis.PLAIN)


def _check_size_at_negative_integer(n: int, s: mpc) -> None:
    k = exact_integer(s)
    if k is not None and k < 0 and n < -k + 1:
        raise DomainError(
            f"F_N(-m) needs N >= m + 1 to see the trivial zero at s = {k}; got N = {n}"
        )


def build(
    n: int,
    s,
    w,
    basis: Basis | str = Basis.SYMMETRIC,
    ctx: PrecisionContext | None = None,
    cache=None,
) -> TransferMatrix:
    """Fill the ``n x n`` transfer matrix at ``(s, w)``.

    Zeta values depend on ``(i, j)`` only through ``k = i + j``, so each
    ``zeta(2s + k)`` (``k`` even) is evaluated once; binomials are generated
    along each anti-diagonal by the ratio recurrence.  Real ``s`` produces
    real (mpfr) entries.

    ``cache`` is an optional :class:`heckezeta.cache.ZetaCache`.
    """
    if n < 1:
        raise DomainError("matrix size must be at least 1")
    ctx = ctx or PrecisionContext()
    basis = Basis(basis)
    group = as_group(w, ctx)
    sc = to_complex(s, 0, ctx)
    _check_size_at_negative_integer(n, sc)
    wv = group.value(ctx)
    tol_exp = ctx.tolerance_exp
    pole_gap = gmpy2.mul_2exp(mpfr(1, 32), -ctx.guard_bits)

    with ctx.nearest():
        s_arg = _reduce_arg(sc)
        two_s = 2 * s_arg
        zero = two_s * 0
        entries = np.empty((n, n), dtype=object)
        entries.fill(zero)
        log_w = gmpy2.log(wv)
        inv_w2 = 1 / (wv * wv)
        sqrt_idx = [gmpy2.sqrt(mpfr(i + 1)) for i in range(n)]
        w_pow = None
        for step, k in enumerate(range(0, 2 * n - 1, 2)):
            arg = two_s + k
            if abs(arg - 1) < pole_gap:
                raise PoleProximity(f"2s + {k} = {arg} hits the pole of zeta")
            if cache is not None:
                zeta_val = cache.get(sc, k, ctx)
                if zeta_val is None:
                    zeta_val = _zeta_raw(arg, ctx.working_bits, tol_exp)
                    cache.put(sc, k, ctx, zeta_val)
            else:
                zeta_val = _zeta_raw(arg, ctx.working_bits, tol_exp)
            int_arg = exact_integer(arg)
            if int_arg is not None:
                # correctly rounded, and exactly 1 at arg = 0 (trivial-zero blocks)
                w_pow = wv ** (-int_arg)
            elif step % REANCHOR_EVERY == 0:
                w_pow = gmpy2.exp(-arg * log_w)
            else:
                w_pow = w_pow * inv_w2
            common = 2 * zeta_val * w_pow
            i_lo, i_hi = max(0, k - n + 1), min(k, n - 1)
            binoms = binom_ladder(arg - 1, i_hi)
            for i in range(i_lo, i_hi + 1):
                j = k - i
                val = common * binoms[i]
                if basis is Basis.SYMMETRIC and i != j:
                    val = val * sqrt_idx[j] / sqrt_idx[i]
                entries[i, j] = val
    return TransferMatrix(n, sc, group, basis, entries, ctx.working_bits)


def lu_det(a: np.ndarray, ctx: PrecisionContext):
    """Determinant by LU with partial pivoting (largest modulus in the column).

    ``a`` is an object array of gmpy2 numbers and is not modified.
    """
    n = a.shape[0]
    if n == 0:
        return mpfr(1)
    with ctx.nearest():
        u = a.copy()
        det = u[0, 0] * 0 + 1
        for k in range(n):
            col = np.abs(u[k:, k])
            p = k + int(np.argmax(col))
            if col[p - k] == 0:
                return det * 0
            if p != k:
                u[[k, p], k:] = u[[p, k], k:]
                det = -det
            pivot = u[k, k]
            det *= pivot
            if k + 1 < n:
                factors = u[k + 1 :, k] / pivot
                u[k + 1 :, k + 1 :] -= np.multiply.outer(factors, u[k, k + 1 :])
        return det


def one_minus(m: TransferMatrix, ctx: PrecisionContext) -> np.ndarray:
    with ctx.nearest():
        a = -m.entries
        for i in range(m.n):
            a[i, i] = 1 + a[i, i]
    return a


def det_one_minus(m: TransferMatrix, ctx: PrecisionContext | None = None) -> FNValue:
    """``det(1 - M)``.

    Entries with ``i + j`` odd vanish, so after grouping even and odd indices
    ``1 - M`` is block diagonal and the determinant is the product of two
    half-size LU determinants.
    """
    ctx = ctx or PrecisionContext.from_bits(m.working_bits)
    a = one_minus(m, ctx)
    even, odd = lu_det(a[0::2, 0::2], ctx), lu_det(a[1::2, 1::2], ctx)
    with ctx.nearest():
        return FNValue(mpc(even * odd), m.n, m.s, m.w)


def f_n(
    s,
    n: int,
    w,
    ctx: PrecisionContext | None = None,
    basis: Basis | str = Basis.SYMMETRIC,
    cache=None,
) -> FNValue:
    """Convenience: ``det(1 - L(s))`` for the ``n x n`` section."""
    ctx = ctx or PrecisionContext()
    return det_one_minus(build(n, s, w, basis, ctx, cache), ctx)
