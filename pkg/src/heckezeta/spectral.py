"""Ruelle zeta at the origin and trivial zeros at negative integers.

Both results come from block structure of the plain-basis matrix
``V_N(s) = (a_ij(s))``:

* at ``s = 0`` the first column is ``(-1, 0, 0, ...)`` and the lower block
  is ``V_{N-1}(1)^T``, hence ``F_N(0) = 2 F_{N-1}(1)`` and ``R(0) = 2``;
* at ``s = -m`` the leading ``(2m+1) x (2m+1)`` block ``U(0)`` decouples,
  and the rank of ``1 - U(0)`` bounds the vanishing order at ``-m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .errors import DomainError, IllConditioned, PatternMismatch
from .precision import LOG2_10, PrecisionContext, to_complex
from .transfer import Basis, GroupParam, as_group, build, f_n, lu_det

PROBE_EXPONENTS = (4, 5, 6, 7, 8)
PROBE_RESIDUAL_LIMIT = 0.10


@dataclass(frozen=True)
class RuelleReport:
    w: GroupParam
    n: int
    f0: mpfr
    f1: mpfr
    defect: mpfr
    ratio: mpfr


def ruelle_at_zero(w, n: int, ctx: PrecisionContext | None = None, cache=None) -> RuelleReport:
    """``F_N(0)``, ``F_{N-1}(1)`` and the defect ``|F_N(0) - 2 F_{N-1}(1)|``.

    Both determinants are computed independently in the plain basis; the
    ratio ``F_N(0) / F_{N-1}(1)`` is the finite-N estimate of ``R(0)``.
    """
    if n < 2:
        raise DomainError("the Ruelle identity needs N >= 2")
    ctx = ctx or PrecisionContext()
    group = as_group(w, ctx)
    f0 = f_n(0, n, group, ctx, Basis.PLAIN, cache).real
    f1 = f_n(1, n - 1, group, ctx, Basis.PLAIN, cache).real
    with ctx.nearest():
        defect = abs(f0 - 2 * f1)
        ratio = f0 / f1
    return RuelleReport(group, n, f0, f1, defect, ratio)


@dataclass(frozen=True, eq=False)
class UMatrix:
    m: int
    s_offset: mpc
    w: GroupParam
    entries: np.ndarray

    @property
    def size(self) -> int:
        return 2 * self.m + 1


def u_matrix(m: int, s_offset, w, ctx: PrecisionContext | None = None) -> UMatrix:
    """``U(s) = (a_ij(-m + s))_{i,j=0..2m}`` at ``s = s_offset``.

    At ``s_offset = 0`` every zeta factor is either exact (``zeta(0)``,
    trivial zeros) or multiplied by an exactly vanishing binomial, so the
    entries of ``1 - U(0)`` come out as exact small integers.
    """
    if m < 1:
        raise DomainError("m must be a positive integer")
    ctx = ctx or PrecisionContext()
    group = as_group(w, ctx)
    off = to_complex(s_offset, 0, ctx)
    with ctx.nearest():
        s = off - m
    mat = build(2 * m + 1, s, group, Basis.PLAIN, ctx)
    return UMatrix(m, off, group, mat.entries)


@dataclass(frozen=True)
class RankReport:
    m: int
    observed_rank: int
    predicted_rank: int
    degree_lower: int
    degree_upper: int
    pattern_ok: bool

    @property
    def corank(self) -> int:
        return 2 * self.m + 1 - self.observed_rank


def numerical_rank(a: np.ndarray, threshold: mpfr, ctx: PrecisionContext) -> int:
    """Rank by Gaussian elimination with full pivoting; pivots at or below
    ``threshold`` in modulus count as zero."""
    with ctx.nearest():
        u = a.copy()
        rows, cols = u.shape
        rank = 0
        for k in range(min(rows, cols)):
            sub = np.abs(u[k:, k:])
            flat = int(np.argmax(sub))
            pi, pj = divmod(flat, sub.shape[1])
            if not sub[pi, pj] > threshold:
                break
            pi, pj = pi + k, pj + k
            u[[k, pi], :] = u[[pi, k], :]
            u[:, [k, pj]] = u[:, [pj, k]]
            factors = u[k + 1 :, k] / u[k, k]
            u[k + 1 :, k:] -= np.multiply.outer(factors, u[k, k:])
            rank += 1
    return rank


def _check_pattern(a: np.ndarray, m: int, threshold: mpfr, ctx: PrecisionContext) -> list[str]:
    size = 2 * m + 1
    problems = []
    with ctx.nearest():
        for i in range(size):
            for j in range(size):
                on_cross = j == i or j == 2 * m - i
                small = not abs(a[i, j]) > threshold
                if not on_cross and not small:
                    problems.append(f"entry ({i},{j}) off the diagonals is nonzero")
                elif on_cross:
                    must_vanish = m % 2 == 1 and i == m
                    if must_vanish and not small:
                        problems.append(f"central entry ({m},{m}) should vanish for odd m")
                    elif not must_vanish and small:
                        problems.append(f"entry ({i},{j}) on the diagonals vanishes")
        # column j and column 2m - j span a space of dimension <= 1
        for j in range(m + 1):
            c1, c2 = a[:, j], a[:, 2 * m - j]
            for i in range(size):
                for k in range(i + 1, size):
                    if abs(c1[i] * c2[k] - c1[k] * c2[i]) > threshold:
                        problems.append(f"columns {j} and {2 * m - j} are not proportional")
                        break
                else:
                    continue
                break
    return problems


def rank_analysis(m: int, w, ctx: PrecisionContext | None = None) -> RankReport:
    """Rank and support pattern of ``1 - U(0)`` with the resulting degree bounds.

    Raises:
        PatternMismatch: if ``1 - U(0)`` is not supported on the diagonal and
            anti-diagonal, or the paired columns are not proportional.
    """
    ctx = ctx or PrecisionContext()
    u = u_matrix(m, 0, w, ctx)
    a = _one_minus_array(u.entries, ctx)
    with ctx.nearest():
        threshold = gmpy2.mul_2exp(mpfr(1), -(ctx.working_bits // 2))
    problems = _check_pattern(a, m, threshold, ctx)
    if problems:
        raise PatternMismatch(f"1 - U(0) for m={m}: " + "; ".join(problems))
    rank = numerical_rank(a, threshold, ctx)
    predicted = m + 1 if m % 2 == 0 else m
    return RankReport(
        m=m,
        observed_rank=rank,
        predicted_rank=predicted,
        degree_lower=m,
        degree_upper=2 * m + 1,
        pattern_ok=True,
    )


def _one_minus_array(entries: np.ndarray, ctx: PrecisionContext) -> np.ndarray:
    with ctx.nearest():
        a = -entries
        for i in range(a.shape[0]):
            a[i, i] = 1 + a[i, i]
    return a


def one_minus_u(m: int, s_offset, w, ctx: PrecisionContext | None = None) -> np.ndarray:
    ctx = ctx or PrecisionContext()
    return _one_minus_array(u_matrix(m, s_offset, w, ctx).entries, ctx)


@dataclass(frozen=True)
class ProbeResult:
    """Heuristic (not certified) estimate of the vanishing order of
    ``det(1 - U(s))`` at ``s = 0``."""

    m: int
    slope: float
    samples: tuple[tuple[int, float], ...]
    residual: float
    heuristic: bool = True

    @property
    def order_estimate(self) -> int:
        return round(self.slope)

    @property
    def within_bounds(self) -> bool:
        return self.m <= self.order_estimate <= 2 * self.m + 1


def vanishing_order_probe(m: int, w, ctx: PrecisionContext | None = None) -> ProbeResult:
    """Fit ``log|det(1 - U(s))|`` against ``log s`` for ``s = 10**-k``, k = 4..8.

    Raises:
        IllConditioned: if a sample determinant is exactly zero or the
            largest fit residual exceeds 10% of the sampled range.
    """
    ctx = ctx or PrecisionContext()
    # det may be as small as 10**(-8 (2m+1)): keep that many digits above the guard
    need = math.ceil(8 * (2 * m + 2) * LOG2_10) + 2 * ctx.guard_bits
    ctx = ctx.with_bits(need)
    group = as_group(w, ctx)
    xs, ys = [], []
    for k in PROBE_EXPONENTS:
        with ctx.nearest():
            s = mpfr(10) ** -k
        a = one_minus_u(m, s, group, ctx)
        det = lu_det(a, ctx)
        if det == 0:
            raise IllConditioned(f"det(1 - U(1e-{k})) vanished exactly for m={m}")
        xs.append(-k)
        with ctx.nearest():
            ys.append(float(gmpy2.log10(abs(det))))
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = max(abs(y - (slope * x + intercept)) for x, y in zip(xs, ys))
    spread = max(ys) - min(ys)
    rel = resid / spread if spread else math.inf
    if rel > PROBE_RESIDUAL_LIMIT:
        raise IllConditioned(f"probe fit residual {rel:.3f} exceeds {PROBE_RESIDUAL_LIMIT}")
    return ProbeResult(m, float(slope), tuple(zip((-x for x in xs), ys)), float(rel))
