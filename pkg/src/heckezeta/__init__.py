"""Certified approximation of the Selberg zeta function of Hecke triangle
groups by finite Fredholm determinants, with applications to Hausdorff
dimensions, the Ruelle zeta value at zero and trivial zeros."""

__version__ = "0.1.0"

from .bounds import ErrorBudget, choose_n, p_n, q, total_bound
from .errors import (
    BoundUnreachable,
    BracketFailure,
    DomainError,
    HeckeZetaError,
    IllConditioned,
    PatternMismatch,
    PoleAt1,
    PoleProximity,
    PrecisionExhausted,
    Undetermined,
)
from .precision import PrecisionContext
from .roots import RootEnclosure, SignCertificate, bisect_delta, certified_sign, hausdorff_table
from .special import CBound, binom_complex, c_upper, polylog_neg, zeta_complex
from .spectral import rank_analysis, ruelle_at_zero, u_matrix, vanishing_order_probe
from .transfer import Basis, FNValue, GroupParam, TransferMatrix, build, det_one_minus, entry_a, entry_l, f_n

__all__ = [
    "Basis",
    "BoundUnreachable",
    "BracketFailure",
    "CBound",
    "DomainError",
    "ErrorBudget",
    "FNValue",
    "GroupParam",
    "HeckeZetaError",
    "IllConditioned",
    "PatternMismatch",
    "PoleAt1",
    "PoleProximity",
    "PrecisionContext",
    "PrecisionExhausted",
    "RootEnclosure",
    "SignCertificate",
    "TransferMatrix",
    "Undetermined",
    "binom_complex",
    "bisect_delta",
    "build",
    "c_upper",
    "certified_sign",
    "choose_n",
    "det_one_minus",
    "entry_a",
    "entry_l",
    "f_n",
    "hausdorff_table",
    "p_n",
    "polylog_neg",
    "q",
    "rank_analysis",
    "ruelle_at_zero",
    "total_bound",
    "u_matrix",
    "vanishing_order_probe",
    "zeta_complex",
]
