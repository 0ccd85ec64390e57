import gmpy2
import mpmath
import pytest
from hypothesis import HealthCheck, settings

from heckezeta.precision import PrecisionContext

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

ACCEPTANCE_LINES: list[str] = []


def to_mp(x):
    """gmpy2 number -> mpmath number, exactly."""
    if isinstance(x, gmpy2.mpc):
        re, im = to_mp(x.real), to_mp(x.imag)
        with mpmath.workprec(max(re.context.prec, x.real.precision, x.imag.precision) + 8):
            return mpmath.mpc(re, im)
    x = gmpy2.mpfr(x) if not isinstance(x, gmpy2.mpfr) else x
    if gmpy2.is_zero(x):
        return mpmath.mpf(0)
    m, e = x.as_mantissa_exp()
    with mpmath.workprec(max(53, int(m).bit_length() + 8)):
        return +mpmath.mpf((int(m), int(e)))


@pytest.fixture
def ctx():
    return PrecisionContext(target_digits=40)


@pytest.fixture
def mp50():
    with mpmath.workdps(60):
        yield


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
