import os
from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from stable_hhh.poly import Poly, Registry

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SMALL = Registry.standard(2, ("x", "y", "u"))


def polys(reg=SMALL, max_terms=4, max_exp=2, homogeneous_in=None):
    """Random sparse polynomials with small rational coefficients."""
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda c: c != 0)
    exps = st.tuples(*[st.integers(0, max_exp)] * len(reg))
    return st.dictionaries(exps, coeff, max_size=max_terms).map(lambda d: Poly(reg, d))


def x_polys(n, max_terms=4, max_exp=3):
    return polys(Registry.standard(n, ("x",)), max_terms, max_exp)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
