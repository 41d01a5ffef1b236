import os

from gmpy2 import mpq
from hypothesis import HealthCheck, settings, strategies as st

from resonanza.exact import ExactComplex
from resonanza.polycore import Polynomial

settings.register_profile(
    "default", deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

small_rationals = st.builds(mpq, st.integers(-5, 5), st.integers(1, 4))
gaussian = st.builds(ExactComplex, small_rationals, small_rationals)


@st.composite
def polynomials(draw, n=None, max_exp=2, max_terms=4, real=False):
    n = draw(st.integers(1, 3)) if n is None else n
    keys = st.tuples(*[st.integers(0, max_exp)] * (2 * n))
    terms = draw(st.dictionaries(keys, gaussian, max_size=max_terms))
    p = Polynomial(n, terms)
    if real:
        p = p + p.conjugate()
    return p


@st.composite
def polynomial_pairs(draw, max_exp=2, max_terms=4, real=False, n=None):
    n = draw(st.integers(1, 3)) if n is None else n
    return (draw(polynomials(n=n, max_exp=max_exp, max_terms=max_terms, real=real)),
            draw(polynomials(n=n, max_exp=max_exp, max_terms=max_terms, real=real)))


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for i in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[i])
