from fractions import Fraction

import pytest
import sympy
from hypothesis import settings, strategies as st

from qgalilei.scalar import GaussRational, Scalar

settings.register_profile("default", deadline=None, max_examples=25)
settings.load_profile("default")

SYM_A, SYM_ALPHA, SYM_BETA = sympy.symbols("a alpha beta", real=True)

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
gauss = st.builds(GaussRational, small_rationals, small_rationals)
exponents = st.tuples(st.integers(-3, 3), st.integers(0, 3), st.integers(-3, 3))
scalars = st.dictionaries(exponents, gauss, max_size=4).map(Scalar)
# units of the Laurent ring: alpha only appears with nonnegative powers
nonzero_monomials = st.builds(
    lambda c, i, k: Scalar({(i, 0, k): c}),
    gauss.filter(bool),
    st.integers(-3, 3),
    st.integers(-3, 3),
)


def to_sympy(s: Scalar):
    """Independent rendering of a Scalar as a sympy expression."""
    out = sympy.Integer(0)
    for (i, j, k), c in s.terms.items():
        coeff = sympy.Rational(Fraction(c.re).numerator, Fraction(c.re).denominator) + sympy.I * sympy.Rational(
            Fraction(c.im).numerator, Fraction(c.im).denominator
        )
        out += coeff * SYM_A**i * SYM_ALPHA**j * SYM_BETA**k
    return sympy.expand(out)


def same(s: Scalar, expr) -> bool:
    return sympy.expand(to_sympy(s) - expr) == 0


@pytest.fixture
def kmph():
    from qgalilei.freealg import preset

    return preset("uq_kmph")


_CLI_CACHE: dict = {}


def run_cli(argv):
    """(exit code, stdout, stderr) of one CLI invocation, cached per session."""
    import io

    from qgalilei.cli import main

    key = tuple(argv)
    if key not in _CLI_CACHE:
        out, err = io.StringIO(), io.StringIO()
        code = main(list(argv), out, err)
        _CLI_CACHE[key] = (code, out.getvalue(), err.getvalue())
    return _CLI_CACHE[key]
