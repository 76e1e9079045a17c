import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from qgalilei.freealg import preset
from qgalilei.opcalc import (
    LinearOperator,
    UnknownGenerator,
    UnknownVariable,
    WaveFunction,
    act_triangleleft,
    act_triangleright,
    apply,
    check_duality,
    classical_limit_wf,
    cosh_diff_over_a2_dmu,
    deriv,
    mult,
    one_minus_cosh_over_a2,
    one_minus_cosh_operator,
    pairing_A,
    shift,
    sinh_shift_over_a,
    sinh_shift_operator,
)
from qgalilei.scalar import A, ONE, Scalar

from conftest import SYM_A, to_sympy

V, MU, X, T = sympy.symbols("v mu x t")
SYMS = (V, MU, X, T)


def W(coeff=1, **exps):
    return WaveFunction.monomial(coeff, **exps)


def wf_to_sympy(f: WaveFunction):
    out = sympy.Integer(0)
    for e, c in f.terms.items():
        term = to_sympy(c)
        for s, k in zip(SYMS, e):
            term *= s**k
        out += term
    return sympy.expand(out)


exps4 = st.tuples(*(st.integers(0, 3) for _ in range(4)))
wavefunctions = st.dictionaries(exps4, st.integers(-3, 3).filter(bool), max_size=4).map(WaveFunction)


# -- primitives --------------------------------------------------------------------------


def test_apply_examples():
    assert apply(deriv("x"), W(x=3)) == W(3, x=2)
    assert apply(shift("x", 1), W(x=2)) == W(x=2) + W(2 * A, x=1) + W(A**2)
    assert apply(mult("t") * deriv("x"), W(x=1, t=1)) == W(t=2)


def test_operator_algebra():
    op = mult("x") * deriv("x") - deriv("x") * mult("x")
    f = W(x=3, t=1) + W(5, v=2)
    assert apply(op, f) == -f
    assert apply(LinearOperator.identity() * 3, f) == f.scale(3)


def test_unknown_variable_rejected():
    phi = WaveFunction.monomial(variables=("x", "t"), x=1)
    with pytest.raises(UnknownVariable):
        apply(deriv("mu"), phi)
    with pytest.raises(UnknownVariable):
        deriv("y")


@given(wavefunctions)
def test_shift_matches_substitution(f):
    got = wf_to_sympy(f.shift("x", -2))
    assert sympy.expand(got - wf_to_sympy(f).subs(X, X - 2 * SYM_A)) == 0


@pytest.mark.parametrize(
    "f, sinh_value, cosh_value",
    [
        (W(x=1), W(), WaveFunction()),
        (W(x=3), W(3, x=2) + W(A**2), W(-3, x=1)),
        (W(t=2), WaveFunction(), WaveFunction()),
        (W(x=2), W(2, x=1), W(-1)),
        (W(x=4), W(4, x=3) + W(4 * A**2, x=1), W(-6, x=2) - W(A**2)),
    ],
)
def test_difference_quotients(f, sinh_value, cosh_value):
    assert sinh_shift_over_a("x", f) == sinh_value
    assert one_minus_cosh_over_a2("x", f) == cosh_value


@given(wavefunctions)
def test_difference_quotients_against_sympy(f):
    g = wf_to_sympy(f)
    plus, minus = g.subs(X, X + SYM_A), g.subs(X, X - SYM_A)
    assert sympy.expand(2 * SYM_A * wf_to_sympy(sinh_shift_over_a("x", f)) - (plus - minus)) == 0
    assert sympy.expand(2 * SYM_A**2 * wf_to_sympy(one_minus_cosh_over_a2("x", f)) - (2 * g - plus - minus)) == 0
    # operator form gives the same thing
    assert apply(sinh_shift_operator("x"), f) == sinh_shift_over_a("x", f)
    assert apply(one_minus_cosh_operator("x"), f) == one_minus_cosh_over_a2("x", f)


@given(wavefunctions)
def test_no_spurious_poles_and_classical_limits(f):
    s = sinh_shift_over_a("x", f)
    c = one_minus_cosh_over_a2("x", f)
    assert all(k.min_exponent("a") >= 0 for k in list(s.terms.values()) + list(c.terms.values()))
    assert classical_limit_wf(s) == classical_limit_wf(f.deriv("x"))
    assert classical_limit_wf(c) == classical_limit_wf(f.deriv("x", 2).scale(Scalar(-1) / 2))


# -- the cosh-difference quotient ----------------------------------------------------------


def _cosh_numerator_oracle(f: WaveFunction):
    """[cosh(a(dx - v dmu)) - cosh(a dx)] / a^2 applied to f via sympy, as a finite series."""
    g = wf_to_sympy(f)
    top = f.degree() + 2

    def power(op, n, h):
        for _ in range(n):
            h = op(h)
        return h

    d_x = lambda h: sympy.diff(h, X)  # noqa: E731
    d_mix = lambda h: sympy.expand(sympy.diff(h, X) - V * sympy.diff(h, MU))  # noqa: E731
    total = sympy.Integer(0)
    for m in range(2, top + 1, 2):
        total += SYM_A ** (m - 2) / sympy.factorial(m) * (power(d_mix, m, g) - power(d_x, m, g))
    return sympy.expand(total)


@pytest.mark.parametrize(
    "f, expected",
    [
        (W(mu=1, x=1), W(-1, v=1, mu=1) + W(Scalar(1) / 2, v=2, x=1)),
        (W(x=2), W(-2, v=1, x=1)),
        (W(), WaveFunction()),
    ],
)
def test_cosh_difference_examples(f, expected):
    assert cosh_diff_over_a2_dmu(f) == expected


@settings(max_examples=12)
@given(wavefunctions)
def test_cosh_difference_times_dmu_is_the_numerator(f):
    got = cosh_diff_over_a2_dmu(f).deriv("mu")
    assert sympy.expand(wf_to_sympy(got) - _cosh_numerator_oracle(f)) == 0


@given(wavefunctions)
def test_left_h_action_classical_limit(f):
    lhs = classical_limit_wf(act_triangleleft("H", f))
    rhs = classical_limit_wf(f.deriv("t") - f.deriv("x").mult("v") + f.deriv("mu").mult("v", 2).scale(Scalar(1) / 2))
    assert lhs == rhs


# -- the two actions -------------------------------------------------------------------------


@pytest.mark.parametrize(
    "g, f, expected",
    [
        ("K", W(v=1, mu=1), W(mu=1) - W(v=1, x=1)),
        ("P", W(x=2), W(2, x=1)),
        ("K", W(t=1, x=3), W(-3, x=2, t=2) - W(A**2, t=2)),
        ("M", W(mu=2), W(2, mu=1)),
        ("H", W(t=3), W(3, t=2)),
    ],
)
def test_triangleright_examples(g, f, expected):
    assert act_triangleright(g, f) == expected


@pytest.mark.parametrize(
    "g, f, expected",
    [
        ("H", W(mu=1, x=1), W(-1, v=1, mu=1) + W(Scalar(1) / 2, v=2, x=1)),
        ("P", W(v=1, mu=1), W(-1, v=2)),
        ("M", W(mu=2), W(2, mu=1)),
        ("K", W(v=3), W(3, v=2)),
    ],
)
def test_triangleleft_examples(g, f, expected):
    assert act_triangleleft(g, f) == expected


def test_unknown_generator():
    with pytest.raises(UnknownGenerator):
        act_triangleright("Q", W(x=1))


@pytest.mark.parametrize("side", ["right", "left"])
def test_actions_are_representations(side):
    p = preset("uq_kmph")
    rng = random.Random(4 if side == "right" else 5)
    gens = [p.gen("K"), p.gen("M"), p.gen("P"), p.gen("H"), p.gen("E"), p.gen("E", -1)]
    for _ in range(30):
        h1, h2 = rng.choice(gens), rng.choice(gens)
        f = WaveFunction({tuple(rng.randint(0, 2) for _ in range(4)): 1, tuple(rng.randint(0, 1) for _ in range(4)): 2})
        if side == "right":
            assert act_triangleright(h1 * h2, f) == act_triangleright(h1, act_triangleright(h2, f))
        else:
            # f <| (h1 h2) = (f <| h1) <| h2
            assert act_triangleleft(h1 * h2, f) == act_triangleleft(h2, act_triangleleft(h1, f))


# -- the bilinear form and duality ------------------------------------------------------------


def test_pairing_A_examples():
    p = preset("uq_kmph")
    K, M, E = p.gen("K"), p.gen("M"), p.gen("E")
    assert pairing_A(K * M, W(v=1, mu=1)) == ONE
    assert pairing_A(K * K * M, W(v=2, mu=1)) == Scalar(2)
    assert pairing_A(E, W(x=2)) == A**2
    assert pairing_A(p.gen("P") * E, W(x=3)) == 3 * A**2
    assert pairing_A(K, W(mu=1)) == 0


def test_pairing_A_grouplike_matches_series():
    # <E^z, x^n> = (z a)^n from E^z = sum (z a P)^k / k!
    p = preset("uq_kmph")
    for z in (-2, -1, 1, 3):
        for n in range(5):
            assert pairing_A(p.gen("E", z), W(x=n)) == (A * z) ** n


def test_duality_at_degree_three():
    report = check_duality(3)
    assert report.passed, report.to_text()
    assert len(report.records) == 12
