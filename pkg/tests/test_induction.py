import pytest
from hypothesis import given, strategies as st

from qgalilei.freealg import commutator, preset
from qgalilei.hopf import counit, hopf_data
from qgalilei.induction import (
    SYMBOLIC,
    BetaNotInvertible,
    CarrierElement,
    Character,
    casimir_action,
    casimir_element,
    check_casimir,
    check_classical_limit,
    check_equivalence_alpha,
    check_equivariance,
    check_relations_on_module,
    check_star_consistency,
    classical_limit,
    induced_action,
    reduced_casimir_action,
    star,
)
from qgalilei.opcalc import WaveFunction
from qgalilei.scalar import A, ALPHA, BETA, I, ONE, ZERO, Scalar

XT = ("x", "t")


def phi(coeff=1, **exps):
    return WaveFunction.monomial(coeff, variables=XT, **exps)


xt_polys = st.dictionaries(
    st.tuples(st.just(0), st.just(0), st.integers(0, 4), st.integers(0, 3)),
    st.integers(-4, 4).filter(bool),
    max_size=4,
).map(lambda d: WaveFunction(d, XT))


def test_induced_generator_examples():
    assert induced_action(SYMBOLIC, "K", phi(x=1)) == phi(ALPHA, x=1) - phi(BETA, x=2) - phi(t=1)
    expected = phi(ALPHA, x=3) - phi(BETA, x=4) - phi(3, x=2, t=1) - phi(A**2, t=1)
    assert induced_action(SYMBOLIC, "K", phi(x=3)) == expected
    assert induced_action(SYMBOLIC, "M", phi(x=1, t=1)) == phi(BETA, x=1, t=1)


def test_grouplike_acts_by_translation():
    p = preset("uq_kmph")
    got = induced_action(SYMBOLIC, p.gen("E", -1), phi(x=2))
    assert got == phi(x=2) - phi(2 * A, x=1) + phi(A**2)


@given(xt_polys)
def test_module_is_a_left_representation(f):
    p = preset("uq_kmph")
    gens = [p.gen(g) for g in "KMPH"] + [p.gen("E"), p.gen("E", -1)]
    for g in gens:
        for h in gens:
            lhs = induced_action(SYMBOLIC, g * h, f)
            rhs = induced_action(SYMBOLIC, g, induced_action(SYMBOLIC, h, f))
            assert lhs == rhs


def test_relations_on_module_degree_six():
    report = check_relations_on_module(SYMBOLIC, 6)
    assert report.passed, report.to_text()


def test_commutator_examples_on_module():
    act = lambda g, f: induced_action(SYMBOLIC, g, f)  # noqa: E731
    f = phi(x=2)
    assert act("P", act("K", f)) - act("K", act("P", f)) == phi(-1, x=0).scale(BETA) * f
    assert act("H", act("K", phi())) - act("K", act("H", phi())) == WaveFunction(variables=XT)


def test_numeric_character_relations():
    report = check_relations_on_module(Character(Scalar(3), -I * 2), 5)
    assert report.passed


# -- Casimir ---------------------------------------------------------------------------


def test_casimir_is_central_and_killed_by_counit():
    c = casimir_element()
    p = c.pres
    for g in ("K", "M", "P", "H", "E"):
        assert commutator(c, p.gen(g)) == 0
    assert counit(hopf_data("uq_kmph"), c) == ZERO


@pytest.mark.parametrize(
    "f, value",
    [
        (phi(x=2, t=1), phi(BETA, x=2) - phi(t=1)),
        (phi(t=1), phi(BETA)),
        (phi(), WaveFunction(variables=XT)),
        (phi(x=4, t=1), phi(BETA, x=4) - phi(6, x=2, t=1) - phi(A**2, t=1)),
    ],
)
def test_casimir_action_examples(f, value):
    assert casimir_action(SYMBOLIC, f) == value


@given(xt_polys)
def test_casimir_two_paths_agree(f):
    assert casimir_action(SYMBOLIC, f) == induced_action(SYMBOLIC, casimir_element(), f)


def test_casimir_report():
    assert check_casimir(SYMBOLIC, 4).passed


def test_reduced_casimir():
    assert reduced_casimir_action(SYMBOLIC, phi(x=2, t=1)) == phi(x=2) - phi(BETA**-1, t=1)
    assert classical_limit(reduced_casimir_action(SYMBOLIC, phi(x=4))) == phi(-6 * BETA**-1, x=2)
    assert reduced_casimir_action(SYMBOLIC, phi()) == WaveFunction(variables=XT)


def test_reduced_casimir_needs_invertible_beta():
    with pytest.raises(BetaNotInvertible):
        reduced_casimir_action(Character(ZERO, ZERO), phi(x=1))
    with pytest.raises(BetaNotInvertible):
        reduced_casimir_action(Character(ZERO, BETA + 1), phi(x=1))


# -- classical limit ------------------------------------------------------------------------


def test_classical_limit_examples():
    ch = Character(ZERO, BETA)
    assert classical_limit(induced_action(ch, "K", phi(x=3))) == phi(-BETA, x=4) - phi(3, x=2, t=1)
    unit_mass = Character(ZERO, -I)
    assert classical_limit(induced_action(unit_mass, "K", phi(x=3))) == phi(I, x=4) - phi(3, x=2, t=1)
    assert classical_limit(phi(A**2, t=1)) == WaveFunction(variables=XT)
    assert classical_limit(casimir_action(ch, phi(x=4, t=1))) == phi(BETA, x=4) - phi(6, x=2, t=1)


def test_classical_limit_report():
    report = check_classical_limit(4)
    assert report.passed, report.to_text()


def test_classical_limit_refuses_poles():
    with pytest.raises(ZeroDivisionError):
        classical_limit(phi(A**-1, x=1))


# -- equivariance, star, alpha equivalence -----------------------------------------------------


@pytest.mark.parametrize("order", [2, 3, 5])
def test_equivariance(order):
    report = check_equivariance(SYMBOLIC, order=order, degree_cap=2)
    assert report.passed, report.to_text()


def test_equivariance_on_zero_is_trivial():
    f = WaveFunction(variables=XT)
    assert induced_action(SYMBOLIC, "K", f) == f


def test_star_examples():
    p = preset("uq_kmph")
    K, P, H, M, E = (p.gen(g) for g in "KPHME")
    assert star(K * P) == K * P - M
    assert star(star(H)) == H
    assert star(commutator(P, K)) == commutator(star(K), star(P))
    assert star(E) == p.gen("E", -1)
    assert star(K.scale(I + ALPHA)) == K.scale(I - ALPHA)


def test_star_report():
    assert check_star_consistency(2).passed


def test_alpha_equivalence():
    assert check_equivalence_alpha(5).passed


def test_carrier_element_records_character():
    ch = Character(ALPHA, BETA)
    c = CarrierElement(ch, phi(x=1)).act(preset("uq_kmph").gen("P"))
    assert c.character == ch and c.phi == phi()
