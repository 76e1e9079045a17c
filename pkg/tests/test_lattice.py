import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qgalilei.lattice import (
    LatticeParams,
    LatticeState,
    ModeOutOfBand,
    Unresolvable,
    check_discrete_adjointness,
    check_unitarity,
    dispersion,
    dispersion_study,
    evolve,
    gaussian_packet,
    kernel_omega,
    omega,
    plane_wave,
    study_csv,
    taylor_error,
)


def test_reference_frequency():
    assert omega(1.0, 0.1) == pytest.approx(0.4995834722, abs=5e-11)
    assert omega(1.0, 0.1) == pytest.approx((1 - math.cos(0.1)) / 0.01, rel=1e-12)


def test_zero_mode_and_band_edge():
    p = LatticeParams(a=0.2, sites=32, mass=2.0, hbar=3.0)
    assert dispersion(0, p) == 0
    assert dispersion(16, p) == pytest.approx(2 * p.hbar / (p.mass * p.a**2))
    with pytest.raises(ModeOutOfBand):
        dispersion(17, p)


def test_params_validation():
    with pytest.raises(ValueError):
        LatticeParams(sites=3)
    with pytest.raises(ValueError):
        LatticeParams(a=0)
    with pytest.raises(ValueError):
        LatticeState(np.zeros(5), LatticeParams(sites=4))


@pytest.mark.parametrize("n", [0, 1, 5, -7, 20])
def test_kernel_reproduces_dispersion(n):
    p = LatticeParams(a=0.15, sites=64, mass=1.5, hbar=0.7)
    assert kernel_omega(p, n) == pytest.approx(dispersion(n, p), abs=1e-10)


def test_single_mode_picks_up_a_phase():
    p = LatticeParams(a=0.1, sites=64)
    s = plane_wave(p, 3)
    t = 2.5
    got = evolve(s, t).amplitudes
    np.testing.assert_allclose(got, s.amplitudes * np.exp(-1j * dispersion(3, p) * t), atol=1e-12)


def test_zero_time_is_identity():
    s = gaussian_packet(LatticeParams())
    assert evolve(s, 0) is s


@given(st.floats(0, 50), st.floats(0, 50))
def test_semigroup(t1, t2):
    s = gaussian_packet(LatticeParams(a=0.2, sites=64), k0=0.5)
    np.testing.assert_allclose(evolve(evolve(s, t1), t2).amplitudes, evolve(s, t1 + t2).amplitudes, atol=1e-12)


def test_unitarity_imaginary_beta():
    p = LatticeParams(a=0.1, sites=256)
    s = gaussian_packet(p, k0=1.0)
    for t in (100, 1000):
        assert check_unitarity(s, t) <= 1e-12 * s.norm()
    zero = LatticeState(np.zeros(p.sites), p)
    assert check_unitarity(zero, 100) == 0


def test_real_beta_breaks_norm_conservation():
    p = LatticeParams(a=0.1, sites=256)
    s = gaussian_packet(p, k0=1.0, beta=1.0)
    assert check_unitarity(s, 1000) / s.norm() > 1e-3


def test_discrete_adjointness():
    res = check_discrete_adjointness(LatticeParams(a=0.05, sites=96))
    assert res["sinh_skew"] < 1e-12 and res["cosh_symmetric"] < 1e-12


def test_study_converges_quadratically():
    rows = dispersion_study([0.3, 0.15, 0.075, 0.0375], k=1.0)
    for r in rows:
        assert r.abs_err == pytest.approx(taylor_error(1.0, r.a), rel=0.05)
    for r in rows[1:]:
        assert r.ratio == pytest.approx(4.0, abs=0.05)


def test_study_with_zero_wavenumber():
    rows = dispersion_study([0.2, 0.1], k=0.0)
    assert all(r.abs_err == 0 for r in rows)
    assert rows[1].ratio is None


def test_unresolvable_wavenumber():
    with pytest.raises(Unresolvable):
        dispersion_study([1.0], k=4.0)


def test_csv_layout():
    text = study_csv(dispersion_study([0.2, 0.1], k=1.0))
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["a", "omega_a", "omega_0", "abs_err", "ratio"]
    assert rows[1][4] == "" and float(rows[2][4]) == pytest.approx(4, abs=0.02)
