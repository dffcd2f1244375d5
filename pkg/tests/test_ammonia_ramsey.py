import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topophase import ammonia_ramsey as ar
from topophase.constants import default_constants

D = 1.47e-18


def test_phase_values():
    assert ar.ammonia_hmw_phase(D, 0.0, 1.0) == 0.0
    # 1.47e-18 * 100 / 3.16152677e-17
    assert ar.ammonia_hmw_phase(D, 100.0, 1.0) == pytest.approx(4.6497, abs=1e-4)
    assert ar.ammonia_hmw_phase(D, 100.0, 2.0) == pytest.approx(2 * ar.ammonia_hmw_phase(D, 100.0, 1.0), rel=1e-15)


def test_default_dipole():
    assert default_constants().d_ammonia == 1.47e-18
    assert ar.RamseyParams().d_a == 1.47e-18


def test_fringe_extremes():
    assert ar.fringe_population(0.0) == pytest.approx(1.0, abs=1e-15)
    assert ar.fringe_population(math.pi) == pytest.approx(0.0, abs=1e-15)


@settings(max_examples=50, deadline=None)
@given(phi=st.floats(-50, 50), eps=st.floats(-0.3, 0.3))
def test_periodic_and_bounded(phi, eps):
    p = ar.fringe_population(phi, eps)
    assert 0.0 <= p <= 1.0
    assert ar.fringe_population(phi + 2 * math.pi, eps) == pytest.approx(p, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(phi=st.floats(-50, 50))
def test_ideal_fringe_closed_form(phi):
    assert ar.fringe_population(phi) == pytest.approx((1 + math.cos(phi)) / 2, abs=1e-12)


@pytest.mark.parametrize("eps", [0.0, 0.1, -0.25])
def test_propagator_unitary(eps):
    U = ar.ramsey_propagator(1.234, eps)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(2), atol=1e-12)


def test_first_pulse_prepares_equal_superposition():
    np.testing.assert_allclose(ar.pulse(math.pi / 2) @ [1.0, 0.0], [2**-0.5, 2**-0.5], atol=1e-15)


def test_contrast():
    assert ar.fringe_contrast(0.0) == pytest.approx(1.0, abs=1e-9)
    # two pulses of area (pi/2)(1+eps): contrast sin^2(pi(1+eps)/2)
    for eps in (0.1, 0.3):
        assert ar.fringe_contrast(eps) == pytest.approx(math.sin(math.pi * (1 + eps) / 2) ** 2, abs=1e-5)


def test_depends_only_on_phase():
    a = ar.ramsey_fringe(ar.RamseyParams(d_a=D, B=80.0, L=1.0))
    b = ar.ramsey_fringe(ar.RamseyParams(d_a=2 * D, B=20.0, L=2.0))
    assert a == pytest.approx(b, abs=1e-14)


def test_readout_phase_shifts_fringe():
    p = ar.ramsey_fringe(ar.RamseyParams(B=0.0, readout_detuning_phase=math.pi))
    assert p == pytest.approx(0.0, abs=1e-15)


def test_params_validation():
    for kwargs in (dict(d_a=0.0), dict(v=-1.0), dict(L=0.0), dict(B=-1.0)):
        with pytest.raises(ValueError):
            ar.RamseyParams(**kwargs)


def test_scan():
    (row,) = ar.scan_fringes([0.0])
    assert row.population == pytest.approx(1.0)
    rows = ar.scan_fringes(np.linspace(0, 100, 101))
    phis = [r.phi_rad for r in rows]
    assert phis[-1] == pytest.approx(4.65, abs=0.01)
    assert phis[-1] / (2 * math.pi) >= 0.7
    pops = [r.population for r in rows]
    assert min(pops) < 1e-3  # passes through the dark fringe at phi = pi
    const = ar.scan_fringes([10.0, 10.0, 10.0])
    assert len({r.population for r in const}) == 1
