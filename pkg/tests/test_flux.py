from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mathieu_kit.closed_form import DampedParams
from mathieu_kit.errors import InvalidParameterError, ResonanceError, SpanError
from mathieu_kit.flux import (
    LOWPASS_CARRIER_PERIODS,
    REGIME_RATIO,
    FluxParams,
    InducedFieldModel,
    ModulationResult,
    field_from_motion,
    full_ode,
    identify_frequencies,
    induced_field,
    induced_field_model,
    linearized_delta,
    modulation_analysis,
    particular_k0,
    simulate_full,
    stiffness,
    symmetric_case_solution,
)
from mathieu_kit.samples import TimeSeries


def make_fp(m=1.0, eta=0.5, k0=9.0, k=0.05, omega=0.05,
            B=1.0, J0=1.0, Omega=1.2, c_light=1.0) -> FluxParams:
    return FluxParams(base=DampedParams(m=m, eta=eta, k0=k0, k=k, omega=omega),
                      B=B, J0=J0, Omega=Omega, c_light=c_light)


def synthetic_series(model: InducedFieldModel, Omega: float, omega: float,
                     periods: float = 3.3, per_carrier: int = 64) -> TimeSeries:
    dt = 2.0 * math.pi / (per_carrier * Omega)
    grid = np.arange(0.0, periods * 2.0 * math.pi / omega, dt)
    envelope = 1.0 - model.epsilon * np.cos(omega * grid - model.phi)
    e = model.prefactor * envelope * np.sin(Omega * grid - model.alpha)
    zeros = np.zeros_like(grid, dtype=complex)
    return TimeSeries(grid=grid, y=e.astype(complex), dy=zeros, d2y=zeros.copy())


def test_stiffness_values():
    p = DampedParams(1.0, 0.0, 4.0, 0.5, 2.0)
    assert stiffness(p, 0.0) == pytest.approx(4.5)
    assert stiffness(p, math.pi / p.omega) == pytest.approx(3.5)
    p0 = DampedParams(1.0, 0.0, 4.0, 0.0, 2.0)
    for t in (0.0, 0.7, 3.1):
        assert stiffness(p0, t) == pytest.approx(4.0)


def test_flux_params_validation_and_drive():
    with pytest.raises(InvalidParameterError):
        make_fp(Omega=0.0)
    with pytest.raises(InvalidParameterError):
        make_fp(Omega=-1.0)
    with pytest.raises(InvalidParameterError):
        make_fp(c_light=0.0)
    fp = make_fp(B=2.0, J0=3.0, c_light=4.0)
    assert fp.drive_amplitude == pytest.approx(1.5)


def test_particular_k0_pinned_amplitudes():
    # k0 = 2 m Omega^2, no damping: amplitude B J0 / (c m Omega^2), zero lag
    fp = make_fp(eta=0.0, k0=2.0 * 1.0 * 1.2**2, Omega=1.2)
    resp = particular_k0(fp)
    assert resp.amplitude == pytest.approx(1.0 / 1.2**2)
    assert resp.phase == pytest.approx(0.0)
    assert resp.frequency == pytest.approx(1.2)
    # stiffness-dominated limit: amplitude ~ B J0 / (c k0)
    fp2 = make_fp(eta=0.0, k0=4000.0, Omega=1.2)
    resp2 = particular_k0(fp2)
    assert resp2.amplitude == pytest.approx(1.0 / 4000.0, rel=1e-3)


def test_particular_k0_resonance():
    with pytest.raises(ResonanceError):
        particular_k0(make_fp(eta=0.0, k0=1.44, Omega=1.2, m=1.0))


def test_particular_k0_solves_its_equation():
    fp = make_fp()
    resp = particular_k0(fp)
    b = fp.base
    worst = 0.0
    for t in np.linspace(0.0, 25.0, 301):
        s = resp.evaluate(t)
        force = fp.drive_amplitude * math.cos(fp.Omega * t)
        r = b.m * s.d2y + b.eta * s.dy + b.k0 * s.y - force
        worst = max(worst, abs(r))
    assert worst < 1e-10 * max(1.0, fp.drive_amplitude)


def test_linearized_delta_zero_modulation():
    fp = make_fp(k=0.0)
    upper, lower = linearized_delta(fp)
    assert upper.amplitude == 0.0
    assert lower.amplitude == 0.0


def test_linearized_delta_solves_its_equation():
    fp = make_fp()
    b = fp.base
    y0 = particular_k0(fp)
    upper, lower = linearized_delta(fp)
    assert upper.frequency == pytest.approx(fp.Omega + b.omega)
    assert lower.frequency == pytest.approx(fp.Omega - b.omega)
    worst = 0.0
    for t in np.linspace(0.0, 40.0, 401):
        su = upper.evaluate(t)
        sl = lower.evaluate(t)
        s0 = y0.evaluate(t)
        lhs = (b.m * (su.d2y + sl.d2y) + b.eta * (su.dy + sl.dy)
               + b.k0 * (su.y + sl.y))
        rhs = -b.k * math.cos(b.omega * t) * s0.y
        worst = max(worst, abs(lhs - rhs))
    assert worst < 1e-10 * max(1.0, abs(y0.amplitude))


def test_linearized_delta_sideband_resonance():
    bad = make_fp(eta=0.0, m=1.0, Omega=2.0, omega=0.3, k0=(2.3) ** 2)
    with pytest.raises(ResonanceError):
        linearized_delta(bad)


def test_linearized_delta_static_limit():
    # slow modulation in the stiffness-dominated regime acts as a stiffness shift
    fp = make_fp(eta=1e-4, k0=400.0, k=4.0, omega=1e-4, Omega=0.05)
    y0 = particular_k0(fp)
    upper, lower = linearized_delta(fp)
    delta0 = upper.evaluate(0.0).y + lower.evaluate(0.0).y
    assert delta0 == pytest.approx(-(4.0 / 400.0) * y0.evaluate(0.0).y, rel=1e-4)


def test_induced_field_model_identities():
    fp = make_fp(m=1.1, eta=0.7, k0=16.0, k=0.2, omega=0.04, Omega=1.3,
                 B=2.0, J0=0.5, c_light=3.0)
    b = fp.base
    model = induced_field_model(fp)
    assert model.epsilon == b.k / b.k0
    assert math.tan(model.phi) == pytest.approx(2.0 * b.eta * b.omega / b.k0, rel=1e-12)
    assert math.tan(model.alpha) == pytest.approx(b.eta * fp.Omega / b.k0, rel=1e-12)
    assert model.prefactor == pytest.approx(
        fp.B**2 * fp.J0 * fp.Omega / (abs(b.k0) * fp.c_light**2))


@given(eta=st.floats(min_value=0.0, max_value=2.0),
       k0=st.floats(min_value=1.0, max_value=50.0),
       k=st.floats(min_value=-0.5, max_value=0.5),
       omega=st.floats(min_value=0.005, max_value=0.2),
       Omega=st.floats(min_value=0.5, max_value=3.0))
def test_induced_field_model_identity_property(eta, k0, k, omega, Omega):
    fp = make_fp(eta=eta, k0=k0, k=k, omega=omega, Omega=Omega)
    model = induced_field_model(fp)
    assert model.epsilon == pytest.approx(k / k0, rel=1e-14, abs=1e-300)
    assert math.tan(model.phi) == pytest.approx(2.0 * eta * omega / k0, rel=1e-9, abs=1e-12)
    assert math.tan(model.alpha) == pytest.approx(eta * Omega / k0, rel=1e-9, abs=1e-12)


def test_induced_field_undamped_phases_vanish():
    model = induced_field_model(make_fp(eta=0.0))
    assert model.phi == 0.0
    assert model.alpha == 0.0


def test_induced_field_pinned_example():
    fp = make_fp(m=1.0, eta=0.0, k0=1.0, k=0.0, omega=0.05,
                 B=1.0, J0=1.0, Omega=10.0, c_light=1.0)
    for t in (0.0, 0.1, 0.33):
        value, model = induced_field(fp, t)
        assert value == pytest.approx(10.0 * math.sin(10.0 * t), abs=1e-12)
        assert model.prefactor == pytest.approx(10.0)
        assert model.epsilon == 0.0


def test_induced_field_requires_restoring_constant():
    with pytest.raises(InvalidParameterError):
        induced_field_model(make_fp(k0=0.0))


def test_validity_flags():
    good = make_fp(m=1.0, eta=2.0, k0=100.0, k=1.0, omega=0.01, Omega=1.0)
    assert induced_field_model(good).validity == "in-regime"
    fast_mod = make_fp(m=1.0, eta=2.0, k0=100.0, k=1.0, omega=0.9, Omega=1.0)
    v = induced_field_model(fast_mod).validity
    assert v.startswith("out-of-regime")
    assert "omega/Omega" in v
    deep_mod = make_fp(m=1.0, eta=2.0, k0=100.0, k=50.0, omega=0.01, Omega=1.0)
    assert "k" in induced_field_model(deep_mod).validity
    light = make_fp(m=1.0, eta=2.0, k0=1.0, k=0.01, omega=0.01, Omega=1.0)
    assert "Omega^2" in induced_field_model(light).validity


def test_symmetric_case_solution():
    fp = make_fp(eta=0.8, B=2.0, J0=1.5, Omega=1.1, c_light=2.0)
    sol = symmetric_case_solution(fp, y_at_0=0.3)
    s0 = sol(0.0)
    assert s0.y == pytest.approx(0.3)
    drive_half = fp.B * fp.J0 / (2.0 * fp.c_light)
    assert s0.dy == pytest.approx(drive_half / 0.8)
    # eta * y' = (B J0 / 2c) cos(Omega t) identically
    for t in (0.0, 0.7, 2.2, 5.9):
        s = sol(t)
        assert 0.8 * s.dy == pytest.approx(drive_half * math.cos(fp.Omega * t), abs=1e-15)
        expected = 0.3 + drive_half * math.sin(fp.Omega * t) / (0.8 * fp.Omega)
        assert s.y == pytest.approx(expected, rel=1e-14)
    with pytest.raises(InvalidParameterError):
        symmetric_case_solution(make_fp(eta=0.0), 0.0)


def test_full_ode_coefficients():
    fp = make_fp(m=2.0, eta=0.6, k0=5.0, k=0.3, omega=0.7, B=1.2, J0=0.8, c_light=2.0)
    ode = full_ode(fp)
    t = 1.7
    pv, qv, fv = ode.coefficients_at(t)
    assert pv == pytest.approx(0.3)
    assert qv == pytest.approx((5.0 + 0.3 * math.cos(0.7 * t)) / 2.0)
    assert fv == pytest.approx(1.2 * 0.8 / (2.0 * 2.0) * math.cos(fp.Omega * t))


def test_simulate_full_converges_to_steady_state():
    fp = make_fp(m=1.0, eta=1.0, k0=9.0, k=0.0, omega=1.0, Omega=2.0)
    resp = particular_k0(fp)
    t_tail = np.linspace(35.0, 38.0, 61)  # far past the decay time m/eta
    series = simulate_full(fp, (0.0, 38.0), 1e-10, t_eval=t_tail)
    worst = max(abs(series.y[i] - resp.evaluate(t).y)
                for i, t in enumerate(t_tail))
    assert worst < 1e-6 * resp.amplitude


def test_simulate_full_invariant_orbit():
    fp = make_fp(eta=0.0, k0=9.0, k=0.0, Omega=2.0)
    resp = particular_k0(fp)
    s0 = resp.evaluate(0.0)
    t_eval = np.linspace(0.0, 20.0, 201)
    series = simulate_full(fp, (0.0, 20.0), 1e-11, t_eval=t_eval,
                           y0=s0.y, dy0=s0.dy)
    worst = max(abs(series.y[i] - resp.evaluate(t).y)
                for i, t in enumerate(t_eval))
    assert worst < 1e-8 * max(resp.amplitude, 1e-300)


def test_field_from_motion_relations():
    fp = make_fp()
    t_eval = np.linspace(0.0, 12.0, 257)
    series = simulate_full(fp, (0.0, 12.0), 1e-10, t_eval=t_eval)
    field = field_from_motion(fp, series)
    scale = -fp.B / fp.c_light
    assert np.allclose(field.y, scale * series.dy, rtol=0, atol=0)
    assert np.allclose(field.dy, scale * series.d2y, rtol=0, atol=0)
    # third derivative follows the differentiated equation of motion
    mid = np.gradient(np.asarray(field.dy).real, t_eval)
    interior = slice(8, -8)
    assert np.allclose(mid[interior], np.asarray(field.d2y).real[interior],
                       rtol=2e-3, atol=2e-3 * np.max(np.abs(field.d2y)))


def test_modulation_analysis_synthetic_depth():
    base = DampedParams(m=1.0, eta=2.0, k0=2500.0, k=25.0, omega=0.5)
    fp = FluxParams(base=base, B=1.0, J0=1.0, Omega=50.0, c_light=1.0)
    model = induced_field_model(fp)
    series = synthetic_series(model, 50.0, 0.5)
    result = modulation_analysis(series, 50.0, 0.5)
    assert result.modulation_depth == pytest.approx(model.epsilon, abs=1e-4)
    assert result.carrier_amplitude == pytest.approx(model.prefactor, rel=1e-3)
    assert result.modulation_phase == pytest.approx(model.phi, abs=1e-3)


def test_modulation_analysis_unmodulated():
    grid = np.arange(0.0, 45.0, 2.0 * math.pi / (64 * 7.0))
    zeros = np.zeros_like(grid, dtype=complex)
    pure = TimeSeries(grid=grid, y=(0.7 * np.sin(7.0 * grid)).astype(complex),
                      dy=zeros, d2y=zeros.copy())
    result = modulation_analysis(pure, 7.0, 0.5)
    assert result.modulation_depth <= 1e-6
    assert result.carrier_amplitude == pytest.approx(0.7, rel=1e-6)


def test_modulation_analysis_span_guards():
    base = DampedParams(m=1.0, eta=2.0, k0=2500.0, k=25.0, omega=0.5)
    fp = FluxParams(base=base, B=1.0, J0=1.0, Omega=50.0, c_light=1.0)
    model = induced_field_model(fp)
    short = synthetic_series(model, 50.0, 0.5, periods=2.0)
    with pytest.raises(SpanError):
        modulation_analysis(short, 50.0, 0.5)
    ok = synthetic_series(model, 50.0, 0.5)
    with pytest.raises(InvalidParameterError):
        modulation_analysis(ok, 50.0, -0.5)
    # a slow carrier needs a longer averaging window than the series holds
    grid = np.arange(0.0, 45.0, 0.5)
    zeros = np.zeros_like(grid, dtype=complex)
    slow = TimeSeries(grid=grid, y=np.sin(0.2 * grid).astype(complex),
                      dy=zeros, d2y=zeros.copy())
    with pytest.raises(SpanError):
        modulation_analysis(slow, 0.2, 0.5)


def test_modulation_analysis_requires_uniform_grid():
    grid = np.sort(np.concatenate([np.arange(0.0, 45.0, 0.01), [44.9971]]))
    zeros = np.zeros_like(grid, dtype=complex)
    series = TimeSeries(grid=grid, y=np.sin(7.0 * grid).astype(complex),
                        dy=zeros, d2y=zeros.copy())
    with pytest.raises(InvalidParameterError):
        modulation_analysis(series, 7.0, 0.5)


def test_identify_frequencies_synthetic():
    base = DampedParams(m=1.0, eta=2.0, k0=2500.0, k=25.0, omega=0.5)
    fp = FluxParams(base=base, B=1.0, J0=1.0, Omega=50.0, c_light=1.0)
    model = induced_field_model(fp)
    series = synthetic_series(model, 50.0, 0.5, periods=6.0)
    carrier, modulation = identify_frequencies(series)
    bin_width = 2.0 * math.pi / (series.grid[-1] - series.grid[0])
    assert abs(carrier - 50.0) <= bin_width
    assert abs(modulation - 0.5) <= bin_width
