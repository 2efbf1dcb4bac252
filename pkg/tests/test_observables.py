import math

import numpy as np
import pytest

from fermicas.model import BoundaryKind, FieldSpec, Tolerances
from fermicas.observables import (InsufficientSamples, NoFermiSea,
                                  NonPositiveArea, NoOscillationDetected,
                                  casimir_coefficient, casimir_force,
                                  measure_envelope_exponent, measure_period,
                                  multi_field_energy, numeric_pressure,
                                  predicted_beat_period, predicted_period,
                                  sea_split)
from fermicas.lifshitz import casimir_energy_T0, casimir_pressure_T0

FAST = Tolerances(rel_tol=1e-7, abs_tol=1e-11)

E3 = 4.0 * math.pi ** 2 / 90.0
P3 = 2.0 * math.pi ** 2 / 15.0


def test_coefficient_constancy_massless_vacuum():
    f = FieldSpec(0.0, 0.0)
    for lz in (0.5, 2.0, 8.0):
        c = casimir_coefficient(f, BoundaryKind.PBC, 3, lz, 0.0, FAST)
        assert c.c_energy == pytest.approx(E3, rel=1e-6)
        assert c.c_pressure == pytest.approx(P3, rel=1e-6)
        assert c.dim == 3 and c.lz == lz


def test_force_is_area_times_pressure():
    f = FieldSpec(0.0, 0.0)
    p = casimir_pressure_T0(f, BoundaryKind.PBC, 3, 1.0, FAST).value
    assert casimir_force(f, BoundaryKind.PBC, 3, 1.0, 1.0, 0.0, FAST) == pytest.approx(p)
    assert casimir_force(f, BoundaryKind.PBC, 3, 1.0, 2.0, 0.0, FAST) == pytest.approx(2 * p)
    with pytest.raises(NonPositiveArea):
        casimir_force(f, BoundaryKind.PBC, 3, 1.0, 0.0)


def test_sea_split_reconstructs_total_exactly():
    f = FieldSpec(0.0, 1.0)
    sp = sea_split(f, BoundaryKind.PBC, 3, 6.0, 0.0, FAST)
    assert sp.total == sp.dirac + sp.fermi
    tot = casimir_energy_T0(f, BoundaryKind.PBC, 3, 6.0, FAST)
    assert sp.total == pytest.approx(tot.value, rel=1e-12)


def test_sea_split_zero_mu_is_exactly_zero():
    f = FieldSpec(0.4, 0.0)
    sp = sea_split(f, BoundaryKind.APBC, 2, 3.0, 0.0, FAST)
    assert sp.fermi == 0.0


def test_sea_split_below_threshold_vanishes():
    f = FieldSpec(1.0, 0.6)
    tol = Tolerances(rel_tol=1e-12, abs_tol=1e-13)
    sp = sea_split(f, BoundaryKind.PBC, 3, 2.0, 0.0, tol)
    assert abs(sp.fermi) <= 2e-12


def test_multi_field_linearity():
    f = FieldSpec(0.0, 1.0)
    one = casimir_energy_T0(f, BoundaryKind.PBC, 3, 5.0, FAST).value
    two = multi_field_energy([f, f], BoundaryKind.PBC, 3, 5.0, 0.0, FAST)
    assert two == 2.0 * one
    alone = multi_field_energy([f], BoundaryKind.PBC, 3, 5.0, 0.0, FAST)
    assert alone == one


def test_predicted_periods():
    assert predicted_period(FieldSpec(0.0, 1.0), BoundaryKind.PBC) == pytest.approx(2 * math.pi)
    assert predicted_period(FieldSpec(3.0, 5.0), BoundaryKind.PBC) == pytest.approx(math.pi / 2)
    assert predicted_period(FieldSpec(0.0, 1.0), BoundaryKind.APBC) == pytest.approx(2 * math.pi)
    assert predicted_period(FieldSpec(0.0, 1.0), BoundaryKind.MIT) == pytest.approx(math.pi)
    assert predicted_period(FieldSpec(0.0, 1.0),
                            BoundaryKind.DIRICHLET_TYPE) == pytest.approx(math.pi)
    with pytest.raises(NoFermiSea):
        predicted_period(FieldSpec(1.0, 0.5), BoundaryKind.PBC)


def test_predicted_beat_period():
    beat = predicted_beat_period(FieldSpec(0.0, 1.0), FieldSpec(0.0, 0.8))
    assert beat == pytest.approx(2 * math.pi / 0.2)
    assert 1.0 * beat == pytest.approx(31.4159, rel=1e-4)
    assert predicted_beat_period(FieldSpec(0.0, 1.0), FieldSpec(0.0, 1.0)) is None
    # massive rule: effective wavenumber sqrt(mu^2 - M^2)
    k1 = math.sqrt(1.0 - 0.35 ** 2)
    beat_m = predicted_beat_period(FieldSpec(0.35, 1.0), FieldSpec(0.0, 0.8))
    assert beat_m == pytest.approx(2 * math.pi / (k1 - 0.8))
    with pytest.raises(NoFermiSea):
        predicted_beat_period(FieldSpec(1.0, 0.2), FieldSpec(0.0, 0.8))


def test_measure_period_synthetic_sine():
    L = np.linspace(1.0, 26.0, 400)
    m = measure_period(L, np.sin(2 * math.pi * L / 5.0))
    assert m.period == pytest.approx(5.0, rel=1e-3)
    assert m.std_error < 0.05
    assert len(m.peak_positions) >= 4


def test_measure_period_monotone_raises():
    L = np.linspace(1.0, 10.0, 100)
    with pytest.raises(NoOscillationDetected):
        measure_period(L, L ** 2)


def test_measure_period_flat_with_ripple_raises():
    L = np.linspace(1.0, 10.0, 200)
    vals = np.full_like(L, 0.4386) + 1e-12 * np.sin(17 * L)
    with pytest.raises(NoOscillationDetected):
        measure_period(L, vals)


def test_measure_period_too_short_raises():
    with pytest.raises(InsufficientSamples):
        measure_period([1, 2, 3], [1, 2, 1])


def test_measure_period_on_coefficient_sweep():
    """C^[1](L) for mu = 1 massless PBC oscillates with period 2*pi."""
    f = FieldSpec(0.0, 1.0)
    L = np.linspace(2.0, 27.0, 420)
    vals = np.array([casimir_energy_T0(f, BoundaryKind.PBC, 1, float(x), FAST).value * x
                     for x in L])
    m = measure_period(L, vals)
    assert m.period == pytest.approx(2 * math.pi, rel=1e-2)


def test_measure_envelope_exponent_synthetic():
    L = np.linspace(3.0, 40.0, 900)
    ex = measure_envelope_exponent(L, np.cos(L) / L ** 2)
    assert ex == pytest.approx(2.0, abs=0.05)


def test_measure_envelope_exponent_needs_extrema():
    L = np.linspace(1.0, 2.0, 50)
    with pytest.raises(InsufficientSamples):
        measure_envelope_exponent(L, 1.0 / L)  # monotone: no envelope extrema


def test_numeric_pressure_matches_closed_form():
    f = FieldSpec(0.0, 0.0)
    pn = numeric_pressure(f, BoundaryKind.PBC, 3, 1.0, 0.0, FAST)
    assert pn == pytest.approx(P3, rel=1e-4)


def test_numeric_pressure_sees_d1_kink():
    """Straddling the d=1 kink the central difference disagrees with the
    closed-form pressure: that is the discontinuity locator."""
    f = FieldSpec(0.0, 1.0)
    lz = 2.0 * math.pi  # kink of the massless PBC d=1 pressure
    pn = numeric_pressure(f, BoundaryKind.PBC, 1, lz, 0.0, FAST, step=1e-3)
    left = casimir_pressure_T0(f, BoundaryKind.PBC, 1, lz * (1 - 1e-3), FAST).value
    right = casimir_pressure_T0(f, BoundaryKind.PBC, 1, lz * (1 + 1e-3), FAST).value
    assert abs(right - left) > 0.5  # jump ~ 4 mu / L
    assert abs(pn - left) > 0.05 and abs(pn - right) > 0.05
