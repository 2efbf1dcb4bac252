import math
import warnings

import numpy as np
import pytest

from fermicas.model import BoundaryKind, FieldSpec, Tolerances
from fermicas.lifshitz import casimir_energy_T0
from fermicas.observables import sea_split
from fermicas.oracles import (ContinuumFidelityWarning, DoublerWarning,
                              FermiSumSpec, LatticeSpec, fermi_sea_oracle,
                              lattice_oracle, occupied_mode_count)

TOL = Tolerances(rel_tol=1e-9, abs_tol=1e-13)


def wrap(x, period=2.0 * math.pi):
    return math.fmod(x, period) + (period if math.fmod(x, period) < 0 else 0.0)


def exact_fermi_d1_pbc(mu, lz):
    x = wrap(lz * mu)
    return (x * x - 2.0 * math.pi * x) / (math.pi * lz)


def test_empty_fermi_sea_returns_zero():
    spec = FermiSumSpec(FieldSpec(1.0, 0.5), BoundaryKind.PBC, 3, 4.0)
    assert fermi_sea_oracle(spec) == 0.0
    spec = FermiSumSpec(FieldSpec(1.0, 1.0), BoundaryKind.MIT, 1, 4.0)
    assert fermi_sea_oracle(spec) == 0.0


def test_fermi_oracle_d1_closed_form():
    """The d=1 massless PBC mode sum telescopes to the exact sawtooth form."""
    for mu, lz in ((1.0, 5.0), (1.3, 11.7), (0.7, 3.1)):
        spec = FermiSumSpec(FieldSpec(0.0, mu), BoundaryKind.PBC, 1, lz)
        assert fermi_sea_oracle(spec) == pytest.approx(exact_fermi_d1_pbc(mu, lz),
                                                       rel=1e-12)


def test_fermi_oracle_apbc_d1_no_modes():
    """Below the first APBC level only the bulk term contributes."""
    mu, lz = 2.0, 1.0  # first mode at pi/L = pi > mu
    spec = FermiSumSpec(FieldSpec(0.0, mu), BoundaryKind.APBC, 1, lz)
    assert fermi_sea_oracle(spec) == pytest.approx(4.0 / math.pi, rel=1e-12)


def test_fermi_oracle_matches_lifshitz_split():
    cases = [
        (FieldSpec(0.0, 1.0), BoundaryKind.PBC, 3, 5.0),
        (FieldSpec(0.5, 1.0), BoundaryKind.PBC, 3, 10.0),
        (FieldSpec(0.0, 1.0), BoundaryKind.MIT, 3, 7.3),
        (FieldSpec(0.0, 1.0), BoundaryKind.PBC, 1, 12.0),
        (FieldSpec(0.0, 1.0), BoundaryKind.MIT, 1, 9.0),
        (FieldSpec(0.3, 1.1), BoundaryKind.APBC, 2, 6.0),
        (FieldSpec(0.0, 1.0), BoundaryKind.DIRICHLET_TYPE, 3, 6.5),
    ]
    for field, bc, dim, lz in cases:
        split = sea_split(field, bc, dim, lz, 0.0, TOL)
        oracle = fermi_sea_oracle(FermiSumSpec(field, bc, dim, lz))
        assert split.fermi == pytest.approx(oracle, rel=1e-6), (field, bc, dim, lz)


def test_mode_count_matches_floor_formula():
    f = FieldSpec(0.0, 1.0)
    for lz in (3.0, 10.0, 25.0):
        spec = FermiSumSpec(f, BoundaryKind.PBC, 3, lz)
        assert occupied_mode_count(spec) == math.floor(lz / (2 * math.pi)) + 1
    # massive field: Fermi momentum sqrt(mu^2 - M^2)
    f = FieldSpec(0.6, 1.0)
    kf = math.sqrt(1.0 - 0.36)
    spec = FermiSumSpec(f, BoundaryKind.PBC, 3, 20.0)
    assert occupied_mode_count(spec) == math.floor(20.0 * kf / (2 * math.pi)) + 1


def test_fermi_oracle_d1_jump_at_new_mode():
    """A new mode enters at L = 2pi/mu: the value jumps across it."""
    f = FieldSpec(0.0, 1.0)
    below = fermi_sea_oracle(FermiSumSpec(f, BoundaryKind.PBC, 1, 2 * math.pi - 1e-6))
    above = fermi_sea_oracle(FermiSumSpec(f, BoundaryKind.PBC, 1, 2 * math.pi + 1e-6))
    assert occupied_mode_count(FermiSumSpec(f, BoundaryKind.PBC, 1, 2 * math.pi - 1e-6)) == 1
    assert occupied_mode_count(FermiSumSpec(f, BoundaryKind.PBC, 1, 2 * math.pi + 1e-6)) == 2
    # the energy itself is continuous; its slope flips sign across the
    # mode entry (+2mu/L -> -2mu/L), which is the pressure discontinuity
    d = 1e-6
    s_below = (fermi_sea_oracle(FermiSumSpec(f, BoundaryKind.PBC, 1, 2 * math.pi - d))
               - fermi_sea_oracle(FermiSumSpec(f, BoundaryKind.PBC, 1, 2 * math.pi - 2 * d))) / d
    s_above = (fermi_sea_oracle(FermiSumSpec(f, BoundaryKind.PBC, 1, 2 * math.pi + 2 * d))
               - fermi_sea_oracle(FermiSumSpec(f, BoundaryKind.PBC, 1, 2 * math.pi + d))) / d
    assert s_below > 0.0 > s_above
    assert abs(below) < 1e-5 and abs(above) < 1e-5  # energy continuous


def test_lattice_vacuum_continuum_limit():
    f = FieldSpec(0.0, 0.0)
    target = 4.0 * math.pi ** 2 / 90.0
    devs = []
    for n in (20, 40, 80):
        lat = lattice_oracle(LatticeSpec(f, n, 1.0 / n))
        devs.append(abs(lat - target))
    assert devs[2] < devs[1] < devs[0]
    assert devs[2] / target < 5e-3


def test_lattice_matches_lifshitz_at_fine_spacing():
    f = FieldSpec(0.0, 1.0)
    lz = 13.92  # oscillation extremum: amplitude comparison is well-conditioned
    n = int(round(lz / 0.08))
    with warnings.catch_warnings():
        warnings.simplefilter("error")  # mu*a = 0.08 must not warn
        lat = lattice_oracle(LatticeSpec(f, n, 0.08))
    lif = casimir_energy_T0(f, BoundaryKind.PBC, 3, n * 0.08, TOL)
    assert lat == pytest.approx(lif.value, rel=2e-2)


def test_lattice_halving_decreases_deviation():
    f = FieldSpec(0.0, 1.0)
    lz = 12.8
    lif = casimir_energy_T0(f, BoundaryKind.PBC, 3, lz, TOL).value
    devs = []
    for a in (0.16, 0.08):
        n = int(round(lz / a))
        devs.append(abs(lattice_oracle(LatticeSpec(f, n, a)) - lif))
    assert devs[1] < devs[0]


def test_lattice_gap_above_mu_identical_to_zero_mu():
    """mu below the spectral gap: max(E, mu) == E, bit-identical to mu = 0."""
    a = lattice_oracle(LatticeSpec(FieldSpec(5.0, 0.3), 24, 0.05))
    b = lattice_oracle(LatticeSpec(FieldSpec(5.0, 0.0), 24, 0.05))
    assert a == b


def test_lattice_d1_matches_lifshitz():
    f = FieldSpec(0.0, 1.0)
    lat = lattice_oracle(LatticeSpec(f, 200, 0.04, dim=1))
    lif = casimir_energy_T0(f, BoundaryKind.PBC, 1, 8.0, TOL)
    assert lat == pytest.approx(lif.value, rel=2e-2)


def test_doubler_warning():
    with pytest.warns(DoublerWarning):
        lattice_oracle(LatticeSpec(FieldSpec(0.0, 0.0), 10, 0.1, wilson_r=0.0))


def test_fidelity_warning():
    with pytest.warns(ContinuumFidelityWarning):
        lattice_oracle(LatticeSpec(FieldSpec(0.0, 2.0), 10, 0.2))


def test_lattice_spec_validation():
    with pytest.raises(ValueError):
        LatticeSpec(FieldSpec(0.0, 1.0), 1, 0.1)
    with pytest.raises(ValueError):
        LatticeSpec(FieldSpec(0.0, 1.0), 10, -0.1)
    with pytest.raises(ValueError):
        LatticeSpec(FieldSpec(0.0, 1.0), 10, 0.1, wilson_r=1.5)
    spec = LatticeSpec(FieldSpec(0.0, 1.0), 10, 0.1)
    assert spec.lz == pytest.approx(1.0)
