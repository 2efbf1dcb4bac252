import math

import pytest
from hypothesis import given, strategies as st

from fermicas.model import (BoundaryKind, EmptyFieldList, EvalResult, FieldSpec,
                            NegativeTemperature, NonPositiveSeparation, Scenario,
                            Tolerances, UnsupportedDimension, validate_scenario)


def test_valid_scenario_roundtrips():
    s = Scenario(fields=(FieldSpec(mass=0.0, mu=1.0),), boundary=BoundaryKind.PBC,
                 dim=3, lz=1.0, temperature=0.0)
    assert validate_scenario(s) is s


def test_zero_separation_rejected():
    with pytest.raises(NonPositiveSeparation):
        Scenario(fields=(FieldSpec(0.0, 1.0),), boundary=BoundaryKind.PBC,
                 dim=3, lz=0.0)


def test_dimension_zero_rejected():
    with pytest.raises(UnsupportedDimension):
        Scenario(fields=(FieldSpec(0.0, 1.0),), boundary=BoundaryKind.PBC,
                 dim=0, lz=1.0)


def test_empty_field_list_rejected():
    with pytest.raises(EmptyFieldList):
        Scenario(fields=(), boundary=BoundaryKind.PBC, dim=3, lz=1.0)


def test_negative_temperature_rejected():
    with pytest.raises(NegativeTemperature):
        Scenario(fields=(FieldSpec(0.0, 1.0),), boundary=BoundaryKind.PBC,
                 dim=3, lz=1.0, temperature=-0.1)


@pytest.mark.parametrize("kwargs", [
    {"mass": -1.0, "mu": 0.0},
    {"mass": 0.0, "mu": -0.5},
    {"mass": 0.0, "mu": 0.0, "degeneracy": 0.0},
    {"mass": math.nan, "mu": 0.0},
])
def test_bad_field_specs_rejected(kwargs):
    with pytest.raises(ValueError):
        FieldSpec(**kwargs)


def test_boundary_parse():
    assert BoundaryKind.parse("pbc") is BoundaryKind.PBC
    assert BoundaryKind.parse("MIT") is BoundaryKind.MIT
    assert BoundaryKind.parse("dirichlet") is BoundaryKind.DIRICHLET_TYPE
    with pytest.raises(ValueError):
        BoundaryKind.parse("neumann")


def test_tolerances_positive():
    with pytest.raises(ValueError):
        Tolerances(rel_tol=0.0)
    with pytest.raises(ValueError):
        Tolerances(max_matsubara_terms=0)


def test_eval_result_error_nonnegative():
    with pytest.raises(ValueError):
        EvalResult(value=1.0, abs_error_estimate=-1.0, evaluations=1, converged=True)


@given(mass=st.floats(-1, 5), mu=st.floats(-1, 5), deg=st.floats(-1, 4),
       lz=st.floats(-1, 10), temp=st.floats(-1, 5),
       dim=st.integers(min_value=-1, max_value=6))
def test_accept_reject_matches_invariants(mass, mu, deg, lz, temp, dim):
    """Construction succeeds exactly when every invariant predicate holds."""
    should_pass = (mass >= 0 and mu >= 0 and deg > 0 and lz > 0
                   and temp >= 0 and dim >= 1)
    try:
        s = Scenario(fields=(FieldSpec(mass, mu, deg),),
                     boundary=BoundaryKind.APBC, dim=dim, lz=lz, temperature=temp)
        validate_scenario(s)
        ok = True
    except ValueError:
        ok = False
    assert ok == should_pass


def test_field_at_mu():
    f = FieldSpec(0.3, 1.0, 2.0)
    g = f.at_mu(0.0)
    assert g.mu == 0.0 and g.mass == 0.3 and g.degeneracy == 2.0
    assert f.mu == 1.0
