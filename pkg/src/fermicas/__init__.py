"""Casimir effect for Dirac fields at finite chemical potential.

Generalized Lifshitz formulas for the Casimir energy, pressure and force
of Dirac fields at finite density: periodic/antiperiodic/MIT/Dirichlet-type
boundary kernels, zero and finite temperature (Matsubara sums), arbitrary
spatial dimension, Dirac/Fermi-sea separation and multi-field beats --
validated against two independent mode-sum oracles.

Natural units throughout: hbar = c = 1.
"""

from .model import (BoundaryKind, EmptyFieldList, EvalResult, FieldSpec,
                    NegativeTemperature, NonPositiveSeparation, Scenario,
                    Tolerances, UnsupportedDimension, validate_scenario)
from .dispersion import (KERNEL_TRIPLES, KernelSingular, KernelTriple,
                         conjugate_symmetry_check, k_tilde, kernel_log)
from .quadrature import (NonFiniteIntegrand, QuadratureMethod, QuadratureSpec,
                         integrate_2d_semi_infinite, integrate_semi_infinite)
from .lifshitz import (MatsubaraNotConverged, QuadratureFailure, RadialReduction,
                       casimir_energy, casimir_energy_T, casimir_energy_T0,
                       casimir_pressure, casimir_pressure_T, casimir_pressure_T0,
                       radial_reduction)
from .observables import (CoefficientResult, InsufficientSamples, JumpScan,
                          NoFermiSea, NonPositiveArea, NoOscillationDetected,
                          PeriodMeasurement, SeaSplit, casimir_coefficient,
                          casimir_force, detect_pressure_jump,
                          measure_envelope_exponent, measure_period,
                          multi_field_energy, numeric_pressure,
                          predicted_beat_period, predicted_period, sea_split)
from .oracles import (ContinuumFidelityWarning, DoublerWarning, FermiSumSpec,
                      LatticeSpec, fermi_sea_oracle, lattice_oracle,
                      occupied_mode_count)
from .sweep import (QUANTITIES, OutputRecord, PointFailure, SweepResult,
                    SweepSpec, emit, parse_csv, run_sweep)

__version__ = "0.1.0"

__all__ = [
    "BoundaryKind", "FieldSpec", "Scenario", "Tolerances", "EvalResult",
    "validate_scenario",
    "NonPositiveSeparation", "NegativeTemperature", "EmptyFieldList",
    "UnsupportedDimension",
    "KernelTriple", "KERNEL_TRIPLES", "KernelSingular",
    "k_tilde", "kernel_log", "conjugate_symmetry_check",
    "QuadratureSpec", "QuadratureMethod", "NonFiniteIntegrand",
    "integrate_semi_infinite", "integrate_2d_semi_infinite",
    "RadialReduction", "radial_reduction",
    "casimir_energy", "casimir_energy_T0", "casimir_energy_T",
    "casimir_pressure", "casimir_pressure_T0", "casimir_pressure_T",
    "QuadratureFailure", "MatsubaraNotConverged",
    "CoefficientResult", "SeaSplit", "PeriodMeasurement", "JumpScan",
    "casimir_coefficient", "casimir_force", "sea_split", "multi_field_energy",
    "predicted_period", "predicted_beat_period", "measure_period",
    "measure_envelope_exponent", "numeric_pressure", "detect_pressure_jump",
    "NoFermiSea", "NonPositiveArea", "InsufficientSamples", "NoOscillationDetected",
    "FermiSumSpec", "LatticeSpec", "fermi_sea_oracle", "lattice_oracle",
    "occupied_mode_count", "DoublerWarning", "ContinuumFidelityWarning",
    "SweepSpec", "SweepResult", "OutputRecord", "PointFailure", "QUANTITIES",
    "run_sweep", "emit", "parse_csv",
]
