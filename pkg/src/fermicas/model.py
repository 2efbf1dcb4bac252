"""Domain types shared by all evaluators.

Conventions: natural units (hbar = c = 1), so masses, chemical potentials
and temperatures are energies and lengths are inverse energies.  Energies
returned by the evaluators are per unit transverse (d-1)-volume.

All types are immutable values and safe to share between threads or
pickle into worker processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum


class NonPositiveSeparation(ValueError):
    """Plate separation must be strictly positive."""


class NegativeTemperature(ValueError):
    """Temperature must be non-negative."""


class EmptyFieldList(ValueError):
    """A scenario needs at least one field."""


class UnsupportedDimension(ValueError):
    """Spatial dimension must be a positive integer."""


class BoundaryKind(Enum):
    """Mode-discretization kernel selector for the confined direction."""

    PBC = "pbc"
    APBC = "apbc"
    MIT = "mit"
    DIRICHLET_TYPE = "dirichlet"

    @classmethod
    def parse(cls, name: str) -> "BoundaryKind":
        key = name.strip().lower()
        for kind in cls:
            if kind.value == key or kind.name.lower() == key:
                return kind
        raise ValueError(f"unknown boundary condition {name!r}; "
                         f"expected one of {[k.value for k in cls]}")


@dataclass(frozen=True)
class FieldSpec:
    """One Dirac species: mass, chemical potential and degeneracy multiplier.

    ``degeneracy`` multiplies the baseline prefactor that already accounts
    for spin and particle/antiparticle doubling; use it for extra flavor or
    color factors.
    """

    mass: float
    mu: float
    degeneracy: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.mass) and self.mass >= 0.0):
            raise ValueError(f"mass must be finite and >= 0, got {self.mass}")
        if not (math.isfinite(self.mu) and self.mu >= 0.0):
            raise ValueError(f"mu must be finite and >= 0, got {self.mu}")
        if not (math.isfinite(self.degeneracy) and self.degeneracy > 0.0):
            raise ValueError(f"degeneracy must be finite and > 0, got {self.degeneracy}")

    def at_mu(self, mu: float) -> "FieldSpec":
        """Same species at a different chemical potential."""
        return replace(self, mu=mu)


@dataclass(frozen=True)
class Scenario:
    """Full evaluation context for one Casimir computation."""

    fields: tuple[FieldSpec, ...]
    boundary: BoundaryKind
    dim: int
    lz: float
    temperature: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "fields", tuple(self.fields))
        _check_scenario(self)


def _check_scenario(s: Scenario) -> None:
    if len(s.fields) == 0:
        raise EmptyFieldList("scenario requires at least one FieldSpec")
    if not isinstance(s.dim, int) or isinstance(s.dim, bool) or s.dim < 1:
        raise UnsupportedDimension(f"spatial dimension must be an integer >= 1, got {s.dim}")
    if not (math.isfinite(s.lz) and s.lz > 0.0):
        raise NonPositiveSeparation(f"separation must be finite and > 0, got {s.lz}")
    if not (math.isfinite(s.temperature) and s.temperature >= 0.0):
        raise NegativeTemperature(f"temperature must be finite and >= 0, got {s.temperature}")


def validate_scenario(s: Scenario) -> Scenario:
    """Return ``s`` unchanged if every invariant holds, else raise.

    Raises NonPositiveSeparation, NegativeTemperature, EmptyFieldList or
    UnsupportedDimension; field-level violations raise ValueError from the
    FieldSpec constructor.
    """
    _check_scenario(s)
    for f in s.fields:
        FieldSpec(f.mass, f.mu, f.degeneracy)
    return s


@dataclass(frozen=True)
class Tolerances:
    """Accuracy knobs shared by the evaluators.

    ``abs_tol`` is interpreted in the units set by mu or 1/L_z.  The
    Matsubara sum stops once a geometric tail bound drops below
    ``matsubara_tail_tol`` relative to the partial sum, and fails after
    ``max_matsubara_terms`` paired frequencies.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_matsubara_terms: int = 10 ** 6
    matsubara_tail_tol: float = 1e-12

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "matsubara_tail_tol"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be finite and > 0, got {v}")
        if self.max_matsubara_terms < 1:
            raise ValueError("max_matsubara_terms must be >= 1")


@dataclass(frozen=True)
class EvalResult:
    """A value with an error estimate and convergence diagnostics."""

    value: float
    abs_error_estimate: float
    evaluations: int
    converged: bool

    def __post_init__(self):
        if self.abs_error_estimate < 0.0:
            raise ValueError("abs_error_estimate must be >= 0")
