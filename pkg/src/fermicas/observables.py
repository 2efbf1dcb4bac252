"""Derived quantities and series analyses on top of the Lifshitz evaluators.

Covers the dimensionless coefficients E*L^d and P*L^(d+1), the force on a
finite plate, the Dirac/Fermi-sea split, multi-field superposition,
predicted and measured oscillation/beat periods, the envelope scaling
fit, a numeric-derivative pressure cross-check and a pressure-jump
locator for the d = 1 discontinuity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.signal import find_peaks

from .dispersion import KERNEL_TRIPLES
from .model import BoundaryKind, EvalResult, FieldSpec, Tolerances
from .lifshitz import casimir_energy, casimir_pressure


class NoFermiSea(ValueError):
    """mu <= M: there is no Fermi sea and no oscillation period."""


class NonPositiveArea(ValueError):
    """The transverse area of a plate must be positive."""


class InsufficientSamples(ValueError):
    """The sampled series is too short for the requested analysis."""


class NoOscillationDetected(ValueError):
    """Fewer than two interior maxima were found in the series."""


@dataclass(frozen=True)
class CoefficientResult:
    """Casimir coefficients c_energy = E*L^d and c_pressure = P*L^(d+1)."""

    c_energy: float
    c_pressure: float
    lz: float
    dim: int
    c_energy_err: float = 0.0
    c_pressure_err: float = 0.0


@dataclass(frozen=True)
class SeaSplit:
    """Dirac-sea (mu = 0) and Fermi-sea parts of the Casimir energy.

    ``total`` is reconstructed as dirac + fermi, so the decomposition is
    exact by construction.
    """

    dirac: float
    fermi: float
    dirac_err: float = 0.0
    fermi_err: float = 0.0

    @property
    def total(self) -> float:
        return self.dirac + self.fermi


@dataclass(frozen=True)
class PeriodMeasurement:
    """Mean spacing of successive interior maxima, with standard error."""

    period: float
    std_error: float
    peak_positions: tuple[float, ...]


def casimir_coefficient(field: FieldSpec, bc: BoundaryKind, dim: int, lz: float,
                        temperature: float = 0.0,
                        tol: Tolerances = Tolerances()) -> CoefficientResult:
    """E*L^d and P*L^(d+1); both are L-independent for massless mu = 0 fields."""
    e = casimir_energy(field, bc, dim, lz, temperature, tol)
    p = casimir_pressure(field, bc, dim, lz, temperature, tol)
    return CoefficientResult(
        c_energy=e.value * lz ** dim,
        c_pressure=p.value * lz ** (dim + 1),
        lz=lz, dim=dim,
        c_energy_err=e.abs_error_estimate * lz ** dim,
        c_pressure_err=p.abs_error_estimate * lz ** (dim + 1),
    )


def casimir_force(field: FieldSpec, bc: BoundaryKind, dim: int, lz: float,
                  transverse_area: float, temperature: float = 0.0,
                  tol: Tolerances = Tolerances()) -> float:
    """Force on plates of the given transverse (d-1)-volume: area * pressure."""
    if not (math.isfinite(transverse_area) and transverse_area > 0.0):
        raise NonPositiveArea(f"transverse area must be > 0, got {transverse_area}")
    p = casimir_pressure(field, bc, dim, lz, temperature, tol)
    return transverse_area * p.value


def sea_split(field: FieldSpec, bc: BoundaryKind, dim: int, lz: float,
              temperature: float = 0.0, tol: Tolerances = Tolerances()) -> SeaSplit:
    """Split E(mu) into the mu = 0 Dirac-sea part and the Fermi-sea remainder."""
    total = casimir_energy(field, bc, dim, lz, temperature, tol)
    dirac = casimir_energy(field.at_mu(0.0), bc, dim, lz, temperature, tol)
    fermi = total.value - dirac.value
    comb = math.hypot(total.abs_error_estimate, dirac.abs_error_estimate)
    return SeaSplit(dirac=dirac.value, fermi=fermi,
                    dirac_err=dirac.abs_error_estimate, fermi_err=comb)


def multi_field_energy(fields: Sequence[FieldSpec], bc: BoundaryKind, dim: int,
                       lz: float, temperature: float = 0.0,
                       tol: Tolerances = Tolerances()) -> float:
    """Total Casimir energy of independent species: the plain sum."""
    if len(fields) == 0:
        raise ValueError("need at least one field")
    return sum(casimir_energy(f, bc, dim, lz, temperature, tol).value for f in fields)


def predicted_period(field: FieldSpec, bc: BoundaryKind) -> float:
    """Oscillation period in L_z: 2*pi/sqrt(mu^2 - M^2), halved for stretch-2 kernels."""
    if field.mu <= field.mass:
        raise NoFermiSea(f"mu={field.mu} <= mass={field.mass}: no oscillation")
    base = 2.0 * math.pi / math.sqrt(field.mu ** 2 - field.mass ** 2)
    return base / KERNEL_TRIPLES[bc].stretch


def predicted_beat_period(f1: FieldSpec, f2: FieldSpec,
                          bc: BoundaryKind = BoundaryKind.PBC) -> Optional[float]:
    """Beat period of two superposed oscillations, or None for equal periods.

    1/L_beat = |1/L_osc(f1) - 1/L_osc(f2)|, with each single-field period
    from predicted_period (massive fields enter through sqrt(mu^2 - M^2)).
    """
    inv = abs(1.0 / predicted_period(f1, bc) - 1.0 / predicted_period(f2, bc))
    if inv == 0.0:
        return None
    return 1.0 / inv


def _refine_peak(x: np.ndarray, y: np.ndarray, i: int) -> float:
    """Parabolic sub-grid refinement of a discrete maximum at index i."""
    x0, x1, x2 = x[i - 1], x[i], x[i + 1]
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    a = (y0 - y1) * (x2 - x1) ** 2 - (y2 - y1) * (x1 - x0) ** 2
    b = (y0 - y1) * (x2 - x1) + (y2 - y1) * (x1 - x0)
    if b == 0.0:
        return float(x1)
    shift = 0.5 * a / b
    lim = 0.5 * min(x1 - x0, x2 - x1)
    return float(x1 + np.clip(shift, -lim, lim))


def _series(lz, values):
    x = np.asarray(lz, dtype=float)
    y = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError("lz and values must be 1-d arrays of equal length")
    if np.any(np.diff(x) <= 0.0):
        raise ValueError("lz values must be strictly increasing")
    return x, y


def _prominent_maxima(y: np.ndarray, frac: float = 0.01) -> np.ndarray:
    span = float(np.max(y) - np.min(y))
    scale = float(np.max(np.abs(y))) if y.size else 0.0
    if span <= 1e-9 * max(scale, 1e-300):
        return np.array([], dtype=int)
    idx, _ = find_peaks(y, prominence=frac * span)
    return idx


def measure_period(lz, values, min_prominence_frac: float = 0.01) -> PeriodMeasurement:
    """Mean spacing of successive interior local maxima of a sampled series.

    Peak positions are refined by a local parabola, so a handful of
    samples per oscillation already locates maxima to a small fraction of
    the grid spacing.  Raises InsufficientSamples for fewer than 8
    samples and NoOscillationDetected when fewer than two prominent
    interior maxima exist (e.g. for monotone or flat series).
    """
    x, y = _series(lz, values)
    if x.size < 8:
        raise InsufficientSamples(f"need at least 8 samples, got {x.size}")
    idx = _prominent_maxima(y, min_prominence_frac)
    if idx.size < 2:
        raise NoOscillationDetected("fewer than two interior maxima in series")
    pos = np.array([_refine_peak(x, y, i) for i in idx])
    spacings = np.diff(pos)
    period = float(np.mean(spacings))
    if spacings.size >= 2:
        stderr = float(np.std(spacings, ddof=1) / math.sqrt(spacings.size))
    else:
        stderr = 0.0
    return PeriodMeasurement(period=period, std_error=stderr,
                             peak_positions=tuple(float(p) for p in pos))


def measure_envelope_exponent(lz, fermi_values) -> float:
    """Power-law exponent of the oscillation envelope of a Fermi-sea series.

    Fits log|extremum| against log L over the local maxima of |values|
    (which track the envelope; zero crossings and the decaying mean are
    excluded automatically) and returns the negated slope.
    """
    x, y = _series(lz, fermi_values)
    mag = np.abs(y)
    idx = _prominent_maxima(mag)
    if idx.size < 5:
        raise InsufficientSamples(
            f"need at least 5 envelope extrema, found {idx.size}")
    slope = np.polyfit(np.log(x[idx]), np.log(mag[idx]), 1)[0]
    return float(-slope)


def numeric_pressure(field: FieldSpec, bc: BoundaryKind, dim: int, lz: float,
                     temperature: float = 0.0, tol: Tolerances = Tolerances(),
                     step: float = 1e-4) -> float:
    """-dE/dL by central difference, as an independent pressure cross-check.

    Quadrature tolerances are tightened 100x so the difference quotient is
    not quadrature-noise limited.  Near the d = 1 kinks this deliberately
    disagrees with the closed-form pressure, which is how the
    discontinuity is located.
    """
    tight = Tolerances(rel_tol=tol.rel_tol / 100.0, abs_tol=tol.abs_tol / 100.0,
                       max_matsubara_terms=tol.max_matsubara_terms,
                       matsubara_tail_tol=tol.matsubara_tail_tol / 100.0)
    ep = casimir_energy(field, bc, dim, lz * (1.0 + step), temperature, tight)
    em = casimir_energy(field, bc, dim, lz * (1.0 - step), temperature, tight)
    return -(ep.value - em.value) / (2.0 * lz * step)


@dataclass(frozen=True)
class JumpScan:
    """Result of scanning one window for a pressure discontinuity."""

    detected: bool
    location: Optional[float]
    jump: float
    slope_scale: float


def detect_pressure_jump(field: FieldSpec, bc: BoundaryKind, dim: int,
                         window: tuple[float, float],
                         tol: Tolerances = Tolerances(rel_tol=1e-5, abs_tol=1e-8),
                         n_scan: int = 32, eps_frac: float = 1e-4) -> JumpScan:
    """Look for a pressure discontinuity inside an L window.

    The candidate is the largest |delta P| on a coarse scan, sharpened by
    bisection; a jump is declared when |P(L+eps) - P(L-eps)| exceeds 10x
    the local one-sided slope estimate times 2*eps.  The default
    tolerances are loose on purpose: a genuine jump is O(mu/L), far above
    quadrature noise, and tight tolerances get expensive next to the
    kernel resonance that causes the kink in the first place.
    """
    lo, hi = window
    grid = np.linspace(lo, hi, n_scan)

    def pval(L: float) -> float:
        return casimir_pressure(field, bc, dim, float(L), 0.0, tol).value

    vals = np.array([pval(L) for L in grid])
    i = int(np.argmax(np.abs(np.diff(vals))))
    a, b = float(grid[i]), float(grid[i + 1])
    fa, fb = float(vals[i]), float(vals[i + 1])
    for _ in range(12):
        m = 0.5 * (a + b)
        fm = pval(m)
        if abs(fm - fa) >= abs(fb - fm):
            b, fb = m, fm
        else:
            a, fa = m, fm
    loc = 0.5 * (a + b)
    eps = eps_frac * loc
    jump = abs(pval(loc + eps) - pval(loc - eps))
    slope = max(abs(pval(loc + 10 * eps) - pval(loc + eps)) / (9 * eps),
                abs(pval(loc - eps) - pval(loc - 10 * eps)) / (9 * eps))
    detected = jump > 10.0 * slope * (2.0 * eps)
    return JumpScan(detected=detected, location=loc if detected else None,
                    jump=jump, slope_scale=slope)
