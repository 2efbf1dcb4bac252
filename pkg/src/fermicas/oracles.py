"""Independent validators for the Lifshitz evaluators.

Both oracles start from the zero-point mode sum, not from the frequency
integral, and use closed forms or scipy quadrature rather than the
package's own integration engine, so an agreement is a genuine
cross-check of two unrelated computations.

* fermi_sea_oracle -- the finite, regularization-free mu-dependent part
  of the zero-point energy.  Per discrete mode the zero-point summand
  (|E - mu| + |E + mu|)/2 equals max(E, mu), so the excess over mu = 0 is
  (mu - E) * theta(mu - E); subtracting the bulk (continuum k_z) density
  leaves the Fermi-sea Casimir energy, to compare with
  sea_split(...).fermi.
* lattice_oracle -- a Wilson-fermion discretization of the confined
  direction (continuum transverse dynamics): the full Casimir energy as
  a Brillouin-zone mode sum minus the extensive integral, to compare
  with casimir_energy_T0 as the spacing shrinks.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .dispersion import KERNEL_TRIPLES
from .model import BoundaryKind, FieldSpec


class DoublerWarning(UserWarning):
    """wilson_r = 0 requested: naive fermions include doubler modes."""


class ContinuumFidelityWarning(UserWarning):
    """mu * spacing is too coarse for good continuum fidelity."""


@dataclass(frozen=True)
class FermiSumSpec:
    """Inputs for the Fermi-sea mode-sum oracle.

    The transverse (perpendicular) integrals are closed-form for
    d <= 3; the tolerances apply to the residual 1-d bulk integral and
    to the generic transverse quadrature used for d >= 4.
    """

    field: FieldSpec
    bc: BoundaryKind
    dim: int
    lz: float
    kperp_rel_tol: float = 1e-10
    kperp_abs_tol: float = 1e-14


@dataclass(frozen=True)
class LatticeSpec:
    """Inputs for the lattice mode-sum oracle: L_z = lz_sites * spacing."""

    field: FieldSpec
    lz_sites: int
    spacing: float
    wilson_r: float = 1.0
    dim: int = 3

    def __post_init__(self):
        if self.lz_sites < 2:
            raise ValueError("need at least 2 lattice sites")
        if not (self.spacing > 0.0 and math.isfinite(self.spacing)):
            raise ValueError("spacing must be finite and > 0")
        if not (0.0 <= self.wilson_r <= 1.0):
            raise ValueError("wilson_r must lie in [0, 1]")

    @property
    def lz(self) -> float:
        return self.lz_sites * self.spacing


def _transverse_excess(m: float, mu: float, dim: int, rel_tol: float, abs_tol: float) -> float:
    """int d^{d-1}kperp/(2pi)^{d-1} (mu - sqrt(m^2 + kperp^2)) theta(...)."""
    if m >= mu:
        return 0.0
    k2 = mu * mu - m * m
    if dim == 1:
        return mu - m
    if dim == 2:
        kf = math.sqrt(k2)
        if m == 0.0:
            return mu * mu / (2.0 * math.pi)
        return (mu * kf / 2.0 - 0.5 * m * m * math.log((kf + mu) / m)) / math.pi
    if dim == 3:
        return (mu * k2 / 2.0 - (mu ** 3 - m ** 3) / 3.0) / (2.0 * math.pi)
    # generic transverse dimension: radial quadrature
    n = dim - 1
    omega = 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)
    pref = omega / (2.0 * math.pi) ** n
    kf = math.sqrt(k2)
    val, _ = quad(lambda k: k ** (n - 1) * (mu - math.hypot(m, k)), 0.0, kf,
                  epsrel=rel_tol, epsabs=abs_tol, limit=200)
    return pref * val


_SPECTRA = {
    BoundaryKind.PBC: (2.0, 0.0, 0.5, 1.0),
    BoundaryKind.APBC: (2.0, 1.0, 1.0, 1.0),
    BoundaryKind.MIT: (1.0, 0.5, 1.0, 2.0),
    BoundaryKind.DIRICHLET_TYPE: (1.0, 0.0, 0.5, 2.0),
}
# (step, offset, weight of n = 0, bulk density factor): k_n = (step*n + offset)*pi/L


def occupied_mode_count(spec: FermiSumSpec) -> int:
    """Number of k_perp = 0 modes at or below the Fermi level."""
    f = spec.field
    if f.mu <= f.mass:
        return 0
    kf = math.sqrt(f.mu ** 2 - f.mass ** 2)
    step, offset, _, _ = _SPECTRA[spec.bc]
    # k_n = (step*n + offset)*pi/L <= kf
    t = (kf * spec.lz / math.pi - offset) / step
    return int(math.floor(t + 1e-12)) + 1 if t >= -1e-12 else 0


def fermi_sea_oracle(spec: FermiSumSpec) -> float:
    """Fermi-sea part of the Casimir energy from the discrete mode sum.

    Returns 0 for mu <= M (empty Fermi sea).  The result is UV-finite:
    both the sum and the bulk integral are cut off at the Fermi surface.
    """
    f = spec.field
    mu, mass = f.mu, f.mass
    if mu <= mass:
        return 0.0
    if spec.dim < 1:
        raise ValueError("dim must be >= 1")
    kf = math.sqrt(mu * mu - mass * mass)
    step, offset, w0, density = _SPECTRA[spec.bc]
    p = KERNEL_TRIPLES[spec.bc].prefactor

    def excess(kz: float) -> float:
        return _transverse_excess(math.hypot(mass, kz), mu, spec.dim,
                                  spec.kperp_rel_tol, spec.kperp_abs_tol)

    total = 0.0
    n = 0
    while True:
        kn = (step * n + offset) * math.pi / spec.lz
        if kn >= kf:
            break
        wt = w0 if n == 0 else 1.0
        total += wt * excess(kn)
        n += 1

    bulk, _ = quad(excess, 0.0, kf, epsrel=spec.kperp_rel_tol,
                   epsabs=spec.kperp_abs_tol, limit=200)
    bulk *= density * spec.lz / (2.0 * math.pi)
    return p * f.degeneracy * (total - bulk)


@lru_cache(maxsize=8)
def _gl_nodes(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _wilson_d2(u: np.ndarray, spacing: float, mass: float, r: float) -> np.ndarray:
    """Squared z-direction dispersion of a Wilson fermion, u = k_z * spacing."""
    s = np.sin(u)
    wmass = mass + (2.0 * r / spacing) * np.sin(0.5 * u) ** 2
    return (s / spacing) ** 2 + wmass ** 2


def lattice_oracle(spec: LatticeSpec) -> float:
    """Casimir energy from the lattice mode sum (PBC only).

    The confined direction carries lz_sites momenta k_z = 2*pi*n/(N*a)
    with a Wilson-type dispersion; transverse directions stay continuum.
    Deviations from the Lifshitz value at coarse mu*a are physical
    discretization artifacts and shrink as the spacing is halved.
    """
    f = spec.field
    mu, mass, g = f.mu, f.mass, f.degeneracy
    a, N, r, dim = spec.spacing, spec.lz_sites, spec.wilson_r, spec.dim
    if r == 0.0:
        warnings.warn("wilson_r = 0: naive lattice fermions include doublers and "
                      "will not match the continuum normalization", DoublerWarning)
    if mu * a > 0.3:
        warnings.warn(f"mu*a = {mu * a:.3g} > 0.3: coarse lattice, poor continuum "
                      "fidelity", ContinuumFidelityWarning)
    if dim not in (1, 2, 3):
        raise ValueError("lattice oracle supports dim in {1, 2, 3}")

    uscan = np.linspace(0.0, math.pi, 2049)
    d2scan = _wilson_d2(uscan, a, mass, r)
    glx, glw = _gl_nodes(64)
    un = 2.0 * math.pi * np.arange(N) / N
    d2sum = _wilson_d2(un, a, mass, r)

    def bz_average(kperp2: float) -> float:
        """(1/pi) * int_0^pi max(sqrt(D^2 + kperp^2), mu) du."""
        h = d2scan + kperp2 - mu * mu
        segs = [0.0]
        sign = h[0] > 0.0
        for i in range(1, len(h)):
            si = h[i] > 0.0
            if si != sign:
                root = brentq(lambda u: float(_wilson_d2(np.array([u]), a, mass, r)[0])
                              + kperp2 - mu * mu, uscan[i - 1], uscan[i],
                              xtol=1e-14, rtol=1e-15)
                segs.append(root)
                sign = si
        segs.append(math.pi)
        total = 0.0
        for lo, hi in zip(segs[:-1], segs[1:]):
            if hi <= lo:
                continue
            mid = 0.5 * (lo + hi)
            below = _wilson_d2(np.array([mid]), a, mass, r)[0] + kperp2 < mu * mu
            if below:
                total += mu * (hi - lo)
            else:
                uu = 0.5 * (hi - lo) * glx + mid
                ee = np.sqrt(_wilson_d2(uu, a, mass, r) + kperp2)
                total += 0.5 * (hi - lo) * float(glw @ ee)
        return total / math.pi

    def bracket(kperp: float) -> float:
        kperp2 = kperp * kperp
        esum = float(np.sum(np.maximum(np.sqrt(d2sum + kperp2), mu)))
        return esum - N * bz_average(kperp2)

    if dim == 1:
        return -2.0 * g * bracket(0.0)

    # Transverse thresholds where a discrete mode crosses the Fermi level:
    # the integrand has slope kinks exactly there, so segment boundaries
    # go on them and a fixed Gauss-Legendre rule per smooth segment stays
    # deterministic (an adaptive rule would chase the ~1e-12 cancellation
    # noise of the sum-minus-integral bracket).
    pts = np.sqrt(np.maximum(0.0, mu * mu - d2sum))
    pts = sorted(set(float(t) for t in pts if t > 0.0))
    if dim == 2:
        meas = 1.0 / math.pi

        def f_perp(k: np.ndarray) -> np.ndarray:
            return np.array([bracket(float(ki)) for ki in k])
    else:
        meas = 1.0 / (2.0 * math.pi)

        def f_perp(k: np.ndarray) -> np.ndarray:
            return k * np.array([bracket(float(ki)) for ki in k])

    edge = (pts[-1] if pts else 0.0) + 1.0 / spec.lz
    # beyond the last threshold the bracket decays like
    # exp(-2*(L/a)*asinh(a*k/2)); cut where that reaches ~1e-20
    kmax = edge + (2.0 / a) * math.sinh(22.5 * a / spec.lz)
    bounds = [0.0] + pts + [edge]
    frac = np.linspace(0.0, 1.0, 13) ** 2
    bounds += [edge + (kmax - edge) * t for t in frac[1:]]
    total = 0.0
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        if hi <= lo:
            continue
        kk = 0.5 * (hi - lo) * glx + 0.5 * (hi + lo)
        total += 0.5 * (hi - lo) * float(glw @ f_perp(kk))
    return -2.0 * g * meas * total
