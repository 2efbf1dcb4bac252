"""Finite-density Lifshitz evaluators: Casimir energy and pressure.

Zero temperature
----------------
The energy per unit transverse (d-1)-volume is

    E = p * g * 2*Re integral_0^inf dxi/(2pi) [transverse] ln(1 - s*e^{-sigma*L*kt})

with kt = k_tilde(xi, kperp^2, M, mu), (s, sigma, p) the boundary kernel
triple, g the degeneracy multiplier, and [transverse] the radial
reduction of the (d-1) perpendicular momentum integrals.  The two-sided
frequency integral is folded to 2*Re over xi > 0 by conjugate symmetry;
since Re is linear it is taken inside the quadrature, so all integrands
handed to the quadrature engine are real.

The closed-form pressure replaces the log kernel by its L-derivative,

    P = -dE/dL ,   d/dL ln(1 - s*e^{-sigma*L*q}) = s*sigma*q*e^{-sigma*L*q}/(1 - s*e^{-sigma*L*q}).

Transverse reduction
--------------------
For d >= 2 the radial integral int_0^inf k^{d-2} f(sqrt(k^2 + w^2)) dk
(w = k_tilde at kperp = 0, Re w > 0 for xi > 0) is evaluated on the
shifted contour q = w + t, t in (0, inf), which is exact because the
integrand is analytic for Re q > 0 and all kernel singularities lie on
the imaginary q axis:

    int_0^inf k^{d-2} f(kt) dk = 2 int_0^inf u^{d-2} (u^2+2w)^{(d-3)/2} (w+u^2) f(w+u^2) du

(substituting t = u^2).  On the shifted contour the kernel decays
monotonically like e^{-sigma*L*t} instead of oscillating across the
Fermi surface, which is what makes dense L sweeps affordable.  The
direct route (quadrature straight along real k) is kept selectable for
cross-validation.

Finite temperature
------------------
The frequency integral becomes a fermionic Matsubara sum over
xi_l = (2l+1)*pi*T; the l >= 0 and l < 0 terms pair into 2*Re, and the
tail is bounded geometrically from the last magnitudes once they
decrease.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dispersion import KERNEL_TRIPLES, k_tilde
from .model import (BoundaryKind, EvalResult, FieldSpec, Tolerances,
                    UnsupportedDimension)
from .quadrature import (QuadratureSpec, integrate_2d_semi_infinite,
                         integrate_semi_infinite, integrate_semi_infinite_rows)
from .quadrature import _adaptive_unit, _exp_map


class QuadratureFailure(RuntimeError):
    """A quadrature did not reach its tolerance; carries the best estimate."""

    def __init__(self, message: str, result: EvalResult):
        super().__init__(message)
        self.result = result


class MatsubaraNotConverged(RuntimeError):
    """The Matsubara sum hit max_matsubara_terms; carries the best estimate."""

    def __init__(self, message: str, result: EvalResult):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class RadialReduction:
    """Angular constant that reduces the transverse integrals to radial form.

    ``angular_factor`` multiplies int_0^inf k^{d-2} dk and equals
    Omega_{d-1}/(2pi)^{d-1} with Omega_n the surface of the unit sphere
    in n dimensions; d = 1 has no transverse integral at all.
    """

    dim: int
    angular_factor: float
    has_transverse: bool


_ANGULAR_TABLE = {2: 1.0 / math.pi, 3: 1.0 / (2.0 * math.pi)}


def radial_reduction(dim: int) -> RadialReduction:
    if not isinstance(dim, int) or dim < 1:
        raise UnsupportedDimension(f"spatial dimension must be an integer >= 1, got {dim}")
    if dim == 1:
        return RadialReduction(1, 1.0, False)
    if dim in _ANGULAR_TABLE:
        return RadialReduction(dim, _ANGULAR_TABLE[dim], True)
    n = dim - 1
    omega = 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)
    return RadialReduction(dim, omega / (2.0 * math.pi) ** n, True)


def _energy_kernel(s: int, a: float) -> Callable:
    def kern(q):
        return np.log(1.0 - s * np.exp(-a * q))

    return kern


def _pressure_kernel(s: int, sigma: int, a: float) -> Callable:
    def kern(q):
        e = np.exp(-a * q)
        return s * sigma * q * e / (1.0 - s * e)

    return kern


def _check_args(field: FieldSpec, bc: BoundaryKind, dim: int, lz: float) -> None:
    if not isinstance(field, FieldSpec):
        raise TypeError("field must be a FieldSpec")
    if not isinstance(dim, int) or dim < 1:
        raise UnsupportedDimension(f"spatial dimension must be an integer >= 1, got {dim}")
    if not (math.isfinite(lz) and lz > 0.0):
        raise ValueError(f"separation must be finite and > 0, got {lz}")
    if bc not in KERNEL_TRIPLES:
        raise ValueError(f"unknown boundary kind {bc!r}")


def _quad_specs(tol: Tolerances, lz: float, sigma: int):
    outer = QuadratureSpec(rel_tol=tol.rel_tol, abs_tol=tol.abs_tol,
                           decay_scale=1.0 / (sigma * lz))
    inner = QuadratureSpec(rel_tol=tol.rel_tol / 10.0, abs_tol=tol.abs_tol / 10.0,
                           decay_scale=1.0 / math.sqrt(sigma * lz), initial_panels=3)
    return outer, inner


def _transverse_integrand_direct(kernel, coeff: float, xi: float, mass: float,
                                 mu: float, dim: int):
    """Real integrand in k along the real transverse axis (validation route).

    Carries the same 2*Re frequency fold as the shifted-contour route.
    """

    def f(k):
        kt = k_tilde(xi, k * k, mass, mu)
        return coeff * 2.0 * np.real(kernel(kt)) * k ** (dim - 2)

    return f


def _make_inner_batch(kernel, coeff: float, dim: int, mass: float, mu: float,
                      inner_spec: QuadratureSpec):
    """Return g(xi_array) -> (F, err, evals, ok) for the shifted-contour reduction.

    F(xi) already contains every constant, the radial angular factor, the
    2*Re frequency fold and the t = u^2 substitution Jacobian, so the
    outer quadrature of F over xi directly yields the final value.
    """
    half_pow = 0.5 * (dim - 3)

    def g(xi: np.ndarray):
        w = np.asarray(k_tilde(xi, 0.0, mass, mu), dtype=complex).reshape(-1)

        def frows(u, rows):
            wv = w[rows][:, None]
            u2 = (u * u)[None, :]
            q = wv + u2
            t = kernel(q) * q
            if half_pow != 0.0:
                t = t * (u2 + 2.0 * wv) ** half_pow
            out = np.real(t)
            if dim != 2:
                out = out * (u ** (dim - 2))[None, :]
            return (4.0 * coeff) * out

        return integrate_semi_infinite_rows(frows, w.size, inner_spec)

    return g


def _evaluate_T0(field: FieldSpec, bc: BoundaryKind, dim: int, lz: float,
                 tol: Tolerances, kernel_for, sign: float, route: str) -> EvalResult:
    s, sigma, p = KERNEL_TRIPLES[bc]
    a = sigma * lz
    kernel = kernel_for(s, sigma, a)
    red = radial_reduction(dim)
    pref = sign * p * field.degeneracy / (2.0 * math.pi)
    outer_spec, inner_spec = _quad_specs(tol, lz, sigma)
    mass, mu = field.mass, field.mu

    if not red.has_transverse:
        def f1(xi):
            w = k_tilde(xi, 0.0, mass, mu)
            return pref * 2.0 * np.real(kernel(w))

        return integrate_semi_infinite(f1, outer_spec, vectorized=True)

    coeff = pref * red.angular_factor
    if route == "shifted":
        inner = _make_inner_batch(kernel, coeff, dim, mass, mu, inner_spec)
        state = {"evals": 0}

        def g(xi):
            # rows that exhaust their panel budget still report honest error
            # estimates, which flow into the outer interval errors; the
            # outer total decides convergence
            vals, errs, n, _ = inner(xi)
            state["evals"] += n
            return vals, errs

        value, err, _, outer_ok = _adaptive_unit(_exp_map(g, outer_spec.decay_scale),
                                                 outer_spec)
        return EvalResult(value=value, abs_error_estimate=err,
                          evaluations=state["evals"], converged=outer_ok)
    if route == "direct":
        def f2(xi, u):
            return _transverse_integrand_direct(kernel, coeff, xi, mass, mu, dim)(u)

        inner_spec = QuadratureSpec(rel_tol=inner_spec.rel_tol, abs_tol=inner_spec.abs_tol,
                                    decay_scale=1.0 / a,
                                    max_subdivisions=inner_spec.max_subdivisions,
                                    initial_panels=6)
        return integrate_2d_semi_infinite(f2, outer_spec, inner_spec, vectorized_inner=True)
    raise ValueError(f"unknown transverse route {route!r}")


def _kernel_energy_factory(s, sigma, a):
    return _energy_kernel(s, a)


def _kernel_pressure_factory(s, sigma, a):
    return _pressure_kernel(s, sigma, a)


def casimir_energy_T0(field: FieldSpec, bc: BoundaryKind, dim: int, lz: float,
                      tol: Tolerances = Tolerances(), *, route: str = "shifted") -> EvalResult:
    """Casimir energy per unit transverse (d-1)-volume at T = 0.

    Reduces to the conventional (mu = 0) Lifshitz result below threshold
    (mu <= M); for mu > M the value oscillates in lz with period
    2*pi/(sigma*sqrt(mu^2 - M^2)) for kernel stretch sigma.
    """
    _check_args(field, bc, dim, lz)
    return _evaluate_T0(field, bc, dim, lz, tol, _kernel_energy_factory, +1.0, route)


def casimir_pressure_T0(field: FieldSpec, bc: BoundaryKind, dim: int, lz: float,
                        tol: Tolerances = Tolerances(), *, route: str = "shifted") -> EvalResult:
    """Casimir pressure -dE/dL at T = 0 via the closed-form kernel derivative."""
    _check_args(field, bc, dim, lz)
    return _evaluate_T0(field, bc, dim, lz, tol, _kernel_pressure_factory, -1.0, route)


_MATSUBARA_CHUNK = 8


def _matsubara_term_chunks(field: FieldSpec, bc: BoundaryKind, dim: int, lz: float,
                           temperature: float, tol: Tolerances, kernel_for, sign: float):
    """Yield chunks (values, errors, evals, ok) of T*F(xi_l), l = 0, 1, 2, ..."""
    s, sigma, p = KERNEL_TRIPLES[bc]
    a = sigma * lz
    kernel = kernel_for(s, sigma, a)
    red = radial_reduction(dim)
    pref = sign * p * field.degeneracy * temperature
    _, inner_spec = _quad_specs(tol, lz, sigma)
    inner_spec = QuadratureSpec(rel_tol=tol.rel_tol / 4.0, abs_tol=tol.abs_tol / 16.0,
                                decay_scale=inner_spec.decay_scale, initial_panels=3)
    mass, mu = field.mass, field.mu
    inner = None
    if red.has_transverse:
        coeff = pref * red.angular_factor
        inner = _make_inner_batch(kernel, coeff, dim, mass, mu, inner_spec)

    l = 0
    while True:
        xi = (2 * np.arange(l, l + _MATSUBARA_CHUNK) + 1) * math.pi * temperature
        if inner is None:
            w = k_tilde(xi, 0.0, mass, mu)
            vals = pref * 2.0 * np.real(kernel(w))
            yield vals, np.zeros_like(vals), xi.size, True
        else:
            vals, errs, n, ok = inner(xi)
            yield vals, errs, n, ok
        l += _MATSUBARA_CHUNK


def _sum_matsubara(field, bc, dim, lz, temperature, tol, kernel_for, sign) -> EvalResult:
    if not (math.isfinite(temperature) and temperature > 0.0):
        raise ValueError(f"temperature must be finite and > 0, got {temperature}")
    _check_args(field, bc, dim, lz)
    total = 0.0
    err = 0.0
    evals = 0
    mags: list[float] = []
    nterms = 0
    for vals, errs, n, _ in _matsubara_term_chunks(field, bc, dim, lz, temperature,
                                                   tol, kernel_for, sign):
        evals += n
        for v, e in zip(vals, errs):
            total += float(v)
            err += float(e)
            nterms += 1
            mags.append(abs(float(v)))
            if len(mags) >= 3 and mags[-1] <= mags[-2] <= mags[-3]:
                r = mags[-1] / mags[-2] if mags[-2] > 0.0 else 0.0
                r = min(r, 0.999)
                tail = mags[-1] * r / (1.0 - r)
                if tail <= max(tol.matsubara_tail_tol * abs(total), 0.5 * tol.abs_tol):
                    err += tail
                    converged = err <= max(tol.rel_tol * abs(total), tol.abs_tol)
                    return EvalResult(value=total, abs_error_estimate=err,
                                      evaluations=evals, converged=converged)
            if nterms >= tol.max_matsubara_terms:
                best = EvalResult(value=total, abs_error_estimate=math.inf,
                                  evaluations=evals, converged=False)
                raise MatsubaraNotConverged(
                    f"Matsubara sum not converged after {nterms} terms "
                    f"(T={temperature}, lz={lz})", best)


def casimir_energy_T(field: FieldSpec, bc: BoundaryKind, dim: int, lz: float,
                     temperature: float, tol: Tolerances = Tolerances()) -> EvalResult:
    """Casimir energy at temperature T > 0 via the fermionic Matsubara sum.

    Converges to casimir_energy_T0 as T -> 0; frequencies (2l+1)*pi*T
    never touch the xi = 0 branch line.
    """
    return _sum_matsubara(field, bc, dim, lz, temperature, tol,
                          _kernel_energy_factory, +1.0)


def casimir_pressure_T(field: FieldSpec, bc: BoundaryKind, dim: int, lz: float,
                       temperature: float, tol: Tolerances = Tolerances()) -> EvalResult:
    """Casimir pressure at temperature T > 0 (Matsubara form of -dE/dL)."""
    return _sum_matsubara(field, bc, dim, lz, temperature, tol,
                          _kernel_pressure_factory, -1.0)


def casimir_energy(field: FieldSpec, bc: BoundaryKind, dim: int, lz: float,
                   temperature: float = 0.0, tol: Tolerances = Tolerances()) -> EvalResult:
    """Dispatch to the T = 0 integral or the Matsubara sum."""
    if temperature == 0.0:
        return casimir_energy_T0(field, bc, dim, lz, tol)
    return casimir_energy_T(field, bc, dim, lz, temperature, tol)


def casimir_pressure(field: FieldSpec, bc: BoundaryKind, dim: int, lz: float,
                     temperature: float = 0.0, tol: Tolerances = Tolerances()) -> EvalResult:
    """Dispatch to the T = 0 integral or the Matsubara sum."""
    if temperature == 0.0:
        return casimir_pressure_T0(field, bc, dim, lz, tol)
    return casimir_pressure_T(field, bc, dim, lz, temperature, tol)
