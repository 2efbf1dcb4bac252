"""Complex transverse-reduced dispersion and boundary-condition kernels.

The reduced momentum along the confined direction is

    k_tilde = sqrt(M^2 + kperp^2 - (i*xi + mu)^2)
            = sqrt((M^2 + kperp^2 + xi^2 - mu^2) - 2i*mu*xi)

with the principal square root, so Re(k_tilde) >= 0 and the mode-sum
kernel exp(-L*k_tilde) always decays.  Each boundary condition enters
only through a (sign, stretch, prefactor) triple applied to

    ln(1 - sign * exp(-stretch * L * k_tilde)).

All functions are pure, accept scalars or numpy arrays, and are safe for
concurrent use.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .model import BoundaryKind


class KernelSingular(ArithmeticError):
    """The kernel logarithm was evaluated exactly at a zero of its argument."""


class KernelTriple(NamedTuple):
    """Boundary-condition data: ln(1 - sign*e^{-stretch*L*k}) scaled by prefactor."""

    sign: int        # +1 or -1 in front of the exponential
    stretch: int     # 1 or 2 multiplying L in the exponent
    prefactor: float  # overall energy prefactor before degeneracy


KERNEL_TRIPLES: dict[BoundaryKind, KernelTriple] = {
    BoundaryKind.PBC: KernelTriple(+1, 1, -4.0),
    BoundaryKind.APBC: KernelTriple(-1, 1, -4.0),
    BoundaryKind.MIT: KernelTriple(-1, 2, -2.0),
    BoundaryKind.DIRICHLET_TYPE: KernelTriple(+1, 2, -2.0),
}


def kernel_triple(bc: BoundaryKind) -> KernelTriple:
    return KERNEL_TRIPLES[bc]


def k_tilde(xi, kperp2, mass: float, mu: float):
    """Principal square root of (M^2 + kperp^2 + xi^2 - mu^2) - 2i*mu*xi.

    For xi > 0 and mu > 0 the imaginary part of the argument is strictly
    negative, hence Re(k_tilde) > 0 strictly.  At xi = 0 the argument is
    real; a negative real argument (possible when mu > sqrt(M^2 + kperp2))
    yields the textbook principal value +i*sqrt(|.|), which is why the
    imaginary part is normalised to drop IEEE negative zeros.

    Accepts scalars or arrays; total on its domain.
    """
    xi = np.asarray(xi, dtype=float)
    kperp2 = np.asarray(kperp2, dtype=float)
    re = mass * mass + kperp2 + xi * xi - mu * mu
    im = -2.0 * mu * xi
    z = re + 1j * (im + 0.0)  # -0.0 -> +0.0 keeps the principal branch at xi = 0
    out = np.sqrt(z)
    if out.ndim == 0:
        return complex(out)
    return out


def kernel_log(bc: BoundaryKind, lz: float, kt):
    """ln(1 - sign * exp(-stretch * lz * kt)) for the given boundary kind.

    Finite whenever the argument of the log is nonzero; raises
    KernelSingular at the isolated zeros (possible only for Re(kt) = 0),
    which open quadrature rules never hit.
    """
    s, sigma, _ = KERNEL_TRIPLES[bc]
    kt = np.asarray(kt, dtype=complex)
    w = 1.0 - s * np.exp(-sigma * lz * kt)
    if np.any(w == 0):
        raise KernelSingular(
            f"kernel log singular for bc={bc.name}, lz={lz}: argument of log is 0")
    out = np.log(w)
    if out.ndim == 0:
        return complex(out)
    return out


def conjugate_symmetry_check(xi: float, kperp2: float, mass: float, mu: float,
                             tol: float = 1e-12) -> bool:
    """Whether k_tilde(-xi) equals conj(k_tilde(xi)) within machine tolerance.

    This is the identity that justifies folding the two-sided frequency
    integral to 2*Re over xi in (0, inf).  At xi = 0 both sides are the
    same evaluation point and the fold is vacuous, so the check succeeds
    by construction.
    """
    if xi == 0.0:
        return True
    a = k_tilde(-xi, kperp2, mass, mu)
    b = np.conj(k_tilde(xi, kperp2, mass, mu))
    scale = 1.0 + abs(b)
    return bool(abs(a - b) <= tol * scale)
