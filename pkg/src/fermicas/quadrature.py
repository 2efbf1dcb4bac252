"""Adaptive quadrature on (0, inf) for exponentially decaying integrands.

Two methods are provided:

* ADAPTIVE_SUBDIVISION -- the semi-infinite axis is mapped to (0, 1) by
  the exponential tail map x = -decay_scale * log(1 - t), which turns a
  pure e^{-x/decay_scale} decay into a constant, and the unit interval is
  integrated by adaptive bisection with an embedded Gauss(7)/Kronrod(15)
  pair.  Bisection piles up near t = 0 where boundary log-singularities
  of the physics integrands live.
* DOUBLE_EXPONENTIAL -- an exp-sinh rule x = decay_scale * exp(c*sinh(t))
  with trapezoidal refinement in t; error estimated from successive
  levels.

Both rules are open: the integrand is never evaluated at x = 0 (or at any
interval endpoint).  Integrands may be vectorized (called with a numpy
array of abscissae) or plain scalar functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .model import EvalResult


class NonFiniteIntegrand(ArithmeticError):
    """The integrand returned NaN or Inf at an interior node."""


class QuadratureMethod(Enum):
    ADAPTIVE_SUBDIVISION = "adaptive"
    DOUBLE_EXPONENTIAL = "double_exponential"


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy/effort parameters for the semi-infinite integrators.

    ``decay_scale`` is a hint for the expected e-folding scale of the
    integrand (use 1/L_z for kernels decaying like exp(-L_z*x)).  Erring
    large merely costs subdivisions; a hint far below the true decay
    length truncates the reachable tail of the exponential map, which at
    worst surfaces as converged=False, so prefer overestimates.
    """

    method: QuadratureMethod = QuadratureMethod.ADAPTIVE_SUBDIVISION
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000
    decay_scale: float = 1.0
    initial_panels: int = 6  # starting subdivision count, clustered toward x = 0

    def __post_init__(self):
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0):
            raise ValueError("tolerances must be strictly positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if not (math.isfinite(self.decay_scale) and self.decay_scale > 0.0):
            raise ValueError("decay_scale must be finite and > 0")
        if self.initial_panels < 1:
            raise ValueError("initial_panels must be >= 1")


# 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
_XK = np.array([
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
])
_WG = np.zeros(15)
_WG[1::2] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
]


def _gk_batch(g, lefts: np.ndarray, rights: np.ndarray):
    """Gauss-Kronrod 7/15 on a batch of intervals.

    ``g`` maps a flat array of abscissae to (values, extra_errors); the
    extra error channel carries e.g. inner-quadrature uncertainties and
    is folded into each interval's error estimate with the Kronrod
    weights.  Returns (integrals, errors, n_evals).
    """
    half = 0.5 * (rights - lefts)
    mid = 0.5 * (lefts + rights)
    pts = mid[:, None] + half[:, None] * _XK[None, :]
    vals, extra = g(pts.ravel())
    vals = vals.reshape(pts.shape)
    if not np.all(np.isfinite(vals)):
        bad = pts.ravel()[~np.isfinite(vals.ravel())][0]
        raise NonFiniteIntegrand(f"integrand returned a non-finite value near x={bad!r}")
    resk = half * (vals @ _WK)
    resg = half * (vals @ _WG)
    # QUADPACK-style error: credit the Kronrod rule's extra accuracy, but
    # never report below the roundoff floor of the absolute integral.
    reskh = resk / 2.0
    resasc = half * (np.abs(vals - (reskh / half)[:, None]) @ _WK)
    resabs = half * (np.abs(vals) @ _WK)
    diff = np.abs(resk - resg)
    err = np.where(
        resasc > 0.0,
        resasc * np.minimum(1.0, (200.0 * diff / np.where(resasc > 0, resasc, 1.0)) ** 1.5),
        diff,
    )
    err = np.maximum(err, 50.0 * np.finfo(float).eps * resabs)
    if extra is not None:
        extra = extra.reshape(pts.shape)
        err = err + half * (extra @ _WK)
    return resk, err, vals.size


def _adaptive_unit(g, spec: QuadratureSpec):
    """Adaptive GK bisection of (0, 1) for a batched integrand ``g``."""
    # initial edges clustered toward t = 0, where both the x -> 0 boundary
    # structure and the short-x singular behavior of the map live
    edges = 1.0 - np.cos(np.linspace(0.0, math.pi / 2.0, spec.initial_panels + 1))
    edges[0], edges[-1] = 0.0, 1.0
    lefts, rights = edges[:-1], edges[1:]
    vals, errs, n = _gk_batch(g, lefts, rights)
    evals = n
    splits = 0
    while True:
        total = float(np.sum(vals))
        toterr = float(np.sum(errs))
        tol = max(spec.rel_tol * abs(total), spec.abs_tol)
        if toterr <= tol:
            return total, toterr, evals, True
        if splits >= spec.max_subdivisions:
            return total, toterr, evals, False
        # split every interval holding more than its equidistributed share,
        # but bound the batch so one round cannot blow up the node matrix
        share = tol / (2.0 * len(lefts))
        mask = errs > share
        if not np.any(mask):
            mask = errs == errs.max()
        idx = np.nonzero(mask)[0]
        room = min(spec.max_subdivisions - splits, 64)
        if len(idx) > room:
            idx = idx[np.argsort(errs[idx])[::-1][:room]]
        splits += len(idx)
        l, r = lefts[idx], rights[idx]
        m = 0.5 * (l + r)
        nl = np.concatenate([l, m])
        nr = np.concatenate([m, r])
        nv, ne, n = _gk_batch(g, nl, nr)
        evals += n
        keep = np.ones(len(lefts), dtype=bool)
        keep[idx] = False
        lefts = np.concatenate([lefts[keep], nl])
        rights = np.concatenate([rights[keep], nr])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])


def integrate_semi_infinite_rows(frows, nrows: int, spec: QuadratureSpec):
    """Integrate a family of integrands over (0, inf) on shared abscissae.

    ``frows(x, rows)`` must return a (len(rows), len(x)) array of values
    of the selected row integrands at the abscissae ``x``.  All rows are
    evaluated on one composite Gauss-Kronrod grid (after the exponential
    tail map); rows that miss their tolerance get the panel count doubled
    until they converge or the panel budget implied by max_subdivisions
    runs out.  Returns (values, error_estimates, n_evals, all_converged).

    This is the vectorized work-horse behind the iterated 2-d integrals:
    an outer adaptive pass hands batches of outer abscissae here, so the
    inner axis runs as numpy array code instead of per-node loops.
    """
    scale = spec.decay_scale
    panels = max(1, spec.initial_panels)
    cap = max(panels, min(256, spec.max_subdivisions))
    vals = np.zeros(nrows)
    errs = np.zeros(nrows)
    evals = 0
    active = np.arange(nrows)
    all_ok = True
    while True:
        edges = 1.0 - np.cos(np.linspace(0.0, math.pi / 2.0, panels + 1))
        edges[0], edges[-1] = 0.0, 1.0
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        t = (mid[:, None] + half[:, None] * _XK[None, :]).ravel()
        t = np.minimum(t, 1.0 - 1e-14)
        x = -scale * np.log1p(-t)
        jac = scale / (1.0 - t)
        if len(active) * t.size > 1 << 21:  # bound the work matrix to ~16 MB
            chunks = []
            step = max(1, (1 << 21) // t.size)
            for i in range(0, len(active), step):
                chunks.append(np.asarray(frows(x, active[i:i + step]), dtype=float))
            rowvals = np.vstack(chunks)
        else:
            rowvals = np.asarray(frows(x, active), dtype=float)
        if not np.all(np.isfinite(rowvals)):
            bad = x[~np.isfinite(rowvals).all(axis=0)][0]
            raise NonFiniteIntegrand(f"integrand returned a non-finite value near x={bad!r}")
        evals += rowvals.size
        m3 = (rowvals * jac[None, :]).reshape(len(active), panels, 15)
        resk = (m3 @ _WK) * half[None, :]
        resg = (m3 @ _WG) * half[None, :]
        total = resk.sum(axis=1)
        mean = resk / (2.0 * half[None, :])
        resasc = (np.abs(m3 - mean[:, :, None]) @ _WK) * half[None, :]
        resabs = (np.abs(m3) @ _WK) * half[None, :]
        diff = np.abs(resk - resg)
        safe = np.where(resasc > 0.0, resasc, 1.0)
        perr = np.where(resasc > 0.0,
                        resasc * np.minimum(1.0, (200.0 * diff / safe) ** 1.5),
                        diff)
        perr = np.maximum(perr, 50.0 * np.finfo(float).eps * resabs)
        err = perr.sum(axis=1)
        vals[active] = total
        errs[active] = err
        done = err <= np.maximum(spec.rel_tol * np.abs(total), spec.abs_tol)
        if done.all():
            break
        if panels >= cap:
            all_ok = False
            break
        active = active[~done]
        panels *= 2
    return vals, errs, evals, all_ok


def _wrap_integrand(f, vectorized: bool):
    if vectorized:
        return lambda x: (np.asarray(f(x), dtype=float), None)

    def g(x):
        out = np.empty(x.shape, dtype=float)
        for i, xi in enumerate(x):
            out[i] = f(float(xi))
        return out, None

    return g


def _exp_map(g, scale: float):
    """Compose a batched integrand on (0, inf) with x = -scale*log(1-t).

    Nodes are clamped away from t = 1 (deep bisection can round onto it);
    the reachable tail is therefore x <= ~32*scale, which is why
    decay_scale must not underestimate the true decay length by more than
    about an order of magnitude.  Overestimates only cost subdivisions.
    """

    def h(t):
        t = np.minimum(t, 1.0 - 1e-14)
        x = -scale * np.log1p(-t)
        jac = scale / (1.0 - t)
        vals, extra = g(x)
        if extra is not None:
            extra = extra * jac
        return vals * jac, extra

    return h


def integrate_semi_infinite(f: Callable, spec: QuadratureSpec = QuadratureSpec(),
                            *, vectorized: bool = False) -> EvalResult:
    """Integrate a real-valued ``f`` over (0, inf).

    ``f`` must decay (exponentially, at the hinted ``decay_scale``) as
    x -> inf; an integrable singularity at x = 0 is allowed because no
    rule node ever touches the endpoint.  Returns an EvalResult whose
    ``converged`` flag reports whether the error estimate met
    max(rel_tol*|value|, abs_tol); when the subdivision budget runs out
    the best estimate is returned with converged=False.

    Raises NonFiniteIntegrand if ``f`` produces NaN/Inf at an interior node.
    """
    g = _wrap_integrand(f, vectorized)
    if spec.method is QuadratureMethod.ADAPTIVE_SUBDIVISION:
        value, err, evals, ok = _adaptive_unit(_exp_map(g, spec.decay_scale), spec)
    else:
        value, err, evals, ok = _exp_sinh(g, spec)
    return EvalResult(value=value, abs_error_estimate=err, evaluations=evals, converged=ok)


def _exp_sinh(g, spec: QuadratureSpec):
    """Exp-sinh (double exponential) rule for (0, inf) with level doubling."""
    c = math.pi / 2.0
    tmax = 4.3
    scale = spec.decay_scale

    def terms(t):
        x = scale * np.exp(c * np.sinh(t))
        w = c * np.cosh(t) * x
        vals, _ = g(x)
        if not np.all(np.isfinite(vals)):
            bad = x[~np.isfinite(vals)][0]
            raise NonFiniteIntegrand(f"integrand returned a non-finite value near x={bad!r}")
        return vals * w

    h = tmax / 4.0
    t0 = np.arange(-4, 5) * h
    total = np.sum(terms(t0)) * h
    evals = t0.size
    prev = total
    err = math.inf
    converged = False
    for _ in range(12):
        h *= 0.5
        tnew = np.arange(-round(tmax / h) + 1, round(tmax / h), 2) * h
        total = 0.5 * prev + np.sum(terms(tnew)) * h
        evals += tnew.size
        err = abs(total - prev)
        prev = total
        if err <= max(spec.rel_tol * abs(total), spec.abs_tol):
            converged = True
            break
    return float(total), float(err), evals, converged


def integrate_2d_semi_infinite(f: Callable, spec: QuadratureSpec = QuadratureSpec(),
                               inner_spec: Optional[QuadratureSpec] = None,
                               *, vectorized_inner: bool = False) -> EvalResult:
    """Iterated integral of f(x, y) over (0, inf)^2, outer x then inner y.

    The inner integral is solved to tolerances tightened by a factor of 10
    relative to the outer ones (unless an explicit ``inner_spec`` is
    given), and each inner error estimate is propagated into the outer
    interval errors, so the combined ``abs_error_estimate`` covers both
    axes.  Failures carry the axis that produced them.
    """
    if inner_spec is None:
        inner_spec = QuadratureSpec(
            method=spec.method, rel_tol=spec.rel_tol / 10.0, abs_tol=spec.abs_tol / 10.0,
            max_subdivisions=spec.max_subdivisions, decay_scale=spec.decay_scale)

    state = {"evals": 0, "inner_ok": True}

    def outer_node(x: float):
        def fy(y):
            return f(x, y)

        try:
            res = integrate_semi_infinite(fy, inner_spec, vectorized=vectorized_inner)
        except NonFiniteIntegrand as exc:
            raise NonFiniteIntegrand(f"inner axis at x={x!r}: {exc}") from exc
        state["evals"] += res.evaluations
        if not res.converged:
            state["inner_ok"] = False
        return res.value, res.abs_error_estimate

    def g(x):
        vals = np.empty(x.shape, dtype=float)
        extra = np.empty(x.shape, dtype=float)
        for i, xi in enumerate(x):
            vals[i], extra[i] = outer_node(float(xi))
        return vals, extra

    if spec.method is QuadratureMethod.ADAPTIVE_SUBDIVISION:
        value, err, _, ok = _adaptive_unit(_exp_map(g, spec.decay_scale), spec)
    else:
        def f1(x):
            return outer_node(x)[0]

        res = integrate_semi_infinite(f1, spec, vectorized=False)
        value, err, ok = res.value, res.abs_error_estimate, res.converged
    return EvalResult(value=value, abs_error_estimate=err,
                      evaluations=state["evals"], converged=ok and state["inner_ok"])
