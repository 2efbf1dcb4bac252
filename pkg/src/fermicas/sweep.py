"""Parameter sweeps over separation (and field sets, dimensions, T).

A sweep evaluates the requested quantities on an L_z grid for every
configuration in the cross product fieldsets x dims x temperatures.
Grid points are independent pure evaluations, so they can be distributed
over a process pool; results are reassembled in grid order, which makes
the emitted bytes independent of the worker count.

Failed points are reported (with reasons) and emitted as NaN rows with
converged = 0 -- never silently dropped.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

import numpy as np

from .model import BoundaryKind, FieldSpec, Tolerances
from .lifshitz import casimir_energy, casimir_pressure
from .observables import NoFermiSea, predicted_beat_period, predicted_period

QUANTITIES = ("energy", "pressure", "force", "coeff_energy", "coeff_pressure",
              "sea_split", "period", "beat")


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of one sweep run."""

    fieldsets: tuple[tuple[FieldSpec, ...], ...]
    boundary: BoundaryKind
    lz_min: float
    lz_max: float
    lz_points: int
    lz_scale: str = "linear"
    dims: tuple[int, ...] = (3,)
    temperatures: tuple[float, ...] = (0.0,)
    quantities: tuple[str, ...] = ("energy",)
    transverse_area: float = 1.0
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    workers: int = 1
    output: Optional[str] = None
    fmt: str = "csv"

    def __post_init__(self):
        if not self.fieldsets or any(len(fs) == 0 for fs in self.fieldsets):
            raise ValueError("fieldsets must be non-empty tuples of FieldSpec")
        if not self.lz_min < self.lz_max:
            raise ValueError("lz_min must be < lz_max")
        if self.lz_points < 2:
            raise ValueError("lz_points must be >= 2")
        if self.lz_scale not in ("linear", "log"):
            raise ValueError("lz_scale must be 'linear' or 'log'")
        unknown = [q for q in self.quantities if q not in QUANTITIES]
        if unknown:
            raise ValueError(f"unknown quantities {unknown}; allowed: {QUANTITIES}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.fmt not in ("csv", "json"):
            raise ValueError("format must be 'csv' or 'json'")

    def lz_grid(self) -> np.ndarray:
        if self.lz_scale == "log":
            return np.geomspace(self.lz_min, self.lz_max, self.lz_points)
        return np.linspace(self.lz_min, self.lz_max, self.lz_points)

    def configs(self) -> list[tuple[tuple[FieldSpec, ...], int, float]]:
        return list(product(self.fieldsets, self.dims, self.temperatures))


@dataclass(frozen=True)
class OutputRecord:
    """One evaluated grid point: quantity values with their error estimates."""

    lz: float
    fieldset: int
    dim: int
    temperature: float
    values: dict
    errors: dict
    converged: bool


@dataclass(frozen=True)
class PointFailure:
    lz: float
    fieldset: int
    dim: int
    temperature: float
    reason: str


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    records: list[OutputRecord] = field(default_factory=list)
    failures: list[PointFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _rss(errs) -> float:
    return float(math.sqrt(sum(e * e for e in errs)))


def _fieldset_index(spec: SweepSpec, icfg: int) -> int:
    return icfg // (len(spec.dims) * len(spec.temperatures))


def _evaluate_point(spec: SweepSpec, icfg: int, lz: float) -> OutputRecord:
    fields, dim, temp = spec.configs()[icfg]
    tol = Tolerances(rel_tol=spec.rel_tol, abs_tol=spec.abs_tol)
    values: dict = {}
    errors: dict = {}
    converged = True

    need_e = {"energy", "coeff_energy", "sea_split"} & set(spec.quantities)
    need_p = {"pressure", "force", "coeff_pressure"} & set(spec.quantities)

    e_parts = e_res = p_res = None
    if need_e:
        e_parts = [casimir_energy(f, spec.boundary, dim, lz, temp, tol) for f in fields]
        e_res = (sum(r.value for r in e_parts),
                 _rss(r.abs_error_estimate for r in e_parts))
        converged &= all(r.converged for r in e_parts)
    if need_p:
        parts = [casimir_pressure(f, spec.boundary, dim, lz, temp, tol) for f in fields]
        p_res = (sum(r.value for r in parts), _rss(r.abs_error_estimate for r in parts))
        converged &= all(r.converged for r in parts)

    for q in spec.quantities:
        if q == "energy":
            values[q], errors[q] = e_res
        elif q == "pressure":
            values[q], errors[q] = p_res
        elif q == "force":
            values[q] = spec.transverse_area * p_res[0]
            errors[q] = spec.transverse_area * p_res[1]
        elif q == "coeff_energy":
            values[q] = e_res[0] * lz ** dim
            errors[q] = e_res[1] * lz ** dim
        elif q == "coeff_pressure":
            values[q] = p_res[0] * lz ** (dim + 1)
            errors[q] = p_res[1] * lz ** (dim + 1)
        elif q == "sea_split":
            # Fermi-sea part: sum over fields of E(mu) - E(mu=0); the mu=0
            # evaluation is shared between fields of equal mass/degeneracy
            dirac_cache: dict = {}
            fermi = 0.0
            errs = []
            for f, tres in zip(fields, e_parts):
                key = (f.mass, f.degeneracy)
                if key not in dirac_cache:
                    dirac_cache[key] = casimir_energy(f.at_mu(0.0), spec.boundary,
                                                      dim, lz, temp, tol)
                dres = dirac_cache[key]
                fermi += tres.value - dres.value
                errs.extend([tres.abs_error_estimate, dres.abs_error_estimate])
                converged &= dres.converged
            values[q] = fermi
            errors[q] = _rss(errs)
        elif q == "period":
            try:
                values[q] = predicted_period(fields[0], spec.boundary)
            except NoFermiSea:
                values[q] = math.nan
            errors[q] = 0.0
        elif q == "beat":
            if len(fields) >= 2:
                try:
                    beat = predicted_beat_period(fields[0], fields[1], spec.boundary)
                    values[q] = math.nan if beat is None else beat
                except NoFermiSea:
                    values[q] = math.nan
            else:
                values[q] = math.nan
            errors[q] = 0.0
    return OutputRecord(lz=lz, fieldset=_fieldset_index(spec, icfg), dim=dim,
                        temperature=temp, values=values, errors=errors,
                        converged=converged)


def _eval_task(args) -> tuple[int, int, OutputRecord | PointFailure]:
    spec, ilz, icfg, lz = args
    _, dim, temp = spec.configs()[icfg]
    try:
        return ilz, icfg, _evaluate_point(spec, icfg, lz)
    except Exception as exc:  # noqa: BLE001 - failures become report entries
        return ilz, icfg, PointFailure(lz=lz, fieldset=_fieldset_index(spec, icfg),
                                       dim=dim, temperature=temp,
                                       reason=f"{type(exc).__name__}: {exc}")


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate all requested quantities on the full grid.

    Rows are ordered by L_z ascending, then by configuration index; the
    output is deterministic for a fixed spec regardless of ``workers``.
    """
    grid = spec.lz_grid()
    configs = spec.configs()
    tasks = [(spec, ilz, icfg, float(lz))
             for ilz, lz in enumerate(grid) for icfg in range(len(configs))]
    if spec.workers == 1:
        outcomes = [_eval_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            chunk = max(1, len(tasks) // (4 * spec.workers))
            outcomes = list(pool.map(_eval_task, tasks, chunksize=chunk))
    outcomes.sort(key=lambda o: (o[0], o[1]))

    records: list[OutputRecord] = []
    failures: list[PointFailure] = []
    for ilz, icfg, out in outcomes:
        if isinstance(out, PointFailure):
            failures.append(out)
            _, dim, temp = configs[icfg]
            nan = {q: math.nan for q in spec.quantities}
            records.append(OutputRecord(lz=float(grid[ilz]),
                                        fieldset=_fieldset_index(spec, icfg),
                                        dim=dim, temperature=temp,
                                        values=dict(nan), errors=dict(nan),
                                        converged=False))
        else:
            records.append(out)
    return SweepResult(spec=spec, records=records, failures=failures)


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _spec_dict(spec: SweepSpec) -> dict:
    return {
        "fieldsets": [[{"mass": f.mass, "mu": f.mu, "degeneracy": f.degeneracy}
                       for f in fs] for fs in spec.fieldsets],
        "boundary": spec.boundary.value,
        "lz_min": spec.lz_min,
        "lz_max": spec.lz_max,
        "lz_points": spec.lz_points,
        "lz_scale": spec.lz_scale,
        "dims": list(spec.dims),
        "temperatures": list(spec.temperatures),
        "quantities": list(spec.quantities),
        "transverse_area": spec.transverse_area,
        "rel_tol": spec.rel_tol,
        "abs_tol": spec.abs_tol,
        "workers": spec.workers,
        "output": spec.output,
        "fmt": spec.fmt,
    }


def emit(result: SweepResult, fmt: Optional[str] = None) -> str:
    """Serialize a sweep result to CSV or JSON text.

    CSV columns: lz, then each requested quantity followed by its _err
    column, then converged (0/1); floats carry 12 significant digits, so
    emit -> parse -> emit round-trips byte-identically.  JSON nests the
    rows under "records" and echoes the sweep spec under "spec".
    """
    fmt = fmt or result.spec.fmt
    qs = result.spec.quantities
    if fmt == "csv":
        lines = []
        header = ["lz"]
        for q in qs:
            header += [q, f"{q}_err"]
        header.append("converged")
        lines.append(",".join(header))
        for r in result.records:
            row = [_fmt(r.lz)]
            for q in qs:
                row += [_fmt(r.values[q]), _fmt(r.errors[q])]
            row.append("1" if r.converged else "0")
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = {
            "spec": _spec_dict(result.spec),
            "records": [
                {
                    "lz": r.lz,
                    "fieldset": r.fieldset,
                    "dim": r.dim,
                    "temperature": r.temperature,
                    "values": r.values,
                    "errors": r.errors,
                    "converged": r.converged,
                }
                for r in result.records
            ],
            "failures": [
                {"lz": f.lz, "fieldset": f.fieldset, "dim": f.dim,
                 "temperature": f.temperature, "reason": f.reason}
                for f in result.failures
            ],
        }
        return json.dumps(payload, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def parse_csv(text: str) -> tuple[list[str], list[list[float]]]:
    """Parse emitted CSV back into (header, rows of floats)."""
    lines = [ln for ln in text.strip().splitlines() if ln]
    header = lines[0].split(",")
    rows = [[float(tok) for tok in ln.split(",")] for ln in lines[1:]]
    return header, rows
