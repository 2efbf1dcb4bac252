"""Command-line front end: sweeps, single evaluations, oracle comparisons.

Subcommands:

* ``sweep``  -- run a SweepSpec built from flags and/or a config file
* ``eval``   -- one grid point, printed as a single record
* ``oracle`` -- Lifshitz evaluator vs the independent mode-sum oracles
* ``preset`` -- run a bundled figure-reproduction config (fig1 .. fig6)

Configuration files are flat ``key = value`` text mirroring the sweep
spec fields (lists comma-separated, ``#`` comments); command-line flags
override file values.  All configuration is explicit -- no environment
variables are consulted.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from typing import Optional, Sequence

from .model import BoundaryKind, FieldSpec, Tolerances
from .lifshitz import casimir_energy_T0
from .observables import sea_split
from .oracles import FermiSumSpec, LatticeSpec, fermi_sea_oracle, lattice_oracle
from .sweep import QUANTITIES, SweepResult, SweepSpec, emit, run_sweep

_CONFIG_KEYS = ("mass", "mu", "mu2", "degeneracy", "temperature", "bc", "dim",
                "lz_min", "lz_max", "lz_points", "lz_scale", "quantities",
                "rel_tol", "abs_tol", "workers", "output", "format", "area")


def parse_config_text(text: str) -> dict:
    """Parse flat key = value configuration text."""
    out: dict = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {ln}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise ValueError(f"config line {ln}: unknown key {key!r}")
        out[key] = value
    return out


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mass", type=str, help="field mass(es), comma separated")
    p.add_argument("--mu", type=str, help="chemical potential(s), comma separated")
    p.add_argument("--mu2", type=float, help="chemical potential of an optional second field")
    p.add_argument("--degeneracy", type=float, help="extra degeneracy multiplier")
    p.add_argument("--temperature", type=str, help="temperature(s), comma separated")
    p.add_argument("--bc", type=str, choices=["pbc", "apbc", "mit", "dirichlet"],
                   help="boundary condition")
    p.add_argument("--dim", type=str, help="spatial dimension(s), comma separated")
    p.add_argument("--rel-tol", type=float, dest="rel_tol")
    p.add_argument("--abs-tol", type=float, dest="abs_tol")
    p.add_argument("--format", type=str, choices=["csv", "json"], dest="format")
    p.add_argument("--output", type=str, help="output path (default: stdout)")


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    _add_common_flags(p)
    p.add_argument("--lz-min", type=float, dest="lz_min")
    p.add_argument("--lz-max", type=float, dest="lz_max")
    p.add_argument("--lz-points", type=int, dest="lz_points")
    p.add_argument("--lz-scale", type=str, choices=["linear", "log"], dest="lz_scale")
    p.add_argument("--quantities", type=str,
                   help=f"comma list from {', '.join(QUANTITIES)}")
    p.add_argument("--workers", type=int)
    p.add_argument("--area", type=float, help="transverse area for the force quantity")
    p.add_argument("--config", type=str, help="flat key = value config file")


_DEFAULTS = {
    "mass": "0.0", "mu": "0.0", "degeneracy": 1.0, "temperature": "0.0",
    "bc": "pbc", "dim": "3", "lz_scale": "linear", "quantities": "energy",
    "rel_tol": 1e-8, "abs_tol": 1e-12, "workers": 1, "format": "csv",
    "area": 1.0,
}


def _build_sweep_spec(cfg: dict) -> SweepSpec:
    merged = dict(_DEFAULTS)
    merged.update({k: v for k, v in cfg.items() if v is not None})
    for key in ("lz_min", "lz_max", "lz_points"):
        if key not in merged or merged[key] is None:
            raise ValueError(f"missing required sweep parameter {key}")
    deg = float(merged["degeneracy"])
    masses = _floats(str(merged["mass"]))
    mus = _floats(str(merged["mu"]))
    mu2 = merged.get("mu2")
    fieldsets = []
    for m in masses:
        for u in mus:
            fs = [FieldSpec(m, u, deg)]
            if mu2 is not None:
                fs.append(FieldSpec(m, float(mu2), deg))
            fieldsets.append(tuple(fs))
    quantities = tuple(q.strip() for q in str(merged["quantities"]).split(",") if q.strip())
    return SweepSpec(
        fieldsets=tuple(fieldsets),
        boundary=BoundaryKind.parse(str(merged["bc"])),
        lz_min=float(merged["lz_min"]),
        lz_max=float(merged["lz_max"]),
        lz_points=int(merged["lz_points"]),
        lz_scale=str(merged["lz_scale"]),
        dims=_ints(str(merged["dim"])),
        temperatures=_floats(str(merged["temperature"])),
        quantities=quantities,
        transverse_area=float(merged["area"]),
        rel_tol=float(merged["rel_tol"]),
        abs_tol=float(merged["abs_tol"]),
        workers=int(merged["workers"]),
        output=merged.get("output"),
        fmt=str(merged["format"]),
    )


def _cli_overrides(args: argparse.Namespace) -> dict:
    keys = ("mass", "mu", "mu2", "degeneracy", "temperature", "bc", "dim",
            "lz_min", "lz_max", "lz_points", "lz_scale", "quantities",
            "rel_tol", "abs_tol", "workers", "output", "format", "area")
    return {k: getattr(args, k, None) for k in keys if getattr(args, k, None) is not None}


def _write_output(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _finish_sweep(result: SweepResult) -> int:
    text = emit(result)
    _write_output(text, result.spec.output)
    if result.failures:
        sys.stderr.write(f"{len(result.failures)} grid point(s) failed:\n")
        for f in result.failures:
            sys.stderr.write(f"  lz={f.lz:.6g} fieldset={f.fieldset} dim={f.dim} "
                             f"T={f.temperature:.6g}: {f.reason}\n")
        return 1
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg = parse_config_text(fh.read())
    cfg.update(_cli_overrides(args))
    return _finish_sweep(run_sweep(_build_sweep_spec(cfg)))


def preset_text(name: str) -> str:
    ref = resources.files("fermicas").joinpath(f"presets/{name}.cfg")
    if not ref.is_file():
        available = sorted(p.name[:-4] for p in
                           resources.files("fermicas").joinpath("presets").iterdir()
                           if p.name.endswith(".cfg"))
        raise ValueError(f"unknown preset {name!r}; available: {available}")
    return ref.read_text(encoding="utf-8")


def _cmd_preset(args: argparse.Namespace) -> int:
    cfg = parse_config_text(preset_text(args.name))
    cfg.update(_cli_overrides(args))
    return _finish_sweep(run_sweep(_build_sweep_spec(cfg)))


def _cmd_eval(args: argparse.Namespace) -> int:
    cfg = _cli_overrides(args)
    cfg.setdefault("lz_points", 2)
    cfg["lz_min"] = args.lz
    cfg["lz_max"] = args.lz * (1.0 + 1e-9)
    spec = _build_sweep_spec(cfg)
    from .sweep import _evaluate_point

    rec = _evaluate_point(spec, 0, args.lz)
    result = SweepResult(spec=spec, records=[rec], failures=[])
    _write_output(emit(result), spec.output)
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    cfg = _cli_overrides(args)
    field = FieldSpec(float(str(cfg.get("mass", "0.0")).split(",")[0]),
                      float(str(cfg.get("mu", "1.0")).split(",")[0]),
                      float(cfg.get("degeneracy", 1.0)))
    bc = BoundaryKind.parse(str(cfg.get("bc", "pbc")))
    dim = int(str(cfg.get("dim", "3")).split(",")[0])
    tol = Tolerances(rel_tol=float(cfg.get("rel_tol", 1e-9)),
                     abs_tol=float(cfg.get("abs_tol", 1e-13)))
    lines = []
    status = 0
    if args.which in ("fermi", "both"):
        split = sea_split(field, bc, dim, args.lz, 0.0, tol)
        orc = fermi_sea_oracle(FermiSumSpec(field, bc, dim, args.lz))
        denom = max(abs(orc), 1e-300)
        rel = abs(split.fermi - orc) / denom
        lines.append(f"fermi_sea: lifshitz={split.fermi:.12g} oracle={orc:.12g} "
                     f"rel_dev={rel:.3e}")
    if args.which in ("lattice", "both"):
        if field.mu <= 0:
            raise ValueError("lattice comparison needs mu > 0 to set the spacing via --mu-a")
        spacing = args.mu_a / field.mu
        sites = max(2, int(round(args.lz / spacing)))
        lat = lattice_oracle(LatticeSpec(field, sites, spacing,
                                         wilson_r=args.wilson_r, dim=dim))
        lif = casimir_energy_T0(field, bc, dim, sites * spacing, tol)
        rel = abs(lat - lif.value) / max(abs(lif.value), 1e-300)
        lines.append(f"lattice (N={sites}, a={spacing:.6g}): lifshitz={lif.value:.12g} "
                     f"oracle={lat:.12g} rel_dev={rel:.3e}")
    _write_output("\n".join(lines) + "\n", cfg.get("output"))
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fermicas",
        description="Casimir energy/pressure/force for Dirac fields at finite "
                    "chemical potential (natural units, hbar = c = 1)")
    sub = ap.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("sweep", help="run a separation sweep")
    _add_sweep_flags(ps)
    ps.set_defaults(func=_cmd_sweep)

    pe = sub.add_parser("eval", help="evaluate a single point")
    _add_common_flags(pe)
    pe.add_argument("--lz", type=float, required=True, help="plate separation")
    pe.add_argument("--quantities", type=str,
                    help=f"comma list from {', '.join(QUANTITIES)}")
    pe.add_argument("--area", type=float)
    pe.set_defaults(func=_cmd_eval)

    po = sub.add_parser("oracle", help="compare the evaluators against mode-sum oracles")
    _add_common_flags(po)
    po.add_argument("--lz", type=float, required=True)
    po.add_argument("--which", type=str, choices=["fermi", "lattice", "both"],
                    default="both")
    po.add_argument("--mu-a", type=float, dest="mu_a", default=0.08,
                    help="lattice spacing in units of 1/mu")
    po.add_argument("--wilson-r", type=float, dest="wilson_r", default=1.0)
    po.set_defaults(func=_cmd_oracle)

    pp = sub.add_parser("preset", help="run a bundled figure-reproduction sweep")
    pp.add_argument("name", type=str, help="preset name, e.g. fig1")
    _add_sweep_flags(pp)
    pp.set_defaults(func=_cmd_preset)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
