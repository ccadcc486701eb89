"""Command-line front end: run benchmark cases and write CSV/JSON outputs.

Exit codes: 0 on success, 1 when the simulation or a reference solver fails,
2 for configuration problems.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .config import CASES, CaseConfig, ConfigError, load_config_file
from .kernels import KernelSpec, build_kernel, kernel_to_json
from .pde import RunResult, SimulationError, run_case
from .reference import OracleError, fit_convergence_rate

# config-file / flag spellings -> CaseConfig field names
_FIELD_MAP = {
    "case": "case",
    "N": "n",
    "Nx": "nx",
    "Ny": "ny",
    "m": "m",
    "k": "k",
    "Nd": "n_d",
    "dt": "dt",
    "tfinal": "t_final",
    "probe_x": "probe_x",
    "epsilon": "epsilon",
    "grids": "grids",
    "out": "out",
    "workers": "workers",
}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="deltafilter",
        description="Chebyshev collocation with delta-kernel shock filtering",
    )
    p.add_argument("--case", choices=CASES, help="benchmark case to run")
    p.add_argument("--config", help="TOML or JSON file with run parameters")
    p.add_argument("--N", type=int, dest="N", help="grid order (1D cases)")
    p.add_argument("--Nx", type=int, dest="Nx", help="x grid order (explosion)")
    p.add_argument("--Ny", type=int, dest="Ny", help="y grid order (explosion)")
    p.add_argument("--m", type=int, help="kernel moment count (odd)")
    p.add_argument("--k", type=int, help="kernel smoothness order")
    p.add_argument("--Nd", type=float, dest="Nd", help="kernel support in node spacings")
    p.add_argument("--dt", type=float, help="time step")
    p.add_argument("--tfinal", type=float, help="final time")
    p.add_argument("--epsilon", type=float, help="kernel support half-width override")
    p.add_argument("--probe-x", type=float, dest="probe_x", help="probe location (advection)")
    p.add_argument("--grids", help="comma-separated grid orders for a convergence sweep")
    p.add_argument("--out", help="output directory (default: out)")
    p.add_argument("--workers", type=int, help="parallel workers for sweeps")
    return p


def _merge_config(args: argparse.Namespace) -> CaseConfig:
    fields: dict = {}
    if args.config:
        for key, value in load_config_file(args.config).items():
            if key not in _FIELD_MAP:
                raise ConfigError(
                    f"unknown config key {key!r}; expected one of {', '.join(_FIELD_MAP)}"
                )
            fields[_FIELD_MAP[key]] = value
    for key, field in _FIELD_MAP.items():
        if key == "case":
            value = args.case
        else:
            value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            fields[field] = value
    if "case" not in fields or fields["case"] is None:
        raise ConfigError("no case given; pass --case or a config file with one")
    if isinstance(fields.get("grids"), str):
        try:
            fields["grids"] = tuple(int(tok) for tok in fields["grids"].split(",") if tok)
        except ValueError:
            raise ConfigError(f"could not parse grid list {fields['grids']!r}")
    elif isinstance(fields.get("grids"), (list, tuple)):
        fields["grids"] = tuple(fields["grids"])
    return CaseConfig(**fields)


def _fmt(value: float) -> str:
    return "%.17g" % value


def _config_header(cfg: CaseConfig) -> str:
    return "# config: " + json.dumps(cfg.to_dict(), sort_keys=True)


def _solution_columns(res: RunResult) -> list[tuple[str, np.ndarray]]:
    if res.case == "explosion":
        gx, gy = np.meshgrid(res.x, res.y, indexing="ij")
        cols = [("x", gx.ravel()), ("y", gy.ravel())]
        cols += [(name, arr.ravel()) for name, arr in res.components.items()]
        return cols
    cols = [("x", res.x)] + list(res.components.items())
    if res.reference:
        cols += [(f"{name}_ref", arr) for name, arr in res.reference.items()]
        if res.report is not None:
            primary = next(iter(res.reference))
            cols.append((f"abs_err_{primary}", res.report.pointwise))
    return cols


def _write_csv(path: str, cfg: CaseConfig, cols: list[tuple[str, np.ndarray]]) -> None:
    data = np.column_stack([c[1] for c in cols])
    with open(path, "w") as fh:
        fh.write(_config_header(cfg) + "\n")
        fh.write(",".join(name for name, _ in cols) + "\n")
        np.savetxt(fh, data, fmt="%.17g", delimiter=",")


def _write_norms(path: str, res: RunResult) -> None:
    payload = {
        "case": res.case,
        "config": res.config.to_dict(),
        "epsilon": res.epsilon,
        "steps": res.steps,
        "filter_applications": res.filter_applications,
        "runtime_s": res.runtime_s,
        "linf": res.report.linf if res.report else None,
        "l2": res.report.l2 if res.report else None,
        "probe": res.probe,
        "mass_drift": res.mass_drift,
        "reference_note": res.reference_note,
        "aux": res.aux or None,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_run(res: RunResult, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    _write_csv(os.path.join(out_dir, "solution.csv"), res.config, _solution_columns(res))
    _write_norms(os.path.join(out_dir, "norms.json"), res)
    if res.radial is not None:
        _write_csv(
            os.path.join(out_dir, "radial.csv"),
            res.config,
            [("r", res.radial["r"]), ("rho_axis", res.radial["axis"]),
             ("rho_diag", res.radial["diagonal"])],
        )


def _write_kernel(out_dir: str, cfg: CaseConfig) -> None:
    kernel = build_kernel(KernelSpec(cfg.m, cfg.k))
    with open(os.path.join(out_dir, "kernel.json"), "w") as fh:
        fh.write(kernel_to_json(kernel) + "\n")


def _sweep_member(cfg: CaseConfig, n: int) -> CaseConfig:
    if cfg.case == "explosion":
        return dataclasses.replace(cfg, nx=n, ny=n, grids=None)
    return dataclasses.replace(cfg, n=n, grids=None)


def _sweep_error(res: RunResult) -> float:
    if res.probe is not None:
        return res.probe["error"]
    if res.report is None:
        raise SimulationError(f"case {res.case} yields no error measure to sweep")
    return res.report.linf


def _run_sweep(cfg: CaseConfig, out_dir: str) -> None:
    members = [_sweep_member(cfg, n) for n in cfg.grids]
    workers = cfg.workers or 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_case, members))
    else:
        results = [run_case(member) for member in members]
    rows = []
    for n, res in zip(cfg.grids, results):
        _write_run(res, os.path.join(out_dir, f"N{n}"))
        rows.append((n, res.epsilon, _sweep_error(res)))
    rate = fit_convergence_rate([r[1] for r in rows], [r[2] for r in rows])
    cols = [
        ("n", np.array([float(r[0]) for r in rows])),
        ("epsilon", np.array([r[1] for r in rows])),
        ("error", np.array([r[2] for r in rows])),
        ("fitted_rate", np.full(len(rows), rate)),
    ]
    _write_csv(os.path.join(out_dir, "convergence.csv"), cfg, cols)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _merge_config(args).resolved()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out_dir = cfg.out or "out"
    try:
        os.makedirs(out_dir, exist_ok=True)
        _write_kernel(out_dir, cfg)
        if cfg.grids:
            _run_sweep(cfg, out_dir)
        else:
            _write_run(run_case(cfg), out_dir)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SimulationError, OracleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
