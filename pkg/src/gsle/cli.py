"""Config parsing, experiment orchestration and file output.

Config files are sectioned key = value text (configparser syntax). Every
key is validated against the table below; unknown sections or keys are
errors. The fully resolved configuration is echoed to
``resolved_config.txt`` in the output directory and is itself a valid
config file (round-trip parseable).

Sections and keys (defaults in parentheses):

  [experiment] mode (gsle) | classical | compare | bohmian-post;
               seed (0); ensemble_seeds (1); workers (1)
  [grid]       x_min (-20); x_max (20); n_points (512)
  [physics]    hbar (1); mass (1)
  [potential]  kind (harmonic): free|harmonic|linear_ramp|double_well|cubic;
               omega (1); center (0); b (1); a (1); c (1)
  [coupling]   kind (linear): linear|constant|power|sinusoidal|gup;
               c (1); n (2); amplitude (1); wavenumber (1)
  [run]        dt (0.005); n_steps (1000); friction (0); kappa (0);
               sign (damping); snapshot_stride (0)
  [noise]      kind (zero): zero|white|bath; temperature (0);
               cutoff (50); n_oscillators (500)
  [initial]    kind (gaussian): gaussian|eigenstate; x0 (0); p0 (0);
               sigma (1); index (0); omega (1)
  [classical]  n_particles (1000); sigma_x (= initial sigma);
               sigma_p (= hbar / (2 sigma))
  [output]     observables (true); snapshots (false); trajectories (false);
               weak_values (false); n_trajectories (1000)

Outputs: observables.csv, snapshots/psi_<step>.csv, trajectories.csv,
weak_values_<step>.csv, comparison.csv, resolved_config.txt, error.json.
Every CSV carries the master seed and the sha256 digest of the resolved
config as leading comment lines, so reruns are byte-identical.
Exit codes: 0 success, 2 numerical failure, 3 config error.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .bath import OhmicSpec
from .bohmian import polar_decompose, propagate_trajectories, weak_value
from .classical import GaussianCloud, LangevinConfig, langevin_ensemble
from .coupling import CouplingFunction, gup_coupling
from .errors import ConfigError, GsleError, NumericalBlowup
from .evolve import (
    GaussianPacket,
    HarmonicEigenstate,
    NoiseSpec,
    RunRecord,
    SimConfig,
    run,
)
from .fields import Grid, PhysicalParams, WaveFunction
from .potentials import PotentialSpec

_FLOAT = "%.17g"

# (section, key) -> default as config text. The parser fills these in and
# rejects anything not listed here.
_KEY_TABLE = {
    "experiment": {
        "mode": "gsle",
        "seed": "0",
        "ensemble_seeds": "1",
        "workers": "1",
    },
    "grid": {"x_min": "-20", "x_max": "20", "n_points": "512"},
    "physics": {"hbar": "1", "mass": "1"},
    "potential": {
        "kind": "harmonic",
        "omega": "1",
        "center": "0",
        "b": "1",
        "a": "1",
        "c": "1",
    },
    "coupling": {
        "kind": "linear",
        "c": "1",
        "n": "2",
        "amplitude": "1",
        "wavenumber": "1",
    },
    "run": {
        "dt": "0.005",
        "n_steps": "1000",
        "friction": "0",
        "kappa": "0",
        "sign": "damping",
        "snapshot_stride": "0",
    },
    "noise": {
        "kind": "zero",
        "temperature": "0",
        "cutoff": "50",
        "n_oscillators": "500",
    },
    "initial": {
        "kind": "gaussian",
        "x0": "0",
        "p0": "0",
        "sigma": "1",
        "index": "0",
        "omega": "1",
    },
    "classical": {"n_particles": "1000", "sigma_x": "", "sigma_p": ""},
    "output": {
        "observables": "true",
        "snapshots": "false",
        "trajectories": "false",
        "weak_values": "false",
        "n_trajectories": "1000",
    },
}

_MODES = ("gsle", "classical", "compare", "bohmian-post")


@dataclass(frozen=True)
class ExperimentSpec:
    mode: str
    sim: SimConfig
    classical: Optional[LangevinConfig]
    ensemble_seeds: int
    workers: int
    seed: int
    emit_observables: bool
    emit_snapshots: bool
    emit_trajectories: bool
    emit_weak_values: bool
    n_trajectories: int
    resolved_text: str
    digest: str


def _getfloat(resolved, section, key):
    raw = resolved[section][key]
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not a number")


def _getint(resolved, section, key):
    raw = resolved[section][key]
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not an integer")


def _getbool(resolved, section, key):
    raw = resolved[section][key].strip().lower()
    if raw in ("true", "yes", "1", "on"):
        return True
    if raw in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"[{section}] {key} = {raw!r} is not a boolean")


def _resolve(text: str) -> dict:
    """Merge the document onto the default table; reject unknown keys."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}")
    resolved = {sec: dict(defaults) for sec, defaults in _KEY_TABLE.items()}
    for section in parser.sections():
        if section not in _KEY_TABLE:
            raise ConfigError(f"unknown section [{section}]")
        for key, value in parser.items(section):
            if key not in _KEY_TABLE[section]:
                raise ConfigError(f"unknown key '{key}' in section [{section}]")
            resolved[section][key] = value.strip()
    return resolved


def _build_potential(resolved) -> PotentialSpec:
    kind = resolved["potential"]["kind"]
    if kind == "free":
        return PotentialSpec.free()
    if kind == "harmonic":
        return PotentialSpec.harmonic(
            omega=_getfloat(resolved, "potential", "omega"),
            mass=_getfloat(resolved, "physics", "mass"),
            center=_getfloat(resolved, "potential", "center"),
        )
    if kind == "linear_ramp":
        return PotentialSpec.linear_ramp(_getfloat(resolved, "potential", "b"))
    if kind == "double_well":
        return PotentialSpec.double_well(
            a=_getfloat(resolved, "potential", "a"),
            b=_getfloat(resolved, "potential", "b"),
        )
    if kind == "cubic":
        return PotentialSpec.cubic(_getfloat(resolved, "potential", "c"))
    raise ConfigError(f"unknown potential kind '{kind}'")


def _build_coupling(resolved, potential, grid) -> CouplingFunction:
    kind = resolved["coupling"]["kind"]
    if kind == "linear":
        return CouplingFunction.linear()
    if kind == "constant":
        return CouplingFunction.constant(_getfloat(resolved, "coupling", "c"))
    if kind == "power":
        return CouplingFunction.power(_getint(resolved, "coupling", "n"))
    if kind == "sinusoidal":
        return CouplingFunction.sinusoidal(
            _getfloat(resolved, "coupling", "amplitude"),
            _getfloat(resolved, "coupling", "wavenumber"),
        )
    if kind == "gup":
        return gup_coupling(potential, grid)
    raise ConfigError(f"unknown coupling kind '{kind}'")


def _build_noise(resolved) -> NoiseSpec:
    kind = resolved["noise"]["kind"]
    temperature = _getfloat(resolved, "noise", "temperature")
    if kind == "zero":
        return NoiseSpec()
    if kind == "white":
        return NoiseSpec(kind="white", temperature=temperature)
    if kind == "bath":
        ohmic = OhmicSpec(
            friction=_getfloat(resolved, "run", "friction"),
            cutoff=_getfloat(resolved, "noise", "cutoff"),
            n_oscillators=_getint(resolved, "noise", "n_oscillators"),
            temperature=temperature,
        )
        return NoiseSpec(kind="bath", temperature=temperature, ohmic=ohmic)
    raise ConfigError(f"unknown noise kind '{kind}'")


def _build_initial(resolved):
    kind = resolved["initial"]["kind"]
    if kind == "gaussian":
        return GaussianPacket(
            x0=_getfloat(resolved, "initial", "x0"),
            p0=_getfloat(resolved, "initial", "p0"),
            sigma=_getfloat(resolved, "initial", "sigma"),
        )
    if kind == "eigenstate":
        return HarmonicEigenstate(
            index=_getint(resolved, "initial", "index"),
            omega=_getfloat(resolved, "initial", "omega"),
        )
    raise ConfigError(f"unknown initial state kind '{kind}'")


def _render(resolved) -> str:
    lines = []
    for section, table in resolved.items():
        lines.append(f"[{section}]")
        for key, value in table.items():
            lines.append(f"{key} = {value}")
        lines.append("")
    return "\n".join(lines)


def parse_config(
    text: str, seed_override: Optional[int] = None, workers_override: Optional[int] = None
) -> ExperimentSpec:
    """Validate a config document and resolve it into an ExperimentSpec."""
    resolved = _resolve(text)
    if seed_override is not None:
        resolved["experiment"]["seed"] = str(int(seed_override))
    if workers_override is not None:
        resolved["experiment"]["workers"] = str(int(workers_override))

    mode = resolved["experiment"]["mode"]
    if mode not in _MODES:
        raise ConfigError(f"mode must be one of {_MODES}, got '{mode}'")
    seed = _getint(resolved, "experiment", "seed")
    ensemble_seeds = _getint(resolved, "experiment", "ensemble_seeds")
    workers = _getint(resolved, "experiment", "workers")
    if ensemble_seeds < 1:
        raise ConfigError("ensemble_seeds must be >= 1")
    if workers < 1:
        raise ConfigError("workers must be >= 1")

    grid = Grid(
        _getfloat(resolved, "grid", "x_min"),
        _getfloat(resolved, "grid", "x_max"),
        _getint(resolved, "grid", "n_points"),
    )
    params = PhysicalParams(
        hbar=_getfloat(resolved, "physics", "hbar"),
        mass=_getfloat(resolved, "physics", "mass"),
    )
    potential = _build_potential(resolved)
    coupling = _build_coupling(resolved, potential, grid)
    noise = _build_noise(resolved)
    initial = _build_initial(resolved)

    sim = SimConfig(
        grid=grid,
        params=params,
        potential=potential,
        coupling=coupling,
        friction=_getfloat(resolved, "run", "friction"),
        noise=noise,
        kappa=_getfloat(resolved, "run", "kappa"),
        dt=_getfloat(resolved, "run", "dt"),
        n_steps=_getint(resolved, "run", "n_steps"),
        seed=seed,
        sign=resolved["run"]["sign"],
        initial_state=initial,
        snapshot_stride=_getint(resolved, "run", "snapshot_stride"),
    )

    classical = None
    if mode in ("classical", "compare"):
        if not isinstance(initial, GaussianPacket):
            raise ConfigError("classical runs need a gaussian initial state")
        sigma_x_raw = resolved["classical"]["sigma_x"]
        sigma_p_raw = resolved["classical"]["sigma_p"]
        sigma_x = float(sigma_x_raw) if sigma_x_raw else initial.sigma
        sigma_p = (
            float(sigma_p_raw)
            if sigma_p_raw
            else params.hbar / (2.0 * initial.sigma)
        )
        resolved["classical"]["sigma_x"] = _FLOAT % sigma_x
        resolved["classical"]["sigma_p"] = _FLOAT % sigma_p
        classical = LangevinConfig(
            params=params,
            potential=potential,
            coupling=coupling,
            friction=sim.friction,
            noise=noise,
            dt=sim.dt,
            n_steps=sim.n_steps,
            n_particles=_getint(resolved, "classical", "n_particles"),
            initial=GaussianCloud(
                x0=initial.x0, p0=initial.p0, sigma_x=sigma_x, sigma_p=sigma_p
            ),
        )

    resolved_text = _render(resolved)
    digest = hashlib.sha256(resolved_text.encode()).hexdigest()
    return ExperimentSpec(
        mode=mode,
        sim=sim,
        classical=classical,
        ensemble_seeds=ensemble_seeds,
        workers=workers,
        seed=seed,
        emit_observables=_getbool(resolved, "output", "observables"),
        emit_snapshots=_getbool(resolved, "output", "snapshots"),
        emit_trajectories=_getbool(resolved, "output", "trajectories"),
        emit_weak_values=_getbool(resolved, "output", "weak_values"),
        n_trajectories=_getint(resolved, "output", "n_trajectories"),
        resolved_text=resolved_text,
        digest=digest,
    )


def _header_lines(spec: ExperimentSpec):
    return [f"# seed = {spec.seed}", f"# config_sha256 = {spec.digest}"]


def _write_csv(path: Path, spec: ExperimentSpec, columns, rows, extra_comments=()):
    """Deterministic CSV: fixed float format, '' for masked cells."""
    lines = _header_lines(spec) + list(extra_comments)
    lines.append(",".join(columns))
    for row in rows:
        cells = []
        for v in row:
            if v is None or (isinstance(v, float) and np.isnan(v)):
                cells.append("")
            elif isinstance(v, (int, np.integer)):
                cells.append(str(int(v)))
            else:
                cells.append(_FLOAT % v)
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


def _write_observables(path: Path, spec: ExperimentSpec, rec: RunRecord):
    cols = ("t", "norm", "mean_x", "mean_p", "var_x", "energy", "W", "xi")
    rows = zip(
        rec.times, rec.norm, rec.mean_x, rec.mean_p, rec.var_x, rec.energy, rec.W, rec.xi
    )
    _write_csv(path, spec, cols, rows)


def _write_snapshot(path: Path, spec: ExperimentSpec, psi: WaveFunction):
    grid = psi.grid
    meta = (
        f"# grid x_min = {_FLOAT % grid.x_min} x_max = {_FLOAT % grid.x_max} "
        f"n_points = {grid.n_points}",
    )
    rows = zip(grid.x, psi.values.real, psi.values.imag)
    _write_csv(path, spec, ("x", "re", "im"), rows, extra_comments=meta)


def _write_weak_values(path: Path, spec: ExperimentSpec, psi: WaveFunction, params):
    wv = weak_value(polar_decompose(psi, hbar=params.hbar), params)
    grid = psi.grid
    rows = [
        (x, None, None) if masked else (x, re, im)
        for x, re, im, masked in zip(
            grid.x, wv.real_part.values, wv.imag_part.values, wv.node_mask
        )
    ]
    _write_csv(path, spec, ("x", "re_p", "im_p"), rows)


def _write_trajectories(path: Path, spec: ExperimentSpec, ensemble):
    n = ensemble.positions.shape[0]
    cols = ("t",) + tuple(f"x_{i + 1}" for i in range(n))
    rows = (
        (t,) + tuple(ensemble.positions[:, k])
        for k, t in enumerate(ensemble.times)
    )
    _write_csv(path, spec, cols, rows)


def _member_record(args) -> RunRecord:
    """Worker entry point: rebuild the run from text (picklable payload)."""
    text, member_seed = args
    import warnings

    spec = parse_config(text)
    sim = SimConfig(
        grid=spec.sim.grid,
        params=spec.sim.params,
        potential=spec.sim.potential,
        coupling=spec.sim.coupling,
        friction=spec.sim.friction,
        noise=spec.sim.noise,
        kappa=spec.sim.kappa,
        dt=spec.sim.dt,
        n_steps=spec.sim.n_steps,
        seed=member_seed,
        sign=spec.sim.sign,
        initial_state=spec.sim.initial_state,
        snapshot_stride=0,
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rec = run(sim)
    rec.snapshots = []
    return rec


def _run_ensemble(spec: ExperimentSpec, out: Path):
    """GSLE ensemble: per-member observables plus one merged summary."""
    member_seeds = [spec.seed + i for i in range(spec.ensemble_seeds)]
    payload = [(spec.resolved_text, s) for s in member_seeds]
    if spec.workers > 1 and spec.ensemble_seeds > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            records = list(pool.map(_member_record, payload))
    else:
        records = [_member_record(p) for p in payload]
    members_dir = out / "members"
    members_dir.mkdir(exist_ok=True)
    for seed, rec in zip(member_seeds, records):
        member_dir = members_dir / f"seed_{seed}"
        member_dir.mkdir(exist_ok=True)
        _write_observables(member_dir / "observables.csv", spec, rec)
    return member_seeds, records


def _ensemble_stats(records):
    mean_x = np.array([r.mean_x for r in records])
    mean_p = np.array([r.mean_p for r in records])
    var_x = np.array([r.var_x for r in records])
    n = len(records)
    se = lambda a: a.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.zeros(a.shape[1])
    return {
        "t": records[0].times,
        "mean_x": mean_x.mean(axis=0),
        "stderr_x": se(mean_x),
        "mean_p": mean_p.mean(axis=0),
        "stderr_p": se(mean_p),
        "var_x": var_x.mean(axis=0),
    }


def _run_gsle(spec: ExperimentSpec, out: Path) -> int:
    if spec.ensemble_seeds > 1:
        seeds, records = _run_ensemble(spec, out)
        stats = _ensemble_stats(records)
        cols = ("t", "mean_x", "stderr_x", "mean_p", "stderr_p", "var_x")
        _write_csv(
            out / "ensemble_summary.csv",
            spec,
            cols,
            zip(*(stats[c] for c in cols)),
            extra_comments=(f"# ensemble_seeds = {len(seeds)}",),
        )
        return 0
    rec = run(spec.sim)
    if spec.emit_observables:
        _write_observables(out / "observables.csv", spec, rec)
    if rec.snapshots:
        params = spec.sim.params
        if spec.emit_snapshots:
            snap_dir = out / "snapshots"
            snap_dir.mkdir(exist_ok=True)
            for step, psi in rec.snapshots:
                _write_snapshot(snap_dir / f"psi_{step}.csv", spec, psi)
        if spec.emit_weak_values:
            for step, psi in rec.snapshots:
                _write_weak_values(out / f"weak_values_{step}.csv", spec, psi, params)
        if spec.emit_trajectories:
            times = spec.sim.dt * np.array([s for s, _ in rec.snapshots], dtype=float)
            ens = propagate_trajectories(
                [psi for _, psi in rec.snapshots],
                times,
                spec.n_trajectories,
                spec.seed,
                params,
            )
            _write_trajectories(out / "trajectories.csv", spec, ens)
    return 0


def _run_classical(spec: ExperimentSpec, out: Path) -> int:
    ens = langevin_ensemble(spec.classical, spec.seed)
    cols = ("t", "mean_x", "mean_p", "var_x", "stderr_x", "stderr_p")
    rows = zip(ens.times, ens.mean_x, ens.mean_p, ens.var_x, ens.stderr_x, ens.stderr_p)
    _write_csv(out / "observables.csv", spec, cols, rows)
    return 0


def _run_compare(spec: ExperimentSpec, out: Path) -> int:
    seeds, records = _run_ensemble(spec, out)
    q = _ensemble_stats(records)
    cl = langevin_ensemble(spec.classical, spec.seed)
    comb_x = np.sqrt(q["stderr_x"] ** 2 + cl.stderr_x**2)
    comb_p = np.sqrt(q["stderr_p"] ** 2 + cl.stderr_p**2)
    with np.errstate(divide="ignore", invalid="ignore"):
        score_x = np.abs(q["mean_x"] - cl.mean_x) / comb_x
        score_p = np.abs(q["mean_p"] - cl.mean_p) / comb_p
    # t = 0 has zero quantum spread across seeds; exclude indeterminate cells
    finite_x = score_x[np.isfinite(score_x)]
    finite_p = score_p[np.isfinite(score_p)]
    max_x = float(finite_x.max()) if finite_x.size else 0.0
    max_p = float(finite_p.max()) if finite_p.size else 0.0
    cols = (
        "t",
        "mean_x_q", "stderr_x_q", "mean_x_cl", "stderr_x_cl", "score_x",
        "mean_p_q", "stderr_p_q", "mean_p_cl", "stderr_p_cl", "score_p",
        "var_x_q", "var_x_cl",
    )
    rows = zip(
        q["t"],
        q["mean_x"], q["stderr_x"], cl.mean_x, cl.stderr_x, score_x,
        q["mean_p"], q["stderr_p"], cl.mean_p, cl.stderr_p, score_p,
        q["var_x"], cl.var_x,
    )
    _write_csv(
        out / "comparison.csv",
        spec,
        cols,
        rows,
        extra_comments=(
            f"# ensemble_seeds = {len(seeds)}",
            f"# n_particles = {spec.classical.n_particles}",
            f"# max_score_x = {_FLOAT % max_x}",
            f"# max_score_p = {_FLOAT % max_p}",
        ),
    )
    return 0


def _load_snapshot(path: Path) -> WaveFunction:
    meta = None
    data = []
    for line in path.read_text().splitlines():
        if line.startswith("# grid"):
            parts = line.replace("=", " ").split()
            meta = Grid(float(parts[3]), float(parts[5]), int(parts[7]))
        elif line.startswith("#") or line.startswith("x,"):
            continue
        elif line.strip():
            _, re_s, im_s = line.split(",")
            data.append(complex(float(re_s), float(im_s)))
    if meta is None:
        raise ConfigError(f"{path} has no grid metadata line")
    return WaveFunction(meta, np.array(data))


def _run_post(run_dir: Path, out: Path, seed_override: Optional[int]) -> int:
    cfg_path = run_dir / "resolved_config.txt"
    if not cfg_path.exists():
        raise ConfigError(f"no resolved_config.txt in {run_dir}")
    spec = parse_config(cfg_path.read_text(), seed_override=seed_override)
    snap_dir = run_dir / "snapshots"
    paths = sorted(
        snap_dir.glob("psi_*.csv"), key=lambda p: int(p.stem.split("_")[1])
    )
    if not paths:
        raise ConfigError(f"no snapshots found under {snap_dir}")
    steps = [int(p.stem.split("_")[1]) for p in paths]
    history = [_load_snapshot(p) for p in paths]
    times = spec.sim.dt * np.array(steps, dtype=float)
    ens = propagate_trajectories(
        history, times, spec.n_trajectories, spec.seed, spec.sim.params
    )
    _write_trajectories(out / "trajectories.csv", spec, ens)
    for step, psi in zip(steps, history):
        _write_weak_values(out / f"weak_values_{step}.csv", spec, psi, spec.sim.params)
    return 0


def run_experiment(spec: ExperimentSpec, out_dir) -> int:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "resolved_config.txt").write_text(spec.resolved_text)
    if spec.mode == "gsle":
        return _run_gsle(spec, out)
    if spec.mode == "classical":
        return _run_classical(spec, out)
    if spec.mode == "compare":
        return _run_compare(spec, out)
    raise ConfigError(f"mode '{spec.mode}' cannot be launched from run_experiment")


def _write_error(out_dir, exc: Exception, code: int):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    record = {"type": type(exc).__name__, "message": str(exc), "exit_code": code}
    if isinstance(exc, NumericalBlowup) and getattr(exc, "t", None) is not None:
        record["t"] = exc.t
    (out / "error.json").write_text(json.dumps(record, indent=2) + "\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gsle", description="nonlinear stochastic wave-equation experiments"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, src in (("run", "config"), ("compare", "config"), ("post", "run_dir")):
        p = sub.add_parser(name)
        p.add_argument(src)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--out", default="gsle_out")
    args = parser.parse_args(argv)

    try:
        if args.command == "post":
            return _run_post(Path(args.run_dir), _ensure_out(args.out), args.seed)
        text = Path(args.config).read_text()
        spec = parse_config(
            text, seed_override=args.seed, workers_override=args.workers
        )
        if args.command == "compare" and spec.mode != "compare":
            raise ConfigError(
                "the compare command needs mode = compare in [experiment]"
            )
        return run_experiment(spec, args.out)
    except ConfigError as exc:
        _write_error(args.out, exc, 3)
        print(f"config error: {exc}", file=sys.stderr)
        return 3
    except (NumericalBlowup, GsleError) as exc:
        _write_error(args.out, exc, 2)
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


def _ensure_out(out) -> Path:
    p = Path(out)
    p.mkdir(parents=True, exist_ok=True)
    return p


if __name__ == "__main__":
    sys.exit(main())
