"""Strang-split propagation of the nonlinear stochastic wave equation.

One step is: half kinetic kick (spectral), full potential kick with the
state-dependent terms recomputed at a predictor midpoint, half kinetic
kick. The gauge term W(t) = <V_d> is subtracted explicitly every step
instead of tracking the global-phase transformation.

The anti-Hermitian measurement kick multiplies the density-shape factor
rho^(-kappa*dt) and then restores the pre-kick norm. The restoring scalar
is exactly the mean-subtraction constant evaluated as a step average
(the continuous equation conserves the norm; a frozen <ln rho> would not,
discretely). The state is never renormalized beyond this: norm drift from
any other source remains visible in the record.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .bath import BathSpec, NoiseRealization, OhmicSpec, discretize_ohmic, sample_bath_noise, white_noise
from .coupling import CouplingFunction
from .errors import (
    ConfigError,
    InsufficientData,
    NumericalBlowup,
    StabilityWarning,
)
from .fields import (
    ComplexField,
    Grid,
    PhysicalParams,
    RealField,
    WaveFunction,
    cumulative_integral,
    density_floor,
    integrate_values,
    normalize,
    observables,
    spectral_derivative,
)
from .potentials import PotentialSpec

BOUNDARY_DENSITY_LIMIT = 1e-6


@dataclass(frozen=True)
class NoiseSpec:
    kind: str = "zero"               # zero | white | bath
    temperature: float = 0.0
    ohmic: Optional[OhmicSpec] = None
    bath: Optional[BathSpec] = None

    def __post_init__(self):
        if self.kind not in ("zero", "white", "bath"):
            raise ConfigError(f"unknown noise kind '{self.kind}'")


@dataclass(frozen=True)
class GaussianPacket:
    x0: float = 0.0
    p0: float = 0.0
    sigma: float = 1.0


@dataclass(frozen=True)
class HarmonicEigenstate:
    index: int = 0
    omega: float = 1.0


@dataclass(frozen=True)
class SimConfig:
    grid: Grid
    params: PhysicalParams = PhysicalParams()
    potential: PotentialSpec = None
    coupling: CouplingFunction = None
    friction: float = 0.0
    noise: NoiseSpec = NoiseSpec()
    kappa: float = 0.0
    dt: float = 0.005
    n_steps: int = 1
    seed: int = 0
    sign: str = "damping"
    initial_state: object = GaussianPacket()
    snapshot_stride: int = 0         # 0 disables snapshots

    def __post_init__(self):
        if self.potential is None:
            object.__setattr__(self, "potential", PotentialSpec.free())
        if self.coupling is None:
            object.__setattr__(self, "coupling", CouplingFunction.linear())
        if self.dt <= 0:
            raise ConfigError("dt must be positive")
        if self.n_steps < 1:
            raise ConfigError("n_steps must be >= 1")
        if self.friction < 0:
            raise ConfigError("friction must be >= 0")
        if self.kappa < 0:
            raise ConfigError("kappa must be >= 0")
        if self.sign not in ("damping", "paper"):
            raise ConfigError(f"sign must be 'damping' or 'paper', got '{self.sign}'")


@dataclass(frozen=True)
class SimState:
    t: float
    psi: WaveFunction
    noise_cursor: int = 0


@dataclass
class RunRecord:
    times: np.ndarray
    norm: np.ndarray
    mean_x: np.ndarray
    mean_p: np.ndarray
    var_x: np.ndarray
    energy: np.ndarray
    W: np.ndarray
    xi: np.ndarray
    snapshots: list = field(default_factory=list)   # (step_index, WaveFunction)
    warnings: list = field(default_factory=list)
    seed: int = 0


def build_initial_state(config: SimConfig) -> WaveFunction:
    grid, params = config.grid, config.params
    x = grid.x
    init = config.initial_state
    if isinstance(init, GaussianPacket):
        vals = np.exp(
            -((x - init.x0) ** 2) / (4.0 * init.sigma**2)
            + 1j * init.p0 * x / params.hbar
        )
    elif isinstance(init, HarmonicEigenstate):
        a = params.mass * init.omega / params.hbar
        xi = np.sqrt(a) * x
        herm = np.polynomial.hermite.Hermite.basis(init.index)(xi)
        vals = herm * np.exp(-0.5 * xi**2)
    elif isinstance(init, WaveFunction):
        return normalize(init)
    else:
        raise ConfigError(f"unsupported initial state {init!r}")
    return normalize(WaveFunction(grid, vals))


def make_noise(config: SimConfig) -> NoiseRealization:
    """One noise value per step, sampled once up front."""
    times = config.dt * np.arange(config.n_steps)
    spec = config.noise
    if spec.kind == "zero":
        return NoiseRealization.zero(times)
    if spec.kind == "white":
        return white_noise(
            config.friction,
            spec.temperature,
            config.params.mass,
            config.dt,
            config.n_steps,
            config.seed,
        )
    bath = spec.bath
    if bath is None:
        if spec.ohmic is None:
            raise ConfigError("bath noise requires an OhmicSpec or explicit BathSpec")
        bath = discretize_ohmic(spec.ohmic, config.params.mass)
    return sample_bath_noise(bath, spec.temperature, times, config.seed)


class _Workspace:
    """Per-run precomputed arrays for the stepping kernel."""

    def __init__(self, config: SimConfig):
        grid, params = config.grid, config.params
        self.grid = grid
        self.params = params
        k = grid.k
        self.kin_half = np.exp(
            -1j * params.hbar * k**2 * config.dt / (4.0 * params.mass)
        )
        self.kprime = 1j * k
        self.kprime[grid.n_points // 2] = 0.0
        self.V = np.asarray(config.potential(grid.x, 0), dtype=float)
        self.f = config.coupling.on_grid(grid, 0)
        self.fp2 = config.coupling.on_grid(grid, 1) ** 2
        self.sign = +1.0 if config.sign == "damping" else -1.0
        self.friction = config.friction
        self.kappa = config.kappa
        self.dt = config.dt
        self._warned_stability = False

    def real_potential(self, vals: np.ndarray, xi_n: float):
        """(U, W): real potential (V_d - W included) and the gauge constant."""
        grid, params = self.grid, self.params
        u = self.V - self.f * xi_n
        w = 0.0
        if self.friction > 0.0:
            rho = np.abs(vals) ** 2
            eps = density_floor(rho)
            dpsi = np.fft.ifft(self.kprime * np.fft.fft(vals))
            j = (params.hbar / params.mass) * np.imag(np.conj(vals) * dpsi)
            integrand = self.fp2 * j / np.maximum(rho, eps)
            vd = (
                self.sign
                * params.mass
                * self.friction
                * cumulative_integral(grid, integrand)
            )
            n2 = integrate_values(grid, rho)
            w = integrate_values(grid, vd * rho) / n2
            u = u + vd - w
        return u, w

    def apply_potential(self, vals: np.ndarray, u: np.ndarray, tau: float):
        """Unitary kick for the real potential plus the measurement kick."""
        out = vals * np.exp(-1j * u * tau / self.params.hbar)
        if self.kappa > 0.0:
            # localizing sign: d psi/dt gains +kappa (ln rho - <ln rho>) psi
            rho = np.abs(out) ** 2
            g = np.log(np.maximum(rho, density_floor(rho)))
            factor = np.exp(self.kappa * tau * g)
            n_before = integrate_values(self.grid, rho)
            shaped = out * factor
            n_after = integrate_values(self.grid, np.abs(shaped) ** 2)
            # mean-subtraction constant, evaluated as a step average so the
            # anti-Hermitian term stays exactly traceless over the kick
            out = shaped * np.sqrt(n_before / n_after)
        return out

    def check_stability(self, u: np.ndarray):
        guard = self.dt * np.abs(u).max() / self.params.hbar
        if guard >= 0.5 and not self._warned_stability:
            self._warned_stability = True
            warnings.warn(
                f"dt*max|U|/hbar = {guard:.2f} >= 0.5; reduce dt", StabilityWarning
            )


def step(state: SimState, config: SimConfig, xi_n: float, ws: Optional[_Workspace] = None) -> SimState:
    """One Strang step with a midpoint predictor for the nonlinear terms."""
    if ws is None:
        ws = _Workspace(config)
    dt = config.dt
    vals = np.fft.ifft(ws.kin_half * np.fft.fft(state.psi.values))
    u1, _ = ws.real_potential(vals, xi_n)
    ws.check_stability(u1)
    mid = ws.apply_potential(vals, u1, 0.5 * dt)
    u2, _ = ws.real_potential(mid, xi_n)
    vals = ws.apply_potential(vals, u2, dt)
    vals = np.fft.ifft(ws.kin_half * np.fft.fft(vals))
    if not np.all(np.isfinite(vals)):
        raise NumericalBlowup(
            f"non-finite wavefunction at t = {state.t + dt:.6g}", t=state.t + dt
        )
    return SimState(
        t=state.t + dt,
        psi=WaveFunction(config.grid, vals),
        noise_cursor=state.noise_cursor + 1,
    )


def run(config: SimConfig) -> RunRecord:
    """Propagate n_steps, recording observables every step.

    Deterministic for a given (config, seed): the noise realization is
    generated once up front.
    """
    noise = make_noise(config)
    ws = _Workspace(config)
    psi = build_initial_state(config)
    state = SimState(t=0.0, psi=psi, noise_cursor=0)

    n = config.n_steps
    rec = RunRecord(
        times=np.empty(n + 1),
        norm=np.empty(n + 1),
        mean_x=np.empty(n + 1),
        mean_p=np.empty(n + 1),
        var_x=np.empty(n + 1),
        energy=np.empty(n + 1),
        W=np.empty(n + 1),
        xi=np.empty(n + 1),
        seed=config.seed,
    )
    v_field = RealField(config.grid, ws.V)
    stride = config.snapshot_stride

    def record(i, state, xi_n):
        obs = observables(state.psi, v_field, config.params)
        rec.times[i] = state.t
        rec.norm[i] = obs.norm
        rec.mean_x[i] = obs.mean_x
        rec.mean_p[i] = obs.mean_p
        rec.var_x[i] = obs.var_x
        rec.energy[i] = obs.energy
        rec.W[i] = ws.real_potential(state.psi.values, xi_n)[1]
        rec.xi[i] = xi_n
        if stride and i % stride == 0:
            rec.snapshots.append((i, state.psi))
        if obs.boundary_density > BOUNDARY_DENSITY_LIMIT:
            msg = (
                f"boundary density {obs.boundary_density:.2e} > "
                f"{BOUNDARY_DENSITY_LIMIT:g} at t = {state.t:.6g}"
            )
            if not any(w.startswith("BoundaryContamination") for w in rec.warnings):
                rec.warnings.append(f"BoundaryContamination: {msg}")

    record(0, state, noise.values[0] if n > 0 else 0.0)
    try:
        for i in range(n):
            xi_n = noise.values[i]
            state = step(state, config, xi_n, ws)
            record(i + 1, state, noise.values[min(i + 1, n - 1)])
    except NumericalBlowup as exc:
        exc.last_observables = {
            "t": rec.times[state.noise_cursor],
            "norm": rec.norm[state.noise_cursor],
            "mean_x": rec.mean_x[state.noise_cursor],
            "energy": rec.energy[state.noise_cursor],
        }
        raise
    return rec


def ehrenfest_residual(record: RunRecord, config: SimConfig) -> np.ndarray:
    """Residual of the averaged equation of motion on the snapshot stride.

    r(t) = m d2<x>/dt2 + m*friction*int Jt dx + <V'> - <f'> xi(t),
    with the acceleration from central differences of the recorded <x>.
    Returned at interior snapshot indices.
    """
    from .potentials import tilde_current as _jt

    snaps = [(i, psi) for i, psi in record.snapshots if 0 < i < len(record.times) - 1]
    if len(snaps) < 1 or len(record.times) < 3:
        raise InsufficientData("need snapshots at interior steps for the residual")
    m = config.params.mass
    dt = config.dt
    grid = config.grid
    vp = np.asarray(config.potential(grid.x, 1), dtype=float)
    fp = config.coupling.on_grid(grid, 1)
    out = np.empty(len(snaps))
    for j, (i, psi) in enumerate(snaps):
        acc = (record.mean_x[i + 1] - 2 * record.mean_x[i] + record.mean_x[i - 1]) / dt**2
        rho = psi.density()
        n2 = integrate_values(grid, rho)
        jt_int = integrate_values(grid, _jt(psi, config.coupling, config.params).values)
        mean_vp = integrate_values(grid, vp * rho) / n2
        mean_fp = integrate_values(grid, fp * rho) / n2
        out[j] = (
            m * acc + m * config.friction * jt_int + mean_vp - mean_fp * record.xi[i]
        )
    return out
