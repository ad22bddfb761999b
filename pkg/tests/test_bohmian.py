"""Polar decomposition, guiding momentum, trajectories, weak values."""

import numpy as np
import pytest

from conftest import gaussian_state, plane_wave
from gsle.bohmian import (
    equivariance_distance,
    guiding_momentum,
    polar_decompose,
    propagate_trajectories,
    sample_from_density,
    tilde_phase_forms,
    weak_value,
)
from gsle.coupling import CouplingFunction
from gsle.errors import DegenerateState, InsufficientData
from gsle.evolve import (
    GaussianPacket,
    HarmonicEigenstate,
    SimConfig,
    build_initial_state,
    run,
)
from gsle.fields import Grid, WaveFunction, spectral_derivative
from gsle.potentials import PotentialSpec, current


class TestPolarDecompose:
    def test_plane_wave_many_wraps(self, grid, params):
        # 10 full phase wraps across the box: the unwrapped action must be
        # exactly linear, no residual 2*pi jumps
        psi, k = plane_wave(grid, 10)
        polar = polar_decompose(psi)
        s = polar.S.values
        jumps = np.diff(s) - k * grid.dx
        assert np.abs(jumps).max() < 1e-10

    def test_real_gaussian(self, grid):
        psi = gaussian_state(grid)
        polar = polar_decompose(psi)
        sel = ~polar.node_mask
        assert np.abs(polar.S.values[sel]).max() < 1e-10
        assert np.allclose(polar.A.values, np.abs(psi.values))

    def test_first_excited_state_lobes(self, grid):
        cfg = SimConfig(
            grid=grid,
            potential=PotentialSpec.harmonic(1.0),
            initial_state=HarmonicEigenstate(1, 1.0),
        )
        psi = build_initial_state(cfg)
        polar = polar_decompose(psi)
        assert polar.node_mask.any()
        x = grid.x
        left = polar.S.values[(x < -0.5) & ~polar.node_mask][0]
        right = polar.S.values[(x > 0.5) & ~polar.node_mask][0]
        # sign flip across the node is a phase jump of pi (mod 2 pi)
        assert np.cos(right - left) == pytest.approx(-1.0, abs=1e-10)

    def test_reconstruction(self, grid):
        psi = gaussian_state(grid, x0=1.0, p0=2.3)
        polar = polar_decompose(psi)
        back = polar.reconstruct()
        sel = ~polar.node_mask
        assert np.abs(back.values[sel] - psi.values[sel]).max() < 1e-8

    def test_zero_state(self, grid):
        with pytest.raises(DegenerateState):
            polar_decompose(WaveFunction(grid, np.zeros(512, dtype=complex)))


class TestGuidingMomentum:
    def test_plane_wave(self, grid, params):
        psi, k = plane_wave(grid, 6)
        p = guiding_momentum(polar_decompose(psi), params).values
        assert np.abs(p - k).max() < 1e-8

    def test_real_state(self, grid, params):
        psi = gaussian_state(grid)
        p = guiding_momentum(polar_decompose(psi), params).values
        assert np.abs(p).max() < 1e-8

    def test_boosted_gaussian(self, grid, params):
        psi = gaussian_state(grid, p0=1.4)
        polar = polar_decompose(psi)
        p = guiding_momentum(polar, params).values
        sel = ~polar.node_mask
        assert np.abs(p[sel] - 1.4).max() < 1e-8

    def test_matches_current_ratio(self, grid, params):
        """p = dS/dx must equal m J / |psi|^2 where the density resolves."""
        psi = gaussian_state(grid, x0=0.5, p0=1.1, sigma=1.2)
        polar = polar_decompose(psi)
        p = guiding_momentum(polar, params).values
        rho = psi.density()
        sel = rho > 1e-6 * rho.max()
        ratio = params.mass * current(psi, params).values[sel] / rho[sel]
        assert np.abs(p[sel] - ratio).max() / np.abs(ratio).max() < 1e-6


class TestTildePhase:
    def test_linear_coupling_recovers_action(self, grid, params):
        psi = gaussian_state(grid, p0=0.9)
        polar = polar_decompose(psi)
        _, form2 = tilde_phase_forms(polar, CouplingFunction.linear(), params)
        diff = form2.values - polar.S.values
        rho = psi.density()
        sel = rho > 1e-8 * rho.max()   # where the phase is resolvable
        assert diff[sel].std() < 1e-6

    def test_constant_coupling_vanishes(self, grid, params):
        psi = gaussian_state(grid, p0=0.9)
        polar = polar_decompose(psi)
        _, form2 = tilde_phase_forms(polar, CouplingFunction.constant(3.0), params)
        assert np.abs(form2.values).max() < 1e-10

    def test_quadratic_coupling_cubic_phase(self, params):
        # S = p0 x with f = x^2 gives a coupling phase (4/3) p0 x^3 + const
        g = Grid(-10.0, 10.0, 1024)
        p0 = 0.37
        rho = np.exp(-(g.x**2) / 2.0)
        psi = WaveFunction(g, np.sqrt(rho) * np.exp(1j * p0 * g.x))
        polar = polar_decompose(psi)
        form1, form2 = tilde_phase_forms(polar, CouplingFunction.power(2), params)
        sel = ~polar.node_mask
        expected = (4.0 / 3.0) * p0 * g.x**3
        resid = form1.values[sel] - expected[sel]
        assert resid.std() < 1e-8 * np.abs(expected).max()
        # the two equivalent forms differ by a constant only
        d = (form1.values - form2.values)[sel]
        assert d.std() < 1e-6 * np.abs(d.mean()) + 1e-10


class TestWeakValue:
    def test_plane_wave(self, grid, params):
        psi, k = plane_wave(grid, 6)
        wv = weak_value(polar_decompose(psi), params)
        assert np.abs(wv.real_part.values - k).max() < 1e-8
        assert np.abs(wv.imag_part.values).max() < 1e-8

    def test_real_gaussian_osmotic(self, grid, params):
        # density e^{-x^2/2}: osmotic part is +x/2 in natural units
        psi = gaussian_state(grid, sigma=1.0)
        wv = weak_value(polar_decompose(psi), params)
        i1 = np.argmin(np.abs(grid.x - 1.0))
        assert wv.imag_part.values[i1] == pytest.approx(
            grid.x[i1] / 2.0, abs=1e-8
        )

    def test_definitional_oracle_synthetic(self, grid, params):
        """(-i hbar dpsi)/psi == real + i*imag on an analytic state."""
        psi = gaussian_state(grid, x0=0.5, p0=1.3, sigma=1.1)
        polar = polar_decompose(psi)
        wv = weak_value(polar, params)
        dpsi = spectral_derivative(grid, psi.values, 1)
        rho = psi.density()
        sel = rho > 1e-8 * rho.max()
        oracle = -1j * dpsi[sel] / psi.values[sel]
        ours = wv.real_part.values[sel] + 1j * wv.imag_part.values[sel]
        assert np.abs(ours - oracle).max() < 1e-8


class TestTrajectories:
    def test_stationary_state_frozen(self, grid, params):
        cfg = SimConfig(
            grid=grid,
            potential=PotentialSpec.harmonic(1.0),
            initial_state=GaussianPacket(0.0, 0.0, np.sqrt(0.5)),
        )
        psi = build_initial_state(cfg)
        times = np.linspace(0.0, 1.0, 11)
        ens = propagate_trajectories([psi] * 11, times, 200, 4, params)
        drift = np.abs(ens.positions - ens.positions[:, :1]).max()
        assert drift < 1e-8

    def test_broad_packet_drifts_at_p0(self, params):
        g = Grid(-40.0, 40.0, 1024)
        psi = gaussian_state(g, p0=2.0, sigma=6.0)
        times = np.linspace(0.0, 0.5, 6)
        ens = propagate_trajectories([psi] * 6, times, 500, 5, params)
        v = (ens.positions[:, -1] - ens.positions[:, 0]) / 0.5
        assert np.abs(v - 2.0).max() < 0.02

    def test_free_spreading_variance(self, grid, params):
        cfg = SimConfig(
            grid=grid,
            potential=PotentialSpec.free(),
            dt=0.005,
            n_steps=200,
            snapshot_stride=10,
            initial_state=GaussianPacket(0.0, 0.0, 1.0),
        )
        rec = run(cfg)
        times = cfg.dt * np.array([s for s, _ in rec.snapshots])
        ens = propagate_trajectories(
            [p for _, p in rec.snapshots], times, 10_000, 6, params
        )
        sim_var = ens.positions[:, -1].var()
        assert sim_var == pytest.approx(rec.var_x[-1], rel=0.03)

    def test_empty_history(self, params):
        with pytest.raises(InsufficientData):
            propagate_trajectories([], np.array([]), 10, 0, params)


class TestEquivariance:
    def test_initial_sampling_within_ks_bound(self, grid):
        psi = gaussian_state(grid, sigma=1.5)
        n = 4000
        rng = np.random.default_rng(8)
        samples = sample_from_density(psi, n, rng)
        from gsle.bohmian import TrajectoryEnsemble

        ens = TrajectoryEnsemble(
            times=np.array([0.0]), positions=samples[:, None], seed=8
        )
        d = equivariance_distance(ens, psi, 0)
        assert d < 1.63 / np.sqrt(n)    # 99% KS critical value

    def test_wrong_velocity_field_fails(self, grid, params):
        """Doubling the velocity field must break equivariance."""
        cfg = SimConfig(
            grid=grid,
            potential=PotentialSpec.free(),
            dt=0.005,
            n_steps=200,
            snapshot_stride=20,
            initial_state=GaussianPacket(0.0, 3.0, 1.0),
        )
        rec = run(cfg)
        times = cfg.dt * np.array([s for s, _ in rec.snapshots])
        history = [p for _, p in rec.snapshots]
        doubled = [
            WaveFunction(grid, np.abs(p.values) * np.exp(2j * np.angle(p.values)))
            for p in history
        ]
        n = 4000
        good = propagate_trajectories(history, times, n, 9, params)
        bad = propagate_trajectories(doubled, times, n, 9, params)
        bound = 1.63 / np.sqrt(n)
        assert equivariance_distance(good, history[-1], len(times) - 1) < 0.05
        assert equivariance_distance(bad, history[-1], len(times) - 1) > 0.05
