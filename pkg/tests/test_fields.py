"""Grid, quadrature, spectral calculus and observables."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import gaussian_state, plane_wave
from gsle.errors import DegenerateState, InvalidField, UnsupportedOrder
from gsle.fields import (
    ComplexField,
    Grid,
    PhysicalParams,
    RealField,
    boundary_density,
    cumulative_integral,
    differentiate,
    expectation,
    integrate,
    integrate_values,
    kinetic_energy,
    mean_momentum,
    norm_squared,
    normalize,
    observables,
    spectral_derivative,
)


class TestGrid:
    def test_points_and_spacing(self):
        g = Grid(0.0, 10.0, 16)
        assert g.dx == pytest.approx(0.625)
        assert g.x[0] == 0.0
        assert g.x[-1] == pytest.approx(10.0 - g.dx)
        assert g.length == 10.0

    def test_rejects_non_power_of_two(self):
        with pytest.raises(InvalidField):
            Grid(0.0, 1.0, 100)

    def test_rejects_too_few_points(self):
        with pytest.raises(InvalidField):
            Grid(0.0, 1.0, 4)

    def test_rejects_empty_interval(self):
        with pytest.raises(InvalidField):
            Grid(1.0, 1.0, 16)


class TestFieldValidation:
    def test_length_mismatch(self):
        g = Grid(0.0, 1.0, 16)
        with pytest.raises(InvalidField):
            RealField(g, np.zeros(8))

    def test_non_finite_samples(self):
        g = Grid(0.0, 1.0, 16)
        vals = np.zeros(16)
        vals[3] = np.inf
        with pytest.raises(InvalidField):
            RealField(g, vals)

    def test_params_positive(self):
        with pytest.raises(InvalidField):
            PhysicalParams(hbar=-1.0)


class TestIntegrate:
    def test_constant(self):
        g = Grid(0.0, 10.0, 64)
        assert integrate(RealField(g, np.ones(64))) == pytest.approx(10.0)

    def test_zero(self):
        g = Grid(0.0, 10.0, 64)
        assert integrate(RealField(g, np.zeros(64))) == 0.0

    def test_sin_squared(self):
        # exact for band-limited periodic integrands
        L = 7.0
        g = Grid(0.0, L, 128)
        f = RealField(g, np.sin(2 * np.pi * g.x / L) ** 2)
        assert integrate(f) == pytest.approx(L / 2, abs=1e-12)

    def test_non_finite_rejected(self):
        g = Grid(0.0, 1.0, 16)
        f = RealField(g, np.ones(16))
        object.__setattr__(f, "values", np.full(16, np.nan))
        with pytest.raises(InvalidField):
            integrate(f)

    @settings(max_examples=25, deadline=None)
    @given(
        a=st.floats(-10, 10, allow_nan=False),
        b=st.floats(-10, 10, allow_nan=False),
        seed=st.integers(0, 2**31),
    )
    def test_linearity(self, a, b, seed):
        g = Grid(-5.0, 5.0, 64)
        rng = np.random.default_rng(seed)
        f = rng.standard_normal(64)
        h = rng.standard_normal(64)
        lhs = integrate(RealField(g, a * f + b * h))
        rhs = a * integrate(RealField(g, f)) + b * integrate(RealField(g, h))
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


class TestCumulativeIntegral:
    def test_starts_at_zero(self):
        g = Grid(-5.0, 5.0, 64)
        out = cumulative_integral(g, np.cos(g.x))
        assert out[0] == 0.0

    def test_matches_antiderivative(self):
        from scipy.special import erf

        def err(n):
            g = Grid(-8.0, 8.0, n)
            out = cumulative_integral(g, np.exp(-g.x**2))
            exact = 0.5 * np.sqrt(np.pi) * (erf(g.x) - erf(g.x[0]))
            return np.abs(out - exact).max()

        assert err(512) < 1e-7
        # fourth-order convergence under grid doubling
        assert err(1024) < err(512) / 12.0


class TestDifferentiate:
    def test_constant_is_zero(self):
        g = Grid(-5.0, 5.0, 64)
        d = differentiate(ComplexField(g, np.ones(64, dtype=complex)))
        assert np.abs(d.values).max() < 1e-12

    def test_plane_wave_eigenfunction(self, grid):
        psi, k = plane_wave(grid, 5)
        d = differentiate(psi, 1)
        assert np.abs(d.values - 1j * k * psi.values).max() < 1e-10

    def test_gaussian_second_derivative(self, grid):
        f = ComplexField(grid, np.exp(-grid.x**2 / 2).astype(complex))
        d2 = differentiate(f, 2)
        exact = (grid.x**2 - 1) * np.exp(-grid.x**2 / 2)
        assert np.abs(d2.values - exact).max() < 1e-8

    def test_twice_first_equals_second(self, grid):
        f = ComplexField(grid, np.exp(-grid.x**2 / 4) * np.exp(1j * grid.x))
        once_twice = differentiate(differentiate(f, 1), 1)
        second = differentiate(f, 2)
        assert np.abs(once_twice.values - second.values).max() < 1e-8

    def test_bad_order(self, grid):
        f = ComplexField(grid, np.ones(512, dtype=complex))
        with pytest.raises(UnsupportedOrder):
            differentiate(f, 3)

    def test_parseval(self, grid):
        psi = gaussian_state(grid, x0=1.0, p0=2.0)
        pos = norm_squared(psi)
        fk = np.fft.fft(psi.values)
        spec = np.sum(np.abs(fk) ** 2) / grid.n_points * grid.dx
        assert pos == pytest.approx(spec, rel=1e-10)


class TestExpectation:
    def test_constant_observable(self, grid):
        psi = gaussian_state(grid)
        obs = RealField(grid, np.full(512, 3.25))
        assert expectation(psi, obs) == pytest.approx(3.25)

    def test_symmetric_mean_x(self, grid):
        psi = gaussian_state(grid)
        assert expectation(psi, RealField(grid, grid.x)) == pytest.approx(
            0.0, abs=1e-10
        )

    def test_gaussian_second_moment(self, grid):
        psi = gaussian_state(grid, sigma=1.0)
        assert expectation(psi, RealField(grid, grid.x**2)) == pytest.approx(
            1.0, abs=1e-6
        )

    def test_zero_norm(self, grid):
        psi = ComplexField(grid, np.zeros(512, dtype=complex))
        with pytest.raises(DegenerateState):
            expectation(psi, RealField(grid, grid.x))


class TestObservables:
    def test_plane_wave_momentum(self, grid, params):
        psi, k = plane_wave(grid, 7)
        obs = observables(psi, RealField(grid, np.zeros(512)), params)
        assert obs.mean_p == pytest.approx(params.hbar * k, abs=1e-10)

    def test_real_gaussian_momentum_zero(self, grid, params):
        psi = gaussian_state(grid)
        assert mean_momentum(psi, params) == pytest.approx(0.0, abs=1e-12)

    def test_harmonic_ground_state_energy(self, grid, params):
        # ground state of V = x^2/2 at hbar = m = omega = 1
        psi = gaussian_state(grid, sigma=np.sqrt(0.5))
        V = RealField(grid, 0.5 * grid.x**2)
        obs = observables(psi, V, params)
        assert obs.energy == pytest.approx(0.5, abs=1e-6)

    def test_kinetic_energy_plane_wave(self, grid, params):
        psi, k = plane_wave(grid, 4)
        assert kinetic_energy(psi, params) == pytest.approx(
            k**2 / 2, rel=1e-10
        )

    def test_boundary_density_centered_packet(self, grid):
        psi = gaussian_state(grid, sigma=1.0)
        assert boundary_density(psi) < 1e-12

    def test_boundary_density_edge_packet(self, grid):
        psi = gaussian_state(grid, x0=19.0, sigma=1.0)
        assert boundary_density(psi) > 1e-3


def test_normalize(grid):
    psi = ComplexField(grid, np.exp(-grid.x**2 / 4) * 5.0)
    assert norm_squared(normalize(psi)) == pytest.approx(1.0, abs=1e-12)


def test_normalize_zero_state(grid):
    with pytest.raises(DegenerateState):
        normalize(ComplexField(grid, np.zeros(512, dtype=complex)))


def test_integrate_values_matches_integrate(grid):
    vals = np.sin(grid.x)
    assert integrate_values(grid, vals) == pytest.approx(
        integrate(RealField(grid, vals))
    )
