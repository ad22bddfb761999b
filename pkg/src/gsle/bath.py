"""Discrete oscillator bath, memory kernel and noise sampling.

The bath is a finite set of harmonic oscillators (masses m_i, frequencies
omega_i, couplings d_i). The kernel is

    kernel(t) = (1/m) sum_i d_i^2 / (m_i omega_i^2) cos(omega_i t)

and the noise is the free bath evolution of thermally sampled initial
conditions, shifted to the coupled minimum. Under that Gibbs preparation
the classical fluctuation-dissipation relation holds:
<xi(t) xi(0)> = m T kernel(t).

`friction` names the time-independent Ohmic constant (the delta-kernel
limit); `kernel(t)` names the memory function. They are distinct objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyBath, InvalidField


@dataclass(frozen=True)
class BathSpec:
    masses: np.ndarray
    frequencies: np.ndarray
    couplings: np.ndarray
    system_mass: float = 1.0

    def __post_init__(self):
        m = np.atleast_1d(np.asarray(self.masses, dtype=float))
        w = np.atleast_1d(np.asarray(self.frequencies, dtype=float))
        d = np.atleast_1d(np.asarray(self.couplings, dtype=float))
        if m.size == 0:
            raise EmptyBath("bath needs at least one oscillator")
        if not (m.size == w.size == d.size):
            raise InvalidField("bath arrays must have equal lengths")
        if np.any(m <= 0) or np.any(w <= 0):
            raise InvalidField("oscillator masses and frequencies must be positive")
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "frequencies", w)
        object.__setattr__(self, "couplings", d)

    @property
    def n_oscillators(self) -> int:
        return self.masses.size


@dataclass(frozen=True)
class OhmicSpec:
    friction: float
    cutoff: float
    n_oscillators: int
    temperature: float = 0.0

    def __post_init__(self):
        if self.friction < 0:
            raise InvalidField("friction must be >= 0")
        if self.cutoff <= 0:
            raise InvalidField("cutoff must be > 0")
        if self.temperature < 0:
            raise InvalidField("temperature must be >= 0")


@dataclass(frozen=True)
class NoiseRealization:
    times: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    seed: int = 0
    kind: str = "zero"

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape:
            raise InvalidField("times and values must have equal shapes")
        if t.size >= 3:
            dt = np.diff(t)
            if not np.allclose(dt, dt[0], rtol=1e-9, atol=1e-12):
                raise InvalidField("noise times must be uniformly spaced")
        if not np.all(np.isfinite(v)):
            raise InvalidField("noise values must be finite")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @classmethod
    def zero(cls, times):
        times = np.asarray(times, dtype=float)
        return cls(times, np.zeros_like(times), seed=0, kind="zero")


def memory_kernel(bath: BathSpec, t):
    """kernel(t) = (1/m) sum_i d_i^2/(m_i omega_i^2) cos(omega_i t)."""
    t = np.asarray(t, dtype=float)
    weights = bath.couplings**2 / (bath.masses * bath.frequencies**2)
    vals = (weights[:, None] * np.cos(np.outer(bath.frequencies, np.atleast_1d(t)))).sum(
        axis=0
    ) / bath.system_mass
    return vals[0] if t.ndim == 0 else vals


def discretize_ohmic(spec: OhmicSpec, system_mass: float = 1.0) -> BathSpec:
    """Equally spaced discretization whose kernel tends to 2*friction*delta(t).

    omega_i = i * dw with dw = cutoff/N, m_i = 1,
    d_i = omega_i sqrt(2 m friction m_i dw / pi); then
    kernel(t) ~ (2 friction/pi) sin(cutoff t)/t.
    """
    n = spec.n_oscillators
    if n <= 0:
        raise EmptyBath("n_oscillators must be >= 1")
    dw = spec.cutoff / n
    omega = dw * np.arange(1, n + 1)
    masses = np.ones(n)
    d = omega * np.sqrt(2.0 * system_mass * spec.friction * masses * dw / np.pi)
    return BathSpec(masses, omega, d, system_mass=system_mass)


def sample_bath_noise(
    bath: BathSpec, temperature: float, times, seed: int
) -> NoiseRealization:
    """Sample xi(t) from thermal (classical Gibbs) bath initial conditions.

    The shifted coordinates q_i = x_i(0) + d_i f(0)/(m_i omega_i^2) are
    zero-mean Gaussians with variance T/(m_i omega_i^2); momenta p_i(0)
    have variance m_i T. Then

        xi(t) = - sum_i d_i [ q_i cos(omega_i t) + (p_i/(m_i omega_i)) sin(omega_i t) ]
    """
    if temperature < 0:
        raise InvalidField("temperature must be >= 0")
    times = np.asarray(times, dtype=float)
    rng = np.random.default_rng(seed)
    m, w, d = bath.masses, bath.frequencies, bath.couplings
    q = rng.standard_normal(bath.n_oscillators) * np.sqrt(temperature / (m * w**2))
    p = rng.standard_normal(bath.n_oscillators) * np.sqrt(m * temperature)
    wt = np.outer(w, times)
    xi = -(d * q) @ np.cos(wt) - (d * p / (m * w)) @ np.sin(wt)
    return NoiseRealization(times, xi, seed=seed, kind="bath")


def white_noise(
    alpha: float,
    temperature: float,
    system_mass: float,
    dt: float,
    n_steps: int,
    seed: int,
) -> NoiseRealization:
    """i.i.d. Gaussian force, variance 2 m alpha T / dt per step.

    Held piecewise-constant over each step, so the discrete autocorrelation
    approximates 2 m alpha T delta(t - t').
    """
    if dt <= 0:
        raise InvalidField("dt must be > 0")
    times = dt * np.arange(n_steps)
    rng = np.random.default_rng(seed)
    sigma = np.sqrt(2.0 * system_mass * alpha * temperature / dt)
    return NoiseRealization(
        times, sigma * rng.standard_normal(n_steps), seed=seed, kind="white"
    )
