"""System-bath coupling functions f(x) and their first two derivatives.

Analytic kinds (linear, constant, power, sinusoidal) plus cubic-spline
tabulated couplings, including the coupling derived from a monotone
potential, f(x) = integral_0^x sqrt(V'(y)) dy.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import NonmonotonePotential, OutOfDomain, UnsupportedOrder
from .fields import Grid, cumulative_integral


class CouplingFunction:
    """f(x) with f' and f'' evaluable at any grid point.

    Use the factory classmethods; `kind` records how it was built.
    """

    def __init__(self, kind, funcs=None, splines=None, domain=None):
        self.kind = kind
        self._funcs = funcs          # tuple (f, f', f'') of vectorized callables
        self._splines = splines      # tuple of splines for tabulated kinds
        self.domain = domain         # (lo, hi) for tabulated kinds

    # ---- factories -------------------------------------------------------

    @classmethod
    def linear(cls):
        return cls(
            "linear",
            funcs=(
                lambda x: np.asarray(x, dtype=float),
                lambda x: np.ones_like(np.asarray(x, dtype=float)),
                lambda x: np.zeros_like(np.asarray(x, dtype=float)),
            ),
        )

    @classmethod
    def constant(cls, c=1.0):
        return cls(
            "constant",
            funcs=(
                lambda x: np.full_like(np.asarray(x, dtype=float), c),
                lambda x: np.zeros_like(np.asarray(x, dtype=float)),
                lambda x: np.zeros_like(np.asarray(x, dtype=float)),
            ),
        )

    @classmethod
    def power(cls, n):
        n = float(n)
        return cls(
            f"power({n:g})",
            funcs=(
                lambda x: np.asarray(x, dtype=float) ** n,
                lambda x: n * np.asarray(x, dtype=float) ** (n - 1),
                lambda x: n * (n - 1) * np.asarray(x, dtype=float) ** (n - 2),
            ),
        )

    @classmethod
    def sinusoidal(cls, a=1.0, k=1.0):
        a, k = float(a), float(k)
        return cls(
            f"sinusoidal(a={a:g},k={k:g})",
            funcs=(
                lambda x: a * np.sin(k * np.asarray(x, dtype=float)),
                lambda x: a * k * np.cos(k * np.asarray(x, dtype=float)),
                lambda x: -a * k * k * np.sin(k * np.asarray(x, dtype=float)),
            ),
        )

    @classmethod
    def tabulated(cls, x, f, df=None, d2f=None):
        """Cubic splines with not-a-knot ends; derivative tables optional.

        When df/d2f are omitted they come from differentiating the f spline.
        """
        x = np.asarray(x, dtype=float)
        sp = CubicSpline(x, np.asarray(f, dtype=float), bc_type="not-a-knot")
        sp1 = (
            CubicSpline(x, np.asarray(df, dtype=float), bc_type="not-a-knot")
            if df is not None
            else sp.derivative(1)
        )
        sp2 = (
            CubicSpline(x, np.asarray(d2f, dtype=float), bc_type="not-a-knot")
            if d2f is not None
            else sp.derivative(2)
        )
        return cls(
            "tabulated",
            splines=(sp, sp1, sp2),
            domain=(float(x[0]), float(x[-1])),
        )

    # ---- evaluation ------------------------------------------------------

    def __call__(self, x, order=0):
        if order not in (0, 1, 2):
            raise UnsupportedOrder(f"derivative order must be 0, 1 or 2, got {order}")
        x = np.asarray(x, dtype=float)
        if self._splines is not None:
            lo, hi = self.domain
            tol = 1e-9 * max(1.0, abs(hi - lo))
            if np.any(x < lo - tol) or np.any(x > hi + tol):
                raise OutOfDomain(
                    f"x outside tabulation range [{lo:g}, {hi:g}]"
                )
            return self._splines[order](np.clip(x, lo, hi))
        return self._funcs[order](x)

    def on_grid(self, grid: Grid, order=0) -> np.ndarray:
        return np.asarray(self(grid.x, order), dtype=float)


def eval_coupling(f: CouplingFunction, x, order=0):
    """Functional form of CouplingFunction.__call__."""
    return f(x, order)


def gup_coupling(V, grid: Grid, vprime_floor: float = 1e-8) -> CouplingFunction:
    """Coupling f(x) = integral_0^x sqrt(V'(y)) dy for a monotone potential.

    f' = sqrt(V'), f'' = V''/(2 sqrt(V')); f'' is set to 0 at isolated zeros
    of V' (removable singularity). V must satisfy V' >= 0 on the grid.

    `V` is any object exposing derivatives via V(x, order), e.g. a
    PotentialSpec from the potentials module.
    """
    x = grid.x
    vp = np.asarray(V(x, 1), dtype=float)
    if np.any(vp < -1e-12 * max(1.0, np.abs(vp).max())):
        raise NonmonotonePotential(
            "V'(x) < 0 on the grid; sqrt(V') coupling undefined"
        )
    vp = np.maximum(vp, 0.0)
    fp = np.sqrt(vp)
    fv = cumulative_integral(grid, fp)
    # anchor f(0) = 0 (linear interpolation if 0 is off-grid)
    fv -= np.interp(0.0, x, fv)
    vpp = np.asarray(V(x, 2), dtype=float)
    fpp = np.where(vp > vprime_floor, vpp / (2.0 * np.sqrt(np.maximum(vp, vprime_floor))), 0.0)
    return CouplingFunction.tabulated(x, fv, df=fp, d2f=fpp)
