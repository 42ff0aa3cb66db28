"""Multiplicative gauge transform built from the corrector.

Conjugating the oscillatory operator H = -d2/dx2 + V(x, x/eps) by the factor
q(x) = 1 + eps^2 v(x, x/eps) turns it into the free operator minus eps times a
first-order perturbation L with compactly supported coefficients:

    (1/q) H (q phi) = -phi'' - eps * L[phi],
    L[phi] = eps * (2/q) * (dv/dx along the diagonal) * phi' - (f/q) * phi,
    f(x)   = eps*V*v - eps*v_xx - 2*v_x_xi     (evaluated at (x, x/eps)).

The identity is exact, which this module exposes as a per-point residual
check; everything is built from the closed-form corrector evaluators, so the
residual measures floating-point noise only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .averaging import DEFAULT_QUADRATURE, QuadratureConfig, fast_panel_grid
from .potentials import CorrectorBundle, TwoScaleFunction, build_corrector

# Largest allowed eps^2 * sup|v|; beyond this the gauge factor is no longer
# safely invertible.
_GAUGE_MARGIN = 0.5


@dataclass(frozen=True)
class TestFunction:
    """Scalar probe with exact first and second derivatives."""

    label: str
    f: Callable[[np.ndarray], np.ndarray]
    df: Callable[[np.ndarray], np.ndarray]
    d2f: Callable[[np.ndarray], np.ndarray]


def gaussian_bump(center: float, width: float, amplitude: float = 1.0) -> TestFunction:
    c, s, A = float(center), float(width), float(amplitude)

    def f(x):
        return A * np.exp(-((x - c) ** 2) / (2 * s * s))

    def df(x):
        return -(x - c) / (s * s) * f(x)

    def d2f(x):
        return (((x - c) ** 2) / s**4 - 1.0 / (s * s)) * f(x)

    return TestFunction(f"gauss(c={c:g},s={s:g},A={A:g})", f, df, d2f)


def poly_times_gaussian(coeffs: Sequence[float], center: float, width: float) -> TestFunction:
    """p(x) * exp(-(x-c)^2 / (2 s^2)) with p given by ascending coefficients."""
    c, s = float(center), float(width)
    p = np.polynomial.Polynomial(list(coeffs))
    p1 = p.deriv()
    p2 = p1.deriv()

    def e(x):
        return np.exp(-((x - c) ** 2) / (2 * s * s))

    def f(x):
        return p(x) * e(x)

    def df(x):
        return (p1(x) - p(x) * (x - c) / (s * s)) * e(x)

    def d2f(x):
        z = (x - c) / (s * s)
        return (p2(x) - 2.0 * p1(x) * z - p(x) / (s * s) + p(x) * z * (x - c) / (s * s)) * e(x)

    return TestFunction(f"polygauss(deg={p.degree()},c={c:g},s={s:g})", f, df, d2f)


def sinusoid(freq: float, phase: float = 0.0, amplitude: float = 1.0) -> TestFunction:
    w, ph, A = float(freq), float(phase), float(amplitude)

    def f(x):
        return A * np.sin(w * x + ph)

    def df(x):
        return A * w * np.cos(w * x + ph)

    def d2f(x):
        return -A * w * w * np.sin(w * x + ph)

    return TestFunction(f"sin(w={w:g},ph={ph:g},A={A:g})", f, df, d2f)


def constant(value: float = 1.0) -> TestFunction:
    v = float(value)
    return TestFunction(
        f"const({v:g})",
        lambda x: np.full(np.shape(x), v, dtype=float),
        lambda x: np.zeros(np.shape(x)),
        lambda x: np.zeros(np.shape(x)),
    )


def default_catalog() -> tuple[TestFunction, ...]:
    """Ten probes mixing Gaussian bumps, polynomial-weighted Gaussians and sinusoids."""
    return (
        gaussian_bump(0.3, 0.4),
        gaussian_bump(0.7, 0.25),
        gaussian_bump(0.15, 0.5, amplitude=2.0),
        gaussian_bump(0.9, 0.6),
        poly_times_gaussian([0.0, 1.0], 0.5, 0.35),
        poly_times_gaussian([-0.3, 0.0, 1.0], 0.4, 0.5),
        poly_times_gaussian([1.0, 1.0, -0.5], 0.5, 0.8),
        poly_times_gaussian([0.0, 0.0, 1.0], 0.8, 0.3),
        sinusoid(2.2, 0.3),
        sinusoid(1.7, 1.2, amplitude=0.8),
    )


@dataclass(frozen=True)
class GaugeData:
    """Gauge factor, its x-derivatives, and the first-order coefficient f.

    All evaluators are vectorized in x and exact along the fast diagonal:
    q' and q'' expand the total derivative d/dx of v(x, x/eps) through the
    corrector's closed-form partials, and q'' reuses d2v/dxi2 = V.
    """

    eps: float
    corrector: CorrectorBundle

    @property
    def potential(self) -> TwoScaleFunction:
        return self.corrector.potential

    def _fast(self, x):
        return np.asarray(x, dtype=float)

    def V_fast(self, x):
        x = self._fast(x)
        return self.potential.eval(x, x / self.eps)

    def v_fast(self, x):
        x = self._fast(x)
        return self.corrector.value(x, x / self.eps)

    def v_total_d1(self, x):
        """Total derivative d/dx of v(x, x/eps): v_x + v_xi / eps."""
        x = self._fast(x)
        xi = x / self.eps
        return self.corrector.d_x(x, xi) + self.corrector.d_xi(x, xi) / self.eps

    def q_tilde(self, x):
        return 1.0 + self.eps**2 * self.v_fast(x)

    def q_tilde_d1(self, x):
        x = self._fast(x)
        xi = x / self.eps
        return self.eps**2 * self.corrector.d_x(x, xi) + self.eps * self.corrector.d_xi(x, xi)

    def q_tilde_d2(self, x):
        x = self._fast(x)
        xi = x / self.eps
        return (
            self.eps**2 * self.corrector.d_xx(x, xi)
            + 2.0 * self.eps * self.corrector.d_x_xi(x, xi)
            + self.potential.eval(x, xi)
        )

    def f_tilde(self, x):
        """eps*V*v - eps*v_xx - 2*v_x_xi along the fast diagonal."""
        x = self._fast(x)
        xi = x / self.eps
        return (
            self.eps * self.potential.eval(x, xi) * self.corrector.value(x, xi)
            - self.eps * self.corrector.d_xx(x, xi)
            - 2.0 * self.corrector.d_x_xi(x, xi)
        )


def build_gauge(V: TwoScaleFunction, eps: float) -> GaugeData:
    """Build the gauge data, rejecting eps too large for invertibility."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    corr = build_corrector(V)
    if eps**2 * corr.sup_abs() >= _GAUGE_MARGIN:
        raise ValueError(
            "epsilon too large: eps^2 * sup|v| reaches "
            f"{eps ** 2 * corr.sup_abs():.3g}, gauge factor not safely invertible"
        )
    return GaugeData(eps=float(eps), corrector=corr)


def _check_grid(g: GaugeData, grid: np.ndarray) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("grid must be a 1-D array with at least two points")
    step = float(np.max(np.diff(grid)))
    if step > g.eps / 20.0 * (1.0 + 1e-12):
        raise ValueError(
            f"grid under-resolves the fast scale: step {step:.3g} exceeds eps/20 = {g.eps / 20:.3g}"
        )
    return grid


def apply_L(g: GaugeData, phi: TestFunction, grid) -> np.ndarray:
    """Sample L[phi] on the grid; exactly zero outside the support hull."""
    grid = _check_grid(g, grid)
    qt = g.q_tilde(grid)
    return g.eps * (2.0 / qt) * g.v_total_d1(grid) * phi.df(grid) - g.f_tilde(grid) / qt * phi.f(grid)


def identity_residual(g: GaugeData, phi: TestFunction, grid) -> float:
    """Max pointwise defect of H(q*phi) = q*(-phi'' - eps*L[phi]).

    The relative scaling 1 + |phi| + |phi''| makes the number comparable
    across probes.  The identity is algebraically exact, so anything beyond
    accumulated round-off indicates an implementation fault.
    """
    grid = _check_grid(g, grid)
    fv, dfv, d2fv = phi.f(grid), phi.df(grid), phi.d2f(grid)
    qt = g.q_tilde(grid)
    lhs = -(g.q_tilde_d2(grid) * fv + 2.0 * g.q_tilde_d1(grid) * dfv + qt * d2fv) + g.V_fast(grid) * qt * fv
    rhs = qt * (-d2fv - g.eps * apply_L(g, phi, grid))
    defect = np.abs(lhs - rhs) / (1.0 + np.abs(fv) + np.abs(d2fv))
    return float(np.max(defect))


def l_bound_sample(
    g: GaugeData,
    catalog: Sequence[TestFunction] = (),
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Largest ratio ||L[phi]||_L2 / ||phi||_W22(M) over the probe catalog.

    Both norms are discrete quadratures on the fast-period panel grid over the
    support hull M; L[phi] vanishes off M so the L2 norm over M is the full
    line norm.
    """
    catalog = tuple(catalog) or default_catalog()
    nodes, weights = fast_panel_grid(g.potential.support_hull, g.eps, cfg)
    if nodes.size == 0:
        return 0.0
    worst = 0.0
    for phi in catalog:
        lv = apply_L(g, phi, nodes)
        num = math.sqrt(float(np.sum(weights * np.abs(lv) ** 2)))
        den = math.sqrt(
            float(
                np.sum(
                    weights
                    * (np.abs(phi.f(nodes)) ** 2 + np.abs(phi.df(nodes)) ** 2 + np.abs(phi.d2f(nodes)) ** 2)
                )
            )
        )
        if den > 0:
            worst = max(worst, num / den)
    return worst
