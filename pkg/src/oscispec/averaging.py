"""Quadrature of fast-oscillating integrands and averaging-decay diagnostics.

The central object is a composite Gauss-Legendre rule whose panel width is
locked to a fraction of the fast period.  With the default 8 panels per period
and 6 nodes per panel the rule resolves the oscillation far below double
round-off, so the difference between the oscillatory integral of u(x, x/eps)
and the integral of the fast mean is the genuine averaging remainder, not a
quadrature artifact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .potentials import POLY, ZERO, SlowProfile, TwoScaleFunction


@dataclass(frozen=True)
class QuadratureConfig:
    panels_per_period: int = 8
    nodes_per_panel: int = 6
    max_panels: int = 1_000_000

    def __post_init__(self) -> None:
        if self.panels_per_period < 1 or self.nodes_per_panel < 2:
            raise ValueError("quadrature config needs >= 1 panel per period and >= 2 nodes per panel")


DEFAULT_QUADRATURE = QuadratureConfig()


@lru_cache(maxsize=16)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def fast_panel_grid(
    support: tuple[float, float],
    eps: float,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    with_edges: bool = False,
):
    """Gauss-Legendre nodes and weights on panels no wider than eps/panels_per_period.

    Panels tile [a, b] exactly, so envelope-boundary kinks at the support
    endpoints never sit inside a panel.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    a, b = support
    length = b - a
    if length <= 0:
        empty = np.zeros(0)
        return (empty, empty, np.zeros(1)) if with_edges else (empty, empty)
    n_panels = max(1, math.ceil(length / (eps / cfg.panels_per_period)))
    if n_panels > cfg.max_panels:
        raise ValueError(
            f"resolution budget exceeded: {n_panels} panels needed for eps={eps:g} "
            f"on [{a:g}, {b:g}] but max_panels={cfg.max_panels}"
        )
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * (edges[1] - edges[0])
    centers = 0.5 * (edges[:-1] + edges[1:])
    gx, gw = _gauss_legendre(cfg.nodes_per_panel)
    nodes = (centers[:, None] + half * gx[None, :]).ravel()
    weights = np.tile(half * gw, n_panels)
    if with_edges:
        return nodes, weights, edges
    return nodes, weights


def oscillatory_quadrature(
    f: Callable[[np.ndarray], np.ndarray],
    support: tuple[float, float],
    eps: float,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> complex:
    """Integrate a vectorized callable over [a, b] on the fast-period panel grid."""
    nodes, weights = fast_panel_grid(support, eps, cfg)
    if nodes.size == 0:
        return 0j
    return complex(np.sum(weights * np.asarray(f(nodes))))


def oscillatory_integral(u: TwoScaleFunction, eps: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> complex:
    """Integral of the fast trace x -> u(x, x/eps) over the support hull."""
    return oscillatory_quadrature(lambda x: u.eval_fast(x, eps), u.support_hull, eps, cfg)


def _quad_complex(f: Callable, a: float, b: float, points: Sequence[float] | None = None) -> complex:
    """Adaptive quadrature of a complex-valued scalar function."""
    pts = None
    if points:
        pts = sorted(p for p in points if a < p < b)
        pts = pts or None
    kwargs = dict(limit=200, epsabs=1e-13, epsrel=1e-11)
    re, _ = integrate.quad(lambda x: float(np.real(f(x))), a, b, points=pts, **kwargs)
    im, _ = integrate.quad(lambda x: float(np.imag(f(x))), a, b, points=pts, **kwargs)
    return complex(re, im)


def profile_integral(profile: SlowProfile) -> complex:
    """Integral of an envelope over the line; Beta closed form for poly bumps.

    For the poly kind, int_a^b (x-a)^p (b-x)^p dx = (b-a)^(2p+1) * B(p+1, p+1)
    with B expressed through exact integer factorials.
    """
    if profile.kind == ZERO:
        return 0j
    a, b = profile.support
    if profile.kind == POLY:
        p = int(profile.power)
        beta = math.factorial(p) ** 2 / math.factorial(2 * p + 1)
        return profile.amplitude * (b - a) ** (2 * p + 1) * beta
    return _quad_complex(lambda x: profile.evaluate(x), a, b)


def profile_product_integral(p1: SlowProfile, p2: SlowProfile) -> complex:
    """Integral of the pointwise product of two envelopes.

    Poly pairs on a shared support combine into a single Beta integral with
    power p1+p2; anything else falls back to adaptive quadrature over the
    support intersection.
    """
    if p1.kind == ZERO or p2.kind == ZERO:
        return 0j
    lo = max(p1.support[0], p2.support[0])
    hi = min(p1.support[1], p2.support[1])
    if lo >= hi:
        return 0j
    if p1.kind == POLY and p2.kind == POLY and p1.support == p2.support:
        q = int(p1.power) + int(p2.power)
        beta = math.factorial(q) ** 2 / math.factorial(2 * q + 1)
        span = p1.support[1] - p1.support[0]
        return p1.amplitude * p2.amplitude * span ** (2 * q + 1) * beta
    return _quad_complex(lambda x: p1.evaluate(x) * p2.evaluate(x), lo, hi)


def averaged_integral(u: TwoScaleFunction) -> complex:
    """Integral of the fast mean of u over its support."""
    return profile_integral(u.mean_profile())


@dataclass(frozen=True)
class DecayFit:
    """Log-log fit of the averaging remainder against eps.

    ``errors[i]`` is |oscillatory_integral(u, epsilons[i]) - averaged_integral(u)|.
    The fitted order uses only points above the round-off floor; ``floor_flag``
    records whether any point was dropped.
    """

    epsilons: tuple[float, ...]
    errors: tuple[float, ...]
    fitted_order: float
    floor_flag: bool
    floor: float
    used: tuple[bool, ...]


def decay_order_fit(
    u: TwoScaleFunction,
    epsilons: Sequence[float],
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> DecayFit:
    """Measure how fast the oscillatory integral approaches the averaged one.

    Works for any u: the averaged part is subtracted, which reduces the
    general case to the zero-mean one.  Requires at least three epsilons,
    strictly decreasing, and at least three remainders above the floor.
    """
    eps_list = [float(e) for e in epsilons]
    if len(eps_list) < 3:
        raise ValueError("need at least three epsilons for a decay fit")
    if any(e <= 0 for e in eps_list) or any(a <= b for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("epsilons must be positive and strictly decreasing")

    limit = averaged_integral(u)
    errors = [abs(oscillatory_integral(u, e, cfg) - limit) for e in eps_list]

    # Round-off floor estimate: accumulated rounding of the largest-eps
    # quadrature, scaled by the L1 size of the integrand.
    nodes, weights = fast_panel_grid(u.support_hull, eps_list[0], cfg)
    scale = float(np.sum(weights * np.abs(u.eval_fast(nodes, eps_list[0])))) if nodes.size else 0.0
    floor = 1e-13 * (1.0 + scale)

    used = tuple(err > floor for err in errors)
    if sum(used) < 3:
        raise ValueError("insufficient dynamic range: fewer than three remainders above the floor")
    log_eps = np.log([e for e, keep in zip(eps_list, used) if keep])
    log_err = np.log([err for err, keep in zip(errors, used) if keep])
    slope = float(np.polyfit(log_eps, log_err, 1)[0])
    return DecayFit(
        epsilons=tuple(eps_list),
        errors=tuple(errors),
        fitted_order=slope,
        floor_flag=not all(used),
        floor=floor,
        used=used,
    )
