"""Asymptotics of the eigenvalue emerging from the edge of the continuous spectrum.

For a zero-mean fast-oscillating potential the operator -d2/dx2 + V(x, x/eps)
develops (or fails to develop) a single small eigenvalue as eps -> 0.  The
sign of the constant

    k2 = 1/2 * integral over x of the fast mean of (P[V](x, .))^2

decides between the two cases, and when the eigenvalue exists its leading
behavior is lambda = -eps^4 * k2^2.  Note the square, not the squared
modulus: complex potentials produce complex k2, and only the real part
carries the existence information.

The k_eps chain is the finite-eps counterpart: two moments of the gauge
perturbation L whose combination k_eps = (eps/2)*m1 + (eps^2/2)*m2 expands as
eps*c1 + eps^2*c2 with c1 = 0 and c2 = k2.  Computing the chain exercises the
corrector, the gauge algebra and the oscillation-resolving quadrature at
once, which is why it is kept as an independent diagnostic rather than a
shortcut to k2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gauge as gauge_mod
from .averaging import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    _quad_complex,
    fast_panel_grid,
    profile_product_integral,
)
from .potentials import TwoScaleFunction

_TINY = 1e-300


class Existence(enum.Enum):
    EXISTS = "Exists"
    ABSENT = "Absent"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:  # CSV-friendly
        return self.value


def classify_existence(k2: complex, degeneracy_tol: float) -> Existence:
    """Map Re k2 to the spectral verdict.

    Strictly positive real part (beyond the tolerance) means a unique simple
    small eigenvalue exists; strictly negative means no eigenvalue approaches
    the spectral edge.  |Re k2| at or below the tolerance is deliberately
    inconclusive: the borderline case carries no theorem either way.
    """
    re = complex(k2).real
    if re > degeneracy_tol:
        return Existence.EXISTS
    if re < -degeneracy_tol:
        return Existence.ABSENT
    return Existence.INCONCLUSIVE


@dataclass(frozen=True)
class K2Report:
    value: complex
    by_quadrature: complex
    by_closed_form: complex
    agreement: float
    classification: Existence
    flagged: bool
    tol: float


def _pair_mean(V: TwoScaleFunction, x: np.ndarray) -> np.ndarray:
    """Fast mean of (P[V])^2 at slow positions x, evaluated in mode space.

    The square folds mode pairs (n, -n) onto the mean:
    sum over n >= 1 of c_n(x) * c_{-n}(x) / (2 pi^2 n^2).
    An unpaired mode contributes nothing.
    """
    out = np.zeros(np.shape(x), dtype=complex)
    for n in sorted(V.modes):
        if n < 1:
            continue
        partner = V.modes.get(-n)
        if partner is None:
            continue
        out = out + V.modes[n].evaluate(x) * partner.evaluate(x) / (2.0 * math.pi**2 * n * n)
    return out


def compute_k2(V: TwoScaleFunction, tol: float = 1e-10) -> K2Report:
    """Evaluate k2 along two independent routes and cross-check them.

    Route one integrates the mode-space fast mean of (P[V])^2 by adaptive
    quadrature with envelope endpoints as breakpoints.  Route two assembles
    the same integral from per-pair envelope products, in Beta closed form
    whenever a pair shares a poly shape.  Disagreement beyond ``tol`` flags
    the report but still returns it.
    """
    if not V.has_zero_mean:
        raise ValueError("k2 is defined for zero-mean potentials only")

    # closed-form route
    closed = 0j
    for n in sorted(V.modes):
        if n < 1:
            continue
        partner = V.modes.get(-n)
        if partner is None:
            continue
        closed += profile_product_integral(V.modes[n], partner) / (2.0 * math.pi**2 * n * n)
    closed *= 0.5

    # quadrature route
    a, b = V.support_hull
    if a >= b:
        quad_val = 0j
    else:
        breaks = sorted(
            {p.support[0] for p in V.modes.values()} | {p.support[1] for p in V.modes.values()}
        )
        quad_val = 0.5 * _quad_complex(lambda x: _pair_mean(V, x), a, b, points=breaks)

    value = closed
    agreement = abs(quad_val - closed) / (abs(value) + _TINY)
    degeneracy_tol = 1e-12 * abs(value)
    return K2Report(
        value=value,
        by_quadrature=quad_val,
        by_closed_form=closed,
        agreement=agreement,
        classification=classify_existence(value, degeneracy_tol),
        flagged=agreement > tol,
        tol=tol,
    )


def predict_lambda(k2: complex, eps: float) -> complex:
    """Leading-order emerging eigenvalue -eps^4 * k2^2 (square, not modulus)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    k2 = complex(k2)
    return -(eps**4) * k2 * k2


@dataclass(frozen=True)
class KEpsReport:
    """Moments of the gauge perturbation at one eps, plus optional fit output."""

    eps: float
    m1: complex
    m2: complex
    k_eps: complex
    c1: complex | None = None
    c2: complex | None = None


def compute_k_eps(
    V: TwoScaleFunction,
    eps: float,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> KEpsReport:
    """Two moments of L: m1 = int L[1], m2 = int L[G] with the |x-t| kernel.

    L[1] reduces to -f/q.  G(x) = int |x-t| L[1](t) dt and its derivative
    G'(x) = int sgn(x-t) L[1](t) dt are assembled from prefix integrals
    C0(x) = int_{x0}^{x} L[1] and C1(x) = int_{x0}^{x} t L[1](t) dt:

        G(x)  = 2x C0(x) - 2 C1(x) + S1 - x S0,
        G'(x) = 2 C0(x) - S0,

    with S0, S1 the full-interval values.  Splitting at x this way keeps the
    kernel kink out of every quadrature panel, so the rule retains its full
    order.  All quadratures ride the fast-period panel grid.
    """
    g = gauge_mod.build_gauge(V, eps)
    hull = V.support_hull
    nodes, weights, edges = fast_panel_grid(hull, eps, cfg, with_edges=True)
    if nodes.size == 0:
        return KEpsReport(eps=float(eps), m1=0j, m2=0j, k_eps=0j)

    qt = g.q_tilde(nodes)
    l1 = -g.f_tilde(nodes) / qt
    m1 = complex(np.sum(weights * l1))

    n_per = cfg.nodes_per_panel
    n_panels = nodes.size // n_per
    contrib0 = (weights * l1).reshape(n_panels, n_per)
    contrib1 = (weights * nodes * l1).reshape(n_panels, n_per)
    prefix0 = np.concatenate([[0.0 + 0j], np.cumsum(contrib0.sum(axis=1))[:-1]])
    prefix1 = np.concatenate([[0.0 + 0j], np.cumsum(contrib1.sum(axis=1))[:-1]])
    s0 = complex(contrib0.sum())
    s1 = complex(contrib1.sum())

    # partial-panel pieces from the panel's left edge to each node
    lefts = np.repeat(edges[:-1], n_per)
    half = 0.5 * (nodes - lefts)
    mid = 0.5 * (nodes + lefts)
    gx, gw = np.polynomial.legendre.leggauss(n_per)
    pts = mid[:, None] + half[:, None] * gx[None, :]
    sub_l1 = -g.f_tilde(pts) / g.q_tilde(pts)
    part0 = np.sum(half[:, None] * gw[None, :] * sub_l1, axis=1)
    part1 = np.sum(half[:, None] * gw[None, :] * pts * sub_l1, axis=1)

    c0 = prefix0.repeat(n_per) + part0
    c1 = prefix1.repeat(n_per) + part1

    G = 2.0 * nodes * c0 - 2.0 * c1 + s1 - nodes * s0
    Gp = 2.0 * c0 - s0
    vprime = g.v_total_d1(nodes)
    m2 = complex(np.sum(weights * (2.0 * eps * vprime / qt * Gp + l1 * G)))

    k_eps = 0.5 * eps * m1 + 0.5 * eps**2 * m2
    return KEpsReport(eps=float(eps), m1=m1, m2=m2, k_eps=k_eps)


def fit_k_eps_coefficients(reports: Sequence[KEpsReport]) -> tuple[complex, complex]:
    """Least-squares fit k_eps ~ eps*c1 + eps^2*c2 over at least three reports."""
    if len(reports) < 3:
        raise ValueError("need at least three eps values to fit c1 and c2")
    eps = np.array([r.eps for r in reports], dtype=float)
    y = np.array([r.k_eps for r in reports], dtype=complex)
    design = np.stack([eps, eps**2], axis=1).astype(complex)
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return complex(coef[0]), complex(coef[1])
