import math

import numpy as np
import pytest
from scipy import integrate

from oscispec.averaging import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    averaged_integral,
    decay_order_fit,
    fast_panel_grid,
    oscillatory_integral,
    profile_integral,
    profile_product_integral,
)
from oscispec.potentials import TwoScaleFunction, combine, poly_bump, smooth_bump


def scipy_reference_integral(u, eps):
    x0, x1 = u.support_hull
    re = integrate.quad(lambda x: u.eval_fast(x, eps).real, x0, x1, limit=4000, epsabs=1e-13)[0]
    im = integrate.quad(lambda x: u.eval_fast(x, eps).imag, x0, x1, limit=4000, epsabs=1e-13)[0]
    return re + 1j * im


def test_panel_grid_weights_sum_to_length():
    nodes, weights = fast_panel_grid((0.0, 1.0), 0.05, DEFAULT_QUADRATURE)
    assert weights.sum() == pytest.approx(1.0, abs=1e-14)
    assert nodes.min() > 0.0 and nodes.max() < 1.0
    # panels lock to the fast period: at least panels_per_period per period
    assert len(nodes) >= DEFAULT_QUADRATURE.panels_per_period / 0.05 * 0.999


def test_panel_grid_budget_guard():
    tiny = QuadratureConfig(panels_per_period=8, nodes_per_panel=6, max_panels=10)
    with pytest.raises(ValueError, match="resolution budget exceeded"):
        fast_panel_grid((0.0, 1.0), 1e-4, tiny)


@pytest.mark.parametrize("eps", [0.1, 0.037])
def test_oscillatory_integral_matches_adaptive_reference(eps):
    u = TwoScaleFunction.from_cosine(1, poly_bump(100.0, 2, (0.0, 1.0)))
    mine = oscillatory_integral(u, eps, DEFAULT_QUADRATURE)
    ref = scipy_reference_integral(u, eps)
    assert mine == pytest.approx(ref, abs=5e-11)


def test_profile_integral_beta_values():
    # unit-amplitude squared-parabola bumps integrate to Beta-function values
    assert profile_integral(poly_bump(1.0, 2, (0.0, 1.0))) == pytest.approx(1.0 / 30.0, rel=1e-14)
    assert profile_integral(poly_bump(1.0, 4, (0.0, 1.0))) == pytest.approx(1.0 / 630.0, rel=1e-14)
    # support scaling picks up (b-a)^(2p+1)
    assert profile_integral(poly_bump(1.0, 2, (0.0, 2.0))) == pytest.approx(2.0**5 / 30.0, rel=1e-13)


def test_profile_product_integral_agrees_with_quadrature():
    p1 = poly_bump(2.0, 2, (0.0, 1.0))
    p2 = smooth_bump(1.5, (0.2, 0.9))
    got = profile_product_integral(p1, p2)
    ref = integrate.quad(lambda x: (p1.evaluate(x) * p2.evaluate(x)).real, 0.2, 0.9, epsabs=1e-13)[0]
    assert got == pytest.approx(ref, abs=1e-11)


def test_profile_product_integral_disjoint_supports():
    p1 = poly_bump(2.0, 2, (0.0, 1.0))
    p2 = poly_bump(3.0, 2, (2.0, 3.0))
    assert profile_product_integral(p1, p2) == 0.0


def test_averaged_integral_keeps_only_the_mean_mode():
    u = combine(
        TwoScaleFunction.single_mode(0, poly_bump(2.0, 2, (0.0, 1.0))),
        TwoScaleFunction.from_cosine(1, poly_bump(50.0, 2, (0.0, 1.0))),
        1.0,
        1.0,
    )
    assert averaged_integral(u) == pytest.approx(2.0 / 30.0, rel=1e-13)


def test_decay_fit_requires_three_decreasing_epsilons():
    u = TwoScaleFunction.from_cosine(1, smooth_bump(1.0, (0.0, 1.0)))
    with pytest.raises(ValueError):
        decay_order_fit(u, [0.1, 0.05], DEFAULT_QUADRATURE)
    with pytest.raises(ValueError):
        decay_order_fit(u, [0.05, 0.1, 0.2], DEFAULT_QUADRATURE)


def test_decay_order_smooth_envelope_superpolynomial():
    u = TwoScaleFunction.from_cosine(1, smooth_bump(1.0, (0.0, 1.0)))
    fit = decay_order_fit(u, [0.1, 0.05, 0.025, 0.0125], DEFAULT_QUADRATURE)
    assert fit.fitted_order > 5.0
    assert not fit.floor_flag
    assert np.all(np.diff(fit.errors) < 0)


def test_decay_order_polynomial_envelope_is_boundary_limited():
    # squared-parabola amplitude has a jump in its second derivative at the
    # support edges, which caps the remainder decay near order three
    u = TwoScaleFunction.from_cosine(1, poly_bump(1.0, 2, (0.0, 1.0)))
    fit = decay_order_fit(u, [0.09, 0.063, 0.0441, 0.03087, 0.021609], DEFAULT_QUADRATURE)
    assert 2.3 < fit.fitted_order < 3.5


def test_decay_fit_flags_the_double_precision_floor():
    u = TwoScaleFunction.from_cosine(1, smooth_bump(1.0, (0.0, 1.0)))
    fit = decay_order_fit(u, [0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125], DEFAULT_QUADRATURE)
    assert fit.floor_flag
    assert fit.used[-1] is np.False_ or fit.used[-1] is False
    assert fit.fitted_order > 5.0


def test_decay_fit_subtracts_the_averaged_limit():
    # a potential with a mean component decays to its averaged integral, not zero
    u = combine(
        TwoScaleFunction.single_mode(0, poly_bump(1.0, 2, (0.0, 1.0))),
        TwoScaleFunction.from_cosine(1, smooth_bump(1.0, (0.0, 1.0))),
        1.0,
        1.0,
    )
    fit = decay_order_fit(u, [0.1, 0.05, 0.025], DEFAULT_QUADRATURE)
    assert fit.fitted_order > 4.0


def test_quadrature_panel_doubling_is_converged():
    u = TwoScaleFunction.from_cosine(1, poly_bump(100.0, 2, (0.0, 1.0)))
    coarse = oscillatory_integral(u, 0.01, DEFAULT_QUADRATURE)
    fine = oscillatory_integral(
        u, 0.01, QuadratureConfig(panels_per_period=16, nodes_per_panel=6, max_panels=10**6)
    )
    scale = abs(fine) + 1.0
    assert abs(coarse - fine) / scale < 1e-11


def test_quadrature_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(panels_per_period=0, nodes_per_panel=6, max_panels=100)
    with pytest.raises(ValueError):
        QuadratureConfig(panels_per_period=8, nodes_per_panel=1, max_panels=100)
