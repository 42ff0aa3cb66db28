import math

import numpy as np
import pytest
from scipy import optimize

from oscispec.gauge import build_gauge
from oscispec.potentials import TwoScaleFunction, poly_bump
from oscispec.solver import (
    DEFAULT_SOLVER,
    SolverConfig,
    SquareWell,
    convergence_study,
    eigenfunction,
    find_bound_state,
    gauged_mismatch,
    min_mismatch_on_disk,
    mismatch,
    scan_roots,
    transfer_matrix,
)


def well_ground_state_kappa(depth, width=1.0):
    """Closed-form oracle: even bound state of a constant well of given depth.

    Matching decaying tails to the interior cosine gives k tan(k w/2) = kappa
    with k^2 + kappa^2 = depth.
    """

    def f(k):
        kk = math.sqrt(depth - k * k) if k * k < depth else 0.0
        return k * math.tan(k * width / 2.0) - kk

    # the even ground state always sits below both k = pi/width and sqrt(depth)
    hi = min(math.pi / width, math.sqrt(depth)) - 1e-12
    k = optimize.brentq(f, 1e-9, hi, xtol=1e-15)
    return math.sqrt(depth - k * k)


# ---------------------------------------------------------------- oracles


def test_free_transfer_matrix_closed_form():
    free = SquareWell(depth=0.0, support=(0.0, 1.0))
    kappa = 0.7
    T = transfer_matrix(free, 0.1, -kappa**2, 0.1 / 40).matrix
    c, s = math.cosh(kappa), math.sinh(kappa)
    expect = np.array([[c, s / kappa], [kappa * s, c]])
    assert T == pytest.approx(expect, rel=1e-12)


def test_free_mismatch_closed_form():
    free = SquareWell(depth=0.0, support=(0.0, 1.0))
    for kappa in (0.13, 0.8):
        got = mismatch(free, 0.1, kappa)
        assert got == pytest.approx(2 * kappa * math.exp(kappa), rel=1e-12)


def test_wronskian_conservation_across_spectral_values(canonical):
    worst = 0.0
    for eps in (0.1, 0.05, 0.025):
        for lam in (-1e-6, -1e-2, -0.25, -1.0 + 0.3j):
            d = transfer_matrix(canonical, eps, lam, eps / 40).det()
            worst = max(worst, abs(d - 1))
    assert worst < 1e-10


def test_square_well_matches_transcendental_oracle():
    kap_exact = well_ground_state_kappa(2.0)
    res = find_bound_state(SquareWell(depth=2.0, support=(0.0, 1.0)), 0.1, bracket=(0.1, 1.2))
    assert res is not None and res.converged
    assert res.kappa.real == pytest.approx(kap_exact, rel=1e-10)
    assert abs(res.eigenvalue.real + kap_exact**2) / kap_exact**2 < 1e-8


def test_deep_well_oracle_too():
    # depth 30 holds two bound states; the bracket isolates the even one
    kap_exact = well_ground_state_kappa(30.0)
    res = find_bound_state(SquareWell(depth=30.0, support=(0.0, 1.0)), 0.1, bracket=(4.0, 5.4))
    assert res.kappa.real == pytest.approx(kap_exact, rel=1e-9)


def test_free_potential_has_no_bound_state():
    assert find_bound_state(TwoScaleFunction(modes={}), 0.1) is None


# ---------------------------------------------------------------- oscillatory


def test_canonical_bound_state_exists_and_matches_scan(canonical, canonical_k2):
    res = find_bound_state(canonical, 0.1, k2_hint=canonical_k2.value)
    assert res is not None and res.converged
    assert res.mismatch_residual <= DEFAULT_SOLVER.root_tol
    assert res.kappa.real > 0 and abs(res.kappa.imag) == 0.0

    scan = scan_roots(canonical, 0.1, window=(1e-6, 0.5), samples=1500)
    assert scan.count == 1
    assert scan.kappas[0] == pytest.approx(res.kappa.real, rel=1e-9)


def test_eigenvalue_tracks_the_fourth_power_prediction(canonical, canonical_k2):
    # resonant epsilons keep the envelope-edge pollution out of the comparison
    for eps in (0.1, 0.05):
        res = find_bound_state(canonical, eps, k2_hint=canonical_k2.value)
        pred = -(eps**4) * canonical_k2.value**2
        assert res.eigenvalue.real == pytest.approx(pred.real, rel=0.2)


def test_convergence_study_sees_fourth_order(canonical, canonical_k2):
    st = convergence_study(canonical, 0.1, k2_hint=canonical_k2.value)
    assert 3.7 < st.observed_order < 4.3
    assert st.error_estimate < 1e-7 * abs(st.extrapolated)
    # the extrapolated value is consistent with a much finer direct solve
    fine = find_bound_state(
        canonical, 0.1, k2_hint=canonical_k2.value, cfg=SolverConfig(points_per_fast_period=640)
    )
    assert st.extrapolated.real == pytest.approx(fine.eigenvalue.real, rel=1e-9)


def test_imaginary_potential_has_no_admissible_root(canonical, canonical_k2):
    iV = canonical.scaled(1j)
    assert find_bound_state(iV, 0.1, k2_hint=-canonical_k2.value) is None
    floor = min_mismatch_on_disk(iV, 0.1, k2_hint=-canonical_k2.value)
    assert floor > 10 * DEFAULT_SOLVER.root_tol


def test_gauged_formulation_finds_the_same_root(canonical, canonical_k2):
    cfg = SolverConfig(points_per_fast_period=80)
    res = find_bound_state(canonical, 0.1, k2_hint=canonical_k2.value, cfg=cfg)
    g = build_gauge(canonical, 0.1)

    def f(k):
        return float(np.real(gauged_mismatch(g, k, cfg=cfg)))

    kap = res.kappa.real
    root = optimize.brentq(f, 0.5 * kap, 1.5 * kap, xtol=1e-17)
    assert root == pytest.approx(kap, rel=1e-5)


# ---------------------------------------------------------------- guards


def test_mismatch_rejects_wrong_half_plane(canonical):
    with pytest.raises(ValueError, match="half-plane"):
        mismatch(canonical, 0.1, -0.2)
    with pytest.raises(ValueError, match="half-plane"):
        mismatch(canonical, 0.1, 0.0 + 1.0j)


def test_step_guard(canonical):
    with pytest.raises(ValueError, match="step too large"):
        mismatch(canonical, 0.1, 0.01, step=0.1 / 10)


def test_bracket_validation(canonical):
    with pytest.raises(ValueError, match="bracket"):
        find_bound_state(canonical, 0.1, bracket=(0.5, 0.1))


def test_mean_component_requires_explicit_bracket():
    u = TwoScaleFunction.single_mode(0, poly_bump(-2.0, 2, (0.0, 1.0)))
    with pytest.raises(ValueError, match="bracket"):
        find_bound_state(u, 0.1)


def test_scan_rejects_complex_potentials(canonical):
    with pytest.raises(ValueError, match="real"):
        scan_roots(canonical.scaled(1j), 0.1)


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(points_per_fast_period=10)
    with pytest.raises(ValueError):
        SolverConfig(rk_order=2)
    with pytest.raises(ValueError):
        SolverConfig(scan_window=(0.5, 0.1))


# ---------------------------------------------------------------- eigenfunction


def test_eigenfunction_is_normalized_with_exact_tails(canonical, canonical_k2):
    res = find_bound_state(canonical, 0.1, k2_hint=canonical_k2.value)
    ef = eigenfunction(canonical, 0.1, res.kappa)
    assert ef.match_defect < 1e-10

    # interior trapezoid plus closed-form tail mass reproduces unit norm
    x0, x1 = canonical.support_hull
    inside = (ef.x >= x0) & (ef.x <= x1)
    interior = np.trapezoid(np.abs(ef.values[inside]) ** 2, ef.x[inside])
    kappa = res.kappa.real
    left_edge = np.abs(ef.values[inside][0]) ** 2
    right_edge = np.abs(ef.values[inside][-1]) ** 2
    tails = (left_edge + right_edge) / (2 * kappa)
    assert interior + tails == pytest.approx(1.0, rel=1e-6)


def test_eigenfunction_rejects_non_roots(canonical, canonical_k2):
    res = find_bound_state(canonical, 0.1, k2_hint=canonical_k2.value)
    with pytest.raises(ValueError, match="not a root"):
        eigenfunction(canonical, 0.1, res.kappa * 1.5)


def test_convergence_study_rejects_non_halving_steps(canonical, canonical_k2):
    with pytest.raises(ValueError, match="halve"):
        convergence_study(
            canonical, 0.1, h_sequence=[1e-3, 5e-4, 3e-4], k2_hint=canonical_k2.value
        )
