"""Exact solutions, Riemann solver, and error bookkeeping."""

import numpy as np
import pytest

from deltafilter.reference import (
    SOD_LEFT,
    SOD_RIGHT,
    BurgersBoundaryTracker,
    MissingReferenceError,
    OracleError,
    error_report,
    exact_advection,
    exact_burgers,
    exact_sod,
    explosion_initial,
    fit_convergence_rate,
    load_reference_profile,
    reference_shock_position,
    reference_shu_osher,
    shu_osher_initial,
    solve_riemann,
)

GAMMA = 1.4


# ---------------------------------------------------------------- advection


def test_advection_translates_jump():
    # sin(pi xi) - 0.5 for xi <= -0.25, + 0.5 beyond; xi = x - t
    x = np.array([-0.5, 0.75])
    np.testing.assert_allclose(
        exact_advection(x, 0.0),
        [np.sin(-0.5 * np.pi) - 0.5, np.sin(0.75 * np.pi) + 0.5],
        rtol=1e-15,
    )
    assert exact_advection(np.array([-0.5]), 0.0)[0] == pytest.approx(-1.5)
    # x=0.75 at t=1 traces back to xi=-0.25, on the left branch (<=)
    val = exact_advection(np.array([0.75]), 1.0)[0]
    assert val == pytest.approx(np.sin(-0.25 * np.pi) - 0.5, rel=1e-14)


def test_advection_jump_location_moves():
    t = 0.3
    x0 = -0.25 + t
    lo = exact_advection(np.array([x0 - 1e-9]), t)[0]
    hi = exact_advection(np.array([x0 + 1e-9]), t)[0]
    assert hi - lo == pytest.approx(1.0, abs=1e-7)


# ------------------------------------------------------------------ burgers


def test_burgers_initial_time():
    x = np.linspace(-1, 1, 41)
    np.testing.assert_allclose(exact_burgers(x, 0.0), -np.sin(np.pi * x), atol=1e-13)


def test_burgers_odd_symmetry():
    x = np.linspace(0.05, 0.95, 10)
    t = 0.2
    u_pos = exact_burgers(x, t)
    u_neg = exact_burgers(-x, t)
    np.testing.assert_allclose(u_neg, -u_pos, atol=1e-12)
    assert exact_burgers(np.array([0.0]), t)[0] == pytest.approx(0.0, abs=1e-13)


def test_burgers_characteristic_residual():
    # u solves u = -sin(pi(x - u t)) pointwise
    x = np.linspace(-0.9, 0.9, 19)
    t = 0.25
    u = exact_burgers(x, t)
    np.testing.assert_allclose(u, -np.sin(np.pi * (x - u * t)), atol=1e-11)


def test_burgers_boundary_tracker_matches_direct():
    xs = np.array([-1.0, -0.98, 0.98, 1.0])
    tracker = BurgersBoundaryTracker(xs)
    for t in (0.0, 0.1, 0.2, 0.5, 0.9):
        np.testing.assert_allclose(tracker(t), exact_burgers(xs, t), atol=1e-11)


# ------------------------------------------------------------------ riemann


def test_sod_star_state():
    sol = solve_riemann(SOD_LEFT, SOD_RIGHT)
    # classic tabulated star values
    assert sol.p_star == pytest.approx(0.30313, abs=5e-5)
    assert sol.u_star == pytest.approx(0.92745, abs=5e-5)
    assert sol.rho_star_l == pytest.approx(0.42632, abs=5e-5)
    assert sol.rho_star_r == pytest.approx(0.26557, abs=5e-5)
    assert not sol.left_is_shock and sol.right_is_shock


def test_sod_outer_rays():
    x = np.array([-0.9, 0.9])
    rho, u, p = exact_sod(x, 0.2)
    np.testing.assert_allclose([rho[0], u[0], p[0]], SOD_LEFT, rtol=1e-14)
    np.testing.assert_allclose([rho[1], u[1], p[1]], SOD_RIGHT, rtol=1e-14)


def test_sod_fan_is_isentropic():
    x = np.linspace(-0.2, -0.05, 8)
    rho, u, p = exact_sod(x, 0.2)
    s = p / rho**GAMMA
    s_left = SOD_LEFT[2] / SOD_LEFT[0] ** GAMMA
    np.testing.assert_allclose(s, s_left, rtol=1e-10)
    # Riemann invariant u + 2a/(g-1) constant through the left fan
    a = np.sqrt(GAMMA * p / rho)
    inv = u + 2 * a / (GAMMA - 1)
    np.testing.assert_allclose(inv, inv[0], rtol=1e-10)


def test_sod_shock_jump_conditions():
    sol = solve_riemann(SOD_LEFT, SOD_RIGHT)
    assert sol.right_head == sol.right_tail  # shock: one ray
    s = sol.right_head
    rho_r, u_r, p_r = SOD_RIGHT
    rho_s, u_s, p_s = sol.rho_star_r, sol.u_star, sol.p_star
    # Rankine-Hugoniot across the right shock
    assert rho_s * (u_s - s) == pytest.approx(rho_r * (u_r - s), rel=1e-10)
    assert rho_s * u_s * (u_s - s) + p_s == pytest.approx(
        rho_r * u_r * (u_r - s) + p_r, rel=1e-10
    )


def test_riemann_rejects_bad_states():
    with pytest.raises(OracleError):
        solve_riemann((1.0, 0.0, -1.0), SOD_RIGHT)
    with pytest.raises(OracleError):
        solve_riemann((-1.0, 0.0, 1.0), SOD_RIGHT)
    # strong enough separation produces vacuum
    with pytest.raises(OracleError):
        solve_riemann((1.0, -20.0, 1.0), (1.0, 20.0, 1.0))


# ---------------------------------------------------------------- shu-osher


def test_shu_osher_initial_states():
    x = np.array([-0.9, -0.8, 0.0, 0.5])
    rho, u, p = shu_osher_initial(x)
    assert rho[0] == pytest.approx(27.0 / 7.0, rel=1e-15)
    assert u[0] == pytest.approx(4.0 * np.sqrt(35.0) / 9.0, rel=1e-15)
    assert p[0] == pytest.approx(31.0 / 3.0, rel=1e-15)
    # interface node belongs to the downstream (wavy) side: rho = 1+0.2 sin(25x)
    assert rho[1] == pytest.approx(1.0 + 0.2 * np.sin(-20.0), rel=1e-14)
    assert u[1] == 0.0 and p[1] == pytest.approx(1.0)
    assert rho[2] == pytest.approx(1.0, rel=1e-15)
    assert rho[3] == pytest.approx(1.0 + 0.2 * np.sin(12.5), rel=1e-14)


def test_shu_osher_left_state_is_mach3_shock():
    # jump conditions across a Mach-3 shock moving into (1+0.2 sin, 0, 1)
    rho_l, u_l, p_l = 27.0 / 7.0, 4.0 * np.sqrt(35.0) / 9.0, 31.0 / 3.0
    rho_r, u_r, p_r = 1.0, 0.0, 1.0
    a_r = np.sqrt(GAMMA * p_r / rho_r)
    s = 3.0 * a_r  # Mach 3 into quiescent gas
    assert rho_l * (u_l - s) == pytest.approx(rho_r * (u_r - s), rel=1e-12)
    assert rho_l * u_l * (u_l - s) + p_l == pytest.approx(
        rho_r * u_r * (u_r - s) + p_r, rel=1e-12
    )


def test_reference_profile_available():
    x = np.linspace(-1, 1, 201)
    rho = reference_shu_osher(x, 0.36)
    assert rho.shape == x.shape
    assert rho.max() > 4.0 and rho.min() > 0.7
    # upstream of the interface the left state is undisturbed
    assert rho[0] == pytest.approx(27.0 / 7.0, rel=1e-3)


def test_reference_shock_position():
    xs = reference_shock_position(0.36)
    assert 0.40 < xs < 0.55
    xs_early = reference_shock_position(0.18)
    assert -0.25 < xs_early < -0.05


def test_missing_reference(monkeypatch, tmp_path):
    monkeypatch.setenv("DELTAFILTER_REF_DIR", str(tmp_path))
    with pytest.raises(MissingReferenceError):
        load_reference_profile("shu_osher", 0.36)


# ---------------------------------------------------------------- explosion


def test_explosion_initial_geometry():
    x = np.array([-0.5, 0.0, 0.39, 0.4, 0.41])
    y = np.zeros_like(x)
    rho, mx, my, p = explosion_initial(x, y)
    np.testing.assert_array_equal(mx, 0.0)
    np.testing.assert_array_equal(my, 0.0)
    assert rho[1] == 1.0 and p[1] == 1.0
    assert rho[2] == 1.0  # inside
    assert rho[3] == 0.125  # boundary is outside the disc
    assert rho[4] == 0.125 and p[4] == pytest.approx(0.1)


def test_explosion_initial_broadcasts():
    xs = np.linspace(-1, 1, 9)
    rho, mx, my, p = explosion_initial(xs[:, None], xs[None, :])
    assert rho.shape == (9, 9)
    np.testing.assert_array_equal(rho, rho.T)  # symmetric sampling
    assert rho[4, 4] == 1.0 and rho[0, 0] == 0.125


# ------------------------------------------------------------ error reports


def test_error_report_exclusions():
    x = np.linspace(-1, 1, 21)
    ref = np.zeros_like(x)
    num = np.zeros_like(x)
    num[10] = 1.0  # spike at x=0
    full = error_report(num, ref, x)
    assert full.linf == 1.0
    masked = error_report(num, ref, x, exclude_centers=(0.0,), exclude_halfwidth=0.15)
    assert masked.linf == 0.0
    assert masked.included_count == full.included_count - 3
    with pytest.raises(ValueError):
        error_report(num, ref, x, exclude_centers=(0.0,), exclude_halfwidth=2.5)


def test_error_report_l2_normalization():
    x = np.linspace(-1, 1, 41)
    num = np.full_like(x, 2.0)
    ref = np.zeros_like(x)
    rep = error_report(num, ref, x)
    assert rep.l2 == pytest.approx(2.0, rel=1e-12)  # rms of constant 2


def test_fit_convergence_rate():
    # slope of log(error) vs log(scale)
    ns = np.array([16.0, 32.0, 64.0, 128.0])
    errs = 7.3 * ns**-4.0
    assert fit_convergence_rate(ns, errs) == pytest.approx(-4.0, rel=1e-12)
    eps = 1.0 / ns
    assert fit_convergence_rate(eps, errs) == pytest.approx(4.0, rel=1e-12)
    with pytest.raises(ValueError):
        fit_convergence_rate(ns[:1], errs[:1])
