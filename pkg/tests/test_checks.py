"""Tests for the verification harness: single-mode oracles for the measured
quantities, hypothesis gating, verdict logic and report determinism."""

import json
import math

import numpy as np
import pytest

from sqgev.checks import (
    _fit_line,
    _prescribed_profile_field,
    _r_alpha_sigma_fn,
    _signed_power,
    make_config,
    run_check,
)
from sqgev.dyadic import build_system
from sqgev.gevrey import fractional_laplacian, gevrey_multiply, heat_semigroup
from sqgev.spectral import (
    ConfigError,
    Grid,
    RealField,
    forward_transform,
    inverse_transform,
    lp_norm,
)


def single_mode(grid, mode):
    x1, _ = grid.meshgrid()
    return forward_transform(RealField(grid, np.cos(mode * x1)))


class TestMeasuredQuantities:
    """The raw quantities each check records, validated on closed forms."""

    def test_bernstein_ratio_single_mode(self):
        # |k| = 2^j exactly: the ratio collapses to (|k|/2^j)^s = 1
        grid = Grid(64)
        j, s, p = 2, 0.5, 4.0
        f = single_mode(grid, 2**j)
        ratio = lp_norm(inverse_transform(fractional_laplacian(f, s)), p) / (
            2.0 ** (j * s) * lp_norm(inverse_transform(f), p)
        )
        assert ratio == pytest.approx(1.0, rel=1e-12)

    def test_bernstein_ratio_is_one_at_s_zero(self):
        grid = Grid(64)
        f = single_mode(grid, 4)
        for p in (2.0, 4.0):
            ratio = lp_norm(inverse_transform(fractional_laplacian(f, 0.0)), p) / lp_norm(
                inverse_transform(f), p
            )
            assert ratio == pytest.approx(1.0, rel=1e-12)

    def test_heat_rate_single_mode_exact(self):
        grid = Grid(64)
        kappa, t = 0.6, 0.37
        for mode in (2, 8):
            f = single_mode(grid, mode)
            base = lp_norm(inverse_transform(f), 4)
            decayed = lp_norm(inverse_transform(heat_semigroup(f, t, kappa)), 4)
            rate = -math.log(decayed / base) / t
            assert rate == pytest.approx(mode**kappa, rel=1e-12)

    def test_heat_ratio_tends_to_one(self):
        grid = Grid(64)
        f = single_mode(grid, 4)
        base = lp_norm(inverse_transform(f), 2)
        for t in (1e-3, 1e-5):
            ratio = lp_norm(inverse_transform(heat_semigroup(f, t, 0.8)), 2) / base
            assert abs(ratio - 1.0) <= 5 * t

    def test_lin_gevrey_sides_closed_form_single_mode(self):
        # on one mode every operator is a scalar; the measured ratio must
        # match the hand-computed value exactly
        grid = Grid(64)
        alpha, kappa, gamma, p = 0.3, 0.8, 0.2, 2.0
        mode = 4.0
        f = single_mode(grid, int(mode))
        lam_a = fractional_laplacian(f, alpha)
        left = lp_norm(inverse_transform(gevrey_multiply(lam_a, gamma, alpha)), p)
        right = lp_norm(inverse_transform(lam_a), p) + gamma ** (
            (kappa - alpha) / alpha
        ) * lp_norm(
            inverse_transform(
                gevrey_multiply(fractional_laplacian(f, kappa), gamma, alpha)
            ),
            p,
        )
        base = lp_norm(inverse_transform(f), p)
        g_fact = math.exp(gamma * mode**alpha)
        expected_left = g_fact * mode**alpha * base
        expected_right = mode**alpha * base + gamma ** ((kappa - alpha) / alpha) * g_fact * mode**kappa * base
        assert left == pytest.approx(expected_left, rel=1e-12)
        assert right == pytest.approx(expected_right, rel=1e-12)

    def test_r_alpha_sigma_trivial_zeros(self):
        fn = _r_alpha_sigma_fn(0.7, 1.0)
        xi = np.array([[3.0, 4.0]])
        eta = np.zeros((1, 2))
        assert fn(xi, eta)[0] == pytest.approx(0.0, abs=1e-14)
        # alpha = 1, aligned same-direction vectors: triangle equality
        fn1 = _r_alpha_sigma_fn(1.0, 1.0)
        assert fn1(np.array([[2.0, 0.0]]), np.array([[5.0, 0.0]]))[0] == pytest.approx(
            0.0, abs=1e-14
        )

    def test_signed_power_matches_identity_at_p2(self):
        v = np.array([-2.0, 0.5, 0.0, 3.0])
        np.testing.assert_array_equal(_signed_power(v, 1.0), v)
        np.testing.assert_allclose(_signed_power(v, 2.0), np.abs(v) * v)

    def test_prescribed_profile_blocks(self):
        grid = Grid(64)
        system = build_system(grid)
        s, p = 1.1, 2.0
        f = _prescribed_profile_field(grid, s, p, seed=5)
        ratios = [
            lp_norm(inverse_transform(system.delta_j(f, j)), p) * 2.0 ** (s * j)
            for j in system.js()
        ]
        assert max(ratios) / min(ratios) <= 1.2


class TestFitLine:
    def test_exact_line(self):
        slope, intercept, r2 = _fit_line([0, 1, 2, 3], [1.0, 0.5, 0.0, -0.5])
        assert slope == pytest.approx(-0.5)
        assert intercept == pytest.approx(1.0)
        assert r2 == pytest.approx(1.0)

    def test_noisy_line_r2_below_one(self):
        rng = np.random.default_rng(0)
        x = np.arange(20)
        y = -0.3 * x + rng.standard_normal(20)
        slope, _, r2 = _fit_line(x, y)
        assert r2 < 1.0
        assert -0.5 < slope < -0.1


class TestSmallScaleVerdicts:
    """Each check passes at reduced desk scale (the acceptance suite runs
    them at the full configuration)."""

    def test_bernstein(self):
        rep = run_check("bernstein", n=64, trials=30, j_lo=1, j_hi=4)
        assert rep.verdict == "pass"

    def test_positivity(self):
        rep = run_check("positivity", n=32, trials=20)
        assert rep.verdict == "pass"
        assert all(
            row["diff"] >= -1e-10 * max(abs(row["lhs"]), abs(row["rhs"]))
            for row in rep.trials
        )

    def test_positivity_equality_at_p2(self):
        rep = run_check("positivity", n=32, trials=10, p_set=(2.0,), s_set=(0.5,))
        for row in rep.trials:
            scale = max(abs(row["lhs"]), abs(row["rhs"]))
            assert abs(row["diff"]) <= 1e-12 * scale

    def test_heat_kernel(self):
        rep = run_check("heat-kernel", n=64, trials=20, j_lo=1, j_hi=4)
        assert rep.verdict == "pass"
        for kappa in (0.5, 0.8):
            assert rep.fits[f"spread_kappa{kappa:g}"] <= 2.0**kappa * 1.1

    def test_lin_gevrey(self):
        rep = run_check("lin-gevrey", n=64, trials=15, j_lo=0, j_hi=3)
        assert rep.verdict == "pass"
        assert rep.fits["max_ratio"] <= 50.0

    def test_concavity_fits(self):
        rep = run_check("concavity")
        assert rep.verdict == "pass"
        assert rep.fits["g1_at_half"] == pytest.approx(2.0 - math.sqrt(2.0), abs=1e-12)
        # the scan minimum should sit near the 1D endpoint value
        row = next(r for r in rep.trials if r["alpha"] == 0.5 and r["c"] == 1.0)
        assert row["epsilon_2d"] == pytest.approx(2.0 - math.sqrt(2.0), rel=0.02)
        assert row["epsilon_1d"] == pytest.approx(row["g_endpoint_min"], rel=1e-6)

    def test_r_derivatives(self):
        rep = run_check("r-derivatives", gap_set=(3, 5), sigma_set=(0.0, 1.0))
        assert rep.verdict == "pass"
        assert rep.fits["max_ratio"] <= 50.0

    def test_commutator_decay(self):
        rep = run_check("commutator-decay", n=64, trials=4, j_lo=1, j_hi=4)
        assert rep.verdict == "pass"
        assert any("boundary case" in note for note in rep.notes)

    def test_wellposedness(self):
        rep = run_check(
            "wellposedness", n=64, dt=0.02, t_end=0.5, record_every=5, picard_depth=4
        )
        assert rep.verdict == "pass"
        assert rep.fits["max_contraction_ratio"] < 1.0
        assert rep.fits["heat_xt_last"] < rep.fits["heat_xt_first"]


class TestHypothesisGate:
    def test_violated_items_named(self):
        base = dict(n=64, trials=2, j_lo=1, j_hi=3)
        with pytest.raises(ConfigError, match=r"\(i\)"):
            run_check("commutator-decay", st_sets=((0.4, 0.3, 2.0),), **base)
        with pytest.raises(ConfigError, match=r"\(ii\)"):
            run_check("commutator-decay", st_sets=((1.2, 1.5, 2.0),), **base)
        with pytest.raises(ConfigError, match=r"\(iii\)"):
            run_check("commutator-decay", st_sets=((1.05, -0.1, 2.0),), **base)

    def test_boundary_equality_tolerated_with_note(self):
        rep = run_check(
            "commutator-decay", n=64, trials=2, j_lo=1, j_hi=3,
            st_sets=((1.3, 0.5, 4.0),),
        )
        assert any("boundary" in n for n in rep.notes)

    def test_unknown_check_id(self):
        with pytest.raises(ConfigError):
            make_config("nonsense")


class TestReports:
    def test_json_round_trip_and_determinism(self, tmp_path):
        rep1 = run_check("concavity")
        rep2 = run_check("concavity")
        assert rep1.to_json() == rep2.to_json()
        path = tmp_path / "concavity.json"
        rep1.write(path)
        parsed = json.loads(path.read_text())
        assert parsed["check_id"] == "concavity"
        assert parsed["verdict"] == "pass"
        assert parsed["config"]["alpha_set"] == [0.3, 0.5, 0.9]
        assert "numpy" in parsed["environment"]

    def test_config_echo_includes_overrides(self):
        rep = run_check("positivity", n=32, trials=3, seed=9)
        assert rep.config["n"] == 32
        assert rep.config["seed"] == 9

    def test_gamma_zero_gevrey_mode_equals_classical(self):
        # structural reduction: with gamma = 0 both modes run the identical
        # computation, so their fitted numbers coincide exactly
        rep = run_check(
            "commutator-decay", n=64, trials=2, j_lo=1, j_hi=3,
            commutator_gamma=0.0, st_sets=((1.2, 0.3, 2.0),),
        )
        assert rep.fits["slope_classical_s1.2_t0.3_p2"] == rep.fits["slope_gevrey_s1.2_t0.3_p2"]
