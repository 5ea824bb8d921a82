import math

import numpy as np
import pytest

from app.core.errors import DimensionError
from app.utils.channel_model import synthesize_channels
from app.utils.heuristics import (
    align_phases,
    downlink_alignment_vector,
    oneway_downlink,
    oneway_only_rates,
    oneway_uplink,
    phase_averaging,
    phase_averaging_rates,
    time_sharing,
    uplink_alignment_vector,
)
from app.utils.manifold import PhaseVector
from app.utils.objective import build_context, link_rates, optimal_v, optimal_w
from helpers import cn, random_channels, unit_params


def grid_rate(ch, params, downlink: bool, points: int = 720) -> float:
    """Best single-direction rate over b = [1, e^{j theta}] (a global phase does not change the rate)."""
    ctx = build_context(ch, params, 1.0 if downlink else 0.0)
    C = ctx.C_D if downlink else ctx.C_U
    power = params.P_D_max if downlink else params.P_U_max
    noise = params.sigma2_D if downlink else params.sigma2_U
    theta = 2 * np.pi * np.arange(points) / points
    a = C[0][None, :] + np.exp(-1j * theta)[:, None] * C[1][None, :]
    return float(np.max(np.log2(1 + power * np.sum(np.abs(a) ** 2, axis=1) / noise)))


# alignment

def test_downlink_alignment_reaches_l1_norm(rng):
    ctx = build_context(random_channels(rng, 12, 4), unit_params(3, 4, 4), 1.0)
    w = cn(rng, 4)
    J = downlink_alignment_vector(w, ctx)
    b = align_phases(J)
    assert abs(np.vdot(b.entries, J)) == pytest.approx(np.sum(np.abs(J)), abs=1e-10)


def test_uplink_alignment_reaches_l1_norm(rng):
    ctx = build_context(random_channels(rng, 12, 4), unit_params(3, 4, 4), 0.0)
    v = cn(rng, 4)
    J = uplink_alignment_vector(v, ctx)
    b = align_phases(J)
    assert abs(np.vdot(b.entries, J)) == pytest.approx(np.sum(np.abs(J)), abs=1e-10)


def test_alignment_beats_random_phases(rng):
    J = cn(rng, 16)
    aligned = abs(np.vdot(align_phases(J).entries, J))
    candidates = np.exp(1j * rng.uniform(0, 2 * np.pi, (10_000, 16)))
    assert np.all(np.abs(np.conj(candidates) @ J) <= aligned + 1e-12)


def test_alignment_vector_matches_downlink_gain(rng):
    ctx = build_context(random_channels(rng, 6, 3), unit_params(2, 3, 3), 1.0)
    b = PhaseVector.random(6, rng)
    w = optimal_w(b, ctx)
    # b^H J_D = b^H C_D w
    np.testing.assert_allclose(np.vdot(b.entries, downlink_alignment_vector(w, ctx)), np.conj(b.entries) @ ctx.C_D @ w)


# one-way designs

@pytest.mark.parametrize("design", [oneway_downlink, oneway_uplink])
def test_oneway_rates_are_non_decreasing(params, design):
    for seed in range(5):
        solution = design(synthesize_channels(params, seed), params)
        assert np.all(np.diff(solution.rates) >= -1e-12)
        assert solution.rate == solution.rates[-1]
        assert solution.rate >= 0
        assert np.max(np.abs(np.abs(solution.b.entries) - 1)) < 1e-12


def test_oneway_downlink_single_element_converges_in_one_round(rng):
    params = unit_params(1, 1, 3)
    solution = oneway_downlink(random_channels(rng, 1, 3), params)
    assert solution.iterations == 1


def test_oneway_uplink_single_antenna_reaches_optimum_in_one_round(rng):
    params = unit_params(2, 3, 1)
    ch = random_channels(rng, 6, 1)
    solution = oneway_uplink(ch, params)
    # second round only confirms the first
    assert solution.iterations <= 2
    assert solution.rates[1] == pytest.approx(solution.rate, abs=1e-12)
    C_U = build_context(ch, params, 0.0).C_U
    assert solution.rate == pytest.approx(math.log2(1 + np.sum(np.abs(C_U)) ** 2), rel=1e-10)
    assert abs(solution.beam[0]) == pytest.approx(1.0)


def test_oneway_beam_matches_closed_form(params):
    ch = synthesize_channels(params, 2)
    down = oneway_downlink(ch, params)
    up = oneway_uplink(ch, params)
    np.testing.assert_allclose(down.beam, optimal_w(down.b, build_context(ch, params, 1.0)))
    np.testing.assert_allclose(up.beam, optimal_v(up.b, build_context(ch, params, 0.0)))


def test_oneway_respects_round_limit(params):
    solution = oneway_downlink(synthesize_channels(params, 1), params, max_rounds=1, tol=-1.0)
    assert solution.iterations == 1
    assert len(solution.rates) == 2


@pytest.mark.parametrize("downlink", [True, False])
def test_oneway_small_instances_match_grid(downlink):
    rng = np.random.default_rng(31 if downlink else 32)
    params = unit_params(1, 2, 2)
    design = oneway_downlink if downlink else oneway_uplink
    for _ in range(10):
        ch = random_channels(rng, 2, 2)
        assert design(ch, params).rate >= grid_rate(ch, params, downlink) - 1e-3


# time-sharing

def test_time_sharing_endpoint(params):
    ch = synthesize_channels(params, 5)
    down = oneway_downlink(ch, params)
    up = oneway_uplink(ch, params)
    point = time_sharing(ch, params, 1.0, down, up)
    _, r_U_at_bD, _ = link_rates(down.b, build_context(ch, params, 1.0))
    assert point.r_D == pytest.approx(down.rate, abs=1e-12)
    assert point.r_U == pytest.approx(r_U_at_bD, abs=1e-12)
    assert point.scheme == "time_sharing"


def test_time_sharing_midpoint_is_mean_of_endpoints(params):
    ch = synthesize_channels(params, 8)
    down = oneway_downlink(ch, params)
    up = oneway_uplink(ch, params)
    ctx = build_context(ch, params, 0.5)
    rD_bD, rU_bD, _ = link_rates(down.b, ctx)
    rD_bU, rU_bU, _ = link_rates(up.b, ctx)
    point = time_sharing(ch, params, 0.5, down, up)
    assert point.r_D == pytest.approx((rD_bD + rD_bU) / 2, abs=1e-12)
    assert point.r_U == pytest.approx((rU_bD + rU_bU) / 2, abs=1e-12)


def test_time_sharing_is_affine_in_eta(params):
    ch = synthesize_channels(params, 13)
    down = oneway_downlink(ch, params)
    up = oneway_uplink(ch, params)
    points = [time_sharing(ch, params, eta, down, up) for eta in (0.0, 0.5, 1.0)]
    assert points[1].r_D == pytest.approx((points[0].r_D + points[2].r_D) / 2, abs=1e-12)
    assert points[1].r_U == pytest.approx((points[0].r_U + points[2].r_U) / 2, abs=1e-12)


def test_time_sharing_solves_oneway_designs_when_missing(small_params):
    ch = synthesize_channels(small_params, 0)
    supplied = time_sharing(ch, small_params, 0.3, oneway_downlink(ch, small_params), oneway_uplink(ch, small_params))
    assert time_sharing(ch, small_params, 0.3) == supplied


# phase-averaging

def test_phase_averaging_identical_inputs(rng):
    b = PhaseVector.random(8, rng)
    np.testing.assert_allclose(phase_averaging(b, b, 0.37).entries, b.entries, atol=1e-12)


def test_phase_averaging_eta_one_returns_downlink(rng):
    b_D = PhaseVector.random(8, rng)
    b_U = PhaseVector.random(8, rng)
    np.testing.assert_allclose(phase_averaging(b_D, b_U, 1.0).entries, b_D.entries, atol=1e-12)


def test_phase_averaging_weights_phases():
    out = phase_averaging(PhaseVector.from_phases([0.2]), PhaseVector.from_phases([0.6]), 0.25)
    np.testing.assert_allclose(out.entries, [np.exp(0.5j)], atol=1e-12)


def test_phase_averaging_uses_principal_arguments():
    eps = 1e-3
    out = phase_averaging(PhaseVector.from_phases([math.pi - eps]), PhaseVector.from_phases([-math.pi + eps]), 0.5)
    assert abs(np.angle(out.entries[0])) < 1e-9


def test_phase_averaging_length_mismatch():
    with pytest.raises(DimensionError):
        phase_averaging(PhaseVector.ones(2), PhaseVector.ones(3), 0.5)


def test_phase_averaging_rates_use_closed_form_beamformers(params):
    ch = synthesize_channels(params, 10)
    down = oneway_downlink(ch, params)
    up = oneway_uplink(ch, params)
    point, b = phase_averaging_rates(ch, params, 0.5, down, up)
    r_D, r_U, _ = link_rates(b, build_context(ch, params, 0.5))
    assert (point.r_D, point.r_U) == (r_D, r_U)
    assert point.scheme == "phase_averaging"


def test_oneway_only_rates_reuse_phases(params):
    ch = synthesize_channels(params, 11)
    down = oneway_downlink(ch, params)
    point = oneway_only_rates(ch, params, 0.5, down, "oneway_downlink_only")
    assert point.r_D == pytest.approx(down.rate, abs=1e-12)
    assert point.weighted == pytest.approx(0.5 * point.r_D + 0.5 * point.r_U)
