"""
Long statistical checks on the default scenario. Run with ``pytest -m slow``.
"""
import numpy as np
import pandas as pd
import pytest

from app.schemas.sweep import DEFAULT_VALUES
from app.utils.sweep import dominates, rate_region, records_frame, run_sweep

pytestmark = pytest.mark.slow


def median_objective(frame: pd.DataFrame, scheme: str, value: float) -> float:
    rows = frame[(frame["scheme"] == scheme) & (frame["value"] == value)]
    return float(rows["objective"].median())


def test_ris_near_either_end_beats_the_middle(settings):
    spec = settings.sweep_spec(values=[3.0, 5.0, 20.0, 45.0, 47.0], schemes=["two_way"], seeds=100)
    frame = records_frame(run_sweep(spec))
    middle = median_objective(frame, "two_way", 20.0)
    assert median_objective(frame, "two_way", 5.0) > middle
    assert median_objective(frame, "two_way", 45.0) > middle
    assert median_objective(frame, "two_way", 47.0) > median_objective(frame, "two_way", 3.0)


def uplink_gain_at_matched_downlink(frame: pd.DataFrame, eta: float = 0.5) -> pd.Series:
    """
    Per-seed ratio of the two-way uplink rate at ``eta`` to the time-sharing uplink rate at the same downlink rate.

    Time-sharing is affine in eta, so each seed's time-sharing line runs between its eta = 0 and eta = 1 points.
    """
    by_seed = frame.set_index(["scheme", "value", "seed"]).sort_index()
    two_way = by_seed.loc[("two_way", eta)]
    downlink_end = by_seed.loc[("time_sharing", 1.0)]
    uplink_end = by_seed.loc[("time_sharing", 0.0)]
    span = downlink_end["r_D"] - uplink_end["r_D"]
    share = ((two_way["r_D"] - uplink_end["r_D"]) / span).clip(0.0, 1.0)
    matched_r_U = uplink_end["r_U"] + share * (downlink_end["r_U"] - uplink_end["r_U"])
    return two_way["r_U"] / matched_r_U


def test_two_way_region_dominates_time_sharing(settings):
    spec = settings.sweep_spec(
        variable="eta",
        values=DEFAULT_VALUES["eta"],
        schemes=["two_way", "time_sharing", "phase_averaging"],
        seeds=50,
    )
    spec = spec.model_copy(update={"base": spec.base.with_distance(50.0)})
    records = run_sweep(spec)
    curves = rate_region(spec, records)
    two_way = curves["two_way"]
    time_sharing = curves["time_sharing"]
    # the eta = 1 endpoints tie on r_D and differ only in the ignored r_U
    assert dominates(two_way.frontier_points, time_sharing.frontier_points, tol=0.01)
    assert dominates(time_sharing.frontier_points, curves["phase_averaging"].frontier_points)

    gains = uplink_gain_at_matched_downlink(records_frame(records))
    assert gains.notna().sum() >= 45
    assert gains.median() >= 1.2


def test_phase_averaging_overtakes_one_way_designs_with_many_elements(settings):
    spec = settings.sweep_spec(
        variable="ris_elements",
        values=[20.0, 200.0],
        schemes=["two_way", "phase_averaging", "oneway_downlink_only", "oneway_uplink_only"],
        seeds=100,
    )
    frame = records_frame(run_sweep(spec))
    averaged = median_objective(frame, "phase_averaging", 200.0)
    assert averaged > median_objective(frame, "oneway_downlink_only", 200.0)
    assert averaged > median_objective(frame, "oneway_uplink_only", 200.0)
    gap = median_objective(frame, "two_way", 200.0) - averaged
    assert 0.6 <= gap <= 1.8


def test_two_way_beats_heuristics_per_realization(settings):
    spec = settings.sweep_spec(values=[45.0], schemes=["two_way", "time_sharing", "phase_averaging"], seeds=100)
    frame = records_frame(run_sweep(spec))
    objectives = frame.pivot(index="seed", columns="scheme", values="objective")
    best_heuristic = objectives[["time_sharing", "phase_averaging"]].max(axis=1)
    wins = (objectives["two_way"] >= best_heuristic - 1e-9).mean()
    assert wins >= 0.9
    assert objectives["two_way"].median() > best_heuristic.median()
