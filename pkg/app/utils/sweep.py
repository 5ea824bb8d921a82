"""
Batch experiments: seeded sweeps over distance, eta or the number of RIS
elements, rate regions and summaries.

Every (value, seed) cell synthesizes one channel realization and evaluates all
requested schemes on it, so scheme comparisons are paired per seed. Cells are
independent; with ``workers > 1`` they run on a process pool and the records
are sorted by (scheme, value, seed) before they are returned.
"""
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from app.core.errors import DomainError, RisError
from app.core.logging import logger
from app.schemas.sweep import RECORD_COLUMNS, RatePoint, SweepRecord, SweepSpec
from app.schemas.system import SystemParams
from app.utils.channel_model import ChannelSet, synthesize_channels
from app.utils.heuristics import (
    OneWaySolution,
    oneway_downlink,
    oneway_only_rates,
    oneway_uplink,
    phase_averaging_rates,
    time_sharing,
)
from app.utils.objective import two_way_optimize

SUMMARY_METRICS = ("r_D", "r_U", "objective", "iters")


@dataclass(frozen=True)
class CellFailure:
    """A scheme that could not be evaluated on one cell."""
    scheme: str
    value: float
    seed: int
    error: str


@dataclass
class SweepOutcome:
    records: List[SweepRecord] = field(default_factory=list)
    failures: List[CellFailure] = field(default_factory=list)


@dataclass
class RegionCurve:
    """Mean (r_D, r_U) per eta for one scheme and its Pareto frontier."""
    scheme: str
    etas: np.ndarray
    r_D: np.ndarray
    r_U: np.ndarray
    frontier: np.ndarray  # indices into etas, ordered by increasing r_D
    peak_eta: float  # eta maximizing mean r_D + r_U

    @property
    def frontier_points(self) -> np.ndarray:
        return np.column_stack([self.r_D[self.frontier], self.r_U[self.frontier]])


def cell_scenario(spec: SweepSpec, value: float) -> Tuple[SystemParams, float]:
    """Scenario and eta of the cell at ``value`` of the swept variable."""
    if spec.variable == "bs_ris_distance":
        return spec.base.with_distance(value), spec.eta
    if spec.variable == "eta":
        if not 0.0 <= value <= 1.0:
            raise DomainError(f"eta must lie in [0, 1], got {value}")
        return spec.base, float(value)
    elements = int(round(value))
    if elements != value:
        raise DomainError(f"number of RIS elements must be an integer, got {value}")
    return spec.base.with_elements(elements), spec.eta


class _OneWayCache:
    """Lazily solved one-way designs shared by all heuristics of a cell."""

    def __init__(self, ch: ChannelSet, params: SystemParams, spec: SweepSpec):
        self._ch = ch
        self._params = params
        self._spec = spec
        self._downlink: Optional[OneWaySolution] = None
        self._uplink: Optional[OneWaySolution] = None

    @property
    def downlink(self) -> OneWaySolution:
        if self._downlink is None:
            self._downlink = oneway_downlink(self._ch, self._params, self._spec.oneway_max_rounds, self._spec.oneway_tol)
        return self._downlink

    @property
    def uplink(self) -> OneWaySolution:
        if self._uplink is None:
            self._uplink = oneway_uplink(self._ch, self._params, self._spec.oneway_max_rounds, self._spec.oneway_tol)
        return self._uplink


def _run_scheme(
    scheme: str,
    ch: ChannelSet,
    params: SystemParams,
    eta: float,
    spec: SweepSpec,
    oneway: _OneWayCache,
    seed: int,
) -> Tuple[RatePoint, int]:
    if scheme == "two_way":
        # Extra random starts are seeded per cell
        rng = np.random.default_rng([seed, 1])
        solution = two_way_optimize(ch, params, eta, spec.optimizer, rng=rng)
        point = RatePoint(r_D=solution.r_D, r_U=solution.r_U, scheme=scheme, eta=eta)
        return point, solution.trace.iterations
    if scheme == "time_sharing":
        point = time_sharing(ch, params, eta, oneway.downlink, oneway.uplink)
        return point, oneway.downlink.iterations + oneway.uplink.iterations
    if scheme == "phase_averaging":
        point, _ = phase_averaging_rates(ch, params, eta, oneway.downlink, oneway.uplink)
        return point, oneway.downlink.iterations + oneway.uplink.iterations
    if scheme == "oneway_downlink_only":
        return oneway_only_rates(ch, params, eta, oneway.downlink, scheme), oneway.downlink.iterations
    if scheme == "oneway_uplink_only":
        return oneway_only_rates(ch, params, eta, oneway.uplink, scheme), oneway.uplink.iterations
    raise DomainError(f"unknown scheme: {scheme}")


def evaluate_cell(spec: SweepSpec, value: float, seed: int) -> SweepOutcome:
    """
    Evaluate every scheme of ``spec`` on the realization (value, seed).

    Failures are recorded per scheme; a failed channel synthesis fails every
    scheme of the cell.
    """
    outcome = SweepOutcome()
    try:
        params, eta = cell_scenario(spec, value)
        ch = synthesize_channels(params, seed)
    except (RisError, ValueError) as e:
        logger.warning(f"Cell {spec.variable}={value}, seed {seed} failed: {e}")
        outcome.failures.extend(CellFailure(s, value, seed, str(e)) for s in spec.schemes)
        return outcome

    oneway = _OneWayCache(ch, params, spec)
    for scheme in spec.schemes:
        start_time = time.perf_counter()
        try:
            point, iters = _run_scheme(scheme, ch, params, eta, spec, oneway, seed)
        except (RisError, ValueError, ArithmeticError) as e:
            logger.warning(f"Scheme {scheme} failed on {spec.variable}={value}, seed {seed}: {e}")
            outcome.failures.append(CellFailure(scheme, value, seed, str(e)))
            continue
        elapsed_ms = (time.perf_counter() - start_time) * 1000.0 if spec.record_timing else 0.0
        outcome.records.append(
            SweepRecord(
                scheme=scheme,
                variable=spec.variable,
                value=value,
                seed=seed,
                eta=eta,
                r_D=point.r_D,
                r_U=point.r_U,
                objective=point.weighted,
                iters=iters,
                ms=elapsed_ms,
            )
        )
    return outcome


def _evaluate_cell_job(job: Tuple[SweepSpec, float, int]) -> SweepOutcome:
    return evaluate_cell(*job)


def execute_sweep(spec: SweepSpec) -> SweepOutcome:
    """
    Run all cells of ``spec`` and collect records and failures.

    Seeds are base_seed .. base_seed + seeds - 1 for every grid value.
    """
    seeds = range(spec.base_seed, spec.base_seed + spec.seeds)
    jobs = [(spec, value, seed) for value in spec.values for seed in seeds]
    logger.info(
        f"Starting {spec.variable} sweep: {len(spec.values)} values x {spec.seeds} seeds, "
        f"schemes {', '.join(spec.schemes)}, {spec.workers} worker(s)"
    )

    start_time = time.perf_counter()
    outcome = SweepOutcome()
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(_evaluate_cell_job, jobs, chunksize=max(1, len(jobs) // (4 * spec.workers))))
    else:
        results = []
        for k, job in enumerate(jobs, start=1):
            results.append(_evaluate_cell_job(job))
            if k % max(1, len(jobs) // 10) == 0:
                logger.info(f"Sweep progress: {k}/{len(jobs)} cells")

    for result in results:
        outcome.records.extend(result.records)
        outcome.failures.extend(result.failures)
    outcome.records.sort(key=lambda r: (r.scheme, r.value, r.seed))

    logger.info(
        f"Sweep finished in {time.perf_counter() - start_time:.1f}s: "
        f"{len(outcome.records)} records, {len(outcome.failures)} failures"
    )
    return outcome


def run_sweep(spec: SweepSpec) -> List[SweepRecord]:
    """Records of every (scheme, value, seed) that evaluated successfully."""
    return execute_sweep(spec).records


def records_frame(records: Iterable[SweepRecord]) -> pd.DataFrame:
    """Records as a DataFrame with the CSV column order."""
    return pd.DataFrame([r.model_dump() for r in records], columns=RECORD_COLUMNS)


def summarize(records: Sequence[SweepRecord]) -> pd.DataFrame:
    """
    Median and mean of rates, objective and iterations per (scheme, value).

    Returns:
        DataFrame with columns scheme, value, seeds and <metric>_median,
        <metric>_mean for r_D, r_U, objective and iters
    """
    df = records_frame(records)
    if df.empty:
        return pd.DataFrame(columns=["scheme", "value", "seeds"])
    grouped = df.groupby(["scheme", "value"], sort=True)
    summary = grouped[list(SUMMARY_METRICS)].agg(["median", "mean"])
    summary.columns = [f"{metric}_{stat}" for metric, stat in summary.columns]
    summary.insert(0, "seeds", grouped.size())
    return summary.reset_index()


def pareto_mask(r_D: np.ndarray, r_U: np.ndarray) -> np.ndarray:
    """Points not strictly dominated by another point in both coordinates."""
    points = np.column_stack([r_D, r_U])
    mask = np.ones(len(points), dtype=bool)
    for i, p in enumerate(points):
        dominated = np.all(points >= p, axis=1) & np.any(points > p, axis=1)
        mask[i] = not np.any(dominated)
    return mask


def rate_region(spec: SweepSpec, records: Optional[Sequence[SweepRecord]] = None) -> Dict[str, RegionCurve]:
    """
    Downlink-uplink rate region per scheme from an eta sweep.

    Args:
        spec: Sweep with ``variable == "eta"``; the grid must contain 0 and 1
        records: Records of ``spec``; the sweep is run when omitted

    Returns:
        RegionCurve per scheme with the seed-averaged rates per eta
    """
    if spec.variable != "eta":
        raise DomainError(f"rate regions need an eta sweep, got {spec.variable}")
    if not {0.0, 1.0} <= set(spec.values):
        raise DomainError("eta grid must include both endpoints 0 and 1")
    if records is None:
        records = run_sweep(spec)

    df = records_frame(records)
    curves: Dict[str, RegionCurve] = {}
    for scheme, group in df.groupby("scheme", sort=True):
        means = group.groupby("value", sort=True)[["r_D", "r_U"]].mean()
        etas = means.index.to_numpy(dtype=float)
        r_D = means["r_D"].to_numpy()
        r_U = means["r_U"].to_numpy()
        frontier = np.flatnonzero(pareto_mask(r_D, r_U))
        frontier = frontier[np.argsort(r_D[frontier], kind="stable")]
        curves[scheme] = RegionCurve(
            scheme=scheme,
            etas=etas,
            r_D=r_D,
            r_U=r_U,
            frontier=frontier,
            peak_eta=float(etas[np.argmax(r_D + r_U)]),
        )
        logger.debug(f"Rate region {scheme}: {len(frontier)} frontier points, sum-rate peak at eta={curves[scheme].peak_eta}")
    return curves


def dominates(upper: np.ndarray, lower: np.ndarray, tol: float = 0.0) -> bool:
    """True when every point of ``lower`` is weakly exceeded in both coordinates by some point of ``upper``."""
    return all(np.any(np.all(upper >= p - tol, axis=1)) for p in lower)
