"""
One-way alternating designs and the two low-complexity two-way baselines.

The one-way designs alternate the closed-form BS beamformer with the
phase-alignment solution b = exp(j arg J). Time-sharing switches between the
two one-way phase vectors (fraction eta downlink-optimal); phase-averaging
mixes their phases elementwise.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from app.core.errors import DimensionError
from app.core.logging import logger
from app.schemas.sweep import RatePoint
from app.schemas.system import SystemParams
from app.utils.channel_model import ChannelSet
from app.utils.objective import (
    CompositeContext,
    build_context,
    link_rates,
    optimal_v,
    optimal_w,
    snr_downlink,
    snr_uplink,
)
from app.utils.manifold import PhaseVector


@dataclass(eq=False)
class OneWaySolution:
    """Result of an alternating one-way design; ``beam`` is w (downlink) or v (uplink)."""
    b: PhaseVector
    beam: np.ndarray
    rate: float
    iterations: int
    rates: List[float] = field(default_factory=list)


def align_phases(J: np.ndarray) -> PhaseVector:
    """b = exp(j arg J), so that |b^H J| = sum |J_f|."""
    return PhaseVector.from_phases(np.angle(J))


def downlink_alignment_vector(w: np.ndarray, ctx: CompositeContext) -> np.ndarray:
    """J_D = diag(h_D^H) G_D w."""
    return ctx.C_D @ w


def uplink_alignment_vector(v: np.ndarray, ctx: CompositeContext) -> np.ndarray:
    """J_U = diag(v^H G_U^H) h_U."""
    return ctx.C_U @ np.conj(v)


def _alternate(
    ctx: CompositeContext,
    beamformer: Callable[[PhaseVector, CompositeContext], np.ndarray],
    alignment: Callable[[np.ndarray, CompositeContext], np.ndarray],
    rate: Callable[[PhaseVector, np.ndarray], float],
    max_rounds: int,
    tol: float,
    label: str,
) -> OneWaySolution:
    # Matched filter to the b = 1 composite channel
    b = PhaseVector.ones(ctx.F)
    beam = beamformer(b, ctx)
    rates = [rate(b, beam)]
    rounds = 0
    for rounds in range(1, max_rounds + 1):
        b = align_phases(alignment(beam, ctx))
        beam = beamformer(b, ctx)
        rates.append(rate(b, beam))
        if rates[-1] - rates[-2] < tol:
            break
    logger.debug(f"One-way {label} design: rate {rates[-1]:.4f} after {rounds} rounds")
    return OneWaySolution(b=b, beam=beam, rate=rates[-1], iterations=rounds, rates=rates)


def oneway_downlink(
    ch: ChannelSet,
    params: SystemParams,
    max_rounds: int = 50,
    tol: float = 1e-6,
) -> OneWaySolution:
    """
    Downlink-only design: alternate w <- MRT(b) and b <- exp(j arg J_D(w)).

    Stops when a round improves the rate by less than ``tol`` bit/s/Hz.
    """
    ctx = build_context(ch, params, 1.0)
    return _alternate(
        ctx,
        optimal_w,
        downlink_alignment_vector,
        lambda b, w: math.log2(1.0 + snr_downlink(b, w, ctx)),
        max_rounds,
        tol,
        "downlink",
    )


def oneway_uplink(
    ch: ChannelSet,
    params: SystemParams,
    max_rounds: int = 50,
    tol: float = 1e-6,
) -> OneWaySolution:
    """Uplink-only design: alternate v <- MRC(b) and b <- exp(j arg J_U(v)), P_U = P_U,max."""
    ctx = build_context(ch, params, 0.0)
    return _alternate(
        ctx,
        optimal_v,
        uplink_alignment_vector,
        lambda b, v: math.log2(1.0 + snr_uplink(b, v, ctx)),
        max_rounds,
        tol,
        "uplink",
    )


def time_sharing(
    ch: ChannelSet,
    params: SystemParams,
    eta: float,
    downlink: Optional[OneWaySolution] = None,
    uplink: Optional[OneWaySolution] = None,
) -> RatePoint:
    """
    Rates of switching between b_D* (fraction eta) and b_U* (fraction 1 - eta).

    Every time slice uses the closed-form w*, v* of the phase vector active in
    that slice. One-way solutions are computed when not supplied.
    """
    downlink = downlink or oneway_downlink(ch, params)
    uplink = uplink or oneway_uplink(ch, params)
    ctx = build_context(ch, params, eta)
    rD_at_bD, rU_at_bD, _ = link_rates(downlink.b, ctx)
    rD_at_bU, rU_at_bU, _ = link_rates(uplink.b, ctx)
    return RatePoint(
        r_D=eta * rD_at_bD + (1.0 - eta) * rD_at_bU,
        r_U=eta * rU_at_bD + (1.0 - eta) * rU_at_bU,
        scheme="time_sharing",
        eta=eta,
    )


def phase_averaging(b_D: PhaseVector, b_U: PhaseVector, eta: float) -> PhaseVector:
    """
    Elementwise phase eta * arg(b_D) + (1 - eta) * arg(b_U).

    Principal arguments in (-pi, pi] are averaged without unwrapping, so
    near-antipodal pairs such as pi - e and -pi + e average to a phase near 0.
    """
    if len(b_D) != len(b_U):
        raise DimensionError(f"phase vectors differ in length: {len(b_D)} and {len(b_U)}")
    return PhaseVector.from_phases(eta * np.angle(b_D.entries) + (1.0 - eta) * np.angle(b_U.entries))


def phase_averaging_rates(
    ch: ChannelSet,
    params: SystemParams,
    eta: float,
    downlink: Optional[OneWaySolution] = None,
    uplink: Optional[OneWaySolution] = None,
) -> Tuple[RatePoint, PhaseVector]:
    """Rates of the phase-averaged RIS configuration with recomputed w*, v*."""
    downlink = downlink or oneway_downlink(ch, params)
    uplink = uplink or oneway_uplink(ch, params)
    b = phase_averaging(downlink.b, uplink.b, eta)
    r_D, r_U, _ = link_rates(b, build_context(ch, params, eta))
    return RatePoint(r_D=r_D, r_U=r_U, scheme="phase_averaging", eta=eta), b


def oneway_only_rates(
    ch: ChannelSet,
    params: SystemParams,
    eta: float,
    solution: OneWaySolution,
    scheme: str,
) -> RatePoint:
    """Rates when a single one-way phase vector serves both directions."""
    r_D, r_U, _ = link_rates(solution.b, build_context(ch, params, eta))
    return RatePoint(r_D=r_D, r_U=r_U, scheme=scheme, eta=eta)
