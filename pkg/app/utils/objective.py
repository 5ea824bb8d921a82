"""
Two-way weighted sum-rate problem.

With the reflection matrix Theta = diag(conj(b)), the effective BS-side
channels are h~_D = b^H C_D and h~_U = (C_U^H b)^T, where
C_D = diag(h_D^H) G_D and C_U = diag(h_U^T) conj(G_U). MRT/MRC are optimal
for a fixed b, which reduces the problem to

    f(b) = eta * log2(1 + P_D ||b^H C_D||^2 / s_D) + (1 - eta) * log2(1 + P_U ||b^H C_U||^2 / s_U)

over the complex circle manifold. Rates are in bit/s/Hz throughout.
"""
import math
import time
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np

from app.core.errors import DimensionError, DomainError, ZeroChannelError
from app.core.logging import logger
from app.schemas.optimizer import RcgConfig
from app.schemas.system import SystemParams
from app.utils.channel_model import ChannelSet
from app.utils.manifold import (
    PhaseVector,
    RcgTrace,
    TangentVector,
    inner,
    project_tangent,
    rcg_maximize,
    retract,
)

LN2 = math.log(2.0)
GRADCHECK_TOLERANCE = 1e-5


@dataclass(frozen=True, eq=False)
class CompositeContext:
    """Composite channels and link budget of one weighted sum-rate problem."""
    C_D: np.ndarray
    C_U: np.ndarray
    eta: float
    P_D_max: float
    P_U_max: float
    sigma2_D: float
    sigma2_U: float

    def __post_init__(self):
        if self.C_D.ndim != 2 or self.C_D.shape != self.C_U.shape:
            raise DimensionError(f"composite channels must share an F x M shape, got {self.C_D.shape} and {self.C_U.shape}")
        if not 0.0 <= self.eta <= 1.0:
            raise DomainError(f"eta must lie in [0, 1], got {self.eta}")

    @property
    def F(self) -> int:
        return self.C_D.shape[0]

    @property
    def M(self) -> int:
        return self.C_D.shape[1]

    def with_eta(self, eta: float) -> "CompositeContext":
        return CompositeContext(self.C_D, self.C_U, eta, self.P_D_max, self.P_U_max, self.sigma2_D, self.sigma2_U)


@dataclass(frozen=True, eq=False)
class BeamformerPair:
    """BS transmit beamformer w, receive combiner v and uplink power."""
    w: np.ndarray
    v: np.ndarray
    P_U: float


@dataclass(eq=False)
class TwoWaySolution:
    b: PhaseVector
    beams: BeamformerPair
    r_D: float
    r_U: float
    objective: float
    trace: RcgTrace
    eta: float


@dataclass(frozen=True)
class GradientCheckResult:
    instances: int
    directions: int
    max_relative_error: float

    @property
    def passed(self) -> bool:
        return self.max_relative_error < GRADCHECK_TOLERANCE


def reflection_matrix(b: PhaseVector) -> np.ndarray:
    """Theta = diag(conj(b)), the RIS matrix acting between the channels."""
    return np.diag(np.conj(b.entries))


def build_context(ch: ChannelSet, params: SystemParams, eta: float) -> CompositeContext:
    """
    Composite channels C_D = diag(h_D^H) G_D and C_U = diag(h_U^T) conj(G_U).

    Args:
        ch: Channel realization
        params: Scenario (powers and noise)
        eta: Downlink weight in [0, 1]

    Returns:
        CompositeContext for the weighted sum-rate objective
    """
    ch.validate(params)
    C_D = np.conj(ch.h_D)[:, None] * ch.G_D
    C_U = ch.h_U[:, None] * np.conj(ch.G_U)
    return CompositeContext(
        C_D=C_D,
        C_U=C_U,
        eta=float(eta),
        P_D_max=params.P_D_max,
        P_U_max=params.P_U_max,
        sigma2_D=params.sigma2_D,
        sigma2_U=params.sigma2_U,
    )


def _check_point(b: PhaseVector, ctx: CompositeContext):
    if len(b) != ctx.F:
        raise DimensionError(f"phase vector has {len(b)} entries, context has F={ctx.F}")


def effective_downlink(b: PhaseVector, ctx: CompositeContext) -> np.ndarray:
    """h~_D = b^H C_D as a length-M array."""
    _check_point(b, ctx)
    return ctx.C_D.T @ np.conj(b.entries)


def effective_uplink(b: PhaseVector, ctx: CompositeContext) -> np.ndarray:
    """h~_U = h_U^H Theta^H G_U as a length-M array (equals C_U^H b)."""
    _check_point(b, ctx)
    return ctx.C_U.conj().T @ b.entries


def optimal_w(b: PhaseVector, ctx: CompositeContext) -> np.ndarray:
    """Maximum ratio transmission sqrt(P_D) h~_D^H / ||h~_D||."""
    h = effective_downlink(b, ctx)
    norm = np.linalg.norm(h)
    if not norm > 0:
        raise ZeroChannelError("effective downlink channel is zero")
    return math.sqrt(ctx.P_D_max) * np.conj(h) / norm


def optimal_v(b: PhaseVector, ctx: CompositeContext) -> np.ndarray:
    """Maximum ratio combining h~_U^H / ||h~_U||."""
    h = effective_uplink(b, ctx)
    norm = np.linalg.norm(h)
    if not norm > 0:
        raise ZeroChannelError("effective uplink channel is zero")
    return np.conj(h) / norm


def snr_downlink(b: PhaseVector, w: np.ndarray, ctx: CompositeContext) -> float:
    """|h_D^H Theta G_D w|^2 / sigma_D^2"""
    return float(abs(effective_downlink(b, ctx) @ w) ** 2 / ctx.sigma2_D)


def snr_uplink(b: PhaseVector, v: np.ndarray, ctx: CompositeContext) -> float:
    """P_U,max |v^H G_U^H Theta h_U|^2 / sigma_U^2"""
    return float(ctx.P_U_max * abs(effective_uplink(b, ctx) @ v) ** 2 / ctx.sigma2_U)


def _link_gains(b: PhaseVector, ctx: CompositeContext) -> Tuple[np.ndarray, np.ndarray, float, float]:
    _check_point(b, ctx)
    a_D = ctx.C_D.conj().T @ b.entries
    a_U = ctx.C_U.conj().T @ b.entries
    snr_D = ctx.P_D_max * float(np.vdot(a_D, a_D).real) / ctx.sigma2_D
    snr_U = ctx.P_U_max * float(np.vdot(a_U, a_U).real) / ctx.sigma2_U
    return a_D, a_U, snr_D, snr_U


def objective_f(b: PhaseVector, ctx: CompositeContext) -> float:
    """Weighted sum rate eta * f1(b) + (1 - eta) * f2(b) with closed-form beamformers."""
    _, _, snr_D, snr_U = _link_gains(b, ctx)
    return ctx.eta * math.log2(1.0 + snr_D) + (1.0 - ctx.eta) * math.log2(1.0 + snr_U)


def euclid_gradient(b: PhaseVector, ctx: CompositeContext) -> np.ndarray:
    """
    Euclidean gradient of objective_f under the metric Re<u, v>.

    Direction of C_D C_D^H b / (1 + SNR_D) and C_U C_U^H b / (1 + SNR_U)
    weighted by eta P / sigma^2; scaled by 2 / ln 2 for the real-inner-product
    derivative of a base-2 logarithm.
    """
    a_D, a_U, snr_D, snr_U = _link_gains(b, ctx)
    down = ctx.eta * ctx.P_D_max / (ctx.sigma2_D * (1.0 + snr_D)) * (ctx.C_D @ a_D)
    up = (1.0 - ctx.eta) * ctx.P_U_max / (ctx.sigma2_U * (1.0 + snr_U)) * (ctx.C_U @ a_U)
    return (2.0 / LN2) * (down + up)


def link_rates(b: PhaseVector, ctx: CompositeContext) -> Tuple[float, float, BeamformerPair]:
    """
    Downlink and uplink rates at b with freshly computed MRT/MRC.

    A vanishing effective channel yields rate 0 for that direction, a zero
    transmit beamformer and the first unit vector as combiner.
    """
    try:
        w = optimal_w(b, ctx)
        r_D = math.log2(1.0 + snr_downlink(b, w, ctx))
    except ZeroChannelError:
        w, r_D = np.zeros(ctx.M, dtype=complex), 0.0
    try:
        v = optimal_v(b, ctx)
        r_U = math.log2(1.0 + snr_uplink(b, v, ctx))
    except ZeroChannelError:
        v, r_U = np.eye(ctx.M, dtype=complex)[0], 0.0
    return r_D, r_U, BeamformerPair(w=w, v=v, P_U=ctx.P_U_max)


def maximize_phases(
    ctx: CompositeContext,
    cfg: RcgConfig,
    b0: Optional[PhaseVector] = None,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[PhaseVector, RcgTrace]:
    """
    Run RCG on objective_f from ``cfg.starts`` starting points, keep the best.

    The first start is ``b0`` (or the configured initial point); further
    starts use uniformly random phases drawn from ``rng``.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    if b0 is None:
        b0 = PhaseVector.ones(ctx.F) if cfg.initial_point == "ones" else PhaseVector.random(ctx.F, rng)
    starts = [b0] + [PhaseVector.random(ctx.F, rng) for _ in range(cfg.starts - 1)]

    best: Optional[Tuple[PhaseVector, RcgTrace]] = None
    for start in starts:
        b, trace = rcg_maximize(lambda x: objective_f(x, ctx), lambda x: euclid_gradient(x, ctx), start, cfg)
        if best is None or trace.objectives[-1] > best[1].objectives[-1]:
            best = (b, trace)
    return best


def two_way_optimize(
    ch: ChannelSet,
    params: SystemParams,
    eta: float,
    cfg: RcgConfig,
    b0: Optional[PhaseVector] = None,
    rng: Optional[np.random.Generator] = None,
) -> TwoWaySolution:
    """
    Jointly optimize the RIS phases and the BS beamformers.

    Args:
        ch: Channel realization
        params: Scenario
        eta: Downlink weight in [0, 1]
        cfg: Optimizer settings
        b0: Starting point (defaults to the configured initial point)
        rng: Generator for random starts

    Returns:
        TwoWaySolution with rates, beamformers and the RCG trace

    Raises:
        NumericalFailure: Propagated from the optimizer
    """
    start_time = time.perf_counter()
    ctx = build_context(ch, params, eta)
    b, trace = maximize_phases(ctx, cfg, b0, rng)
    r_D, r_U, beams = link_rates(b, ctx)
    objective = ctx.eta * r_D + (1.0 - ctx.eta) * r_U
    logger.debug(
        f"Two-way optimization at eta={eta}: r_D={r_D:.4f}, r_U={r_U:.4f}, "
        f"{trace.iterations} iterations ({trace.termination}) in {time.perf_counter() - start_time:.3f}s"
    )
    return TwoWaySolution(b=b, beams=beams, r_D=r_D, r_U=r_U, objective=objective, trace=trace, eta=ctx.eta)


def random_context(
    rng: np.random.Generator,
    F: int,
    M: int,
    eta: float,
) -> CompositeContext:
    """Synthetic problem instance with CN(0, 1/F) composite channels and unit powers/noise."""
    scale = 1.0 / math.sqrt(2.0 * F)
    C_D = scale * (rng.standard_normal((F, M)) + 1j * rng.standard_normal((F, M)))
    C_U = scale * (rng.standard_normal((F, M)) + 1j * rng.standard_normal((F, M)))
    return CompositeContext(C_D, C_U, eta, 1.0, 1.0, 1.0, 1.0)


def directional_errors(
    ctx: CompositeContext,
    b: PhaseVector,
    directions: Iterable[TangentVector],
    h: float = 1e-6,
) -> List[float]:
    """
    Compare <grad f, d> against central differences along the retraction curve.

    The error of each direction is normalized by ||grad f|| * ||d||.
    """
    grad = project_tangent(b, euclid_gradient(b, ctx))
    scale = max(grad.norm(), np.finfo(float).tiny)
    errors = []
    for d in directions:
        forward = objective_f(retract(b, d, h), ctx)
        backward = objective_f(retract(b, TangentVector(-d.entries, b), h), ctx)
        finite_difference = (forward - backward) / (2.0 * h)
        errors.append(abs(finite_difference - inner(grad, d)) / (scale * d.norm()))
    return errors


def gradient_check(
    seed: int,
    instances: int = 100,
    directions: int = 20,
    h: float = 1e-6,
    F: int = 16,
    M: int = 4,
    etas: Iterable[float] = (0.0, 0.3, 0.7, 1.0),
) -> GradientCheckResult:
    """
    Finite-difference check of the Riemannian gradient on random instances.

    Instances cycle through ``etas``; each uses a random point and
    ``directions`` random unit tangent directions.
    """
    rng = np.random.default_rng(seed)
    etas = list(etas)
    worst = 0.0
    for k in range(instances):
        ctx = random_context(rng, F, M, etas[k % len(etas)])
        b = PhaseVector.random(F, rng)
        tangents = []
        for _ in range(directions):
            d = project_tangent(b, rng.standard_normal(F) + 1j * rng.standard_normal(F))
            tangents.append(TangentVector(d.entries / d.norm(), b))
        worst = max(worst, max(directional_errors(ctx, b, tangents, h)))
    logger.info(f"Gradient check: {instances} instances x {directions} directions, max relative error {worst:.3e}")
    return GradientCheckResult(instances=instances, directions=directions, max_relative_error=worst)
