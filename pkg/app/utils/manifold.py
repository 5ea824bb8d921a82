"""
Complex circle manifold primitives and the Riemannian conjugate gradient driver.

The feasible set is {b in C^F : |b_f| = 1 for all f}. Tangent vectors at b
satisfy Re{d_f * conj(b_f)} = 0, the metric is the real part of the Euclidean
complex inner product, retraction normalizes elementwise, and vector transport
is projection onto the destination tangent space.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from app.core.errors import (
    DimensionError,
    DomainError,
    LineSearchFailure,
    NumericalFailure,
    RetractionDegenerateError,
)
from app.core.logging import logger
from app.schemas.optimizer import RcgConfig

UNIT_MODULUS_TOL = 1e-12
DEGENERATE_MODULUS = 1e-14
MIN_STEP = 1e-16

# Termination reasons
GRADIENT_TOLERANCE = "gradient tolerance"
MAX_ITERATIONS = "max iterations"
LINE_SEARCH_FAILED = "line search failed"


@dataclass(frozen=True, eq=False)
class PhaseVector:
    """RIS reflection vector b with unit-modulus entries."""
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 1 or entries.size < 1:
            raise DimensionError(f"phase vector must be a non-empty 1-D array, got shape {entries.shape}")
        if np.max(np.abs(np.abs(entries) - 1.0)) > UNIT_MODULUS_TOL:
            raise DomainError("phase vector entries must have unit modulus")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def ones(cls, size: int) -> "PhaseVector":
        return cls(np.ones(size, dtype=complex))

    @classmethod
    def from_phases(cls, phases) -> "PhaseVector":
        return cls(np.exp(1j * np.asarray(phases, dtype=float)))

    @classmethod
    def random(cls, size: int, rng: np.random.Generator) -> "PhaseVector":
        """Uniformly random phases in [0, 2*pi)."""
        return cls.from_phases(rng.uniform(0.0, 2.0 * np.pi, size))

    @property
    def phases(self) -> np.ndarray:
        """Principal arguments in (-pi, pi]."""
        return np.angle(self.entries)

    def __len__(self) -> int:
        return self.entries.size


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A tangent vector at ``base``."""
    entries: np.ndarray
    base: PhaseVector

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))


@dataclass
class RcgIteration:
    objective: float
    grad_norm: float
    step: float


@dataclass
class RcgTrace:
    """Per-iteration history of an RCG run. Record 0 is the starting point (step 0)."""
    records: List[RcgIteration] = field(default_factory=list)
    termination: Optional[str] = None

    @property
    def iterations(self) -> int:
        return max(len(self.records) - 1, 0)

    @property
    def objectives(self) -> np.ndarray:
        return np.array([r.objective for r in self.records])

    @property
    def grad_norms(self) -> np.ndarray:
        return np.array([r.grad_norm for r in self.records])


def _check_length(b: PhaseVector, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.shape != b.entries.shape:
        raise DimensionError(f"vector of shape {v.shape} does not match phase vector of length {len(b)}")
    return v


def inner(u: TangentVector, v: TangentVector) -> float:
    """Riemannian metric: Re<u, v>."""
    return float(np.real(np.vdot(u.entries, v.entries)))


def project_tangent(b: PhaseVector, v) -> TangentVector:
    """Orthogonal projection of v onto the tangent space at b: v - Re{v o conj(b)} o b."""
    v = _check_length(b, v)
    return TangentVector(v - np.real(v * np.conj(b.entries)) * b.entries, b)


def retract(b: PhaseVector, d: TangentVector, alpha: float) -> PhaseVector:
    """Elementwise normalization of b + alpha*d."""
    if not alpha > 0:
        raise DomainError(f"step size must be positive, got {alpha}")
    moved = b.entries + alpha * _check_length(b, d.entries)
    modulus = np.abs(moved)
    if np.min(modulus) < DEGENERATE_MODULUS:
        raise RetractionDegenerateError(f"retraction collapsed an element at alpha={alpha:g}")
    return PhaseVector(moved / modulus)


def transport(d: TangentVector, b_next: PhaseVector) -> TangentVector:
    """Carry d to the tangent space at b_next by projection."""
    return project_tangent(b_next, d.entries)


def armijo_step(
    objective: Callable[[PhaseVector], float],
    b: PhaseVector,
    d: TangentVector,
    cfg: RcgConfig,
    *,
    grad: TangentVector,
    value: Optional[float] = None,
) -> Tuple[float, PhaseVector]:
    """
    Backtracking line search along the retraction curve.

    Accepts the first alpha = initial * shrink^k with
    objective(R_b(alpha*d)) >= objective(b) + slope * alpha * Re<grad, d>.

    Args:
        objective: Function to maximize
        b: Current point
        d: Search direction, tangent at b
        cfg: Optimizer settings
        grad: Riemannian gradient at b
        value: objective(b), if already known

    Returns:
        Accepted step size and the new point

    Raises:
        DomainError: If d is not an ascent direction
        LineSearchFailure: If no step of at least 1e-16 is accepted
        NumericalFailure: If the objective is non-finite at a trial point
    """
    slope = inner(grad, d)
    if not slope > 0:
        raise DomainError(f"search direction is not an ascent direction (slope {slope:g})")
    if value is None:
        value = objective(b)

    alpha = cfg.armijo_initial_step
    while alpha >= MIN_STEP:
        try:
            candidate = retract(b, d, alpha)
        except RetractionDegenerateError:
            alpha *= cfg.armijo_shrink
            continue
        trial = float(objective(candidate))
        if not math.isfinite(trial):
            raise NumericalFailure(f"non-finite objective at trial step {alpha:g}")
        if trial >= value + cfg.armijo_slope * alpha * slope:
            return alpha, candidate
        alpha *= cfg.armijo_shrink

    raise LineSearchFailure(f"no sufficient increase for steps down to {MIN_STEP:g}")


def rcg_maximize(
    objective: Callable[[PhaseVector], float],
    euclid_gradient: Callable[[PhaseVector], np.ndarray],
    b0: PhaseVector,
    cfg: RcgConfig,
) -> Tuple[PhaseVector, RcgTrace]:
    """
    Maximize ``objective`` over the complex circle manifold.

    Conjugate directions use the Polak-Ribiere parameter
    beta = Re<g_new, g_new - T(g_old)> / <g_old, g_old>, clamped at zero when
    ``cfg.restart_on_negative_beta`` is set.

    Args:
        objective: Function to maximize
        euclid_gradient: Euclidean gradient of the objective (length-F complex)
        b0: Starting point
        cfg: Optimizer settings

    Returns:
        Final point and the iteration trace

    Raises:
        NumericalFailure: On a non-finite objective value or gradient,
            including at a line-search trial point
    """
    trace = RcgTrace()

    def evaluate(point: PhaseVector) -> Tuple[float, TangentVector]:
        value = float(objective(point))
        grad = project_tangent(point, euclid_gradient(point))
        if not math.isfinite(value) or not np.all(np.isfinite(grad.entries)):
            raise NumericalFailure("non-finite objective or gradient", trace)
        return value, grad

    b = b0
    value, grad = evaluate(b)
    direction = grad
    trace.records.append(RcgIteration(value, grad.norm(), 0.0))

    for k in range(cfg.max_iters + 1):
        if grad.norm() <= cfg.grad_tol:
            trace.termination = GRADIENT_TOLERANCE
            break
        if k == cfg.max_iters:
            trace.termination = MAX_ITERATIONS
            break

        if inner(grad, direction) <= 0:
            # Lost conjugacy; restart from steepest ascent
            direction = grad
        try:
            alpha, b_next = armijo_step(objective, b, direction, cfg, grad=grad, value=value)
        except LineSearchFailure:
            logger.debug(f"RCG line search failed at iteration {k}, gradient norm {grad.norm():.3e}")
            trace.termination = LINE_SEARCH_FAILED
            break
        except NumericalFailure as e:
            raise NumericalFailure(str(e), trace) from e

        value_next, grad_next = evaluate(b_next)
        grad_moved = transport(grad, b_next)
        direction_moved = transport(direction, b_next)
        beta = inner(grad_next, TangentVector(grad_next.entries - grad_moved.entries, b_next)) / inner(grad, grad)
        if cfg.restart_on_negative_beta:
            beta = max(beta, 0.0)
        direction = TangentVector(grad_next.entries + beta * direction_moved.entries, b_next)

        b, value, grad = b_next, value_next, grad_next
        trace.records.append(RcgIteration(value, grad.norm(), alpha))

    logger.debug(
        f"RCG finished after {trace.iterations} iterations ({trace.termination}), "
        f"objective {value:.6f}, gradient norm {grad.norm():.3e}"
    )
    return b, trace
