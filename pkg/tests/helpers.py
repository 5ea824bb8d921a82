"""Shared builders for test instances."""
import numpy as np

from app.schemas.optimizer import RcgConfig
from app.schemas.sweep import SweepSpec
from app.schemas.system import SystemParams
from app.utils.channel_model import ChannelSet
from app.utils.objective import CompositeContext


def cn(rng: np.random.Generator, *shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_channels(rng: np.random.Generator, F: int, M: int) -> ChannelSet:
    """Unit-variance i.i.d. channels, independent of any geometry."""
    return ChannelSet(G_D=cn(rng, F, M), G_U=cn(rng, F, M), h_D=cn(rng, F), h_U=cn(rng, F))


def unit_context(C_D, C_U, eta: float = 0.5) -> CompositeContext:
    """Context with unit powers and noise."""
    return CompositeContext(np.asarray(C_D, dtype=complex), np.asarray(C_U, dtype=complex), eta, 1.0, 1.0, 1.0, 1.0)


def unit_params(F1: int, F2: int, M: int) -> SystemParams:
    return SystemParams(M=M, F1=F1, F2=F2, P_D_max=1.0, P_U_max=1.0, sigma2_D=1.0, sigma2_U=1.0)


def tiny_spec(**overrides) -> SweepSpec:
    """Fast sweep: 2x2 RIS, 2 seeds, few optimizer iterations."""
    fields = {
        "variable": "bs_ris_distance",
        "values": [5.0, 45.0],
        "seeds": 2,
        "base": SystemParams(M=2, F1=2, F2=2),
        "optimizer": RcgConfig(max_iters=50),
    }
    fields.update(overrides)
    return SweepSpec(**fields)
