"""
Geometry, path loss, array responses and seeded Rician channel synthesis.

Random streams: every realization derives four independent PCG64 generators
from ``numpy.random.SeedSequence(seed).spawn(4)``, in the fixed order
G_D (BS-RIS downlink), G_U (BS-RIS uplink), h_D (RIS-user downlink),
h_U (RIS-user uplink). Complex normals are (x + jy)/sqrt(2) with x, y drawn
by ``Generator.standard_normal``.
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from app.core.errors import DimensionError, DomainError, GeometryError
from app.core.logging import logger
from app.schemas.system import SystemParams

STREAMS = ("G_D", "G_U", "h_D", "h_U")
MIN_LINK_DISTANCE = 1e-9


@dataclass(frozen=True)
class LosGeometry:
    """Line-of-sight parameters of one link, derived from the 2-D node positions."""
    distance: float
    departure: float
    arrival_azimuth: float
    arrival_elevation: float = 0.0


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """
    One channel realization.

    G_D, G_U are F x M (G_U^H is the M x F uplink RIS-to-BS matrix); h_D, h_U
    have length F, with h_D^H the user-side downlink row.
    """
    G_D: np.ndarray
    G_U: np.ndarray
    h_D: np.ndarray
    h_U: np.ndarray

    @property
    def F(self) -> int:
        return self.G_D.shape[0]

    @property
    def M(self) -> int:
        return self.G_D.shape[1]

    def validate(self, params: Optional[SystemParams] = None) -> "ChannelSet":
        """Check shapes (against ``params`` when given) and finiteness."""
        F, M = self.G_D.shape
        if self.G_U.shape != (F, M) or self.h_D.shape != (F,) or self.h_U.shape != (F,):
            raise DimensionError(
                f"inconsistent channel shapes: G_D {self.G_D.shape}, G_U {self.G_U.shape}, "
                f"h_D {self.h_D.shape}, h_U {self.h_U.shape}"
            )
        if params is not None and (F, M) != (params.F, params.M):
            raise DimensionError(f"channels are {F}x{M}, scenario expects {params.F}x{params.M}")
        for name in STREAMS:
            if not np.all(np.isfinite(getattr(self, name))):
                raise DomainError(f"{name} has non-finite entries")
        return self


def path_loss(distance: float, frequency: float, params: SystemParams, exponent: float) -> float:
    """
    Large-scale gain C0 (f/f0)^-2 (d/D0)^-exponent.

    Args:
        distance: Link distance in meters
        frequency: Carrier frequency in Hz
        params: Scenario (C0, D0, f0)
        exponent: Path-loss exponent of the link

    Returns:
        Linear power gain
    """
    if not distance > 0:
        raise DomainError(f"link distance must be positive, got {distance}")
    if not frequency > 0:
        raise DomainError(f"frequency must be positive, got {frequency}")
    return params.C0 * (frequency / params.f0) ** -2 * (distance / params.D0) ** -exponent


def steering_ula(M: int, angle: float, spacing_wavelengths: float) -> np.ndarray:
    """ULA response, entry m = exp(j 2 pi s m sin(angle)), m = 0..M-1."""
    if M < 1:
        raise DomainError(f"array size must be at least 1, got {M}")
    m = np.arange(M)
    return np.exp(2j * np.pi * spacing_wavelengths * m * np.sin(angle))


def steering_upa(F1: int, F2: int, azimuth: float, elevation: float, spacing_wavelengths: float) -> np.ndarray:
    """
    UPA response flattened row-major (f1 outer, f2 inner).

    Entry (f1, f2) = exp(j 2 pi s (f1 sin(el) + f2 cos(el) sin(az))).
    """
    if F1 < 1 or F2 < 1:
        raise DomainError(f"panel dimensions must be at least 1, got {F1}x{F2}")
    rows = np.exp(2j * np.pi * spacing_wavelengths * np.arange(F1) * np.sin(elevation))
    cols = np.exp(2j * np.pi * spacing_wavelengths * np.arange(F2) * np.cos(elevation) * np.sin(azimuth))
    return np.kron(rows, cols)


def link_geometry(source: Tuple[float, float], target: Tuple[float, float]) -> LosGeometry:
    """
    LoS angles of the link source -> target.

    Angles are measured from the x axis in the 2-D plane; elevation is zero.
    """
    dx = target[0] - source[0]
    dy = target[1] - source[1]
    distance = math.hypot(dx, dy)
    if distance < MIN_LINK_DISTANCE:
        raise GeometryError(f"coincident nodes at {source} and {target}")
    return LosGeometry(
        distance=distance,
        departure=math.atan2(dy, dx),
        arrival_azimuth=math.atan2(-dy, -dx),
    )


def propagation_phase(distance: float, wavelength: float) -> float:
    """2 pi d / lambda, wrapped to [0, 2 pi)."""
    return (2.0 * math.pi * distance / wavelength) % (2.0 * math.pi)


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """CN(0, 1) samples."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def _rician(gain: float, beta: float, los: np.ndarray, nlos: np.ndarray) -> np.ndarray:
    return math.sqrt(gain) * (math.sqrt(beta / (1.0 + beta)) * los + math.sqrt(1.0 / (1.0 + beta)) * nlos)


def _bs_ris_channel(params: SystemParams, frequency: float, rng: np.random.Generator) -> np.ndarray:
    geometry = link_geometry(params.bs_pos, params.ris_pos)
    spacing = params.spacing_wavelengths(frequency)
    a_t = steering_ula(params.M, geometry.departure, spacing)
    a_r = steering_upa(params.F1, params.F2, geometry.arrival_azimuth, geometry.arrival_elevation, spacing)
    phase = propagation_phase(geometry.distance, params.wavelength(frequency))
    los = np.outer(a_r, a_t.conj()) * np.exp(-1j * phase)
    nlos = complex_normal(rng, (params.F, params.M))
    gain = path_loss(geometry.distance, frequency, params, params.alpha_BR)
    return _rician(gain, params.beta_BR, los, nlos)


def _ris_user_channel(params: SystemParams, frequency: float, rng: np.random.Generator) -> np.ndarray:
    geometry = link_geometry(params.ris_pos, params.user_pos)
    spacing = params.spacing_wavelengths(frequency)
    a = steering_upa(params.F1, params.F2, geometry.departure, 0.0, spacing)
    phase = propagation_phase(geometry.distance, params.wavelength(frequency))
    nlos = complex_normal(rng, params.F)
    gain = path_loss(geometry.distance, frequency, params, params.alpha_Ru)
    return _rician(gain, params.beta_Ru, a * np.exp(-1j * phase), nlos)


def synthesize_channels(params: SystemParams, seed: int) -> ChannelSet:
    """
    Draw one Rician realization of all four channels.

    Downlink and uplink share the geometry but use their own carrier
    (path loss, electrical spacing, LoS phase) and independent NLoS draws.

    Args:
        params: Scenario
        seed: Non-negative realization seed

    Returns:
        Deterministic ChannelSet for (params, seed)
    """
    if seed < 0:
        raise DomainError(f"seed must be non-negative, got {seed}")
    rngs = dict(zip(STREAMS, (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(len(STREAMS)))))

    G_D = _bs_ris_channel(params, params.f_D, rngs["G_D"])
    G_U = _bs_ris_channel(params, params.f_U, rngs["G_U"])
    # Downlink row is h_D^H, so the stored vector is the conjugate of the RIS-to-user coefficients
    h_D = np.conj(_ris_user_channel(params, params.f_D, rngs["h_D"]))
    h_U = _ris_user_channel(params, params.f_U, rngs["h_U"])

    logger.debug(f"Synthesized channels for seed {seed} (F={params.F}, M={params.M}, RIS at {params.ris_pos})")
    return ChannelSet(G_D=G_D, G_U=G_U, h_D=h_D, h_U=h_U).validate(params)
