"""
Schema definitions for the simulated RIS-aided FDD scenario.
"""
from typing import Tuple

from pydantic import BaseModel, Field, model_validator

# Speed of light in m/s, used for carrier wavelengths
SPEED_OF_LIGHT = 299_792_458.0


class SystemParams(BaseModel):
    """
    All scenario constants, in linear units (W, Hz, m).

    Defaults reproduce the simulation setup: 4-antenna BS ULA at the origin,
    10x6 RIS UPA at (45 m, 5 m), single-antenna user at (50 m, 0 m).
    """
    model_config = {"frozen": True}

    M: int = Field(4, ge=1, description="BS antenna count")
    F1: int = Field(10, ge=1, description="RIS rows")
    F2: int = Field(6, ge=1, description="RIS columns")
    P_D_max: float = Field(5.0, gt=0, description="Downlink peak power (W)")
    P_U_max: float = Field(0.5, gt=0, description="Uplink peak power (W)")
    sigma2_D: float = Field(1e-10, gt=0, description="Downlink noise power at the user (W)")
    sigma2_U: float = Field(1e-10, gt=0, description="Uplink noise power at the BS (W)")
    f_D: float = Field(1855e6, gt=0, description="Downlink carrier (Hz)")
    f_U: float = Field(1760e6, gt=0, description="Uplink carrier (Hz)")
    bs_pos: Tuple[float, float] = Field((0.0, 0.0), description="BS position (m)")
    ris_pos: Tuple[float, float] = Field((45.0, 5.0), description="RIS position (m)")
    user_pos: Tuple[float, float] = Field((50.0, 0.0), description="User position (m)")
    beta_BR: float = Field(2.0, ge=0, description="Rician factor of the BS-RIS link (linear)")
    beta_Ru: float = Field(0.5, ge=0, description="Rician factor of the RIS-user link (linear)")
    alpha_BR: float = Field(2.0, gt=0, description="Path-loss exponent of the BS-RIS link")
    alpha_Ru: float = Field(2.8, gt=0, description="Path-loss exponent of the RIS-user link")
    C0: float = Field(1e-3, gt=0, le=1, description="Path loss at the reference point (linear)")
    D0: float = Field(1.0, gt=0, description="Reference distance (m)")
    f0: float = Field(1e9, gt=0, description="Reference frequency (Hz)")
    antenna_spacing_fraction: float = Field(
        0.5, gt=0, description="Element spacing as a fraction of the downlink wavelength"
    )

    @model_validator(mode="after")
    def _check_positions(self) -> "SystemParams":
        for name in ("bs_pos", "ris_pos", "user_pos"):
            x, y = getattr(self, name)
            if not (abs(x) < float("inf") and abs(y) < float("inf")):
                raise ValueError(f"{name} must be finite")
        return self

    @property
    def F(self) -> int:
        """Total number of reflecting elements."""
        return self.F1 * self.F2

    def wavelength(self, frequency: float) -> float:
        """Carrier wavelength in meters."""
        return SPEED_OF_LIGHT / frequency

    def spacing_wavelengths(self, frequency: float) -> float:
        """
        Element spacing expressed in wavelengths of ``frequency``.

        The physical spacing is fixed by the downlink wavelength, so at the
        uplink carrier the electrical spacing scales by f / f_D.
        """
        return self.antenna_spacing_fraction * frequency / self.f_D

    def with_distance(self, distance: float) -> "SystemParams":
        """Copy with the RIS moved to horizontal distance ``distance`` from the BS."""
        return self.model_copy(update={"ris_pos": (float(distance), self.ris_pos[1])})

    def with_elements(self, elements: int) -> "SystemParams":
        """Copy with F elements, varying F2 and keeping F1 fixed."""
        elements = int(elements)
        if elements < self.F1 or elements % self.F1:
            raise ValueError(f"F={elements} is not a multiple of F1={self.F1}")
        return self.model_copy(update={"F2": elements // self.F1})
