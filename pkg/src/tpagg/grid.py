"""C+L band channel plan: wavelength/frequency conversion and overlap tests.

Channels are compared by spectral overlap rather than by grid index, so
fixed-grid and flex-grid channel plans go through the same code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

__all__ = [
    "Band",
    "BandPlan",
    "Channel",
    "DEFAULT_BAND_PLAN",
    "SPEED_OF_LIGHT_NM_THZ",
    "channel_from_frequency",
    "channel_from_wavelength",
    "channels_disjoint",
    "frequency_to_wavelength",
    "is_on_grid",
    "wavelength_to_frequency",
]

# c in nm*THz: freq_thz = SPEED_OF_LIGHT_NM_THZ / wavelength_nm
SPEED_OF_LIGHT_NM_THZ = 299792.458

# Edge alignment slack, in GHz.  THz-domain center arithmetic leaves
# sub-Hz float dust; without slack two grid channels that exactly touch
# could be misclassified as overlapping.
_EDGE_SLACK_GHZ = 1e-6


class Band(Enum):
    C = "C"
    L = "L"


@dataclass(frozen=True)
class Channel:
    """A spectral slot: center frequency in THz, width in GHz, band."""

    center_thz: float
    width_ghz: float
    band: Band

    def __post_init__(self) -> None:
        if self.width_ghz <= 0.0:
            raise ValueError(f"channel width must be positive, got {self.width_ghz!r}")
        if self.center_thz <= 0.0:
            raise ValueError(f"channel center must be positive, got {self.center_thz!r}")


@dataclass(frozen=True)
class BandPlan:
    """Frequency extents (THz) of the C and L bands plus the grid spacing.

    The default C range spans 4800 GHz.  The default L range is chosen so
    that the usual L-band test wavelengths (down to ~1569.6 nm) fall
    inside it while staying clear of the C range; both ranges are plain
    data and can be overridden per scenario.
    """

    c_range: tuple[float, float] = (191.30, 196.10)
    l_range: tuple[float, float] = (184.50, 191.00)
    spacing_ghz: float = 87.5

    def __post_init__(self) -> None:
        for name, (lo, hi) in (("c_range", self.c_range), ("l_range", self.l_range)):
            if not lo < hi:
                raise ValueError(f"{name} must be an increasing (min, max) pair, got {(lo, hi)!r}")
        if not (self.l_range[1] <= self.c_range[0] or self.c_range[1] <= self.l_range[0]):
            raise ValueError("C and L ranges must not overlap")
        if self.spacing_ghz <= 0.0:
            raise ValueError(f"grid spacing must be positive, got {self.spacing_ghz!r}")

    def band_of(self, freq_thz: float) -> Band:
        """Band containing ``freq_thz``, or ValueError if out of both bands."""
        if self.c_range[0] <= freq_thz <= self.c_range[1]:
            return Band.C
        if self.l_range[0] <= freq_thz <= self.l_range[1]:
            return Band.L
        raise ValueError(
            f"{freq_thz:.6f} THz is outside the C range {self.c_range} "
            f"and the L range {self.l_range}"
        )


DEFAULT_BAND_PLAN = BandPlan()


def wavelength_to_frequency(wavelength_nm: float) -> float:
    """Vacuum wavelength in nm to frequency in THz."""
    if wavelength_nm <= 0.0:
        raise ValueError(f"wavelength must be positive, got {wavelength_nm!r}")
    return SPEED_OF_LIGHT_NM_THZ / wavelength_nm


def frequency_to_wavelength(freq_thz: float) -> float:
    """Frequency in THz to vacuum wavelength in nm."""
    if freq_thz <= 0.0:
        raise ValueError(f"frequency must be positive, got {freq_thz!r}")
    return SPEED_OF_LIGHT_NM_THZ / freq_thz


def channel_from_frequency(
    freq_thz: float, width_ghz: float, plan: BandPlan = DEFAULT_BAND_PLAN
) -> Channel:
    """Build a channel at ``freq_thz``, assigning its band from ``plan``."""
    return Channel(freq_thz, width_ghz, plan.band_of(freq_thz))


def channel_from_wavelength(
    wavelength_nm: float, width_ghz: float, plan: BandPlan = DEFAULT_BAND_PLAN
) -> Channel:
    """Build a channel at the given vacuum wavelength (nm)."""
    return channel_from_frequency(wavelength_to_frequency(wavelength_nm), width_ghz, plan)


def channels_disjoint(a: Channel, b: Channel) -> bool:
    """True when the two slots do not overlap; touching edges count as disjoint."""
    gap_ghz = abs(a.center_thz - b.center_thz) * 1000.0
    return gap_ghz >= 0.5 * (a.width_ghz + b.width_ghz) - _EDGE_SLACK_GHZ


def is_on_grid(freq_thz: float, plan: BandPlan = DEFAULT_BAND_PLAN, tol_ghz: float = 1e-3) -> bool:
    """True when ``freq_thz`` sits on the fixed grid of its band.

    Grid slots are counted in ``plan.spacing_ghz`` steps from the lower
    edge of the band containing the frequency.
    """
    band = plan.band_of(freq_thz)
    lo = plan.c_range[0] if band is Band.C else plan.l_range[0]
    offset_ghz = (freq_thz - lo) * 1000.0
    residue = offset_ghz % plan.spacing_ghz
    return min(residue, plan.spacing_ghz - residue) <= tol_ghz
