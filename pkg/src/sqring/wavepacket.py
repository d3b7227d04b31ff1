"""Gaussian wave-packet evaluation over a displacement grid.

The packet is psi(x) = C exp(-(x-x0)^2/(2 w0^2) + i p0 x); its density
|psi|^2 drops the momentum phase, so the default amplitude C=5 gives a bell
of peak 25.  A separate normalization helper provides the L2-normalized
amplitude used by integral checks.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "WavePacketParams",
    "DisplacementGrid",
    "evaluate_psi",
    "density_profile",
    "squeezed_width",
    "angular_frequency",
    "normalization_amplitude",
]

SPEED_OF_LIGHT_M_PER_S = 299792458.0


@dataclass(frozen=True)
class WavePacketParams:
    """Amplitude C, center x0 (um), width w0 (um), momentum p0 (1/um)."""

    C: float = 5.0
    x0: float = 5.0
    w0: float = 1.0
    p0: float = 0.0

    def __post_init__(self):
        if not self.w0 > 0.0:
            raise ValueError(f"w0 must be positive, got {self.w0}")
        if self.C < 0.0:
            raise ValueError(f"C must be >= 0, got {self.C}")


@dataclass(frozen=True)
class DisplacementGrid:
    """Uniform grid of displacement samples in um."""

    x_min: float = 0.0
    x_max: float = 10.0
    points: int = 1001

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError(f"need x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if self.points < 2:
            raise ValueError(f"points must be >= 2, got {self.points}")

    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.points)


def evaluate_psi(params: WavePacketParams, x):
    """Complex packet amplitude at displacement x (um); accepts arrays."""
    x = np.asarray(x, dtype=float)
    d = x - params.x0
    return params.C * np.exp(-(d * d) / (2.0 * params.w0**2) + 1j * params.p0 * x)


def density_profile(params: WavePacketParams, grid: DisplacementGrid) -> np.ndarray:
    """|psi|^2 on the grid; independent of p0 by construction."""
    xs = grid.xs()
    d = xs - params.x0
    return params.C**2 * np.exp(-(d * d) / params.w0**2)


def squeezed_width(params: WavePacketParams, r: float) -> WavePacketParams:
    """Scale the packet width by e^{-r} (r < 0 broadens)."""
    if not math.isfinite(r):
        raise ValueError(f"r must be finite, got {r}")
    return replace(params, w0=params.w0 * math.exp(-r))


def normalization_amplitude(w0: float) -> float:
    """C making the density integrate to one: (pi w0^2)^(-1/4)."""
    if not w0 > 0.0:
        raise ValueError(f"w0 must be positive, got {w0}")
    return (math.pi * w0 * w0) ** -0.25


def angular_frequency(lambda_um: float) -> float:
    """omega = 2 pi c / lambda in rad/s for a wavelength in um."""
    if not lambda_um > 0.0:
        raise ValueError(f"wavelength must be positive, got {lambda_um}")
    return 2.0 * math.pi * SPEED_OF_LIGHT_M_PER_S / (lambda_um * 1e-6)
