"""
Lambertian line-of-sight channel model for ceiling LED luminaires.

Computes the optical gain between each downward-facing LED luminaire
and an upward-facing photodiode:

    h = (A_r / d^2) * L(phi) * T_s * g(psi) * cos(psi)    for psi <= Psi
    h = 0                                                  otherwise

with the generalized Lambertian radiant intensity

    L(phi) = ((l + 1) / 2*pi) * cos^l(phi),
    l      = -ln(2) / ln(cos(theta_half))

and the optical concentrator gain

    g(psi) = kappa^2 / sin^2(Psi)   inside the field of view.

All angles cross the API boundary in degrees and are converted to
radians exactly once, here.  Luminaires point straight down and
photodiodes straight up, so the emission angle phi equals the
incidence angle psi and cos(phi) = cos(psi) = dz / d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Vec3:
    """A point in room coordinates, meters."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(c) for c in (self.x, self.y, self.z)):
            raise ValueError(f"non-finite coordinates: {(self.x, self.y, self.z)}")


def lambertian_order(semi_angle_deg: float) -> float:
    """Lambertian emission order from the half-illuminance semi-angle.

    l = -ln(2) / ln(cos(theta_half)); theta_half = 60 deg gives l = 1.
    """
    if not 0.0 < semi_angle_deg < 90.0:
        raise ValueError(
            f"semi-angle must lie in (0, 90) degrees, got {semi_angle_deg}"
        )
    return -math.log(2.0) / math.log(math.cos(math.radians(semi_angle_deg)))


@dataclass(frozen=True)
class Luminaire:
    """A ceiling LED luminaire, facing straight down.

    The Lambertian order is derived from the semi-angle at construction
    and stored so the per-link gain loop never recomputes the log.
    """

    position: Vec3
    semi_angle_deg: float = 60.0
    order: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", lambertian_order(self.semi_angle_deg))


@dataclass(frozen=True)
class Receiver:
    """A single-photodiode receiver, facing straight up.

    fov_deg is the half-angle Psi of the field of view (<= 90 after
    normalization at the config boundary; full angles are halved there,
    not here).
    """

    position: Vec3
    active_area: float = 1e-4  # m^2
    fov_deg: float = 60.0
    filter_gain: float = 1.0  # T_s, optical filter, constant
    refractive_index: float = 1.5  # kappa, concentrator index

    def __post_init__(self) -> None:
        if self.active_area <= 0.0:
            raise ValueError(f"active area must be positive, got {self.active_area}")
        if not 0.0 < self.fov_deg <= 90.0:
            raise ValueError(
                f"FoV half-angle must lie in (0, 90] degrees, got {self.fov_deg}"
            )
        if self.refractive_index < 1.0:
            raise ValueError(
                f"refractive index must be >= 1, got {self.refractive_index}"
            )
        if self.filter_gain <= 0.0:
            raise ValueError(f"filter gain must be positive, got {self.filter_gain}")


def concentrator_gain(incidence_deg: float, kappa: float, fov_deg: float) -> float:
    """Optical concentrator gain g(psi) = kappa^2 / sin^2(Psi), 0 outside FoV."""
    if incidence_deg < 0.0:
        raise ValueError(f"incidence angle must be >= 0, got {incidence_deg}")
    if kappa < 1.0:
        raise ValueError(f"kappa must be >= 1, got {kappa}")
    if incidence_deg > fov_deg:
        return 0.0
    return kappa**2 / math.sin(math.radians(fov_deg)) ** 2


def los_gain(lum: Luminaire, rx: Receiver) -> float:
    """Line-of-sight gain of a single luminaire -> receiver link.

    Orientation assumption (down-facing LED, up-facing PD) makes
    cos(phi) = cos(psi) = dz/d, so one cosine serves both the
    radiant-intensity and the incidence terms.
    """
    dx = lum.position.x - rx.position.x
    dy = lum.position.y - rx.position.y
    dz = lum.position.z - rx.position.z
    if dz <= 0.0:
        raise ValueError(
            f"luminaire must sit strictly above the receiver plane "
            f"(dz = {dz}); gains are undefined otherwise"
        )
    d_sq = dx * dx + dy * dy + dz * dz
    d = math.sqrt(d_sq)
    if d == 0.0:
        raise ValueError("degenerate geometry: luminaire and receiver coincide")

    cos_psi = dz / d
    psi_deg = math.degrees(math.acos(min(1.0, cos_psi)))
    if psi_deg > rx.fov_deg:
        return 0.0

    radiant_intensity = (lum.order + 1.0) / (2.0 * math.pi) * cos_psi**lum.order
    g = concentrator_gain(psi_deg, rx.refractive_index, rx.fov_deg)
    return (rx.active_area / d_sq) * radiant_intensity * rx.filter_gain * g * cos_psi


def channel_vector(lums: list[Luminaire], rx: Receiver) -> tuple[float, ...]:
    """Per-luminaire LoS gains, in luminaire order (the vector h)."""
    if not lums:
        raise ValueError("need at least one luminaire")
    return tuple(los_gain(lum, rx) for lum in lums)
