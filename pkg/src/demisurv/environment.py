"""Atmosphere and gravity models for the re-entry integrator and orbit budget.

Atmosphere: 1976 U.S. Standard Atmosphere.  Below 86 km the standard's
geopotential layer structure is evaluated analytically; from 86 to 1000 km
density and temperature come from the standard's published table,
interpolated log-linearly in density (within 2% of the analytic profile).

Gravity: zonal harmonic model to degree four, radial and polar components.
"""

from __future__ import annotations

import csv
import math
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class GravityConstants:
    mu: float                 # m^3/s^2
    radius: float             # m
    j2: float
    j3: float
    j4: float
    rotation_rate: float      # rad/s
    g0: float                 # m/s^2
    stefan_boltzmann: float   # W/(m^2 K^4)


EARTH = GravityConstants(
    mu=3.986004418e14,
    radius=6371800.0,
    j2=1.0826e-3,
    j3=-2.5327e-6,
    j4=-1.6196e-6,
    rotation_rate=7.2921159e-5,
    g0=9.81,
    stefan_boltzmann=5.67e-8,
)


@dataclass(frozen=True)
class AtmosphereSample:
    density: float         # kg/m^3
    temperature: float     # K
    pressure: float        # Pa
    mean_free_path: float  # m
    speed_of_sound: float  # m/s


MAX_ALTITUDE = 1_000_000.0  # m

# Geopotential layer base altitudes (m'), base temperatures (K) and lapse
# rates (K/m') of the standard's lower region.
_LAYER_BASE = (0.0, 11000.0, 20000.0, 32000.0, 47000.0, 51000.0, 71000.0, 84852.0)
_LAYER_LAPSE = (-0.0065, 0.0, 0.0010, 0.0028, 0.0, -0.0028, -0.0020)
_T0 = 288.15        # K
_P0 = 101325.0      # Pa
_R_AIR = 287.053    # J/(kg K)
_G0_STD = 9.80665   # m/s^2
_R_GEOPOT = 6356766.0  # m, polar radius used by the standard

# lambda_mfp * rho: from kinetic theory with the standard's collision
# diameter (3.65e-10 m) and sea-level mean molecular mass.
_MFP_RHO = 8.1251e-8  # kg/m^2

# Published upper-atmosphere table: geometric altitude (km) -> (kg/m^3, K).
_UPPER_TABLE = (
    (86.0, 6.958e-6, 186.87),
    (90.0, 3.416e-6, 186.87),
    (95.0, 1.393e-6, 188.42),
    (100.0, 5.604e-7, 195.08),
    (110.0, 9.708e-8, 240.00),
    (120.0, 2.222e-8, 360.00),
    (130.0, 8.152e-9, 469.27),
    (140.0, 3.831e-9, 559.63),
    (150.0, 2.076e-9, 634.39),
    (160.0, 1.233e-9, 696.29),
    (170.0, 7.815e-10, 747.57),
    (180.0, 5.194e-10, 790.07),
    (190.0, 3.581e-10, 825.31),
    (200.0, 2.541e-10, 854.56),
    (250.0, 6.073e-11, 941.33),
    (300.0, 1.916e-11, 976.01),
    (350.0, 7.014e-12, 990.06),
    (400.0, 2.803e-12, 995.83),
    (450.0, 1.184e-12, 998.22),
    (500.0, 5.215e-13, 999.24),
    (550.0, 2.384e-13, 999.67),
    (600.0, 1.137e-13, 999.85),
    (650.0, 5.712e-14, 999.93),
    (700.0, 3.070e-14, 999.97),
    (750.0, 1.788e-14, 999.99),
    (800.0, 1.136e-14, 1000.00),
    (850.0, 7.824e-15, 1000.00),
    (900.0, 5.759e-15, 1000.00),
    (950.0, 4.453e-15, 1000.00),
    (1000.0, 3.561e-15, 1000.00),
)
_UPPER_H = [row[0] * 1000.0 for row in _UPPER_TABLE]
_UPPER_LOG_RHO = [math.log(row[1]) for row in _UPPER_TABLE]
_UPPER_T = [row[2] for row in _UPPER_TABLE]


def _lower_atmosphere(h: float) -> tuple[float, float, float]:
    """Pressure, temperature, density below 86 km geometric altitude."""
    hp = _R_GEOPOT * h / (_R_GEOPOT + h)  # geopotential altitude
    pressure = _P0
    temperature = _T0
    for i, lapse in enumerate(_LAYER_LAPSE):
        base = _LAYER_BASE[i]
        top = _LAYER_BASE[i + 1]
        dz = min(hp, top) - base
        if dz < 0.0:
            break
        if lapse == 0.0:
            pressure *= math.exp(-_G0_STD * dz / (_R_AIR * temperature))
        else:
            t_new = temperature + lapse * dz
            pressure *= (temperature / t_new) ** (_G0_STD / (_R_AIR * lapse))
            temperature = t_new
        if hp <= top:
            break
    density = pressure / (_R_AIR * temperature)
    return pressure, temperature, density


def _sample(density: float, temperature: float, pressure: float) -> AtmosphereSample:
    return AtmosphereSample(
        density=density,
        temperature=temperature,
        pressure=pressure,
        mean_free_path=_MFP_RHO / density,
        speed_of_sound=math.sqrt(1.4 * _R_AIR * temperature),
    )


AtmosphereTable = tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]]


def atmosphere_at(h: float, table: AtmosphereTable | None = None) -> AtmosphereSample:
    """Atmosphere state at geometric altitude h (m), 0 <= h <= 1000 km.

    `table` optionally overrides the model with a user (altitude, density,
    temperature) table interpolated log-linearly in density.
    """
    if not 0.0 <= h <= MAX_ALTITUDE:
        raise ValueError(f"altitude out of range [0, {MAX_ALTITUDE:.0f}] m: {h}")
    if table is not None:
        alts, densities, temps = table
        rho = _log_interp(h, alts, [math.log(d) for d in densities])
        t = _lin_interp(h, alts, temps)
        return _sample(rho, t, rho * _R_AIR * t)
    if h < 86000.0:
        pressure, temperature, density = _lower_atmosphere(h)
        return _sample(density, temperature, pressure)
    rho = _log_interp(h, _UPPER_H, _UPPER_LOG_RHO)
    t = _lin_interp(h, _UPPER_H, _UPPER_T)
    return _sample(rho, t, rho * _R_AIR * t)


def _bracket(x: float, xs) -> int:
    i = bisect_right(xs, x) - 1
    return max(0, min(i, len(xs) - 2))


def _log_interp(x: float, xs, log_ys) -> float:
    i = _bracket(x, xs)
    frac = (x - xs[i]) / (xs[i + 1] - xs[i])
    return math.exp(log_ys[i] + frac * (log_ys[i + 1] - log_ys[i]))


def _lin_interp(x: float, xs, ys) -> float:
    i = _bracket(x, xs)
    frac = (x - xs[i]) / (xs[i + 1] - xs[i])
    return ys[i] + frac * (ys[i + 1] - ys[i])


def load_atmosphere_table(path: str | Path) -> AtmosphereTable:
    """Read a user atmosphere override (CSV: altitude_m, density_kgm3, temperature_K)."""
    alts: list[float] = []
    densities: list[float] = []
    temps: list[float] = []
    with open(path, newline="", encoding="utf-8") as fh:
        for i, row in enumerate(csv.DictReader(fh), start=2):
            try:
                alts.append(float(row["altitude_m"]))
                densities.append(float(row["density_kgm3"]))
                temps.append(float(row["temperature_K"]))
            except (KeyError, ValueError) as exc:
                raise ValueError(f"atmosphere table row {i}: {exc}") from exc
    if len(alts) < 2 or any(a2 <= a1 for a1, a2 in zip(alts, alts[1:])):
        raise ValueError("atmosphere table must have >= 2 rows with increasing altitude")
    if any(d2 > d1 for d1, d2 in zip(densities, densities[1:])):
        raise ValueError("atmosphere table density must be non-increasing with altitude")
    return tuple(alts), tuple(densities), tuple(temps)


def gravity_at(
    r: float, latitude: float, constants: GravityConstants = EARTH
) -> tuple[float, float]:
    """Radial and polar gravitational acceleration (m/s^2) at radius r, latitude phi.

    Sign convention: negative g_r points toward the Earth's centre.
    """
    if r <= constants.radius / 2.0:
        raise ValueError(f"radius too small: {r}")
    mu, re = constants.mu, constants.radius
    sphi = math.sin(latitude)
    cphi = math.cos(latitude)
    q = re / r
    g_r = -(mu / r**2) * (
        1.0
        - 1.5 * constants.j2 * q**2 * (3.0 * sphi**2 - 1.0)
        - 2.0 * constants.j3 * q**3 * (5.0 * sphi**3 - 3.0 * sphi)
        - 0.625 * constants.j4 * q**4 * (35.0 * sphi**4 - 30.0 * sphi**2 + 3.0)
    )
    g_phi = (3.0 * mu / r**2) * q**2 * sphi * cphi * (
        constants.j2
        + 0.5 * constants.j3 * q * (5.0 * sphi**2 - 1.0)
        + (5.0 / 6.0) * constants.j4 * q**2 * (7.0 * sphi**2 - 1.0)
    )
    return g_r, g_phi
