"""Object-oriented destructive re-entry simulation.

Three-degree-of-freedom ballistic dynamics over a rotating oblate Earth,
motion/shape-averaged aerodynamics and aerothermodynamics in free-molecular,
transitional and continuum regimes, lumped-mass heating with ablation at the
melting point, and the two-phase event pipeline (solar panel release,
external panel detachment, main break-up, per-object descent).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .config import ConfigObject, SpacecraftConfig
from .environment import EARTH, GravityConstants, _lower_atmosphere
from .environment import _UPPER_H, _UPPER_LOG_RHO, _UPPER_T, _log_interp, _lin_interp, _MFP_RHO
from .materials import Material
from .rk45 import Event, StepUnderflowError, integrate, sample
from .shapes import (
    Box,
    Cylinder,
    FlatPlate,
    PrimitiveShape,
    Sphere,
    nose_radius,
    shape_geometry,
)

ACCOMMODATION = 0.9        # free-molecular thermal accommodation, metals
CP_AIR = 1004.5            # J/(kg K)
RHO_SEA_LEVEL = 1.225      # kg/m^3
KN_FREE_MOLECULAR = 10.0
KN_CONTINUUM = 0.01


class SimulationError(RuntimeError):
    """Integration failed; carries the last valid state."""

    def __init__(self, message: str, t: float, y: Sequence[float]):
        self.t = t
        self.y = list(y)
        super().__init__(message)


@dataclass(frozen=True)
class ShapeFactors:
    """Mach-dependent heat-flux factor constants, configurable per run."""

    y: float = 1.0
    z: float = 1.0
    b: float = 1.0


@dataclass(frozen=True)
class EntryConditions:
    altitude: float = 120e3            # m
    velocity: float = 7300.0           # m/s, relative to the atmosphere
    flight_path_angle: float = 0.0     # rad
    longitude: float = 0.0             # rad
    latitude: float = 0.0              # rad
    heading: float = math.radians(-8.0)  # rad

    @classmethod
    def from_degrees_km(
        cls,
        altitude_km: float = 120.0,
        velocity_kms: float = 7.3,
        flight_path_angle_deg: float = 0.0,
        longitude_deg: float = 0.0,
        latitude_deg: float = 0.0,
        heading_deg: float = -8.0,
    ) -> "EntryConditions":
        return cls(
            altitude=altitude_km * 1000.0,
            velocity=velocity_kms * 1000.0,
            flight_path_angle=math.radians(flight_path_angle_deg),
            longitude=math.radians(longitude_deg),
            latitude=math.radians(latitude_deg),
            heading=math.radians(heading_deg),
        )


DEFAULT_ENTRY = EntryConditions()


@dataclass(frozen=True)
class SimOptions:
    rtol: float = 1e-6
    atol: float = 1e-8
    breakup_altitude: float = 78e3        # m
    panel_release_altitude: float = 95e3  # m, solar panel separation
    output_cadence: float = 1.0           # s
    max_time: float = 7200.0              # s
    demise_epsilon: float = 1e-6          # demised when m <= eps * m_in
    min_energy: float = 15.0              # J, low-energy cutoff
    initial_wall_temperature: float = 300.0  # K
    shape_factors: ShapeFactors = ShapeFactors()
    constants: GravityConstants = EARTH
    density_scale: float = 1.0            # 0 turns the atmosphere off
    atmosphere_table: tuple | None = None  # user (alt, density, temperature) override


# ---------------------------------------------------------------------------
# Aerodynamics and aerothermodynamics
# ---------------------------------------------------------------------------

def regime_weights(knudsen: float) -> tuple[float, float]:
    """(free-molecular, continuum) blend weights from the Knudsen number.

    Free molecular for Kn >= 10, continuum for Kn <= 0.01, log-linear blend
    between.
    """
    if knudsen <= 0.0:
        raise ValueError("Knudsen number must be > 0")
    w_cont = (math.log10(KN_FREE_MOLECULAR) - math.log10(knudsen)) / (
        math.log10(KN_FREE_MOLECULAR) - math.log10(KN_CONTINUUM)
    )
    w_cont = min(1.0, max(0.0, w_cont))
    return 1.0 - w_cont, w_cont


def drag_table(shape: PrimitiveShape) -> tuple[float, float, float]:
    """(free-molecular C_D, continuum C_D, reference area) for a primitive."""
    if isinstance(shape, Sphere):
        d = 2.0 * shape.radius
        return 2.0, 0.92, math.pi * d * d / 4.0
    if isinstance(shape, Box):
        a_x, a_y, a_z = shape.side_areas()
        s = (a_x + a_y + a_z) / a_y
        return 1.0 * s, 0.46 * s, a_y
    if isinstance(shape, Cylinder):
        dl = shape.diameter / shape.length
        return 1.57 + 0.785 * dl, 0.7198 + 0.326 * dl, shape.diameter * shape.length
    if isinstance(shape, FlatPlate):
        return 1.03, 0.46, shape.length * shape.width
    raise TypeError(f"not a primitive shape: {shape!r}")


def drag_coefficient(shape: PrimitiveShape, knudsen: float) -> tuple[float, float]:
    """Regime-blended drag coefficient and its reference area."""
    cd_fm, cd_cont, ref_area = drag_table(shape)
    w_fm, w_cont = regime_weights(knudsen)
    return w_fm * cd_fm + w_cont * cd_cont, ref_area


def free_molecular_heat_flux(density: float, velocity: float, accommodation: float = ACCOMMODATION) -> float:
    """Reference heat rate on a plate perpendicular to a free-molecular stream."""
    return 11356.6 * (accommodation * density * velocity**3 / 1556.0)


def continuum_heat_flux(
    density: float,
    temperature: float,
    velocity: float,
    nose_radius_m: float,
    wall_temperature: float,
) -> float:
    """Stagnation-point heat rate of a sphere (Detra-Kemp-Riddell correlation)."""
    if velocity <= 0.0:
        return 0.0
    h_s = CP_AIR * temperature + 0.5 * velocity * velocity
    h_w = CP_AIR * wall_temperature
    h_w300 = CP_AIR * 300.0
    # The hot-wall factor is only meaningful while the flow can heat the
    # wall; outside that regime convective heating is zero and the wall
    # energy balance is carried by re-radiation alone.
    if h_s <= h_w300 or h_w >= h_s:
        return 0.0
    return (
        1.99876e8
        * math.sqrt(0.3048 / nose_radius_m)
        * math.sqrt(density / RHO_SEA_LEVEL)
        * (velocity / 7924.8) ** 3.15
        * (h_s - h_w)
        / (h_s - h_w300)
    )


def reference_heat_flux(
    knudsen: float,
    density: float,
    temperature: float,
    velocity: float,
    nose_radius_m: float,
    wall_temperature: float,
    accommodation: float = ACCOMMODATION,
) -> float:
    """Regime-blended reference heat flux (W/m^2)."""
    w_fm, w_cont = regime_weights(knudsen)
    q = 0.0
    if w_fm > 0.0:
        q += w_fm * free_molecular_heat_flux(density, velocity, accommodation)
    if w_cont > 0.0:
        q += w_cont * continuum_heat_flux(
            density, temperature, velocity, nose_radius_m, wall_temperature
        )
    return q


def heat_factor_table(
    shape: PrimitiveShape, factors: ShapeFactors = ShapeFactors()
) -> tuple[float, float]:
    """(free-molecular, continuum) motion/shape averaging factors for heat flux."""
    if isinstance(shape, Sphere):
        return 0.255, 0.345
    if isinstance(shape, FlatPlate):
        # Continuum factor references an equivalent disk of diameter W/2.
        disk_area = 2.0 * math.pi * (shape.width / 4.0) ** 2
        plate_area = 2.0 * shape.length * shape.width
        return 0.255, 0.233 * disk_area / plate_area
    if isinstance(shape, Cylinder):
        dl = shape.diameter / shape.length
        f_fm = (0.255 * dl + 1.57 * factors.y + factors.z) / (2.0 + dl)
        f_cont = (0.358 + 0.323 * dl + 0.666 * factors.b) / (2.0 + dl)
        return f_fm, f_cont
    if isinstance(shape, Box):
        eq = shape.equivalent_cylinder()
        d_eq, l_eq = eq.diameter, eq.length
        a_wet = 2.0 * (
            shape.length * shape.width
            + shape.length * shape.height
            + shape.width * shape.height
        )
        f_fm = (
            math.pi * d_eq * l_eq * (0.1275 * d_eq / l_eq + 0.785 * factors.y)
            / (a_wet + 0.5 * factors.z)
        )
        f_cont = (
            math.pi * d_eq * l_eq * (0.179 + 0.1615 * d_eq / l_eq)
            / (a_wet + 0.333 * factors.b)
        )
        return f_fm, f_cont
    raise TypeError(f"not a primitive shape: {shape!r}")


def averaged_heat_flux(
    shape: PrimitiveShape,
    knudsen: float,
    q_ref: float,
    factors: ShapeFactors = ShapeFactors(),
) -> float:
    """Shape-and-motion averaged heat flux applied over the wetted area."""
    f_fm, f_cont = heat_factor_table(shape, factors)
    w_fm, w_cont = regime_weights(knudsen)
    return (w_fm * f_fm + w_cont * f_cont) * q_ref


def wall_temperature_rate(
    q_av: float, wall_temperature: float, wetted_area: float, mass: float, material: Material
) -> float:
    """Lumped-mass wall temperature rate (K/s) below the melting point."""
    sigma = EARTH.stefan_boltzmann
    net = q_av - material.emissivity * sigma * wall_temperature**4
    return wetted_area * net / (mass * material.heat_capacity)


def melt_rate(q_av: float, material: Material, wetted_area: float) -> float:
    """Ablation mass rate (kg/s, <= 0) with the wall held at the melting point."""
    sigma = EARTH.stefan_boltzmann
    net = q_av - material.emissivity * sigma * material.melting_temperature**4
    if net <= 0.0:
        return 0.0
    return -wetted_area * net / material.heat_of_fusion


# ---------------------------------------------------------------------------
# Object model and trajectory right-hand side
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ObjectModel:
    """Precomputed aerothermal properties of one re-entering object."""

    name: str
    shape: PrimitiveShape
    material: Material
    mass: float
    object_id: int = -1
    role: str = "component"
    cd_fm: float = 0.0
    cd_cont: float = 0.0
    ref_area: float = 0.0
    f_fm: float = 0.0
    f_cont: float = 0.0
    wetted_area: float = 0.0
    cross_section: float = 0.0
    char_length: float = 0.0
    r_n: float = 0.0
    extra_drag_area: float = 0.0  # solar panels, plate drag row

    @classmethod
    def build(
        cls,
        name: str,
        shape: PrimitiveShape,
        material: Material,
        mass: float,
        object_id: int = -1,
        role: str = "component",
        factors: ShapeFactors = ShapeFactors(),
        extra_drag_area: float = 0.0,
    ) -> "ObjectModel":
        cd_fm, cd_cont, ref_area = drag_table(shape)
        f_fm, f_cont = heat_factor_table(shape, factors)
        geom = shape_geometry(shape)
        return cls(
            name=name,
            shape=shape,
            material=material,
            mass=mass,
            object_id=object_id,
            role=role,
            cd_fm=cd_fm,
            cd_cont=cd_cont,
            ref_area=ref_area,
            f_fm=f_fm,
            f_cont=f_cont,
            wetted_area=geom.wetted_area,
            cross_section=geom.avg_cross_section,
            char_length=geom.characteristic_length,
            r_n=nose_radius(shape),
            extra_drag_area=extra_drag_area,
        )

    @classmethod
    def from_config(
        cls,
        obj: ConfigObject,
        factors: ShapeFactors = ShapeFactors(),
        extra_drag_area: float = 0.0,
    ) -> "ObjectModel":
        return cls.build(
            name=obj.name,
            shape=obj.shape,
            material=obj.material,
            mass=obj.mass,
            object_id=obj.id,
            role=obj.role,
            factors=factors,
            extra_drag_area=extra_drag_area,
        )


# Flat-plate drag row used for the solar panel area contribution.
_PLATE_CD_FM = 1.03
_PLATE_CD_CONT = 0.46

_CHI_RATE_CAP = 1.0  # rad/s, heading-rate saturation near vertical flight


def _atmo(h: float, options: SimOptions) -> tuple[float, float]:
    """(density, temperature) with altitude clamped into the model range."""
    if options.atmosphere_table is not None:
        alts, densities, temps = options.atmosphere_table
        h = min(max(h, alts[0]), alts[-1])
        log_rho = [math.log(d) for d in densities]
        return (
            options.density_scale * _log_interp(h, alts, log_rho),
            _lin_interp(h, alts, temps),
        )
    if h < 0.0:
        h = 0.0
    elif h > 1_000_000.0:
        h = 1_000_000.0
    if h < 86000.0:
        _, temperature, density = _lower_atmosphere(h)
        return options.density_scale * density, temperature
    return (
        options.density_scale * _log_interp(h, _UPPER_H, _UPPER_LOG_RHO),
        _lin_interp(h, _UPPER_H, _UPPER_T),
    )


def _flux_on(model: ObjectModel, density: float, temperature: float, velocity: float,
             wall_temperature: float, knudsen: float) -> float:
    """Averaged heat flux on an object at the given free-stream conditions."""
    w_fm, w_cont = regime_weights(knudsen)
    q = 0.0
    if w_fm > 0.0:
        q += w_fm * model.f_fm * free_molecular_heat_flux(density, velocity)
    if w_cont > 0.0:
        q += w_cont * model.f_cont * continuum_heat_flux(
            density, temperature, velocity, model.r_n, wall_temperature
        )
    return q


def trajectory_rhs(
    t: float,
    y: Sequence[float],
    model: ObjectModel,
    mode: str = "heating",
    options: SimOptions = SimOptions(),
) -> list[float]:
    """Derivatives of [r, phi, lam, V, gamma, chi, m, T_w].

    `mode` is "heating" (temperature evolves, mass fixed) or "melting"
    (temperature pinned at the melting point, mass ablates; never positive).
    Raises ValueError on a non-finite derivative so steps can be rejected.
    """
    r, phi, lam, v, gamma, chi, m, t_w = y
    consts = options.constants
    h = r - consts.radius
    density, temperature = _atmo(h, options)

    if density > 0.0:
        knudsen = _MFP_RHO / density / model.char_length
        w_fm, w_cont = regime_weights(knudsen)
        cd = w_fm * model.cd_fm + w_cont * model.cd_cont
        cd_plate = w_fm * _PLATE_CD_FM + w_cont * _PLATE_CD_CONT
        drag_area = cd * model.ref_area + cd_plate * model.extra_drag_area
        f_d = 0.5 * density * v * v * drag_area
    else:
        knudsen = None
        f_d = 0.0

    g_r, g_phi = _gravity_fast(r, phi, consts)
    omega = consts.rotation_rate

    sin_g, cos_g = math.sin(gamma), math.cos(gamma)
    sin_c, cos_c = math.sin(chi), math.cos(chi)
    sin_p, cos_p = math.sin(phi), math.cos(phi)

    if v <= 0.0 or cos_g == 0.0 or cos_p == 0.0:
        raise ValueError("singular state")

    d_r = v * sin_g
    d_phi = v / r * cos_g * cos_c
    d_lam = v * cos_g * sin_c / (r * cos_p)
    d_v = (
        -f_d / m
        + g_r * sin_g
        - g_phi * cos_g * cos_c
        - omega * omega * r * cos_p * (cos_g * cos_c * sin_p - sin_g * cos_p)
    )
    d_chi = (
        v / r * cos_g * sin_c * math.tan(phi)
        + g_phi / v * sin_c / cos_g
        + omega * omega * r * sin_c * sin_p * cos_p / (v * cos_g)
        - 2.0 * omega / cos_g * (math.tan(gamma) * cos_c * cos_p - sin_p)
    )
    # The heading rate is singular in vertical flight, where heading is
    # physically undefined; soft-saturate it so terminal descent stays
    # integrable without touching the translational dynamics.
    d_chi = d_chi / (1.0 + abs(d_chi) / _CHI_RATE_CAP)
    d_gamma = (
        v / r * cos_g
        + g_r / v * cos_g
        + g_phi / v * sin_g * cos_c
        + omega * omega * r / v * cos_p * (sin_g * cos_c * sin_p + cos_g * cos_p)
        + 2.0 * omega * sin_c * cos_p
    )

    mat = model.material
    sigma = consts.stefan_boltzmann
    if mode == "melting":
        wall = mat.melting_temperature
    else:
        wall = t_w
    if knudsen is None:
        q_av = 0.0
    else:
        q_av = _flux_on(model, density, temperature, v, wall, knudsen)
    net = q_av - mat.emissivity * sigma * wall**4
    if mode == "melting":
        d_m = -model.wetted_area * net / mat.heat_of_fusion if net > 0.0 else 0.0
        d_tw = 0.0
    else:
        d_m = 0.0
        d_tw = model.wetted_area * net / (m * mat.heat_capacity)

    out = [d_r, d_phi, d_lam, d_v, d_gamma, d_chi, d_m, d_tw]
    if not all(math.isfinite(x) for x in out):
        raise ValueError("non-finite derivative")
    return out


def _gravity_fast(r: float, latitude: float, c: GravityConstants) -> tuple[float, float]:
    sphi = math.sin(latitude)
    cphi = math.cos(latitude)
    q = c.radius / r
    inv_r2 = c.mu / (r * r)
    g_r = -inv_r2 * (
        1.0
        - 1.5 * c.j2 * q * q * (3.0 * sphi * sphi - 1.0)
        - 2.0 * c.j3 * q**3 * (5.0 * sphi**3 - 3.0 * sphi)
        - 0.625 * c.j4 * q**4 * (35.0 * sphi**4 - 30.0 * sphi * sphi + 3.0)
    )
    g_phi = 3.0 * inv_r2 * q * q * sphi * cphi * (
        c.j2
        + 0.5 * c.j3 * q * (5.0 * sphi * sphi - 1.0)
        + (5.0 / 6.0) * c.j4 * q * q * (7.0 * sphi * sphi - 1.0)
    )
    return g_r, g_phi


def _net_flux_at_melt(model: ObjectModel, y: Sequence[float], options: SimOptions) -> float:
    r, v = y[0], y[3]
    density, temperature = _atmo(r - options.constants.radius, options)
    mat = model.material
    if density > 0.0:
        knudsen = _MFP_RHO / density / model.char_length
        q_av = _flux_on(model, density, temperature, v, mat.melting_temperature, knudsen)
    else:
        q_av = 0.0
    return q_av - mat.emissivity * options.constants.stefan_boltzmann * mat.melting_temperature**4


# ---------------------------------------------------------------------------
# Single-object descent
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ObjectFate:
    object_id: int
    name: str
    role: str
    outcome: str                      # demised | survived-ground | survived-low-energy
    initial_mass: float               # kg
    final_mass: float                 # kg
    final_cross_section: float        # m^2
    demise_altitude: float | None     # m, when demised
    landing_latitude: float | None    # rad, when surviving
    landing_longitude: float | None   # rad, when surviving
    impact_energy: float | None       # J, when surviving
    flight_time: float                # s since entry
    final_state: tuple[float, ...] = ()  # full state at termination


@dataclass(frozen=True)
class Trace:
    time: tuple[float, ...]               # s
    altitude: tuple[float, ...]           # m
    velocity: tuple[float, ...]           # m/s
    flight_path_angle: tuple[float, ...]  # rad
    mass: tuple[float, ...]               # kg
    wall_temperature: tuple[float, ...]   # K


def entry_state(entry: EntryConditions, mass: float, wall_temperature: float,
                constants: GravityConstants = EARTH) -> list[float]:
    return [
        constants.radius + entry.altitude,
        entry.latitude,
        entry.longitude,
        entry.velocity,
        entry.flight_path_angle,
        entry.heading,
        mass,
        wall_temperature,
    ]


def simulate_object(
    state0: Sequence[float],
    model: ObjectModel,
    options: SimOptions = SimOptions(),
    t0: float = 0.0,
) -> tuple[ObjectFate, Trace]:
    """Descend one object until ground impact, demise, or the energy cutoff."""
    consts = options.constants
    m_in = state0[6]
    demise_mass = options.demise_epsilon * m_in
    t = t0
    y = list(state0)
    mode = "heating"
    ts_all: list[float] = []
    ys_all: list[list[float]] = []

    def finalize(outcome: str) -> tuple[ObjectFate, Trace]:
        trace = _trace(ts_all or [t], ys_all or [list(y)], options, consts)
        altitude = y[0] - consts.radius
        demised = outcome == "demised"
        return (
            ObjectFate(
                object_id=model.object_id,
                name=model.name,
                role=model.role,
                outcome=outcome,
                initial_mass=m_in,
                final_mass=0.0 if demised else y[6],
                final_cross_section=model.cross_section,
                demise_altitude=altitude if demised else None,
                landing_latitude=None if demised else y[1],
                landing_longitude=None if demised else y[2],
                impact_energy=None if demised else 0.5 * y[6] * y[3] ** 2,
                flight_time=t - t0,
                final_state=tuple(y),
            ),
            trace,
        )

    if 0.5 * y[6] * y[3] ** 2 < options.min_energy:
        return finalize("survived-low-energy")
    if y[0] - consts.radius <= 0.0:
        return finalize("survived-ground")

    while True:
        mode = _resolve_mode(model, mode, y, options)
        events = [
            Event(lambda tt, yy: yy[0] - consts.radius, "ground", direction=-1),
            Event(lambda tt, yy: yy[6] - demise_mass, "demise", direction=-1),
            Event(
                lambda tt, yy: 0.5 * yy[6] * yy[3] ** 2 - options.min_energy,
                "low-energy",
                direction=-1,
            ),
        ]
        if mode == "heating":
            events.append(
                Event(
                    lambda tt, yy: yy[7] - model.material.melting_temperature,
                    "melt-start",
                    direction=1,
                )
            )
        else:
            events.append(
                Event(
                    lambda tt, yy: _net_flux_at_melt(model, yy, options),
                    "melt-stop",
                    direction=-1,
                )
            )

        rhs = lambda tt, yy: trajectory_rhs(tt, yy, model, mode, options)
        try:
            res = integrate(
                rhs, t, y, t0 + options.max_time,
                rtol=options.rtol, atol=options.atol, events=events,
            )
        except StepUnderflowError as exc:
            raise SimulationError("step underflow", exc.t, exc.y) from exc

        ts_all.extend(res.ts if not ts_all else res.ts[1:])
        ys_all.extend(res.ys if not ys_all else res.ys[1:])
        t, y = res.t_end, list(res.y_end)

        if res.event == "melt-start":
            y[7] = model.material.melting_temperature
            mode = "melting"
        elif res.event == "melt-stop":
            mode = "heating"
        elif res.event == "ground":
            return finalize("survived-ground")
        elif res.event == "demise":
            return finalize("demised")
        elif res.event == "low-energy":
            return finalize("survived-low-energy")
        else:
            raise SimulationError("descent exceeded the simulation time budget", t, y)


def _resolve_mode(model: ObjectModel, mode: str, y: list[float], options: SimOptions) -> str:
    t_m = model.material.melting_temperature
    if y[7] >= t_m - 1e-9:
        if _net_flux_at_melt(model, y, options) > 0.0:
            y[7] = t_m
            return "melting"
        return "heating"
    return "heating"


def _trace(ts, ys, options: SimOptions, consts: GravityConstants) -> Trace:
    class _Res:
        pass

    res = _Res()
    res.ts, res.ys = ts, ys
    t_out, rows = sample(res, options.output_cadence)
    return Trace(
        time=tuple(t_out),
        altitude=tuple(r[0] - consts.radius for r in rows),
        velocity=tuple(r[3] for r in rows),
        flight_path_angle=tuple(r[4] for r in rows),
        mass=tuple(r[6] for r in rows),
        wall_temperature=tuple(r[7] for r in rows),
    )


# ---------------------------------------------------------------------------
# Full-configuration re-entry with break-up and detachment events
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ObjectRecord:
    fate: ObjectFate
    trace: Trace


@dataclass(frozen=True)
class FailedObject:
    object_id: int
    name: str
    message: str
    last_state: tuple[float, ...]


@dataclass(frozen=True)
class ReentryReport:
    entry: EntryConditions
    options: SimOptions
    parent_name: str
    parent_trace: Trace | None
    breakup_state: tuple[float, ...]
    objects: tuple[ObjectRecord, ...]
    failures: tuple[FailedObject, ...]
    events: tuple[tuple[str, float], ...]  # (label, time) timeline of phase 1


def liquid_mass_fraction(report: ReentryReport, object_ids: Sequence[int] | None = None) -> float:
    """Fraction of the re-entering mass that melted (index over the report's objects)."""
    records = report.objects
    if object_ids is not None:
        wanted = set(object_ids)
        records = tuple(r for r in records if r.fate.object_id in wanted)
    if not records:
        raise ValueError("no objects in scope of the index")
    m_in = sum(r.fate.initial_mass for r in records)
    m_fin = sum(r.fate.final_mass for r in records)
    return 1.0 - m_fin / m_in


def simulate_reentry(
    config: SpacecraftConfig,
    entry: EntryConditions = DEFAULT_ENTRY,
    options: SimOptions = SimOptions(),
) -> ReentryReport:
    """Two-phase destructive re-entry of a full configuration.

    Phase 1 descends the parent structure: the solar panel area is dropped at
    the release altitude (panels count as demised and are not simulated),
    external panels detach when their wall reaches the material melting
    point (taking attached components with them), and the phase ends at the
    break-up altitude.  Phase 2 releases every internal component and
    detached panel from its stored state and descends each individually;
    sub-components are released at the instant their parent demises.
    Per-object failures are recorded without aborting siblings.
    """
    consts = options.constants
    structure = config.structure
    panels = config.panels()
    timeline: list[tuple[str, float]] = []

    # Released objects: (config object, state at release, release time).
    released: list[tuple[ConfigObject, list[float], float]] = []

    state = entry_state(entry, structure.mass, options.initial_wall_temperature, consts)
    panel_temps = {p.id: options.initial_wall_temperature for p in panels}
    attached_panels = [p for p in panels]
    solar_area = structure.solar_panel_area
    t = 0.0
    parent_mode = "heating"
    ts_all: list[float] = []
    ys_all: list[list[float]] = []

    breakup_state: list[float] | None = None

    while breakup_state is None:
        model = ObjectModel.from_config(
            structure, options.shape_factors, extra_drag_area=solar_area
        )
        panel_models = [
            ObjectModel.from_config(p, options.shape_factors) for p in attached_panels
        ]
        y = state + [panel_temps[p.id] for p in attached_panels]
        parent_mode = _resolve_mode(model, parent_mode, y, options)

        rhs = _phase1_rhs(model, panel_models, parent_mode, options)
        events = [
            Event(lambda tt, yy: yy[0] - consts.radius - options.breakup_altitude,
                  "breakup", direction=-1),
            Event(lambda tt, yy: yy[0] - consts.radius, "ground", direction=-1),
            Event(lambda tt, yy: yy[6] - options.demise_epsilon * structure.mass,
                  "parent-demise", direction=-1),
        ]
        if solar_area > 0.0:
            events.append(
                Event(lambda tt, yy: yy[0] - consts.radius - options.panel_release_altitude,
                      "solar-release", direction=-1)
            )
        if parent_mode == "heating":
            events.append(
                Event(lambda tt, yy: yy[7] - model.material.melting_temperature,
                      "parent-melt-start", direction=1)
            )
        else:
            events.append(
                Event(lambda tt, yy: _net_flux_at_melt(model, yy, options),
                      "parent-melt-stop", direction=-1)
            )
        for k, pm in enumerate(panel_models):
            events.append(
                Event(
                    (lambda kk: lambda tt, yy: yy[8 + kk] - panel_models[kk].material.melting_temperature)(k),
                    f"panel-detach:{attached_panels[k].id}",
                    direction=1,
                )
            )

        try:
            res = integrate(rhs, t, y, options.max_time,
                            rtol=options.rtol, atol=options.atol, events=events)
        except StepUnderflowError as exc:
            raise SimulationError("phase-1 step underflow", exc.t, exc.y) from exc

        ts_all.extend(res.ts if not ts_all else res.ts[1:])
        ys_all.extend([row[:8] for row in (res.ys if not ys_all else res.ys[1:])])
        t = res.t_end
        y_end = list(res.y_end)
        state = y_end[:8]
        for k, p in enumerate(attached_panels):
            panel_temps[p.id] = y_end[8 + k]

        label = res.event
        if label is None:
            raise SimulationError("parent never reached break-up altitude", t, state)

        if label == "solar-release":
            solar_area = 0.0
            timeline.append(("solar-panels-released", t))
        elif label == "parent-melt-start":
            state[7] = model.material.melting_temperature
            parent_mode = "melting"
        elif label == "parent-melt-stop":
            parent_mode = "heating"
        elif label.startswith("panel-detach:"):
            panel_id = int(label.split(":")[1])
            panel = config[panel_id]
            detach_state = list(state)
            detach_state[7] = panel_temps[panel_id]
            released.append((panel, detach_state, t))
            timeline.append((f"panel-detached:{panel.name}", t))
            lost_mass = panel.mass
            for comp in config.objects:
                if comp.attachment_id == panel_id and comp.role == "component":
                    comp_state = list(state)
                    comp_state[7] = options.initial_wall_temperature
                    released.append((comp, comp_state, t))
                    timeline.append((f"component-detached:{comp.name}", t))
                    lost_mass += comp.mass
            state[6] = max(state[6] - lost_mass, 1e-9)
            attached_panels = [p for p in attached_panels if p.id != panel_id]
        else:
            # breakup, ground before breakup, or full parent demise
            breakup_state = state
            timeline.append((label, t))

    # Phase 2: release everything still on board from the break-up state.
    released_ids = {obj.id for obj, _, _ in released}
    for comp in config.objects:
        if comp.role == "panel" and comp.id not in released_ids:
            s = list(breakup_state)
            s[7] = panel_temps[comp.id]
            released.append((comp, s, t))
        elif comp.role == "component" and comp.id not in released_ids:
            s = list(breakup_state)
            s[7] = options.initial_wall_temperature
            released.append((comp, s, t))

    records: list[ObjectRecord] = []
    failures: list[FailedObject] = []
    queue = list(released)
    while queue:
        obj, state0, t_release = queue.pop(0)
        model = ObjectModel.from_config(obj, options.shape_factors)
        try:
            fate, trace = simulate_object(state0, model, options, t0=t_release)
        except SimulationError as exc:
            failures.append(
                FailedObject(obj.id, obj.name, str(exc), tuple(exc.y))
            )
            continue
        records.append(ObjectRecord(fate=fate, trace=trace))
        children = [c for c in config.children_of(obj.id) if c.role == "sub-component"]
        if children:
            if fate.outcome == "demised":
                # Children released where the parent finished melting.
                for child in children:
                    s = list(fate.final_state)
                    s[6] = child.mass
                    s[7] = options.initial_wall_temperature
                    queue.append((child, s, t_release + fate.flight_time))
            else:
                # Children ride inside the surviving parent to its end state.
                v_end = fate.final_state[3]
                for child in children:
                    records.append(
                        ObjectRecord(
                            fate=ObjectFate(
                                object_id=child.id,
                                name=child.name,
                                role=child.role,
                                outcome=fate.outcome,
                                initial_mass=child.mass,
                                final_mass=child.mass,
                                final_cross_section=shape_geometry(child.shape).avg_cross_section,
                                demise_altitude=None,
                                landing_latitude=fate.landing_latitude,
                                landing_longitude=fate.landing_longitude,
                                impact_energy=0.5 * child.mass * v_end**2,
                                flight_time=fate.flight_time,
                                final_state=fate.final_state,
                            ),
                            trace=Trace((), (), (), (), (), ()),
                        )
                    )

    records.sort(key=lambda r: r.fate.object_id)
    parent_trace = _trace(ts_all, ys_all, options, consts) if ts_all else None

    return ReentryReport(
        entry=entry,
        options=options,
        parent_name=structure.name,
        parent_trace=parent_trace,
        breakup_state=tuple(breakup_state),
        objects=tuple(records),
        failures=tuple(failures),
        events=tuple(timeline),
    )


def _phase1_rhs(model: ObjectModel, panel_models: list[ObjectModel], mode: str,
                options: SimOptions):
    consts = options.constants
    sigma = consts.stefan_boltzmann

    def rhs(t, y):
        core = trajectory_rhs(t, y[:8], model, mode, options)
        if not panel_models:
            return core
        r, v = y[0], y[3]
        density, temperature = _atmo(r - consts.radius, options)
        out = list(core)
        for k, pm in enumerate(panel_models):
            t_w = y[8 + k]
            if density > 0.0:
                knudsen = _MFP_RHO / density / pm.char_length
                q_av = _flux_on(pm, density, temperature, v, t_w, knudsen)
            else:
                q_av = 0.0
            net = q_av - pm.material.emissivity * sigma * t_w**4
            out.append(pm.wetted_area * net / (pm.mass * pm.material.heat_capacity))
        return out

    return rhs
