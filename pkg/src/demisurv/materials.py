"""Material properties and the built-in tank/structure material library."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path


class UnknownMaterialError(KeyError):
    """Raised when a material name is not found in the active library."""


@dataclass(frozen=True)
class Material:
    name: str
    density: float              # kg/m^3
    melting_temperature: float  # K
    heat_capacity: float        # J/(kg K)
    heat_of_fusion: float       # J/kg
    emissivity: float
    yield_strength: float       # Pa
    ultimate_strength: float    # Pa
    speed_of_sound: float       # m/s

    def __post_init__(self) -> None:
        for field in (
            "density",
            "melting_temperature",
            "heat_capacity",
            "heat_of_fusion",
            "yield_strength",
            "ultimate_strength",
            "speed_of_sound",
        ):
            if getattr(self, field) <= 0.0:
                raise ValueError(f"material {self.name!r}: {field} must be > 0")
        if not 0.0 < self.emissivity <= 1.0:
            raise ValueError(f"material {self.name!r}: emissivity must be in (0, 1]")
        if self.ultimate_strength < self.yield_strength:
            raise ValueError(
                f"material {self.name!r}: ultimate strength below yield strength"
            )


BUILTIN_MATERIALS: dict[str, Material] = {
    m.name: m
    for m in (
        Material(
            name="Al-6061-T6",
            density=2713.0,
            melting_temperature=867.0,
            heat_capacity=896.0,
            heat_of_fusion=386116.0,
            emissivity=0.141,
            yield_strength=276e6,
            ultimate_strength=310e6,
            speed_of_sound=5100.0,
        ),
        Material(
            name="A316",
            density=8026.85,
            melting_temperature=1644.0,
            heat_capacity=460.6,
            heat_of_fusion=286098.0,
            emissivity=0.35,
            yield_strength=415e6,
            ultimate_strength=600e6,
            speed_of_sound=5790.0,
        ),
        Material(
            name="Ti-6Al-4V",
            density=4437.0,
            melting_temperature=1943.0,
            heat_capacity=805.2,
            heat_of_fusion=393559.0,
            emissivity=0.3,
            yield_strength=880e6,
            ultimate_strength=950e6,
            speed_of_sound=4987.0,
        ),
    )
}

# Order used for the optimizer's integer material gene.
OPTIMIZATION_MATERIALS = ("Al-6061-T6", "Ti-6Al-4V", "A316")


def material_by_name(name: str, library: dict[str, Material] | None = None) -> Material:
    """Look up a material by name in `library` (defaults to the built-ins)."""
    lib = BUILTIN_MATERIALS if library is None else library
    try:
        return lib[name]
    except KeyError:
        available = ", ".join(sorted(lib))
        raise UnknownMaterialError(
            f"unknown material {name!r}; available: {available}"
        ) from None


def load_material_library(path: str | Path) -> dict[str, Material]:
    """Read a user material library (CSV, one row per material).

    Columns: name, density_kgm3, melting_temperature_K, heat_capacity_JkgK,
    heat_of_fusion_Jkg, emissivity, yield_strength_Pa, ultimate_strength_Pa,
    speed_of_sound_ms.  Built-in entries remain available unless shadowed.
    """
    library = dict(BUILTIN_MATERIALS)
    with open(path, newline="", encoding="utf-8") as fh:
        for i, row in enumerate(csv.DictReader(fh), start=2):
            try:
                mat = Material(
                    name=row["name"].strip(),
                    density=float(row["density_kgm3"]),
                    melting_temperature=float(row["melting_temperature_K"]),
                    heat_capacity=float(row["heat_capacity_JkgK"]),
                    heat_of_fusion=float(row["heat_of_fusion_Jkg"]),
                    emissivity=float(row["emissivity"]),
                    yield_strength=float(row["yield_strength_Pa"]),
                    ultimate_strength=float(row["ultimate_strength_Pa"]),
                    speed_of_sound=float(row["speed_of_sound_ms"]),
                )
            except (KeyError, ValueError) as exc:
                raise ValueError(f"material library row {i}: {exc}") from exc
            library[mat.name] = mat
    return library
