"""Demisability / survivability trade-space toolkit.

Evaluates simplified spacecraft configurations against two competing
requirements (destructive-re-entry demisability, on-orbit resistance to
debris impacts) and searches the tank design space with a multi-objective
genetic algorithm.
"""

__version__ = "0.1.0"

from .materials import Material, material_by_name
from .shapes import Box, Cylinder, FlatPlate, GeometryProps, Sphere, shape_geometry
from .config import SpacecraftConfig, parse_configuration, serialize_configuration

__all__ = [
    "Material",
    "material_by_name",
    "Sphere",
    "Box",
    "Cylinder",
    "FlatPlate",
    "GeometryProps",
    "shape_geometry",
    "SpacecraftConfig",
    "parse_configuration",
    "serialize_configuration",
    "__version__",
]
