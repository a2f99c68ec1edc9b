"""Primitive object shapes and their motion-averaged geometric properties."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Sphere:
    radius: float  # m

    kind = "sphere"

    def __post_init__(self) -> None:
        _require_positive(self, radius=self.radius)


@dataclass(frozen=True)
class Box:
    length: float  # m
    width: float   # m
    height: float  # m

    kind = "box"

    def __post_init__(self) -> None:
        _require_positive(self, length=self.length, width=self.width, height=self.height)

    def side_areas(self) -> tuple[float, float, float]:
        """Side areas sorted so A_x >= A_y >= A_z."""
        areas = sorted(
            (self.width * self.height, self.length * self.height, self.length * self.width),
            reverse=True,
        )
        return areas[0], areas[1], areas[2]

    def equivalent_cylinder(self) -> "Cylinder":
        """Equivalent cylinder used for the box heat-flux shape factors."""
        return Cylinder(diameter=2.0 * math.sqrt(self.width * self.height), length=self.length)


@dataclass(frozen=True)
class Cylinder:
    diameter: float  # m
    length: float    # m

    kind = "cylinder"

    def __post_init__(self) -> None:
        _require_positive(self, diameter=self.diameter, length=self.length)


@dataclass(frozen=True)
class FlatPlate:
    length: float     # m
    width: float      # m
    thickness: float  # m

    kind = "flat-plate"

    def __post_init__(self) -> None:
        _require_positive(self, length=self.length, width=self.width, thickness=self.thickness)


PrimitiveShape = Union[Sphere, Box, Cylinder, FlatPlate]


def _require_positive(shape, **dims: float) -> None:
    for name, value in dims.items():
        if not value > 0.0:
            raise ValueError(f"{type(shape).__name__}: {name} must be > 0, got {value}")


@dataclass(frozen=True)
class GeometryProps:
    volume: float                 # m^3
    wetted_area: float            # m^2
    avg_cross_section: float      # m^2, tumbling average (wetted area / 4)
    characteristic_length: float  # m, diameter of the circle matching avg_cross_section


def shape_geometry(shape: PrimitiveShape) -> GeometryProps:
    """Volume, wetted area and tumbling-averaged cross section of a primitive.

    The average cross section of a convex tumbling body is a quarter of its
    surface area (Cauchy); flat-plate edge area is neglected.
    """
    if isinstance(shape, Sphere):
        d = 2.0 * shape.radius
        volume = 4.0 / 3.0 * math.pi * shape.radius**3
        wetted = math.pi * d * d
    elif isinstance(shape, Box):
        volume = shape.length * shape.width * shape.height
        wetted = 2.0 * (
            shape.length * shape.width
            + shape.length * shape.height
            + shape.width * shape.height
        )
    elif isinstance(shape, Cylinder):
        volume = math.pi * shape.diameter**2 / 4.0 * shape.length
        wetted = math.pi * shape.diameter * (shape.diameter / 2.0 + shape.length)
    elif isinstance(shape, FlatPlate):
        volume = shape.length * shape.width * shape.thickness
        wetted = 2.0 * shape.length * shape.width
    else:
        raise TypeError(f"not a primitive shape: {shape!r}")
    cross = wetted / 4.0
    return GeometryProps(
        volume=volume,
        wetted_area=wetted,
        avg_cross_section=cross,
        characteristic_length=2.0 * math.sqrt(cross / math.pi),
    )


def nose_radius(shape: PrimitiveShape) -> float:
    """Stagnation-point curvature radius used by the continuum heat-flux law."""
    if isinstance(shape, Sphere):
        return shape.radius
    if isinstance(shape, Cylinder):
        return shape.diameter / 2.0
    if isinstance(shape, Box):
        return shape.equivalent_cylinder().diameter / 2.0
    if isinstance(shape, FlatPlate):
        return shape.width / 4.0
    raise TypeError(f"not a primitive shape: {shape!r}")


def extents(shape: PrimitiveShape) -> tuple[float, float, float]:
    """Axis-aligned bounding extents (x, y, z) in the object frame.

    Cylinders are axis-up (z); plates lie in the x-y plane.
    """
    if isinstance(shape, Sphere):
        d = 2.0 * shape.radius
        return (d, d, d)
    if isinstance(shape, Box):
        return (shape.length, shape.width, shape.height)
    if isinstance(shape, Cylinder):
        return (shape.diameter, shape.diameter, shape.length)
    if isinstance(shape, FlatPlate):
        return (shape.length, shape.width, shape.thickness)
    raise TypeError(f"not a primitive shape: {shape!r}")
