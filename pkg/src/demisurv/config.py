"""Hierarchical spacecraft configuration and its flat-table document format.

A configuration document is a UTF-8 CSV with a mandatory header row, one row
per object, SI units throughout.  Required columns:

    id, name, parent, shape, mass_kg, length_m, radius_m, width_m, height_m,
    quantity, material, thickness_m

Optional columns: pos_x_m, pos_y_m, pos_z_m (object centre in the structure
frame, default 0,0,0), attachment (panel id a component detaches with), role
(structure|panel|component|sub-component, inferred when absent) and
solar_panel_area_m2 (structure row only).  Cells that do not apply hold
"n/a" or are left empty.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from pathlib import Path

from .materials import Material, material_by_name
from .shapes import Box, Cylinder, FlatPlate, PrimitiveShape, Sphere, extents

ROLES = ("structure", "panel", "component", "sub-component")

REQUIRED_COLUMNS = (
    "id",
    "name",
    "parent",
    "shape",
    "mass_kg",
    "length_m",
    "radius_m",
    "width_m",
    "height_m",
    "quantity",
    "material",
    "thickness_m",
)


class ConfigError(ValueError):
    """Configuration document error, tagged with the offending row."""

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        prefix = f"row {row}: " if row is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class ConfigObject:
    id: int
    name: str
    parent_id: int | None
    shape: PrimitiveShape
    mass: float                       # kg
    material: Material
    wall_thickness: float             # m
    role: str
    quantity: int = 1
    attachment_id: int | None = None  # panel the object detaches with
    position: tuple[float, float, float] = (0.0, 0.0, 0.0)
    solar_panel_area: float = 0.0     # m^2, structure row only


@dataclass(frozen=True)
class SpacecraftConfig:
    """Validated object tree; immutable, safe to share between evaluations."""

    objects: tuple[ConfigObject, ...]
    _by_id: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {o.id: o for o in self.objects})

    def __getitem__(self, object_id: int) -> ConfigObject:
        return self._by_id[object_id]

    @property
    def structure(self) -> ConfigObject:
        return next(o for o in self.objects if o.role == "structure")

    def children_of(self, object_id: int) -> list[ConfigObject]:
        return [o for o in self.objects if o.parent_id == object_id]

    def panels(self) -> list[ConfigObject]:
        return [o for o in self.objects if o.role == "panel"]

    def components(self) -> list[ConfigObject]:
        return [o for o in self.objects if o.role == "component"]

    def depth(self) -> int:
        def node_depth(obj: ConfigObject) -> int:
            if obj.parent_id is None:
                return 1
            return 1 + node_depth(self[obj.parent_id])

        return max(node_depth(o) for o in self.objects)


def _cell(row: dict, column: str) -> str:
    value = (row.get(column) or "").strip()
    return "" if value.lower() in ("", "n/a", "na", "none", "-") else value


def _float_cell(row: dict, column: str, rownum: int) -> float | None:
    text = _cell(row, column)
    if not text:
        return None
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"column {column!r}: not a number: {text!r}", rownum) from None


def _parse_shape(row: dict, rownum: int) -> PrimitiveShape:
    kind = _cell(row, "shape").lower().replace("_", "-")
    length = _float_cell(row, "length_m", rownum)
    radius = _float_cell(row, "radius_m", rownum)
    width = _float_cell(row, "width_m", rownum)
    height = _float_cell(row, "height_m", rownum)
    thickness = _float_cell(row, "thickness_m", rownum)
    try:
        if kind == "sphere":
            if radius is None:
                raise ConfigError("sphere requires radius_m", rownum)
            return Sphere(radius=radius)
        if kind == "box":
            if None in (length, width, height):
                raise ConfigError("box requires length_m, width_m, height_m", rownum)
            return Box(length=length, width=width, height=height)
        if kind == "cylinder":
            if None in (length, radius):
                raise ConfigError("cylinder requires radius_m and length_m", rownum)
            return Cylinder(diameter=2.0 * radius, length=length)
        if kind in ("flat-plate", "plate", "flatplate"):
            if None in (length, width):
                raise ConfigError("flat plate requires length_m and width_m", rownum)
            if thickness is None:
                raise ConfigError("flat plate requires thickness_m", rownum)
            return FlatPlate(length=length, width=width, thickness=thickness)
    except ValueError as exc:  # non-positive dimension
        raise ConfigError(str(exc), rownum) from None
    raise ConfigError(f"unknown shape kind {_cell(row, 'shape')!r}", rownum)


def parse_configuration(
    doc: str | Path,
    material_library: dict[str, Material] | None = None,
) -> SpacecraftConfig:
    """Parse and validate a configuration document (path or CSV text).

    Rows with quantity > 1 expand into distinct instances with suffixed
    names and freshly assigned ids.
    """
    if isinstance(doc, Path) or (isinstance(doc, str) and "\n" not in doc and doc.endswith(".csv")):
        text = Path(doc).read_text(encoding="utf-8")
    else:
        text = str(doc)

    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise ConfigError("empty document: header row is mandatory")
    missing = [c for c in REQUIRED_COLUMNS if c not in reader.fieldnames]
    if missing:
        raise ConfigError(f"missing required columns: {', '.join(missing)}")

    rows: list[tuple[int, dict]] = [(i, row) for i, row in enumerate(reader, start=2)]
    if not rows:
        raise ConfigError("document has no object rows")

    raw: dict[int, ConfigObject] = {}
    rownum_of: dict[int, int] = {}
    for rownum, row in rows:
        try:
            obj_id = int(_cell(row, "id"))
        except ValueError:
            raise ConfigError(f"bad id {_cell(row, 'id')!r}", rownum) from None
        if obj_id in raw:
            raise ConfigError(f"duplicate id {obj_id}", rownum)
        parent_text = _cell(row, "parent")
        parent_id = int(parent_text) if parent_text else None
        shape = _parse_shape(row, rownum)
        mass = _float_cell(row, "mass_kg", rownum)
        if mass is None or mass <= 0.0:
            raise ConfigError(f"mass must be > 0, got {mass}", rownum)
        quantity_text = _cell(row, "quantity")
        quantity = int(quantity_text) if quantity_text else 1
        if quantity < 1:
            raise ConfigError(f"quantity must be >= 1, got {quantity}", rownum)
        material_name = _cell(row, "material")
        if not material_name:
            raise ConfigError("material is required", rownum)
        try:
            material = material_by_name(material_name, material_library)
        except KeyError as exc:
            raise ConfigError(str(exc.args[0]), rownum) from None
        thickness = _float_cell(row, "thickness_m", rownum)
        if thickness is None or thickness <= 0.0:
            raise ConfigError(f"thickness_m must be > 0, got {thickness}", rownum)
        position = (
            _float_cell(row, "pos_x_m", rownum) or 0.0,
            _float_cell(row, "pos_y_m", rownum) or 0.0,
            _float_cell(row, "pos_z_m", rownum) or 0.0,
        )
        attachment_text = _cell(row, "attachment")
        attachment_id = int(attachment_text) if attachment_text else None
        role = _cell(row, "role").lower() or None
        if role is not None and role not in ROLES:
            raise ConfigError(f"unknown role {role!r}", rownum)
        solar = _float_cell(row, "solar_panel_area_m2", rownum) or 0.0
        raw[obj_id] = ConfigObject(
            id=obj_id,
            name=_cell(row, "name") or f"object-{obj_id}",
            parent_id=parent_id,
            shape=shape,
            mass=mass,
            material=material,
            wall_thickness=thickness,
            role=role or "",
            quantity=quantity,
            attachment_id=attachment_id,
            position=position,
            solar_panel_area=solar,
        )
        rownum_of[obj_id] = rownum

    _validate_tree(raw, rownum_of)
    objects = _assign_roles(raw, rownum_of)
    objects = _expand_quantities(objects, rownum_of)
    return SpacecraftConfig(objects=tuple(objects))


def _validate_tree(raw: dict[int, ConfigObject], rownum_of: dict[int, int]) -> None:
    roots = [o for o in raw.values() if o.parent_id is None]
    if len(roots) != 1:
        raise ConfigError(f"exactly one structure object required, found {len(roots)}")
    for obj in raw.values():
        if obj.parent_id is not None and obj.parent_id not in raw:
            raise ConfigError(
                f"dangling parent id {obj.parent_id}", rownum_of[obj.id]
            )
        # Walk up; any repeat visit means a cyclic parent chain.
        seen = {obj.id}
        cursor = obj.parent_id
        while cursor is not None:
            if cursor in seen:
                raise ConfigError("cyclic parent chain", rownum_of[obj.id])
            seen.add(cursor)
            cursor = raw[cursor].parent_id
        if obj.attachment_id is not None and obj.attachment_id not in raw:
            raise ConfigError(
                f"attachment references unknown id {obj.attachment_id}",
                rownum_of[obj.id],
            )


def _assign_roles(
    raw: dict[int, ConfigObject], rownum_of: dict[int, int]
) -> list[ConfigObject]:
    root = next(o for o in raw.values() if o.parent_id is None)

    def infer(obj: ConfigObject) -> str:
        if obj.parent_id is None:
            return "structure"
        parent = raw[obj.parent_id]
        if parent.parent_id is None:
            return "panel" if isinstance(obj.shape, FlatPlate) else "component"
        if infer(parent) == "panel":
            return "component"
        return "sub-component"

    out = []
    for obj in sorted(raw.values(), key=lambda o: o.id):
        role = obj.role or infer(obj)
        if obj.parent_id is None and role != "structure":
            raise ConfigError("parentless object must be the structure", rownum_of[obj.id])
        if obj.parent_id is not None and role == "structure":
            raise ConfigError("structure row must not have a parent", rownum_of[obj.id])
        attachment = obj.attachment_id
        # A component parented directly to a panel rides with that panel.
        if attachment is None and obj.parent_id is not None:
            parent = raw[obj.parent_id]
            if (parent.role or infer(parent)) == "panel":
                attachment = parent.id
        out.append(replace(obj, role=role, attachment_id=attachment))
    del root
    return out


def _expand_quantities(
    objects: list[ConfigObject], rownum_of: dict[int, int]
) -> list[ConfigObject]:
    next_id = max(o.id for o in objects) + 1
    children_count = {o.id: 0 for o in objects}
    for o in objects:
        if o.parent_id is not None:
            children_count[o.parent_id] += 1

    out: list[ConfigObject] = []
    for obj in objects:
        if obj.quantity == 1:
            out.append(obj)
            continue
        if children_count[obj.id]:
            raise ConfigError(
                "quantity expansion of an object with children is not supported",
                rownum_of[obj.id],
            )
        for k in range(1, obj.quantity + 1):
            instance_id = obj.id if k == 1 else next_id
            if k > 1:
                next_id += 1
            out.append(
                replace(
                    obj,
                    id=instance_id,
                    name=f"{obj.name}_{k:02d}",
                    quantity=1,
                )
            )
    return out


def serialize_configuration(config: SpacecraftConfig) -> str:
    """Write the (expanded) tree back to document form.

    parse(serialize(parse(doc))) round-trips to an identical tree.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        list(REQUIRED_COLUMNS)
        + ["pos_x_m", "pos_y_m", "pos_z_m", "attachment", "role", "solar_panel_area_m2"]
    )
    for o in config.objects:
        shape = o.shape
        length = radius = width = height = ""
        if isinstance(shape, Sphere):
            radius = repr(shape.radius)
        elif isinstance(shape, Box):
            length, width, height = (repr(shape.length), repr(shape.width), repr(shape.height))
        elif isinstance(shape, Cylinder):
            radius, length = repr(shape.diameter / 2.0), repr(shape.length)
        elif isinstance(shape, FlatPlate):
            length, width = repr(shape.length), repr(shape.width)
        writer.writerow(
            [
                o.id,
                o.name,
                "" if o.parent_id is None else o.parent_id,
                shape.kind,
                repr(o.mass),
                length,
                radius,
                width,
                height,
                o.quantity,
                o.material.name,
                repr(o.wall_thickness),
                repr(o.position[0]),
                repr(o.position[1]),
                repr(o.position[2]),
                "" if o.attachment_id is None else o.attachment_id,
                o.role,
                repr(o.solar_panel_area),
            ]
        )
    return buf.getvalue()


def component_extents(obj: ConfigObject) -> tuple[float, float, float]:
    """Bounding extents of an object in the structure frame."""
    return extents(obj.shape)
