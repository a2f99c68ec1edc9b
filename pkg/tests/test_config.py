import math

import pytest
from hypothesis import given, strategies as st

from demisurv.config import ConfigError, parse_configuration, serialize_configuration
from demisurv.materials import UnknownMaterialError, material_by_name
from demisurv.shapes import Box, Cylinder, FlatPlate, Sphere, shape_geometry

HEADER = (
    "id,name,parent,shape,mass_kg,length_m,radius_m,width_m,height_m,"
    "quantity,material,thickness_m"
)

EXAMPLE_DOC = "\n".join(
    [
        HEADER,
        "0,Spacecraft,n/a,Box,2000,3.5,n/a,1.5,1.5,1,Al-6061-T6,0.003",
        "1,Tank,0,Sphere,15,n/a,0.55,n/a,n/a,1,Ti-6Al-4V,0.002",
        "2,BattBox,0,Box,5,0.6,n/a,0.5,0.4,1,Al-6061-T6,0.002",
        "3,BattCell,2,Box,1,0.1,n/a,0.05,0.05,20,A316,0.001",
    ]
)


class TestParseConfiguration:
    def test_example_tree(self):
        cfg = parse_configuration(EXAMPLE_DOC)
        assert len(cfg.objects) == 23  # 1 structure + tank + battbox + 20 cells
        assert cfg.depth() == 3
        names = [o.name for o in cfg.objects if o.parent_id == 2]
        assert len(names) == 20
        assert names[0] == "BattCell_01" and names[-1] == "BattCell_20"
        assert cfg.structure.name == "Spacecraft"
        assert cfg[1].role == "component"

    def test_single_structure_row(self):
        doc = HEADER + "\n0,Hull,n/a,Box,100,1,n/a,1,1,1,A316,0.002"
        cfg = parse_configuration(doc)
        assert len(cfg.objects) == 1
        assert cfg.structure.role == "structure"
        assert cfg.components() == []

    def test_self_parent_cycle(self):
        doc = "\n".join(
            [
                HEADER,
                "0,Hull,n/a,Box,100,1,n/a,1,1,1,A316,0.002",
                "1,Widget,1,Sphere,1,n/a,0.1,n/a,n/a,1,A316,0.001",
            ]
        )
        with pytest.raises(ConfigError, match="cyclic"):
            parse_configuration(doc)

    def test_dangling_parent(self):
        doc = "\n".join(
            [
                HEADER,
                "0,Hull,n/a,Box,100,1,n/a,1,1,1,A316,0.002",
                "1,Widget,9,Sphere,1,n/a,0.1,n/a,n/a,1,A316,0.001",
            ]
        )
        with pytest.raises(ConfigError, match="dangling parent"):
            parse_configuration(doc)

    def test_unknown_shape(self):
        doc = HEADER + "\n0,Hull,n/a,Pyramid,100,1,n/a,1,1,1,A316,0.002"
        with pytest.raises(ConfigError, match="row 2.*unknown shape"):
            parse_configuration(doc)

    def test_non_positive_dimension(self):
        doc = HEADER + "\n0,Hull,n/a,Sphere,100,n/a,-0.5,n/a,n/a,1,A316,0.002"
        with pytest.raises(ConfigError, match="row 2"):
            parse_configuration(doc)

    def test_panel_role_inference_and_attachment(self):
        doc = "\n".join(
            [
                HEADER,
                "0,Hull,n/a,Box,100,1,n/a,1,1,1,A316,0.002",
                "1,SidePanel,0,flat-plate,4,1,n/a,1,n/a,1,Al-6061-T6,0.003",
                "2,Radio,1,Box,2,0.2,n/a,0.2,0.1,1,A316,0.001",
            ]
        )
        cfg = parse_configuration(doc)
        assert cfg[1].role == "panel"
        assert cfg[2].role == "component"
        assert cfg[2].attachment_id == 1

    def test_round_trip(self):
        cfg = parse_configuration(EXAMPLE_DOC)
        again = parse_configuration(serialize_configuration(cfg))
        assert again == cfg


class TestShapeGeometry:
    def test_sphere_half_metre(self):
        g = shape_geometry(Sphere(radius=0.5))
        assert g.wetted_area == pytest.approx(math.pi)
        assert g.avg_cross_section == pytest.approx(math.pi / 4.0)

    def test_unit_box(self):
        g = shape_geometry(Box(length=1, width=1, height=1))
        assert g.wetted_area == pytest.approx(6.0)
        assert g.avg_cross_section == pytest.approx(1.5)

    def test_unit_cylinder(self):
        g = shape_geometry(Cylinder(diameter=1, length=1))
        assert g.wetted_area == pytest.approx(math.pi * 1.5)

    def test_plate_neglects_edges(self):
        g = shape_geometry(FlatPlate(length=2, width=1, thickness=0.01))
        assert g.wetted_area == pytest.approx(4.0)

    @given(
        st.floats(0.01, 10.0),
        st.floats(0.01, 10.0),
        st.floats(0.01, 10.0),
        st.floats(0.01, 1.0),
    )
    def test_monotone_in_dimensions(self, length, width, height, bump):
        base = shape_geometry(Box(length=length, width=width, height=height))
        bigger = shape_geometry(Box(length=length + bump, width=width, height=height))
        assert bigger.volume > base.volume
        assert bigger.wetted_area > base.wetted_area

    @given(st.floats(0.01, 10.0), st.floats(0.01, 10.0), st.floats(0.01, 10.0))
    def test_quarter_area_rule_exact(self, a, b, c):
        for shape in (Box(length=a, width=b, height=c), Sphere(radius=a)):
            g = shape_geometry(shape)
            assert g.avg_cross_section == g.wetted_area / 4.0


class TestMaterials:
    def test_aluminium_record(self):
        m = material_by_name("Al-6061-T6")
        assert m.density == 2713
        assert m.melting_temperature == 867
        assert m.heat_capacity == 896
        assert m.heat_of_fusion == 386116
        assert m.emissivity == 0.141
        assert m.yield_strength == 276e6
        assert m.ultimate_strength == 310e6
        assert m.speed_of_sound == 5100

    def test_titanium_record(self):
        m = material_by_name("Ti-6Al-4V")
        assert m.melting_temperature == 1943
        assert m.ultimate_strength == 950e6

    def test_unknown_material(self):
        with pytest.raises(UnknownMaterialError, match="Unobtainium"):
            material_by_name("Unobtainium")
