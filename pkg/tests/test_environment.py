import math

import pytest
from hypothesis import given, strategies as st

from demisurv.environment import EARTH, atmosphere_at, gravity_at


class TestAtmosphere:
    def test_sea_level(self):
        a = atmosphere_at(0.0)
        assert a.density == pytest.approx(1.225, rel=1e-3)
        assert a.temperature == pytest.approx(288.15, rel=1e-4)
        assert a.pressure == pytest.approx(101325.0, rel=1e-3)

    def test_eighty_km(self):
        a = atmosphere_at(80_000.0)
        assert a.density == pytest.approx(1.85e-5, rel=0.02)

    def test_tabulated_upper_points(self):
        assert atmosphere_at(120_000.0).density == pytest.approx(2.222e-8, rel=1e-6)
        assert atmosphere_at(400_000.0).density == pytest.approx(2.803e-12, rel=1e-6)

    def test_out_of_range(self):
        with pytest.raises(ValueError, match="altitude out of range"):
            atmosphere_at(1_000_001.0)
        with pytest.raises(ValueError):
            atmosphere_at(-1.0)

    @given(st.floats(0.0, 999_000.0), st.floats(1.0, 1000.0))
    def test_density_positive_and_non_increasing(self, h, dh):
        lo = atmosphere_at(h).density
        hi = atmosphere_at(min(h + dh, 1_000_000.0)).density
        assert lo > 0.0
        assert hi <= lo * (1.0 + 1e-12)

    def test_mean_free_path_grows_with_altitude(self):
        assert atmosphere_at(0.0).mean_free_path == pytest.approx(6.63e-8, rel=0.02)
        assert atmosphere_at(100_000.0).mean_free_path > atmosphere_at(50_000.0).mean_free_path


class TestGravity:
    def test_spherical_reduction(self):
        from dataclasses import replace

        spherical = replace(EARTH, j2=0.0, j3=0.0, j4=0.0)
        g_r, g_phi = gravity_at(EARTH.radius, 0.7, spherical)
        assert g_r == pytest.approx(-EARTH.mu / EARTH.radius**2)
        assert g_r == pytest.approx(-9.82, abs=0.01)
        assert g_phi == 0.0

    def test_equator(self):
        g_r, g_phi = gravity_at(EARTH.radius + 400e3, 0.0)
        assert g_phi == 0.0
        # Odd-power J3 contribution to g_r vanishes at the equator.
        r = EARTH.radius + 400e3
        q = EARTH.radius / r
        expected = -(EARTH.mu / r**2) * (1.0 + 1.5 * EARTH.j2 * q**2 - 0.625 * EARTH.j4 * q**4 * 3.0)
        assert g_r == pytest.approx(expected, rel=1e-12)

    def test_poles(self):
        for lat in (math.pi / 2.0, -math.pi / 2.0):
            _, g_phi = gravity_at(EARTH.radius + 500e3, lat)
            assert g_phi == pytest.approx(0.0, abs=1e-15)

    def test_forty_five_degrees_term_by_term(self):
        # Independent literal evaluation of every zonal term at 45 deg, 400 km.
        r = EARTH.radius + 400e3
        phi = math.radians(45.0)
        s = math.sin(phi)
        c = math.cos(phi)
        q = EARTH.radius / r
        j2_term = 1.5 * EARTH.j2 * q**2 * (3.0 * s**2 - 1.0)
        j3_term = 2.0 * EARTH.j3 * q**3 * (5.0 * s**3 - 3.0 * s)
        j4_term = 0.625 * EARTH.j4 * q**4 * (35.0 * s**4 - 30.0 * s**2 + 3.0)
        g_r_expected = -(EARTH.mu / r**2) * (1.0 - j2_term - j3_term - j4_term)
        g_phi_expected = (
            3.0
            * (EARTH.mu / r**2)
            * q**2
            * s
            * c
            * (
                EARTH.j2
                + 0.5 * EARTH.j3 * q * (5.0 * s**2 - 1.0)
                + 5.0 / 6.0 * EARTH.j4 * q**2 * (7.0 * s**2 - 1.0)
            )
        )
        g_r, g_phi = gravity_at(r, phi)
        assert g_r == pytest.approx(g_r_expected, rel=1e-14)
        assert g_phi == pytest.approx(g_phi_expected, rel=1e-14)

    @given(st.floats(-1.5, 1.5), st.floats(6.5e6, 8.0e6))
    def test_limit_to_point_mass(self, lat, r):
        from dataclasses import replace

        spherical = replace(EARTH, j2=0.0, j3=0.0, j4=0.0)
        g_r, g_phi = gravity_at(r, lat, spherical)
        assert g_r == pytest.approx(-EARTH.mu / r**2, rel=1e-14)
        assert g_phi == 0.0
