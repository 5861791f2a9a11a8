"""Exact-field catalog: values, singularities, and the Helmholtz residual."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from helmlearn import fields


def stencil_residual(field, k, points, h=1e-4):
    """|five-point Laplacian + k^2 u| at each point."""
    offsets = np.array([[0, 0], [h, 0], [-h, 0], [0, h], [0, -h]])
    stacked = points[:, None, :] + offsets[None, :, :]
    u = field.evaluate(stacked.reshape(-1, 2)).reshape(len(points), 5)
    lap = (u[:, 1] + u[:, 2] + u[:, 3] + u[:, 4] - 4.0 * u[:, 0]) / h**2
    return np.abs(lap + k * k * u[:, 0])


class TestPlaneProduct:
    def test_vanishes_on_axes(self):
        f = fields.PlaneProduct(k=184.79956785822313)
        vals = f.evaluate(np.array([[0.4, 0.0], [0.0, 0.3], [0.0, 0.0]]))
        assert_allclose(vals, 0.0, atol=1e-13)

    def test_no_singularities(self):
        assert len(fields.PlaneProduct(k=2.0).singular_points) == 0


class TestPointSource:
    def test_singularity_location(self):
        f = fields.PointSource((0.55, 0.0), 5.0)
        assert_allclose(f.singular_points, [[0.55, 0.0]])

    def test_evaluation_raises_at_singularity(self):
        f = fields.PointSource((0.5, 0.5), 5.0)
        with pytest.raises(ValueError):
            f.evaluate(np.array([[0.5, 0.5]]))


class TestDipole:
    def test_is_difference_of_point_sources(self):
        k = 7.0
        pos, neg = (0.45, 0.05), (0.45, -0.05)
        dip = fields.Dipole(pos, neg, k)
        rng = np.random.default_rng(0)
        pts = rng.uniform(-0.3, 0.3, (20, 2))
        expected = fields.PointSource(pos, k).evaluate(pts) \
            - fields.PointSource(neg, k).evaluate(pts)
        assert_allclose(dip.evaluate(pts), expected, rtol=0, atol=0)

    def test_two_singularities(self):
        dip = fields.Dipole((1.0, 0.0), (0.0, 1.0), 2.0)
        assert dip.singular_points.shape == (2, 2)


class TestPlaneWave:
    def test_unit_modulus(self):
        f = fields.PlaneWave((1.0, 1.0), 9.0)
        pts = np.random.default_rng(1).uniform(-2, 2, (30, 2))
        assert_allclose(np.abs(f.evaluate(pts)), 1.0, rtol=1e-14)

    def test_direction_normalized(self):
        a = fields.PlaneWave((2.0, 0.0), 3.0)
        b = fields.PlaneWave((1.0, 0.0), 3.0)
        pts = np.array([[0.3, -0.2]])
        assert_allclose(a.evaluate(pts), b.evaluate(pts), rtol=1e-15)

    def test_zero_direction_rejected(self):
        with pytest.raises(ValueError):
            fields.PlaneWave((0.0, 0.0), 3.0).evaluate(np.zeros((1, 2)))


class TestHelmholtzResidual:
    @pytest.mark.parametrize(
        "field",
        [
            fields.PlaneProduct(k=5.0),
            fields.PointSource((3.0, 0.0), 5.0),
            fields.Dipole((3.0, 0.1), (3.0, -0.1), 5.0),
            fields.PlaneWave((0.6, -0.8), 5.0),
        ],
        ids=["plane_product", "point_source", "dipole", "plane_wave"],
    )
    def test_five_point_stencil(self, field):
        rng = np.random.default_rng(17)
        pts = rng.uniform(-0.7, 0.7, (20, 2))
        res = stencil_residual(field, 5.0, pts)
        scale = np.abs(field.evaluate(pts)).max()
        assert np.all(res <= 1e-2 * 25.0 * scale)


class TestFieldFromSpec:
    def test_routing(self):
        k = 3.0
        assert isinstance(fields.field_from_spec({"kind": "plane_product"}, k),
                          fields.PlaneProduct)
        f = fields.field_from_spec(
            {"kind": "point_source", "location": [0.55, 0.0]}, k
        )
        assert f.location == (0.55, 0.0) and f.k == k
        d = fields.field_from_spec(
            {"kind": "dipole", "location_pos": [0.45, 0.05],
             "location_neg": [0.45, -0.05]}, k
        )
        assert d.location_neg == (0.45, -0.05)
        w = fields.field_from_spec({"kind": "plane_wave", "direction": [0, 1]}, k)
        assert isinstance(w, fields.PlaneWave)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            fields.field_from_spec({"kind": "vortex"}, 1.0)
