import numpy as np
import pytest

from fovprod import geometry as geo

SQUARE = np.array([0, 1, 1 + 1j, 1j])


def test_hull_drops_interior_and_collinear():
    pts = np.concatenate([SQUARE, [0.5, 0.5 + 0.5j, 0.25 + 0.1j]])
    H = geo.convex_hull(pts)
    assert set(np.round(H, 12)) == set(SQUARE)
    assert geo.polygon_area(H) == pytest.approx(1.0)


def test_hull_degenerate():
    assert geo.convex_hull([2 + 1j, 2 + 1j]).size == 1
    seg = geo.convex_hull([0, 0.5, 1, 0.25])
    assert seg.size == 2 and set(seg) == {0, 1}


def test_distance_and_depth():
    d = geo.distance_to_polygon([0.5 + 0.5j, 2, -1 - 1j], SQUARE)
    assert d == pytest.approx([0, 1, np.sqrt(2)])
    assert geo.inner_depth(0.5 + 0.5j, SQUARE)[0] == pytest.approx(0.5)
    assert geo.inner_depth(0.5 + 0.5j, np.array([0, 1]))[0] == -np.inf


def test_distance_to_segment_and_point():
    seg = np.array([-1, 1], dtype=complex)
    assert geo.distance_to_polygon(0.5 + 1e-9j, seg)[0] == pytest.approx(1e-9)
    assert geo.distance_to_polygon(3, seg)[0] == pytest.approx(2)
    assert geo.distance_to_polygon(1j, np.array([0j]))[0] == pytest.approx(1)


def test_nearest_point():
    q, d = geo.nearest_point(2 + 0.5j, SQUARE)
    assert q == pytest.approx(1 + 0.5j) and d == pytest.approx(1)
    q, d = geo.nearest_point(0.3 + 0.3j, SQUARE)
    assert d == 0 and q == 0.3 + 0.3j


def test_width_diameter_support():
    assert geo.width(SQUARE) == pytest.approx(1)
    assert geo.diameter(SQUARE) == pytest.approx(np.sqrt(2))
    assert geo.support(SQUARE, [0, np.pi / 4])[1] == pytest.approx(np.sqrt(2))


def test_hausdorff_and_convexity():
    assert geo.hausdorff(SQUARE, SQUARE + 0.1) == pytest.approx(0.1)
    assert geo.is_convex(SQUARE)
    assert not geo.is_convex(np.array([0, 1, 0.2 + 0.2j, 1j]))
