import math

import numpy as np
import pytest

from topophase import paths
from topophase.errors import NonMonotonicTimeError, NotClosedError, OnAxisError


def test_winding_examples():
    assert paths.winding_number(paths.circle(1.0, n=64)) == 1
    assert paths.winding_number(paths.circle(1.0, center=(3.0, 0.0), n=64)) == 0
    assert paths.winding_number(paths.circle(1.0, n=64, turns=2)) == 2
    assert paths.winding_number(paths.circle(1.0, n=64, clockwise=True)) == -1
    assert paths.winding_number(paths.square(1.0, n=64)) == 1


def test_winding_tilted_axis():
    axis = np.array([0.0, 1.0, 0.0])
    loop = paths.from_function(lambda s: np.column_stack([np.cos(2 * np.pi * s), np.zeros_like(s), -np.sin(2 * np.pi * s)]), n=64)
    # x = cos, z = -sin circulates counter-clockwise about +y
    assert paths.winding_number(loop, axis) == 1


def test_winding_errors():
    open_path = paths.ParamPath(np.column_stack([np.linspace(1, 2, 10), np.ones(10), np.zeros(10)]), np.arange(10.0))
    with pytest.raises(NotClosedError):
        paths.winding_number(open_path)
    with pytest.raises(OnAxisError):
        paths.winding_number(paths.circle(1.0, center=(1.0, 0.0), n=64))


def test_path_validation():
    with pytest.raises(ValueError):
        paths.ParamPath(np.zeros((5, 3)), np.arange(5.0))
    pts = paths.circle(n=16).points
    bad_t = np.arange(len(pts), dtype=float)
    bad_t[4] = bad_t[3]
    with pytest.raises(NonMonotonicTimeError):
        paths.ParamPath(pts, bad_t)


def test_constant_speed_timing():
    p = paths.circle(2.0, n=128, speed=3.0)
    speeds = np.linalg.norm(p.velocities, axis=1)
    np.testing.assert_allclose(speeds, 3.0, rtol=1e-12)
    assert p.closed


def test_repeated_and_reversed():
    p = paths.circle(n=32)
    p3 = p.repeated(3)
    assert len(p3) == 3 * 32 + 1 and paths.winding_number(p3) == 3
    assert paths.winding_number(p.reversed()) == -1


def test_square_corners_are_samples():
    p = paths.square(1.0, n=64)
    corners = {(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)}
    found = {tuple(np.round(x[:2], 12)) for x in p.points}
    assert corners <= found
    assert p.length == pytest.approx(8.0, rel=1e-12)


def test_csv_round_trip(tmp_path):
    p = paths.ellipse(2.0, 1.0, n=40, speed=5.0)
    f = tmp_path / "path.csv"
    with open(f, "w", newline="") as fh:
        p.to_csv(fh)
    q = paths.read_csv(f)
    assert np.array_equal(q.points, p.points) and np.array_equal(q.times, p.times)
    assert q.closed


@pytest.mark.parametrize("text", ["t,x,y,z\n0,1,0\n", "0,1,0,0\nfoo,1,2,3\n", ""])
def test_csv_malformed(tmp_path, text):
    f = tmp_path / "bad.csv"
    f.write_text(text)
    with pytest.raises(ValueError):
        paths.read_csv(f)


def test_segment_romberg_polynomial_exact():
    # integral of x^4 over [0, 1] along a two-segment polyline = 1/5
    pts = np.array([[0.0, 0, 0], [0.4, 0, 0], [1.0, 0, 0]])
    dl = np.diff(pts, axis=0)[:, 0]
    val, err = paths.segment_romberg(pts, lambda x, idx: x[:, 0] ** 4 * dl[idx])
    assert val == pytest.approx(0.2, rel=1e-14)
    assert err < 1e-3
