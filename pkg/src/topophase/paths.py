"""Sampled, timed 3-D paths and the polyline quadrature shared by the phase
integrals.

Paths are polylines: integrands are evaluated along the straight segments
between samples, never on an interpolating spline.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from topophase.errors import (
    NonIntegerWindingError,
    NonMonotonicTimeError,
    NotClosedError,
    OnAxisError,
)

CLOSE_TOL = 1e-9  # cm
MIN_SAMPLES = 8
DEFAULT_SEGMENTS = 4096


@dataclass(frozen=True, eq=False)
class ParamPath:
    points: np.ndarray
    times: np.ndarray
    closed: bool = field(init=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        t = np.array(self.times, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError(f"points must have shape (N, 3), got {pts.shape}")
        if t.shape != (len(pts),):
            raise ValueError("need one timestamp per point")
        if len(pts) < MIN_SAMPLES:
            raise ValueError(f"a path needs at least {MIN_SAMPLES} samples")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(t))):
            raise ValueError("path samples must be finite")
        if np.any(np.diff(t) <= 0):
            raise NonMonotonicTimeError("timestamps must be strictly increasing")
        pts.flags.writeable = False
        t.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "closed", bool(np.linalg.norm(pts[-1] - pts[0]) < CLOSE_TOL))

    def __len__(self):
        return len(self.points)

    @property
    def segments(self) -> np.ndarray:
        return np.diff(self.points, axis=0)

    @property
    def durations(self) -> np.ndarray:
        return np.diff(self.times)

    @property
    def velocities(self) -> np.ndarray:
        """Constant velocity on each segment."""
        return self.segments / self.durations[:, None]

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.segments, axis=1).sum())

    def with_times(self, times) -> "ParamPath":
        return ParamPath(self.points, times)

    def reversed(self) -> "ParamPath":
        return ParamPath(self.points[::-1], self.times[-1] - self.times[::-1] + self.times[0])

    def repeated(self, n: int) -> "ParamPath":
        """Traverse a closed path ``n`` times in a row."""
        if not self.closed:
            raise NotClosedError("only closed paths can be repeated")
        period = self.times[-1] - self.times[0]
        pts = [self.points] + [self.points[1:]] * (n - 1)
        ts = [self.times] + [self.times[1:] + k * period for k in range(1, n)]
        return ParamPath(np.concatenate(pts), np.concatenate(ts))

    def to_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "x", "y", "z"])
        for t, (x, y, z) in zip(self.times, self.points):
            w.writerow([f"{t:.17g}", f"{x:.17g}", f"{y:.17g}", f"{z:.17g}"])


def _timed(points: np.ndarray, speed: float | None, period: float) -> ParamPath:
    """Attach times: constant ``speed`` along the polyline, or ``period`` per
    pass split evenly over the samples."""
    if speed is not None:
        if speed <= 0:
            raise ValueError("speed must be positive")
        arc = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(points, axis=0), axis=1))])
        times = arc / speed
    else:
        times = np.linspace(0.0, period, len(points))
    return ParamPath(points, times)


def _loop(xy: np.ndarray, z: float) -> np.ndarray:
    return np.column_stack([xy, np.full(len(xy), z)])


def circle(radius=1.0, center=(0.0, 0.0), n=DEFAULT_SEGMENTS, turns=1, clockwise=False,
           speed=None, period=1.0, z=0.0) -> ParamPath:
    """Circle in a z = const plane sampled with ``n`` segments per turn."""
    theta = np.linspace(0.0, 2 * math.pi * turns, n * turns + 1)
    if clockwise:
        theta = -theta
    xy = np.column_stack([center[0] + radius * np.cos(theta), center[1] + radius * np.sin(theta)])
    xy[-1] = xy[0]
    return _timed(_loop(xy, z), speed, period * turns)


def ellipse(a=2.0, b=1.0, center=(0.0, 0.0), n=DEFAULT_SEGMENTS, turns=1, clockwise=False,
            speed=None, period=1.0, z=0.0) -> ParamPath:
    theta = np.linspace(0.0, 2 * math.pi * turns, n * turns + 1)
    if clockwise:
        theta = -theta
    xy = np.column_stack([center[0] + a * np.cos(theta), center[1] + b * np.sin(theta)])
    xy[-1] = xy[0]
    return _timed(_loop(xy, z), speed, period * turns)


def square(half_side=1.0, center=(0.0, 0.0), n=DEFAULT_SEGMENTS, turns=1, clockwise=False,
           speed=None, period=1.0, z=0.0) -> ParamPath:
    """Axis-aligned square starting mid-way up the +x side, samples evenly
    spaced in arclength (n divisible by 8 puts a sample on every corner)."""
    s = (np.linspace(0.0, 4.0 * turns, n * turns + 1) + 0.5) % 4.0
    if clockwise:
        s = (4.0 - s) % 4.0
    side = np.floor(s).astype(int)
    u = 2.0 * (s - side) - 1.0  # -1..1 along the side
    h = half_side
    x = np.choose(side, [np.full_like(u, h), -u * h, np.full_like(u, -h), u * h])
    y = np.choose(side, [u * h, np.full_like(u, h), -u * h, np.full_like(u, -h)])
    xy = np.column_stack([center[0] + x, center[1] + y])
    xy[-1] = xy[0]
    return _timed(_loop(xy, z), speed, period * turns)


def from_function(fn, n=DEFAULT_SEGMENTS, speed=None, period=1.0) -> ParamPath:
    """Sample ``fn(s) -> (N, 3)`` at ``n + 1`` parameters in [0, 1]; the last
    point is snapped to the first when they are within the closure tolerance."""
    s = np.linspace(0.0, 1.0, n + 1)
    pts = np.asarray(fn(s), dtype=float)
    if np.linalg.norm(pts[-1] - pts[0]) < 1e-6:
        pts[-1] = pts[0]
    return _timed(pts, speed, period)


def read_csv(path) -> ParamPath:
    """Read ``t,x,y,z`` rows; a single non-numeric header row is skipped."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row) or row[0].lstrip().startswith("#"):
                continue
            try:
                values = [float(c) for c in row]
            except ValueError:
                if lineno == 1:
                    continue
                raise ValueError(f"{path}:{lineno}: non-numeric path row {row!r}") from None
            if len(values) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 columns t,x,y,z, got {len(values)}")
            rows.append(values)
    if not rows:
        raise ValueError(f"{path}: no path samples")
    data = np.array(rows)
    pts = data[:, 1:]
    if np.linalg.norm(pts[-1] - pts[0]) < CLOSE_TOL:
        pts[-1] = pts[0]
    return ParamPath(pts, data[:, 0])


def winding_number(path: ParamPath, axis=(0.0, 0.0, 1.0), axis_point=(0.0, 0.0, 0.0),
                   rho_min: float = 1e-12) -> int:
    """Signed number of turns ``path`` makes about the line (axis_point, axis),
    positive for counter-clockwise circulation seen from the +axis side."""
    if not path.closed:
        raise NotClosedError("winding number needs a closed path")
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    helper = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = np.cross(axis, helper)
    u /= np.linalg.norm(u)
    w = np.cross(axis, u)
    r = path.points - np.asarray(axis_point, dtype=float)
    x, y = r @ u, r @ w
    if np.any(np.hypot(x, y) <= rho_min):
        raise OnAxisError("path passes through the source axis")
    dphi = np.diff(np.arctan2(y, x))
    dphi = (dphi + math.pi) % (2 * math.pi) - math.pi
    turns = dphi.sum() / (2 * math.pi)
    n = round(turns)
    if abs(turns - n) > 1e-6:
        raise NonIntegerWindingError(f"accumulated angle gives {turns:.9f} turns")
    return int(n)


def segment_romberg(points: np.ndarray, integrand, levels: int = 3) -> tuple[float, float]:
    """Sum over polyline segments of the segment-averaged ``integrand``.

    ``integrand(x, idx)`` gets sub-points ``x`` (M, 3) on segments ``idx`` (M,)
    and returns the weighted values (M,), e.g. ``F(x) . dl[idx]``.  Composite
    midpoint sums with 1, 2, 4, ... sub-intervals per segment are combined by
    Richardson extrapolation (the midpoint error series is even in h).

    Returns (value, error estimate).
    """
    p0 = points[:-1]
    delta = np.diff(points, axis=0)
    nseg = len(p0)
    table = []
    for level in range(levels):
        n = 2**level
        s = (np.arange(n) + 0.5) / n
        idx = np.repeat(np.arange(nseg), n)
        ss = np.tile(s, nseg)
        x = p0[idx] + ss[:, None] * delta[idx]
        row = [float(np.sum(integrand(x, idx)) / n)]
        for j in range(1, level + 1):
            f = 4.0**j
            row.append((f * row[j - 1] - table[-1][j - 1]) / (f - 1.0))
        table.append(row)
    best = table[-1][-1]
    err = abs(best - table[-2][-1]) if levels > 1 else float("nan")
    return best, err
