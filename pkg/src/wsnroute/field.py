"""Sensing-field generation, planar geometry, and the coordinate dataset format.

A field is an immutable scatter of node positions on a flat rectangle. Node
identity is the positional index into ``points``; there is no separate id.
All distance math in the package funnels through :func:`distance` and the
vectorized helpers below, which evaluate the same floating-point expression
(``sqrt(dx*dx + dy*dy)``) so every caller sees bit-identical values.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np


class DatasetError(ValueError):
    """Base class for dataset text format errors."""


class DatasetParseError(DatasetError):
    """A line did not match the ``P (<x> <y>)`` record format."""

    def __init__(self, line_no: int, line: str):
        super().__init__(f"line {line_no}: malformed record {line!r}")
        self.line_no = line_no
        self.line = line


class EmptyDatasetError(DatasetError):
    """The input contained no coordinate records."""


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class SensorField:
    """Node coordinates plus the rectangle they live in.

    ``seed`` records how a generated field was produced and is None for
    fields parsed from a dataset file. Instances are immutable and safe to
    share across concurrent readers.
    """

    points: tuple[Point, ...]
    width: float
    height: float
    seed: int | None = None

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def coords(self) -> np.ndarray:
        """(n, 2) float64 coordinate array; cached, treat as read-only."""
        arr = np.array(self.points, dtype=np.float64)
        arr.setflags(write=False)
        return arr


def generate_uniform(n: int, width: float, height: float, seed: int) -> SensorField:
    """Scatter ``n`` nodes i.i.d. uniformly over [0, width] x [0, height].

    Coordinates come from numpy's PCG64 stream seeded with ``seed``, so the
    same (n, width, height, seed) reproduces the identical point sequence on
    any platform.
    """
    if n < 1:
        raise ValueError(f"need at least one node, got n={n}")
    if width <= 0 or height <= 0:
        raise ValueError(f"field dimensions must be positive, got {width}x{height}")
    rng = np.random.Generator(np.random.PCG64(seed))
    xy = rng.random((n, 2))
    xy[:, 0] *= width
    xy[:, 1] *= height
    points = tuple(Point(float(x), float(y)) for x, y in xy)
    return SensorField(points=points, width=float(width), height=float(height), seed=seed)


def distance(p: Point, q: Point) -> float:
    """Euclidean distance; the scalar form of the package's canonical metric."""
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return math.sqrt(dx * dx + dy * dy)


def distance_block(xy: np.ndarray, row_start: int, row_stop: int) -> np.ndarray:
    """Distances from each of ``xy[row_start:row_stop]`` to every point.

    Returns a (row_stop - row_start, n) array. Uses the canonical metric
    expression so entries match :func:`distance` bit-for-bit.
    """
    dx = xy[row_start:row_stop, 0][:, None] - xy[:, 0][None, :]
    dy = xy[row_start:row_stop, 1][:, None] - xy[:, 1][None, :]
    return np.sqrt(dx * dx + dy * dy)


def distances_from(xy: np.ndarray, i: int) -> np.ndarray:
    """1-D distances from node ``i`` to every point (canonical metric)."""
    dx = xy[:, 0] - xy[i, 0]
    dy = xy[:, 1] - xy[i, 1]
    return np.sqrt(dx * dx + dy * dy)


_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_RECORD = re.compile(rf"^\s*P\s*\(\s*({_NUM})\s+({_NUM})\s*\)\s*$")


def format_coord(v: float) -> str:
    """Shortest decimal that parses back to exactly ``v``; integral values lose the dot."""
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def parse_dataset(text: str) -> SensorField:
    """Read ``P (<x> <y>)`` records, one per non-empty line.

    Width/height are set to the bounding box observed (anchored at 0).
    Raises :class:`DatasetParseError` with the offending line number on a
    malformed record and :class:`EmptyDatasetError` when no records exist.
    """
    points: list[Point] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        m = _RECORD.match(line)
        if m is None:
            raise DatasetParseError(line_no, line.strip())
        points.append(Point(float(m.group(1)), float(m.group(2))))
    if not points:
        raise EmptyDatasetError("dataset contains no records")
    width = max(p.x for p in points)
    height = max(p.y for p in points)
    return SensorField(points=tuple(points), width=width, height=height, seed=None)


def write_dataset(field: SensorField) -> str:
    """Serialize a field as ``P (<x> <y>)`` lines, LF-terminated.

    Round-trip law: ``parse_dataset(write_dataset(f)).points == f.points``.
    """
    lines = [f"P ({format_coord(p.x)} {format_coord(p.y)})" for p in field.points]
    return "\n".join(lines) + "\n"
