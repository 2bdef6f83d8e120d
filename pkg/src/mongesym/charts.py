"""Coordinate charts.

Three fixed charts are used throughout: the mixed jet space J20 with
coordinates (x, y, y1, y2, z), its z-free restriction J2, and the plane
(x, y).  Expressions and vector fields always carry the chart they live on,
and cross-chart arithmetic is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass


class ChartMismatchError(ValueError):
    """Raised when two values living on different charts are combined."""


@dataclass(frozen=True)
class Chart:
    name: str
    coords: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.coords)) != len(self.coords):
            raise ValueError(f"duplicate coordinate in chart {self.name}")

    def index(self, coord: str) -> int:
        try:
            return self.coords.index(coord)
        except ValueError:
            raise KeyError(f"{coord!r} is not a coordinate of chart {self.name}") from None

    def __contains__(self, coord: str) -> bool:
        return coord in self.coords

    def __len__(self) -> int:
        return len(self.coords)

    def __repr__(self) -> str:
        return f"Chart({self.name})"


J20 = Chart("J20", ("x", "y", "y1", "y2", "z"))
J2 = Chart("J2", ("x", "y", "y1", "y2"))
PLANE = Chart("Plane", ("x", "y"))


def require_same_chart(a, b):
    if a.chart != b.chart:
        raise ChartMismatchError(f"chart mismatch: {a.chart.name} vs {b.chart.name}")
