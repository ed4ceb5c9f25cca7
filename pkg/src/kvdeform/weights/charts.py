"""Points of the compactified two-point configuration space (the eye)."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

CHARTS = ("interior", "upper_lid", "lower_lid", "iris", "corner_01", "corner_10")

# radius used to realize the collision circle by a nearby interior configuration
IRIS_EPSILON = 1e-4


class ChartError(ValueError):
    pass


@dataclass(frozen=True)
class EyePoint:
    """``chart`` plus one parameter: complex ``q`` (interior), an angle, or nothing (corners)."""

    chart: str
    param: complex | float | None = None

    def __post_init__(self):
        if self.chart not in CHARTS:
            raise ChartError(f"unknown chart {self.chart!r}; expected one of {', '.join(CHARTS)}")
        p = self.param
        if self.chart in ("corner_01", "corner_10"):
            if p is not None:
                raise ChartError(f"{self.chart} takes no parameter")
        elif self.chart == "interior":
            if p is None or complex(p).imag <= 0 or complex(p) == 1j:
                raise ChartError("interior needs a point in the upper half-plane other than i")
        elif self.chart in ("upper_lid", "lower_lid"):
            if p is None or not 0 <= float(p) <= math.pi:
                raise ChartError(f"{self.chart} angle must lie in [0, pi]")
        elif p is None or not 0 <= float(p) < 2 * math.pi:
            raise ChartError("iris angle must lie in [0, 2pi)")

    @classmethod
    def corner(cls) -> "EyePoint":
        return cls("corner_01")

    def positions(self) -> tuple[complex, complex]:
        """Canonical representative ``(p1, p2)`` of the pinned pair."""
        c, p = self.chart, self.param
        if c == "corner_01":
            return 0j, 1 + 0j
        if c == "corner_10":
            return 1 + 0j, 0j
        if c == "upper_lid":
            return 0j, cmath.exp(1j * float(p))
        if c == "lower_lid":
            return 1 - cmath.exp(-1j * float(p)), 1 + 0j
        if c == "interior":
            return 1j, complex(p)
        return 1j, 1j + IRIS_EPSILON * cmath.exp(1j * float(p))

    def is_corner_01(self) -> bool:
        if self.chart == "corner_01":
            return True
        return self.chart in ("upper_lid", "lower_lid") and float(self.param) == 0.0

    def key(self) -> str:
        if self.param is None:
            return self.chart
        if self.chart == "interior":
            q = complex(self.param)
            return f"interior:{q.real!r},{q.imag!r}"
        return f"{self.chart}:{float(self.param)!r}"

    def __str__(self) -> str:
        return self.key()

    @classmethod
    def parse(cls, text: str) -> "EyePoint":
        """``corner``, ``corner_01``, ``iris:0.3``, ``upper_lid:0.785``, ``interior:0.5,1.2``."""
        text = text.strip()
        if text in ("corner", "corner_01"):
            return cls("corner_01")
        if text == "corner_10":
            return cls("corner_10")
        if text == "iris":
            return cls("iris", 0.0)
        chart, sep, rest = text.partition(":")
        if not sep:
            raise ChartError(f"cannot parse eye point {text!r}")
        try:
            if chart == "interior":
                re_, im = (float(t) for t in rest.split(","))
                return cls(chart, complex(re_, im))
            return cls(chart, float(rest))
        except ValueError:
            raise ChartError(f"cannot parse eye point {text!r}") from None
