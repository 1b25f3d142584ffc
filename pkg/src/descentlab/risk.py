"""Risk values that may be infinite.

At the interpolation threshold the exact risk formulas are genuinely
unbounded, so the curve machinery carries a first-class DIVERGENT marker
instead of a floating-point infinity: no arithmetic ever propagates an
``inf``, and CSV output serializes the marker as the literal string
``"inf"``.
"""

import math
from dataclasses import dataclass

__all__ = ["RiskValue", "DIVERGENT", "finite_risk"]

# Values this far below zero are rounding noise from formulas that are
# nonnegative in exact arithmetic; anything lower is a caller bug.
_NEGATIVE_SLACK = 1e-9


@dataclass(frozen=True)
class RiskValue:
    """A nonnegative risk, or the distinguished divergent (infinite) value.

    ``value`` is None exactly when the risk is divergent.
    """

    value: float | None

    def __post_init__(self):
        if self.value is None:
            return
        v = float(self.value)
        if not math.isfinite(v):
            raise ValueError(
                "RiskValue requires a finite value; use DIVERGENT for the infinite case"
            )
        if v < -_NEGATIVE_SLACK:
            raise ValueError(f"risk must be nonnegative, got {v}")
        object.__setattr__(self, "value", max(v, 0.0))

    @property
    def is_divergent(self):
        return self.value is None

    def __repr__(self):
        return "RiskValue(DIVERGENT)" if self.is_divergent else f"RiskValue({self.value!r})"


DIVERGENT = RiskValue(None)


def finite_risk(value):
    """A finite nonnegative RiskValue (tiny negative rounding is clamped to 0)."""
    return RiskValue(float(value))
