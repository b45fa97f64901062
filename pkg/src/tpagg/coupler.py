"""Serial-MZI variable combiner model.

A chain of thermo-optically tuned Mach-Zehnder stages merges several
inputs onto one output bus.  Stage ``j`` couples a fraction ``r_j`` of its
local input onto the bus and transmits a fraction ``1 - r_j`` of whatever
is already on the bus, so the power from input ``i`` that reaches the
common output is::

    r_i * product(1 - r_j for j > i)

Stage 1 sits at the far (terminated) end of the bus; the last stage sits
next to the common output.  With the schedule ``r_j = 1/j`` every one of
``k`` active inputs arrives with power 1/k, i.e. a merge loss of
``10*log10(k)`` dB instead of the fixed ``10*log10(n)`` dB of an n x 1
passive splitter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .linkmath import splitter_loss

__all__ = [
    "CouplerCascade",
    "MziStage",
    "confluence_loss",
    "mzi_ratio_from_phase",
    "stage_ratios",
    "through_power",
]


@dataclass(frozen=True)
class MziStage:
    """One tunable 2x2 element: the fraction of its local input sent to the bus."""

    coupling_ratio: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.coupling_ratio <= 1.0:
            raise ValueError(f"coupling ratio must be in [0, 1], got {self.coupling_ratio!r}")


@dataclass(frozen=True)
class CouplerCascade:
    """Ordered MZI chain; ``stages[-1]`` is adjacent to the common output."""

    stages: tuple[MziStage, ...]

    def __post_init__(self) -> None:
        if len(self.stages) < 1:
            raise ValueError("cascade needs at least one stage")

    @classmethod
    def from_ratios(cls, ratios: list[float] | tuple[float, ...]) -> "CouplerCascade":
        return cls(tuple(MziStage(r) for r in ratios))

    @classmethod
    def equal_split(cls, k: int) -> "CouplerCascade":
        """Cascade tuned so each of ``k`` inputs reaches the output at 1/k."""
        return cls.from_ratios(stage_ratios(k))

    def __len__(self) -> int:
        return len(self.stages)


def stage_ratios(k: int) -> list[float]:
    """Coupling-ratio schedule that merges ``k`` inputs evenly: stage j at 1/j.

    The first active stage is always fully coupled (ratio 1.0), the second
    50 %, the third 1/3, and so on.
    """
    if k < 1:
        raise ValueError(f"input count must be >= 1, got {k}")
    return [1.0 / j for j in range(1, k + 1)]


def through_power(cascade: CouplerCascade, input_index: int) -> float:
    """Power fraction from input ``input_index`` (1-based) to the common output."""
    n = len(cascade.stages)
    if not 1 <= input_index <= n:
        raise ValueError(f"input index must be in 1..{n}, got {input_index}")
    power = cascade.stages[input_index - 1].coupling_ratio
    for stage in cascade.stages[input_index:]:
        power *= 1.0 - stage.coupling_ratio
    return power


def confluence_loss(k: int) -> float:
    """Merge loss in dB when ``k`` inputs share the bus at equal power.

    Identical to :func:`tpagg.linkmath.splitter_loss` evaluated at ``k``;
    the saving over a fixed splitter comes from ``k`` being the number of
    active signals rather than the number of ports.
    """
    return splitter_loss(k)


def mzi_ratio_from_phase(phase_rad: float) -> float:
    """Coupling ratio of an ideal two-coupler MZI versus arm phase shift.

    For balanced 50:50 directional couplers the cross-port power is
    ``sin(phase/2)**2``: 0 at zero phase (bar state), 1 at pi (cross
    state), monotone in between.  The result is clamped to [0, 1] to
    absorb floating-point dust.
    """
    ratio = math.sin(0.5 * phase_rad) ** 2
    return min(1.0, max(0.0, ratio))
