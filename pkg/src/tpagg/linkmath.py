"""Decibel-domain algebra for optical power ratios and OSNR bookkeeping.

All quantities use the 10*log10 power convention.  OSNR values are assumed
to be referenced to one fixed noise bandwidth (conventionally 0.1 nm), so
no bandwidth conversion ever happens here.  Arithmetic is carried out in
the linear power domain and converted back at the boundary, which keeps
repeated combination steps from accumulating exponentiation error.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

__all__ = [
    "OsnrContribution",
    "cascade_osnr",
    "combine_osnr",
    "db_to_linear",
    "linear_to_db",
    "splitter_loss",
]


def db_to_linear(value_db: float) -> float:
    """Convert a dB power ratio to a linear power ratio."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(ratio: float) -> float:
    """Convert a linear power ratio to dB.

    Raises
    ------
    ValueError
        If ``ratio`` is not strictly positive.
    """
    if ratio <= 0.0:
        raise ValueError(f"linear power ratio must be positive, got {ratio!r}")
    return 10.0 * math.log10(ratio)


def splitter_loss(n: int) -> float:
    """Intrinsic insertion loss of an n x 1 passive splitter, in dB.

    A passive combiner with ``n`` ports delivers at most 1/n of each input
    to the common port, so the loss is ``10*log10(n)``: 3.01 dB for two
    ports, 9.03 dB for eight.  ``n = 1`` is a lossless pass-through.
    """
    if n < 1:
        raise ValueError(f"splitter port count must be >= 1, got {n}")
    return 10.0 * math.log10(n)


@dataclass(frozen=True)
class OsnrContribution:
    """One noise source: an OSNR level in dB plus how many copies add up."""

    osnr_db: float
    count: int = 1

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"contribution count must be >= 1, got {self.count}")
        if not math.isfinite(self.osnr_db):
            raise ValueError(f"contribution OSNR must be finite, got {self.osnr_db!r}")


def combine_osnr(osnr_in_db: float, osnr_out_db: float, k: int) -> float:
    """OSNR after ``k`` signals share an unfiltered combiner.

    The signal of interest keeps its own in-band OSNR ``osnr_in_db`` and
    picks up broadband noise at ``osnr_out_db`` from each of the other
    ``k - 1`` signals.  Noise powers add linearly::

        -10*log10(10**(-osnr_in/10) + (k - 1) * 10**(-osnr_out/10))

    ``k = 1`` returns ``osnr_in_db`` unchanged (bit-exact: no round trip
    through the linear domain).
    """
    if k < 1:
        raise ValueError(f"combiner signal count must be >= 1, got {k}")
    if k == 1:
        return osnr_in_db
    noise = db_to_linear(-osnr_in_db) + (k - 1) * db_to_linear(-osnr_out_db)
    return -linear_to_db(noise)


def cascade_osnr(contributions: Sequence[OsnrContribution]) -> float:
    """OSNR of a signal carrying several superimposed noise contributions.

    Generalizes :func:`combine_osnr` to heterogeneous noise levels:
    ``combine_osnr(a, b, k)`` equals
    ``cascade_osnr([OsnrContribution(a), OsnrContribution(b, k - 1)])``
    for ``k >= 2``.  The linear-domain sum uses :func:`math.fsum`, so the
    result does not depend on contribution order.
    """
    if not contributions:
        raise ValueError("cascade_osnr needs at least one contribution")
    noise = math.fsum(c.count * db_to_linear(-c.osnr_db) for c in contributions)
    return -linear_to_db(noise)
