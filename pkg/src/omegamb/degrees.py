"""Ambiguity degree labels and the claims reported by the run counters.

Labels are totally ordered: ``0 < 1 < ... < ℵ0⁻ < ℵ0 < 2^ℵ0``.  ``ℵ0⁻`` is a
label for unbounded finite ambiguity, not a cardinal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering

_FINITE, _UNBOUNDED, _COUNTABLE, _CONTINUUM = range(4)


@total_ordering
@dataclass(frozen=True)
class DegreeLabel:
    rank: int
    k: int = 0

    @classmethod
    def finite(cls, k: int) -> DegreeLabel:
        if k < 0:
            raise ValueError("finite degree must be >= 0")
        return cls(_FINITE, k)

    @classmethod
    def unbounded(cls) -> DegreeLabel:
        return cls(_UNBOUNDED)

    @classmethod
    def countable(cls) -> DegreeLabel:
        return cls(_COUNTABLE)

    @classmethod
    def continuum(cls) -> DegreeLabel:
        return cls(_CONTINUUM)

    @property
    def is_finite(self) -> bool:
        return self.rank == _FINITE

    def __lt__(self, other: DegreeLabel) -> bool:
        return (self.rank, self.k) < (other.rank, other.k)

    def __str__(self) -> str:
        if self.rank == _FINITE:
            return str(self.k)
        return ("ℵ0⁻", "ℵ0", "2^ℵ0")[self.rank - 1]


@dataclass(frozen=True)
class Claim:
    """What a bounded search is entitled to say: ``AtLeast(k)`` or ``Uncountable``.

    A countable-infinity claim is deliberately not representable; no finite
    witness can establish it.
    """

    kind: str
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("AtLeast", "Uncountable"):
            raise ValueError(f"unsupported claim {self.kind!r}")

    @classmethod
    def at_least(cls, k: int) -> Claim:
        return cls("AtLeast", k)

    @classmethod
    def uncountable(cls) -> Claim:
        return cls("Uncountable")

    def label(self) -> DegreeLabel:
        if self.kind == "Uncountable":
            return DegreeLabel.continuum()
        return DegreeLabel.finite(self.k)

    def __str__(self) -> str:
        return "Uncountable" if self.kind == "Uncountable" else f"AtLeast({self.k})"


@dataclass(frozen=True)
class DegreeBound:
    """A lower bound ``AtLeast(label)`` on an ambiguity degree."""

    label: DegreeLabel

    def __str__(self) -> str:
        return f"AtLeast({self.label})"
