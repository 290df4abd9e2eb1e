"""Report record shared by the seminorm routines."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SeminormReport:
    """A named nonnegative quantity with an error bound.

    ``cells_used`` lists the Peter-Weyl cells (``(p, q)`` pairs, or degrees
    ``p`` in the real case) that contributed.
    """

    name: str
    value: float
    error_bound: float = 0.0
    cells_used: tuple = ()
    notes: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.error_bound < 0:
            raise ValueError("error bound must be nonnegative")
        if self.value < -self.error_bound - 1e-12 * max(1.0, abs(self.value)):
            raise ValueError(f"seminorm {self.name} came out negative: {self.value}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": float(self.value),
            "error_bound": float(self.error_bound),
            "cells_used": [list(c) if isinstance(c, tuple) else c for c in self.cells_used],
            "notes": self.notes,
            "params": self.params,
        }
