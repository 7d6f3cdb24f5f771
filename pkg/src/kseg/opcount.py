"""Arithmetic operation counters for the multiplication routines."""

from dataclasses import dataclass


@dataclass
class OpCounter:
    """Tally of real floating-point operations.

    Routines accept an optional counter and add the number of scalar
    operations each vectorized stage performs. Complex operations are counted
    in real-operation equivalents (a complex add is 2, a complex multiply 6).
    Passing no counter skips the bookkeeping entirely.
    """

    adds: int = 0
    muls: int = 0

    def add(self, count: int) -> None:
        self.adds += int(count)

    def mul(self, count: int) -> None:
        self.muls += int(count)

    @property
    def total(self) -> int:
        return self.adds + self.muls

    def reset(self) -> None:
        self.adds = 0
        self.muls = 0
