"""Memoized big-integer factorials with an explicit size cap."""

from __future__ import annotations

import threading

__all__ = ["FactorialCapError", "FactorialTable", "DEFAULT_JMAX", "factorials"]

DEFAULT_JMAX = 20


class FactorialCapError(OverflowError):
    """Requested a factorial beyond the configured cap."""

    def __init__(self, n: int, cap: int) -> None:
        super().__init__(f"{n}! exceeds factorial cap {cap}; raise it with set_cap()")
        self.n = n
        self.cap = cap


class FactorialTable:
    """Factorials ``0! .. cap!`` as Python ints.

    The default cap ``4 * jmax + 2`` covers every factorial appearing in the
    Clebsch-Gordan and 6-j Racah sums for spins up to ``jmax``.
    """

    def __init__(self, cap: int | None = None) -> None:
        self._lock = threading.Lock()
        self._values = [1]
        self.cap = 4 * DEFAULT_JMAX + 2 if cap is None else cap
        self._extend(self.cap)

    def _extend(self, n: int) -> None:
        values = self._values
        while len(values) <= n:
            values.append(values[-1] * len(values))

    def set_cap(self, cap: int) -> None:
        if cap < 0:
            raise ValueError("cap must be non-negative")
        with self._lock:
            # readers only ever index below the cap they observed
            if cap > len(self._values) - 1:
                values = list(self._values)
                while len(values) <= cap:
                    values.append(values[-1] * len(values))
                self._values = values
            self.cap = cap

    def __call__(self, n: int) -> int:
        if n < 0:
            raise ValueError(f"factorial of negative number {n}")
        if n > self.cap:
            raise FactorialCapError(n, self.cap)
        return self._values[n]


factorials = FactorialTable()
