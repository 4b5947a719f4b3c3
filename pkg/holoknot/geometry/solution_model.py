from collections.abc import Sequence

import numpy as np

from holoknot.core.config import SolverSettings
from holoknot.core.signals import Signal


class SolutionModel(Sequence):
    """Deduplicated solver results ordered by residual, then lexicographically in b.

    Two results are the same solution when their parameter vectors are
    closer than ``distance``; the one with the smaller residual is kept.
    """

    def __init__(self, distance=SolverSettings.dedup_distance.default):
        self.distance = distance
        self._results = []

        self.solution_added = Signal()
        """Slot signature: slot(key, result)"""
        self.solution_replaced = Signal()
        """Slot signature: slot(key, old, new)"""
        self.solutions_cleared = Signal()
        """Slot signature: slot()"""

    def _find(self, b):
        for i, result in enumerate(self._results):
            if np.max(np.abs(result.b - b)) < self.distance:
                return i
        return -1

    def add(self, result) -> bool:
        """Insert ``result`` unless a duplicate with a smaller residual is known."""
        index = self._find(result.b)
        if index < 0:
            self._insert(result)
            self.solution_added.emit(self.key(result), result)
            return True

        old = self._results[index]
        if result.residual >= old.residual:
            return False
        del self._results[index]
        self._insert(result)
        self.solution_replaced.emit(self.key(result), old, result)
        return True

    def _insert(self, result):
        self._results.append(result)
        self._results.sort(key=self._sort_key)

    def reset(self):
        self._results.clear()
        self.solutions_cleared.emit()

    @staticmethod
    def _sort_key(result):
        return (result.residual,) + tuple(v for z in result.b for v in (z.real, z.imag))

    @staticmethod
    def key(result):
        """Canonical solution id: parameters rounded to 8 digits."""
        return tuple((round(z.real, 8), round(z.imag, 8)) for z in result.b)

    def best(self):
        return self._results[0] if self._results else None

    def __len__(self):
        return len(self._results)

    def __getitem__(self, index):
        return self._results[index]

    def __contains__(self, result):
        return self._find(result.b) >= 0
