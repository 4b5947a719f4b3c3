from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

import numpy as np


@dataclass
class StateNetwork:
    """A finite sum over [N]^E presented two ways.

    ``tensors`` holds one array per crossing with the segment indices it
    depends on, the summand being the product of all entries. ``summand``
    evaluates the same summand directly on an (M, E) array of lattice
    indices ordered like ``segments``.
    """
    segments: Tuple[str, ...]
    N: int
    tensors: List[Tuple[Tuple[str, ...], np.ndarray]] = field(default_factory=list)
    summand: Callable[[np.ndarray], np.ndarray] = None

    @property
    def terms(self) -> int:
        return self.N ** len(self.segments)


class SumBackend(ABC):
    """
    Evaluates the finite sum of a state network. Implementations differ in
    how the N^E terms are visited, so their values cross-check each other.
    """

    name = ''

    @abstractmethod
    def evaluate(self, network: StateNetwork) -> Tuple[complex, float]:
        """Return the sum and a bound on its rounding error.
        """

    def describe(self) -> dict:
        """Strategy details recorded in results.
        """
        return {'backend': self.name}


class QuadratureBackend(ABC):
    """
    Produces quadrature rules on the unit cube [0, 1]^dim. A backend returns
    several rules per call (randomized shifts, or nested rules) and turns the
    values of an integral under each rule into an estimate and its error.
    """

    name = ''

    @abstractmethod
    def nodes(self, dim: int, budget: int, rng: np.random.Generator) -> List[Tuple[np.ndarray, np.ndarray]]:
        """Return a list of (points, weights), points of shape (M, dim).
        """

    @abstractmethod
    def estimate(self, values: Sequence[complex]) -> Tuple[complex, float]:
        """Combine the per rule values into (estimate, error estimate).
        """
