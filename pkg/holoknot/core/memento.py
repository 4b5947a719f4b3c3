import json
from abc import ABC, abstractmethod


class Memento(ABC):
    """Objects with a JSON document form.

    Diagrams and run configs round-trip through their document:
    ``from_memento(create_memento())`` rebuilds an equal object. Reports
    echo the document and diagram equality compares it.
    """

    @abstractmethod
    def create_memento(self) -> dict:
        """JSON-compatible document of the state of self"""

    @classmethod
    @abstractmethod
    def from_memento(cls, memento):
        """Validate ``memento`` and build an instance from it"""

    def canonical(self) -> str:
        """The document as sorted, compact JSON."""
        return json.dumps(self.create_memento(), sort_keys=True, separators=(',', ':'))

    def revised(self, **fields):
        """A new instance from this document with top level ``fields`` replaced.

        The result goes through the same validation as a document read
        from disk.
        """
        memento = json.loads(self.canonical())
        memento.update(fields)
        return type(self).from_memento(memento)
