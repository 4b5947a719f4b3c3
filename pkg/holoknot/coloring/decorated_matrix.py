import numpy as np

from holoknot.coloring.coloring_error import ColoringError
from holoknot.core.config import Tolerances
from lib.numeric import (projective_distance, sl2_inverse, matrix_from_pairs,
                         vector_from_pairs, to_pair, from_pair)


class DecoratedMatrix:
    """A matrix g in SL2(C) with a left eigenline [v], v g = m^-1 v.

    The distinguished eigenvalue ``m`` is inferred from ``v`` when it is not
    given.
    """
    __slots__ = ('g', 'v', 'm')

    def __init__(self, g, v, m=None):
        self.g = np.asarray(g, dtype=complex).reshape(2, 2)
        self.v = np.asarray(v, dtype=complex).reshape(2)
        if not np.any(self.v):
            raise ColoringError('eigenline representative must be nonzero')
        if m is None:
            vg = self.v @ self.g
            k = int(np.argmax(np.abs(self.v)))
            m = self.v[k] / vg[k]
        self.m = complex(m)

    @classmethod
    def identity(cls, v=(1.0, 0.0)):
        return cls(np.eye(2), v, 1.0)

    def decoration_residual(self):
        """max of |v g - m^-1 v| / |v| and |det g - 1|."""
        eigen = np.linalg.norm(self.v @ self.g - self.v / self.m) / np.linalg.norm(self.v)
        return max(float(eigen), float(abs(np.linalg.det(self.g) - 1)))

    def validate(self, tolerance=Tolerances.residual.default):
        residual = self.decoration_residual()
        if residual > tolerance:
            raise ColoringError('not a decorated SL2 matrix (residual {0:.3g})'.format(residual))
        return self

    def distance(self, other):
        """Matrix distance relative to the matrix size, or projective distance of the lines."""
        scale = max(1.0, float(np.linalg.norm(other.g)))
        return max(float(np.linalg.norm(self.g - other.g)) / scale,
                   projective_distance(self.v, other.v))

    def same_as(self, other, tolerance=Tolerances.projective.default):
        return self.distance(other) <= tolerance

    def inverse_matrix(self):
        return sl2_inverse(self.g)

    def to_document(self):
        return {
            'g': [[to_pair(entry) for entry in row] for row in self.g],
            'v': [to_pair(entry) for entry in self.v],
            'm': to_pair(self.m),
        }

    @classmethod
    def from_document(cls, document):
        try:
            g = matrix_from_pairs(document['g'])
            v = vector_from_pairs(document['v'])
            m = from_pair(document['m']) if 'm' in document else None
        except (KeyError, TypeError, ValueError) as error:
            raise ColoringError('malformed decorated matrix: {0}'.format(error))
        if g.shape != (2, 2) or v.shape != (2,):
            raise ColoringError('decorated matrix needs a 2x2 "g" and a 2-vector "v"')
        return cls(g, v, m)

    def __repr__(self):
        return 'DecoratedMatrix(g={0}, v={1}, m={2})'.format(
            self.g.tolist(), self.v.tolist(), self.m)


def qn(x: DecoratedMatrix, y: DecoratedMatrix) -> DecoratedMatrix:
    """(g, [v]) acted on by (h, [w]): (h^-1 g h, [v h])."""
    h = y.g
    return DecoratedMatrix(sl2_inverse(h) @ x.g @ h, x.v @ h, x.m)


def qn_inv(x: DecoratedMatrix, y: DecoratedMatrix) -> DecoratedMatrix:
    """Two sided inverse of :func:`qn` in the first argument: (h g h^-1, [v h^-1])."""
    h = y.g
    h_inv = sl2_inverse(h)
    return DecoratedMatrix(h @ x.g @ h_inv, x.v @ h_inv, x.m)
