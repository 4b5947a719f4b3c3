import numpy as np


def projective_distance(v, w):
    """Scale free distance |v ^ w| / (|v| |w|) between two lines in C^2."""
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    norm = np.linalg.norm(v) * np.linalg.norm(w)
    if norm == 0:
        return np.inf
    return float(abs(v[0] * w[1] - v[1] * w[0]) / norm)


def numerical_rank(matrix, tolerance=1e-8):
    """Rank from singular values relative to the largest one."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
    if matrix.size == 0:
        return 0, np.zeros(0)
    singular_values = np.linalg.svd(matrix, compute_uv=False)
    if singular_values[0] == 0:
        return 0, singular_values
    return int(np.sum(singular_values > tolerance * singular_values[0])), singular_values


def sl2_inverse(g):
    """Inverse of a determinant one 2x2 matrix (adjugate)."""
    return np.array([[g[1, 1], -g[0, 1]], [-g[1, 0], g[0, 0]]], dtype=complex)


def random_sl2(rng, scale=1.0):
    """Random SL2(C) matrix near the identity drawn from ``rng``."""
    while True:
        entries = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        g = np.eye(2, dtype=complex) + scale * entries
        det = np.linalg.det(g)
        if abs(det) > 1e-3:
            return g / np.sqrt(det)
