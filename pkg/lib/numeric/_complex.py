import numpy as np


def to_pair(z):
    """Complex number as a JSON friendly [re, im] list."""
    z = complex(z)
    return [z.real, z.imag]


def from_pair(value):
    """Inverse of :func:`to_pair`, plain numbers are accepted as well."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError('complex pair must have two entries, got {0!r}'.format(value))
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(' ', ''))
    return complex(value)


def encode(value):
    """Recursively turn complex numbers and numpy arrays into JSON data."""
    if isinstance(value, dict):
        return {str(key): encode(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(item) for item in value]
    if isinstance(value, np.ndarray):
        return encode(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return to_pair(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def matrix_from_pairs(rows):
    return np.array([[from_pair(entry) for entry in row] for row in rows], dtype=complex)


def vector_from_pairs(entries):
    return np.array([from_pair(entry) for entry in entries], dtype=complex)
