import math

import numpy as np


def fsum_complex(values):
    """Correctly rounded sum of complex values (real and imaginary parts apart)."""
    values = list(values)
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def tree_sum(values):
    """Pairwise sum in a fixed tree order.

    The reduction order depends only on the length of the input, so reruns
    are bit-identical. The returned bound is the usual pairwise estimate
    ``eps * ceil(log2 n) * sum |x|``.
    """
    values = np.asarray(values, dtype=complex).ravel()
    if values.size == 0:
        return 0j, 0.0

    magnitude = float(np.sum(np.abs(values)))
    depth = 0
    while values.size > 1:
        if values.size % 2:
            values = np.append(values, 0j)
        values = values[0::2] + values[1::2]
        depth += 1

    bound = np.finfo(float).eps * max(depth, 1) * magnitude
    return complex(values[0]), bound


def _neumaier(parts):
    total = np.zeros_like(parts[0])
    compensation = np.zeros_like(parts[0])
    for part in parts:
        t = total + part
        big = np.abs(total) >= np.abs(part)
        compensation += np.where(big, (total - t) + part, (part - t) + total)
        total = t
    return total + compensation


def compensated_sum(arrays):
    """Elementwise Neumaier sum of broadcastable complex arrays.

    Real and imaginary parts are compensated apart; the error stays near
    one rounding of the result even when large terms cancel.
    """
    arrays = [np.asarray(a, dtype=complex) for a in arrays]
    if not arrays:
        return np.zeros((), dtype=complex)
    shape = np.broadcast(*arrays).shape if len(arrays) > 1 else arrays[0].shape
    arrays = [np.broadcast_to(a, shape) for a in arrays]
    real = _neumaier([a.real.astype(float) for a in arrays])
    imag = _neumaier([a.imag.astype(float) for a in arrays])
    return real + 1j * imag
