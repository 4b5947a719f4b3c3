"""The classical dilogarithm and the branch managed function l.

::

    l(z) = Li2(e^{2 pi i z}) / (2 pi i)                                  Im z >= 0
    l(z) = -Li2(e^{-2 pi i z}) / (2 pi i) - pi i z (z - 1) - pi i / 6    Im z < 0

l is holomorphic off X = (-inf, 0] u [1, inf) and exp(l'(z)) = 1 / (1 - e^{2 pi i z}).
"""
import cmath
import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import spence

from holoknot.dilog.dilog_error import BranchError

logger = logging.getLogger(__name__)

TWO_PI_I = 2j * np.pi


def li2(z):
    """Principal branch of the dilogarithm, -integral_0^z log(1 - t) / t dt."""
    z = np.asarray(z, dtype=complex)
    cut = (z.imag == 0) & (z.real > 1)
    if np.any(cut):
        logger.warning('Li2 evaluated on its branch cut at %s', z[cut][:3])
    result = spence(1.0 - z)
    return complex(result) if result.ndim == 0 else result


def bloch_wigner(z):
    """D(z) = Im Li2(z) + arg(1 - z) log|z|, real analytic off {0, 1, inf}."""
    z = np.asarray(z, dtype=complex)
    value = np.imag(li2(z)) + np.angle(1.0 - z) * np.log(np.abs(z))
    return float(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True)
class BranchedValue:
    value: complex
    branch: str

    def __complex__(self):
        return self.value


def in_cut(zeta: complex, margin: float = 0.0) -> bool:
    """Whether zeta lies within ``margin`` of X = (-inf, 0] u [1, inf)."""
    zeta = complex(zeta)
    if abs(zeta.imag) > margin:
        return False
    return zeta.real <= margin or zeta.real >= 1.0 - margin


def _check(zeta):
    zeta = complex(zeta)
    if zeta.imag == 0 and not 0.0 < zeta.real < 1.0:
        raise BranchError('l is not defined on the cut, got {0}'.format(zeta))
    return zeta


def dll_branch(zeta, branch: str) -> complex:
    """One of the two defining formulas of l, whatever the sign of Im zeta."""
    zeta = complex(zeta)
    if branch == 'upper':
        return li2(cmath.exp(TWO_PI_I * zeta)) / TWO_PI_I
    return (-li2(cmath.exp(-TWO_PI_I * zeta)) / TWO_PI_I
            - 1j * np.pi * zeta * (zeta - 1) - 1j * np.pi / 6)


def dll(zeta) -> BranchedValue:
    zeta = _check(zeta)
    branch = 'upper' if zeta.imag >= 0 else 'lower'
    return BranchedValue(dll_branch(zeta, branch), branch)


def dll_prime(zeta) -> complex:
    zeta = _check(zeta)
    if zeta.imag >= 0:
        return -cmath.log(1 - cmath.exp(TWO_PI_I * zeta))
    return -cmath.log(1 - cmath.exp(-TWO_PI_I * zeta)) - 1j * np.pi * (2 * zeta - 1)


def dll_second(zeta) -> complex:
    q = cmath.exp(TWO_PI_I * complex(zeta))
    return TWO_PI_I * q / (1 - q)


def exp_dll_prime(zeta) -> complex:
    """exp(l'(zeta)), free of logarithm branches."""
    return 1.0 / (1.0 - cmath.exp(TWO_PI_I * complex(zeta)))
