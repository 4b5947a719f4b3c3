"""Evaluation of symbolic actions.

The quantum action is only ever handled through exp(N A): a product of
e^{+-phi_N} factors times the exponential of the accumulated linear part.
The classical action, its gradient and its Hessian go through l and its
derivatives; exp of the gradient uses exp(l') = 1 / (1 - e^{2 pi i z}) and
needs no logarithm branch.
"""
import cmath
import logging

import numpy as np

from holoknot.action.action_error import SingularTermError, OmegaDomainError, ActionError
from holoknot.action.symbolic import SymbolicAction
from holoknot.core.config import Tolerances
from holoknot.dilog.classical import dll, dll_prime, dll_second, exp_dll_prime, in_cut
from holoknot.dilog.dilog_error import SingularityError
from lib.numeric import compensated_sum, fsum_complex

logger = logging.getLogger(__name__)


def _require(action: SymbolicAction, quantum: bool):
    if action.quantum != quantum:
        raise ActionError('expected a {0} action, got {1!r}'.format(
            'quantum' if quantum else 'classical', action))


def term_factor(action: SymbolicAction, term, argument, evaluator=None):
    """e^{phi_N(argument)} raised to the term sign times the crossing weight."""
    evaluator = evaluator or action.context().pfl_exp_array
    try:
        value = evaluator(argument)
    except SingularityError as error:
        raise SingularTermError(term.label(), error.argument, error.distance) from error
    return value if term.sign * action.weight(term.crossing) > 0 else 1.0 / value


def eval_exp_N_action(action: SymbolicAction, t) -> complex:
    """exp(N A(t)) at a single point."""
    _require(action, True)
    values = action.values(t)
    product = 1.0 + 0j
    for term in action.dilog_terms:
        argument = complex(term.arg.evaluate(values))
        product *= complex(term_factor(action, term, np.array([argument]))[0])
    exponent = fsum_complex(action.weight(term.crossing) * complex(term.linear.evaluate(values))
                            for term in action.linear_terms)
    return product * cmath.exp(exponent)


def exp_N_action_array(action: SymbolicAction, values, terms=None, evaluator=None):
    """exp(N A) over arrays of segment values, optionally restricted to ``terms``.

    ``values`` maps every segment the terms use to arrays that broadcast
    together; ``evaluator(term, argument_array)`` replaces the direct
    e^phi_N evaluation, for instance by table lookups.
    """
    _require(action, True)
    terms = action.terms if terms is None else terms
    product = None
    exponents = []
    for term in terms:
        if term.is_dilog:
            argument = np.asarray(term.arg.evaluate(values), dtype=complex)
            if evaluator is None:
                factor = term_factor(action, term, argument)
            else:
                factor = evaluator(term, argument)
                if term.sign * action.weight(term.crossing) < 0:
                    factor = 1.0 / factor
            product = factor if product is None else product * factor
        else:
            exponents.append(action.weight(term.crossing) * np.asarray(term.linear.evaluate(values),
                                                                       dtype=complex))
    result = 1.0 + 0j if product is None else product
    if exponents:
        result = result * np.exp(compensated_sum(exponents))
    return result


def quasi_periodicity_factor(action: SymbolicAction, segment, base) -> complex:
    """exp(N A(base + e_segment)) / exp(N A(base))."""
    values = action.values(base)
    shifted = dict(values)
    shifted[segment] = values[segment] + 1
    return eval_exp_N_action(action, shifted) / eval_exp_N_action(action, values)


def _classical_arguments(action, values, margin):
    arguments = []
    for term in action.dilog_terms:
        argument = complex(term.arg.evaluate(values))
        if in_cut(argument, margin):
            raise OmegaDomainError(term.label(), argument)
        arguments.append((term, argument))
    return arguments


def in_omega(action: SymbolicAction, t, margin=Tolerances.omega_margin.default) -> bool:
    _require(action, False)
    try:
        _classical_arguments(action, action.values(t), margin)
    except OmegaDomainError:
        return False
    return True


def eval_classical(action: SymbolicAction, t, margin=Tolerances.omega_margin.default) -> complex:
    """V(t).

    :raises OmegaDomainError: when some argument is within ``margin`` of the cut.
    """
    _require(action, False)
    values = action.values(t)
    parts = [term.sign * action.weight(term.crossing) * dll(argument).value
             for term, argument in _classical_arguments(action, values, margin)]
    parts.extend(action.weight(term.crossing) * complex(term.linear.evaluate(values))
                 for term in action.linear_terms)
    return fsum_complex(parts)


def gradient_classical(action: SymbolicAction, t, margin=Tolerances.omega_margin.default) -> np.ndarray:
    """dV/dt_i, on the branches of l fixed by the sign of Im of each argument."""
    _require(action, False)
    values = action.values(t)
    index = {segment: i for i, segment in enumerate(action.variables)}
    parts = [[] for _ in action.variables]
    for term, argument in _classical_arguments(action, values, margin):
        derivative = term.sign * action.weight(term.crossing) * dll_prime(argument)
        for segment, coefficient in term.arg.coefficients:
            parts[index[segment]].append(coefficient * derivative)
    for term in action.linear_terms:
        for segment, coefficient in term.linear.coefficients:
            parts[index[segment]].append(action.weight(term.crossing) * coefficient)
    return np.array([fsum_complex(p) for p in parts], dtype=complex)


def exp_grad_classical(action: SymbolicAction, t, margin=Tolerances.omega_margin.default) -> np.ndarray:
    """exp(dV/dt_i), as a product of 1 / (1 - e^{2 pi i z}) powers."""
    _require(action, False)
    values = action.values(t)
    index = {segment: i for i, segment in enumerate(action.variables)}
    result = np.ones(len(action.variables), dtype=complex)
    for term, argument in _classical_arguments(action, values, margin):
        factor = exp_dll_prime(argument)
        power = term.sign * action.weight(term.crossing)
        for segment, coefficient in term.arg.coefficients:
            result[index[segment]] *= factor ** (power * coefficient)
    for term in action.linear_terms:
        for segment, coefficient in term.linear.coefficients:
            result[index[segment]] *= cmath.exp(action.weight(term.crossing) * coefficient)
    return result


def hessian_classical(action: SymbolicAction, t, margin=Tolerances.omega_margin.default) -> np.ndarray:
    _require(action, False)
    values = action.values(t)
    index = {segment: i for i, segment in enumerate(action.variables)}
    size = len(action.variables)
    hessian = np.zeros((size, size), dtype=complex)
    for term, argument in _classical_arguments(action, values, margin):
        second = term.sign * action.weight(term.crossing) * dll_second(argument)
        for a, ca in term.arg.coefficients:
            for b, cb in term.arg.coefficients:
                hessian[index[a], index[b]] += ca * cb * second
    return hessian


def _wrap(value: complex) -> complex:
    """Shift the imaginary part into (-pi, pi]."""
    turns = np.round(value.imag / (2 * np.pi))
    return complex(value.real, value.imag - 2 * np.pi * turns)


def lifted_action(quantum: SymbolicAction, classical: SymbolicAction, t,
                  margin=Tolerances.omega_margin.default) -> complex:
    """A_N(t) itself, each phi_N term on the logarithm branch closest to N l of its
    classical counterpart.

    Both actions must come from the same diagram, so terms pair up by
    crossing and slot.
    """
    _require(quantum, True)
    _require(classical, False)
    values = quantum.values(t)
    N = quantum.N
    anchors = {(term.crossing, term.slot): argument
               for term, argument in _classical_arguments(classical, values, margin)}
    parts = []
    for term in quantum.dilog_terms:
        argument = complex(term.arg.evaluate(values))
        anchor = N * dll(anchors[(term.crossing, term.slot)]).value
        try:
            value = quantum.context().pfl_exp(argument)
        except SingularityError as error:
            raise SingularTermError(term.label(), error.argument, error.distance) from error
        log_value = anchor + _wrap(cmath.log(value) - anchor)
        parts.append(term.sign * quantum.weight(term.crossing) * log_value)
    parts.extend(quantum.weight(term.crossing) * complex(term.linear.evaluate(values))
                 for term in quantum.linear_terms)
    return fsum_complex(parts) / N
