"""Run settings: tolerances, quadrature and solver budgets, and the run config.

Every numeric threshold used by the library lives here with its default.
The ``strict`` profile tightens tolerances by a factor ten and doubles node
budgets.
"""
import json
import os

from holoknot.core.core_error import ConfigError
from holoknot.core.has_properties import (HasProperties, BoundedProperty,
                                          ChoiceProperty, NestedProperties,
                                          Property)
from holoknot.core.memento import Memento

CACHE_DIR_ENV = 'HOLOKNOT_CACHE_DIR'

PROFILES = ('default', 'strict')


class Tolerances(HasProperties):
    residual = BoundedProperty(1e-9, minimum=0.0, doc='coloring and segment residual checks')
    projective = BoundedProperty(1e-9, minimum=0.0, doc='normalized determinant for [v] = [w]')
    singular_distance = BoundedProperty(1e-8, minimum=0.0, doc='distance of a dilog argument to its poles')
    omega_margin = BoundedProperty(1e-6, minimum=0.0, doc='distance of a classical argument to X')
    unit_circle_margin = BoundedProperty(0.05, minimum=0.0, doc='required ||z| - 1| after gauge search')
    newton_residual = BoundedProperty(1e-10, minimum=0.0)
    flattening_defect = BoundedProperty(1e-6, minimum=0.0)
    quadrature = BoundedProperty(1e-10, minimum=0.0, doc='relative agreement of refined contour sums')
    interpolation = BoundedProperty(1e-9, minimum=0.0, doc='dilog table interpolation budget')

    def tightened(self, factor):
        return Tolerances(**{name: value * factor
                             for name, value in self.properties().items()})


class QuadratureSettings(HasProperties):
    max_refinements = BoundedProperty(6, minimum=1, maximum=16, kind=int)
    qmc_points = BoundedProperty(1 << 16, minimum=64, kind=int)
    qmc_shifts = BoundedProperty(8, minimum=2, maximum=256, kind=int)
    gauss_nodes = BoundedProperty(12, minimum=2, maximum=256, kind=int)
    table_nodes = BoundedProperty(4097, minimum=65, kind=int)
    rule = ChoiceProperty('auto', ('auto', 'lattice', 'gauss'))

    def doubled(self):
        settings = QuadratureSettings(**self.properties())
        settings.qmc_points = 2 * self.qmc_points
        settings.gauss_nodes = min(256, 2 * self.gauss_nodes)
        settings.table_nodes = 2 * self.table_nodes - 1
        return settings


class SolverSettings(HasProperties):
    max_iterations = BoundedProperty(100, minimum=1, kind=int)
    damping_min = BoundedProperty(1.0 / 1024, minimum=0.0, maximum=1.0)
    seeds = BoundedProperty(64, minimum=1, kind=int)
    seed_radius = BoundedProperty(0.3, minimum=0.0, doc='spread of log|b| around 0 in multistart seeds')
    dedup_distance = BoundedProperty(1e-6, minimum=0.0)
    gauge_trials = BoundedProperty(200, minimum=1, kind=int)


class RunConfig(HasProperties, Memento):
    """Everything a command line run needs, validated on assignment.

    Nested settings objects are exposed as plain dictionaries through
    :class:`NestedProperties` so the whole config round-trips through JSON.
    """
    command = Property(default='')
    diagram = Property(default='')
    representation = Property(default='', doc='representation document path, or "builtin"')
    N = BoundedProperty(2, minimum=2, maximum=4096, kind=int)
    Ns = Property(default=[], doc='levels of the asymptotics table')
    mu = Property(default=None, doc='[re, im] log-meridian; the principal logarithm of m when unset')
    m = Property(default=None, doc='[re, im] meridian eigenvalue for solve')
    k = Property(default=[])
    K = BoundedProperty(3, minimum=0, maximum=4096, kind=int)
    fourier_K = BoundedProperty(0, minimum=0, maximum=1 << 16, kind=int)
    nodes = BoundedProperty(0, minimum=0, kind=int, doc='state integral node budget, 0 for the default')
    backend = ChoiceProperty('tensor_network', ('tensor_network', 'brute_force'))
    pins = Property(default=[])
    classical = Property(default=False)
    normalize = Property(default=False)
    gauge_search = Property(default=False)
    seed = BoundedProperty(20240611, minimum=0, kind=int)
    threads = BoundedProperty(1, minimum=1, maximum=256, kind=int)
    output = Property(default='')
    fixtures_dir = Property(default='fixtures')
    timing = Property(default=False, doc='add wall clock times to reports')
    profile = ChoiceProperty('default', PROFILES)
    tolerances = NestedProperties('_tolerances', default={})
    quadrature = NestedProperties('_quadrature', default={})
    solver = NestedProperties('_solver', default={})

    def __init__(self, **properties):
        self._tolerances = Tolerances()
        self._quadrature = QuadratureSettings()
        self._solver = SolverSettings()
        super().__init__(**properties)

    @property
    def tolerance_set(self):
        if self.profile == 'strict':
            return self._tolerances.tightened(0.1)
        return self._tolerances

    @property
    def quadrature_settings(self):
        if self.profile == 'strict':
            return self._quadrature.doubled()
        return self._quadrature

    @property
    def solver_settings(self):
        return self._solver

    @staticmethod
    def _complex(name, value):
        if value is None:
            return None
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ConfigError('{0}: expected [re, im], got {1!r}'.format(name, value))
            return complex(float(value[0]), float(value[1]))
        try:
            return complex(value)
        except (TypeError, ValueError):
            raise ConfigError('{0}: expected a complex number, got {1!r}'.format(name, value))

    @property
    def mu_value(self):
        return self._complex('mu', self.mu)

    @property
    def m_value(self):
        return self._complex('m', self.m)

    @property
    def k_vector(self):
        try:
            return [int(component) for component in self.k]
        except (TypeError, ValueError):
            raise ConfigError('k: expected a list of integers, got {0!r}'.format(self.k))

    @property
    def cache_dir(self):
        return os.environ.get(CACHE_DIR_ENV) or None

    def create_memento(self):
        return self.properties()

    @classmethod
    def from_memento(cls, memento):
        return cls(**memento)

    @classmethod
    def from_file(cls, path):
        try:
            with open(path, 'r', encoding='utf-8') as file:
                document = json.load(file)
        except (OSError, ValueError) as error:
            raise ConfigError('cannot read config {0}: {1}'.format(path, error))

        if not isinstance(document, dict):
            raise ConfigError('config {0} must be a JSON object'.format(path))
        return cls.from_memento(document)


def default_tolerances(profile='default'):
    tolerances = Tolerances()
    if profile == 'strict':
        return tolerances.tightened(0.1)
    if profile not in PROFILES:
        raise ConfigError('unknown tolerance profile {0!r}'.format(profile))
    return tolerances
