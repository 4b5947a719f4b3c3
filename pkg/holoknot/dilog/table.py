"""Interpolation tables of e^{phi_N} along real segments of the argument.

A table covers ``offset + s`` for real s in a window and is a cubic spline
through exact samples; the node count is doubled until the spline matches
exact values between the nodes to the interpolation budget. Tables are kept
in memory and, when a cache directory is configured, persisted as ``.npz``.
"""
import hashlib
import logging
import os

import numpy as np
from scipy.interpolate import CubicSpline

from holoknot.core.config import Tolerances, QuadratureSettings
from holoknot.dilog.dilog_error import DilogError
from holoknot.dilog.qdilog import QDilogContext

logger = logging.getLogger(__name__)

_MAX_NODES = 1 << 20


class DilogTable:

    def __init__(self, N, offset, window, s, values):
        self.N = N
        self.offset = complex(offset)
        self.window = (float(window[0]), float(window[1]))
        self.s = np.asarray(s, dtype=float)
        self.values = np.asarray(values, dtype=complex)
        self._spline = CubicSpline(self.s, np.column_stack([self.values.real, self.values.imag]))

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        lo, hi = self.window
        if np.any(s < lo) or np.any(s > hi):
            raise DilogError('table for offset {0} covers [{1}, {2}] only'.format(
                self.offset, lo, hi))
        parts = self._spline(s)
        return parts[..., 0] + 1j * parts[..., 1]

    @classmethod
    def build(cls, ctx: QDilogContext, offset, window, nodes=QuadratureSettings.table_nodes.default,
              budget=Tolerances.interpolation.default):
        lo, hi = window
        while True:
            s = np.linspace(lo, hi, nodes)
            values = ctx.pfl_exp_array(offset + s)
            table = cls(ctx.N, offset, window, s, values)
            middle = 0.5 * (s[:-1] + s[1:])
            sample = middle[::max(1, middle.size // 64)]
            exact = ctx.pfl_exp_array(offset + sample)
            error = float(np.max(np.abs(table(sample) - exact) / np.maximum(np.abs(exact), 1e-300)))
            if error <= budget:
                logger.debug('table N=%d offset=%s: %d nodes, error %.3g', ctx.N, offset, nodes, error)
                return table
            if nodes > _MAX_NODES:
                raise DilogError('table for offset {0} misses the budget {1} with {2} nodes'.format(
                    offset, budget, nodes))
            nodes = 2 * nodes - 1

    def save(self, path):
        np.savez(path, N=self.N, offset=self.offset, window=np.array(self.window),
                 s=self.s, values=self.values)

    @classmethod
    def load(cls, path):
        with np.load(path) as data:
            return cls(int(data['N']), complex(data['offset']), tuple(data['window']),
                       data['s'], data['values'])


class TableCache:
    """Tables keyed by (N, offset, window); persisted when ``directory`` is set."""

    def __init__(self, directory=None, nodes=QuadratureSettings.table_nodes.default,
                 budget=Tolerances.interpolation.default):
        self.directory = directory
        self.nodes = nodes
        self.budget = budget
        self._tables = {}

    def _path(self, key):
        digest = hashlib.sha1(repr(key).encode('ascii')).hexdigest()[:16]
        return os.path.join(self.directory, 'pfl_N{0}_{1}.npz'.format(key[0], digest))

    def get(self, ctx: QDilogContext, offset, window) -> DilogTable:
        key = (ctx.N, complex(offset), (float(window[0]), float(window[1])), self.budget)
        table = self._tables.get(key)
        if table is not None:
            return table

        path = self._path(key) if self.directory else None
        if path and os.path.exists(path):
            try:
                table = DilogTable.load(path)
            except (OSError, KeyError, ValueError):
                logger.warning('ignoring unreadable table cache %s', path)

        if table is None:
            table = DilogTable.build(ctx, offset, window, self.nodes, self.budget)
            if path:
                os.makedirs(self.directory, exist_ok=True)
                table.save(path)

        self._tables[key] = table
        return table

    def __len__(self):
        return len(self._tables)
