"""Command line arguments to :class:`RunConfig`."""
import argparse
import logging

import holoknot
from holoknot.core.config import PROFILES, RunConfig
from holoknot.core.core_error import ConfigError

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')

# (command words, takes a representation, extra options)
_COMMANDS = (
    (('diagram', 'validate'), False, ()),
    (('diagram', 'regions'), False, ()),
    (('color',), True, ('normalize', 'gauge_search')),
    (('action', 'show'), False, ('N', 'mu', 'classical')),
    (('solve',), False, ('m', 'pins')),
    (('critical',), False, ()),
    (('statesum',), True, ('N', 'mu', 'backend')),
    (('stateintegral',), True, ('N', 'mu', 'k', 'nodes')),
    (('verify-theorem',), True, ('N', 'mu', 'K', 'nodes', 'fourier_K')),
    (('scan-parabolic',), True, ('N', 'backend')),
    (('asymptotics',), True, ('Ns', 'mu', 'backend')),
)


def complex_pair(text):
    """'re,im' or a single real number."""
    try:
        parts = [float(part) for part in text.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError('expected re,im, got {0!r}'.format(text))
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError('expected re,im, got {0!r}'.format(text))
    return parts


def int_list(text):
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma separated integers, got {0!r}'.format(text))


def _option(parser, name):
    if name == 'N':
        parser.add_argument('--N', type=int, help='level N >= 2')
    elif name == 'mu':
        parser.add_argument('--mu', type=complex_pair, metavar='RE,IM',
                            help='log-meridian; principal log of m when omitted')
    elif name == 'm':
        parser.add_argument('--m', type=complex_pair, metavar='RE,IM', help='meridian eigenvalue (default 1)')
    elif name == 'k':
        parser.add_argument('--k', type=int_list, metavar='K1,K2,...', help='Fourier index, zero when omitted')
    elif name == 'K':
        parser.add_argument('--K', type=int, help='largest box order of the theorem partial sums')
    elif name == 'fourier_K':
        parser.add_argument('--fourier-K', dest='fourier_K', type=int,
                            help='also run the one dimensional Fourier check up to this order')
    elif name == 'nodes':
        parser.add_argument('--nodes', type=int, help='quadrature node budget')
    elif name == 'Ns':
        parser.add_argument('--Ns', type=int_list, metavar='N1,N2,...', required=True)
    elif name == 'pins':
        parser.add_argument('--pins', nargs='+', metavar='SEGMENT')
    elif name == 'backend':
        parser.add_argument('--backend', choices=('tensor_network', 'brute_force'))
    else:
        parser.add_argument('--' + name.replace('_', '-'), dest=name, action='store_true',
                            default=argparse.SUPPRESS)


def _global_options(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument('--log-level', dest='log_level', choices=LOG_LEVELS, default=default or 'WARNING')
    parser.add_argument('--seed', type=int, default=default)
    parser.add_argument('--threads', type=int, default=default)
    parser.add_argument('--tolerance-profile', dest='profile', choices=PROFILES, default=default)
    parser.add_argument('--output', '-o', default=default, help="report path, '-' for standard output")
    parser.add_argument('--timing', action='store_true', default=default,
                        help='add wall clock times to the report')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='holoknot', description=holoknot.__description__)
    parser.add_argument('--version', action='version', version='%(prog)s ' + holoknot.__version__)
    _global_options(parser, suppress=False)

    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)

    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True
    groups = {}

    def add_command(words):
        if len(words) == 1:
            return commands.add_parser(words[0], parents=[common])
        if words[0] not in groups:
            group = commands.add_parser(words[0])
            groups[words[0]] = group.add_subparsers(dest='subcommand', metavar='SUBCOMMAND')
            groups[words[0]].required = True
        return groups[words[0]].add_parser(words[1], parents=[common])

    for words, with_representation, options in _COMMANDS:
        command = add_command(words)
        command.add_argument('diagram', help='builtin diagram name or diagram JSON path')
        if with_representation:
            command.add_argument('representation', nargs='?', default='builtin',
                                 help='representation JSON path, or "builtin"')
        for option in options:
            _option(command, option)

    _option(add_command(('dilog', 'check')), 'N')

    fixtures = add_command(('fixtures',))
    fixtures.add_argument('fixtures_dir', nargs='?', default='fixtures', metavar='DIRECTORY')

    run = add_command(('run',))
    run.add_argument('config', help='run config JSON')
    return parser


_GLOBAL = ('seed', 'threads', 'profile', 'output', 'timing')
_FIELDS = ('diagram', 'representation', 'N', 'mu', 'm', 'k', 'K', 'fourier_K', 'nodes', 'Ns', 'pins',
           'backend', 'classical', 'normalize', 'gauge_search', 'fixtures_dir')


def command_name(args: argparse.Namespace) -> str:
    """'diagram validate' on the command line is the command 'diagram-validate'."""
    subcommand = getattr(args, 'subcommand', None)
    return args.command if subcommand is None else '{0}-{1}'.format(args.command, subcommand)


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """The run config of parsed arguments; ``run`` starts from its config file.

    :raises ConfigError: when a value is out of its documented range.
    """
    values = {name: getattr(args, name) for name in _GLOBAL + _FIELDS
              if getattr(args, name, None) is not None}
    if args.command == 'run':
        config = RunConfig.from_file(args.config)
        if not config.command:
            raise ConfigError('config {0} names no command'.format(args.config))
        return config.revised(**values)
    return RunConfig(command=command_name(args), **values)


def log_level(args: argparse.Namespace) -> int:
    return getattr(logging, getattr(args, 'log_level', 'WARNING'))
