import logging
import sys

from holoknot.cli.app import HoloKnotApp
from holoknot.cli.parser import build_parser, log_level


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=log_level(args),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')

    app = HoloKnotApp(args)
    exit_code = app.start()
    app.finalize(exit_code)
    sys.exit(exit_code)


if __name__ == '__main__':
    main()
