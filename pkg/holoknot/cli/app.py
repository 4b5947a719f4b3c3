import logging

from holoknot.cli.parser import config_from_args
from holoknot.cli.pipeline import Pipeline
from holoknot.core.core_error import HoloKnotError

logger = logging.getLogger(__name__)


class HoloKnotApp:

    def __init__(self, args):
        self.args = args
        self.config = None
        self.pipeline = None
        self.report = None

    def start(self) -> int:
        try:
            self.config = config_from_args(self.args)
            self.pipeline = Pipeline(self.config)
            self.pipeline.pre_stage.connect(self._stage_started)
            self.pipeline.post_stage.connect(self._stage_finished)
            self.pipeline.error_stage.connect(self._stage_failed)

            self.report = self.pipeline.run()
            self.report.write(self.config.output)
        except HoloKnotError as error:
            logger.error('%s: %s', type(error).__name__, error)
            return error.exit_code
        return self.report.exit_code

    def finalize(self, exit_code: int):
        if self.pipeline is not None:
            self.pipeline.pre_stage.disconnect()
            self.pipeline.post_stage.disconnect()
            self.pipeline.error_stage.disconnect()
        logger.debug('finished with exit code %d', exit_code)

    def _stage_started(self, command, stage):
        logger.info('%s: %s', command, stage)

    def _stage_finished(self, command, stage, seconds):
        logger.info('%s: %s done in %.3fs', command, stage, seconds)

    def _stage_failed(self, command, stage, error):
        logger.debug('%s: %s failed: %r', command, stage, error)
