import io
import logging
import os
import unittest
from unittest import mock

from logging_config import LOGGER_NAME, configure_logging


class LoggingConfigTests(unittest.TestCase):
    def setUp(self) -> None:
        self.logger = logging.getLogger(LOGGER_NAME)
        saved = (list(self.logger.handlers), self.logger.level, self.logger.propagate)
        self.logger.handlers.clear()

        def restore() -> None:
            self.logger.handlers[:] = saved[0]
            self.logger.setLevel(saved[1])
            self.logger.propagate = saved[2]
            logging.getLogger(f"{LOGGER_NAME}.reedy").setLevel(logging.NOTSET)

        self.addCleanup(restore)

    def test_routes_package_records_to_stream(self) -> None:
        stream = io.StringIO()
        with mock.patch.dict(os.environ, {"LOG_LEVEL": "warning"}, clear=False):
            configure_logging(stream)
        logging.getLogger(f"{LOGGER_NAME}.catalog").info("hidden")
        logging.getLogger(f"{LOGGER_NAME}.catalog").warning("shown")
        self.assertNotIn("hidden", stream.getvalue())
        self.assertIn("WARNING wheelgraph.catalog shown", stream.getvalue())

    def test_configuration_is_idempotent(self) -> None:
        configure_logging(io.StringIO())
        configure_logging(io.StringIO())
        self.assertEqual(len(self.logger.handlers), 1)

    def test_debug_areas(self) -> None:
        stream = io.StringIO()
        env = {"LOG_LEVEL": "INFO", "WHEELGRAPH_DEBUG_AREAS": "reedy"}
        with mock.patch.dict(os.environ, env, clear=False):
            configure_logging(stream)
        logging.getLogger(f"{LOGGER_NAME}.reedy").debug("pair detail")
        logging.getLogger(f"{LOGGER_NAME}.segal").debug("other detail")
        self.assertIn("pair detail", stream.getvalue())
        self.assertNotIn("other detail", stream.getvalue())


if __name__ == "__main__":
    unittest.main()
