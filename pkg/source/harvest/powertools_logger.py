# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0

import logging
import os
import sys
import time
from contextlib import contextmanager
from typing import Any, Callable, Iterator, Optional

from aws_lambda_powertools import Logger


class PowertoolsLogger:
    """Structured JSON logging on stderr; stdout is reserved for emitted tables."""

    def __init__(self, service_name: Optional[str] = None, level: str = "info"):
        self.service_name = service_name or os.getenv(
            "POWERTOOLS_SERVICE_NAME", "harvest"
        )
        self.logger = Logger(
            service=self.service_name,
            level=level.upper(),
            logger_handler=logging.StreamHandler(sys.stderr),
        )

    @staticmethod
    def _emit(method: Callable[..., None], message: str, keys: dict[str, Any]) -> None:
        if keys:
            method(message, extra=keys)
        else:
            method(message)

    def debug(self, message: str, **kwargs: Any) -> None:
        self._emit(self.logger.debug, message, kwargs)

    def info(self, message: str, **kwargs: Any) -> None:
        self._emit(self.logger.info, message, kwargs)

    def warning(self, message: str, **kwargs: Any) -> None:
        self._emit(self.logger.warning, message, kwargs)

    def error(self, message: str, **kwargs: Any) -> None:
        self._emit(self.logger.error, message, kwargs)

    def exception(self, message: str, **kwargs: Any) -> None:
        self._emit(self.logger.exception, message, kwargs)

    @contextmanager
    def timed(self, message: str, **kwargs: Any) -> Iterator[dict[str, Any]]:
        """
        Logs ``message`` at info level once the block finishes, with the
        elapsed seconds and any keys the block adds to the yielded dict.
        """
        keys = dict(kwargs)
        started = time.perf_counter()
        yield keys
        keys["seconds"] = round(time.perf_counter() - started, 3)
        self.info(message, **keys)


def get_logger(
    service_name: Optional[str] = None, level: str = "info"
) -> PowertoolsLogger:
    return PowertoolsLogger(service_name, level)
