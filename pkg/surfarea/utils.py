"""
Common utilities.
"""
import logging
import logging.handlers
import math
import os
import sys
from typing import Dict, Iterable, Tuple

import numpy as np

from surfarea.constants import LOGDIR
from surfarea.errors import InvalidParameter


handlers: Dict[str, logging.Handler] = {}
visited_loggers = set()


def build_logger(logger_name, logger_filename):
    formatter = logging.Formatter(
        fmt="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    # Set the format of root handlers. stdout stays untouched: the CLI
    # writes its CSV/JSON payloads there.
    if not logging.getLogger().handlers:
        logging.basicConfig(level=logging.INFO, encoding="utf-8", stream=sys.stderr)
    logging.getLogger().handlers[0].setFormatter(formatter)

    logger = logging.getLogger(logger_name)
    logger.setLevel(logging.INFO)

    # if LOGDIR is empty, then don't try output log to local file
    if LOGDIR != "":
        os.makedirs(LOGDIR, exist_ok=True)
        filename = os.path.join(LOGDIR, logger_filename)
        handler = handlers.get(filename)
        if handler is None:
            handler = logging.handlers.TimedRotatingFileHandler(
                filename, when="D", utc=True, encoding="utf-8"
            )
            handler.setFormatter(formatter)
            handlers[filename] = handler

        if logger not in visited_loggers:
            visited_loggers.add(logger)
            logger.addHandler(handler)

    return logger


def pairwise_sum(values: np.ndarray) -> float:
    """Sum a 1-D float array with numpy's pairwise reduction.

    The reduction tree depends only on the array length, so the result is
    reproducible for a given input regardless of how many workers ran.
    """
    return float(np.add.reduce(np.ascontiguousarray(values, dtype=np.float64)))


def exact_sum(values: Iterable[float]) -> float:
    """Correctly rounded sum of a short sequence of partial sums."""
    return math.fsum(values)


def parse_key_values(text: str) -> Dict[str, float]:
    """Parse "k1=v1,k2=v2" into a dict of floats."""
    params = {}
    if not text:
        return params
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise InvalidParameter(f"expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise InvalidParameter(f"value of {key.strip()!r} is not a number: {value!r}")
    return params


def split_spec(spec: str) -> Tuple[str, str]:
    """Split "name:k1=v1,..." into ("name", "k1=v1,...")."""
    name, _, rest = spec.partition(":")
    return name.strip(), rest
