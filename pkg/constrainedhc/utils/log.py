#  Copyright 2026 The constrained-hc authors
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing,
#  software distributed under the License is distributed on an
#  "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
#  KIND, either express or implied.  See the License for the
#  specific language governing permissions and limitations
#  under the License.
import logging
import sys
import time

_logger = None


def get_logger(level=None):
    global _logger

    if not _logger:
        logger = logging.getLogger('chc')
        logger.setLevel(level or logging.WARNING)
        formatter = logging.Formatter('[%(levelname)s] %(message)s')
        # stdout is reserved for reports.
        stderr = logging.StreamHandler(sys.stderr)
        stderr.setFormatter(formatter)
        logger.addHandler(stderr)
        logger.propagate = False
        _logger = logger
    elif level is not None:
        _logger.setLevel(level)
    return _logger


def highlight(msg):
    """
    Make reference values green so they stand out from generic logging.
    """
    return f'\033[92m{msg}\033[0m'


def log_func(func, human_name):
    grey = lambda msg: f'\033[90m{msg}\033[0m'
    get_logger().info(grey('    ----- Starting Task: %s -----'), human_name)
    start = time.perf_counter()
    retval = func()
    get_logger().info(grey('    ----- Finished Task: %s (%.2fs) -----'), human_name,
                      time.perf_counter() - start)

    return retval


def log_multiline(log_func, lines):
    for line in lines:
        log_func(line)
