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
import os
import pathlib

import yaml

from constrainedhc.utils import InvalidConfigError
from constrainedhc.utils.log import get_logger

# These defaults may be overridden from the user config file.
EXHAUSTIVE_LIMIT = 22
ORACLE_LIMIT = 14
ENUMERATION_LIMIT = 8
SPECTRAL_TOLERANCE = 1e-10
SPECTRAL_MAX_ITERATIONS = 10_000
SPECTRAL_SEED = 0
BALANCE_RATIO = 1 / 3
LOCAL_EPSILON = 0.01
DEFAULT_SEED = 0
MONTE_CARLO_TRIALS = 1000

ZOO_URL = 'https://archive.ics.uci.edu/ml/machine-learning-databases/zoo/zoo.data'

# Constants
PACKAGE_DIR = pathlib.Path(__file__).resolve().parent
BUNDLED_ZOO = PACKAGE_DIR / 'data' / 'zoo.data'
REPORT_SCHEMA = 1

CONFIG_DIR = pathlib.Path.home() / '.config' / 'constrained-hc'
CONFIG_FILE = pathlib.Path(os.environ.get('CHC_CONFIG', CONFIG_DIR / 'config.yml'))

# Tunable settings and the type each must have in the config file.
SETTINGS = {
    'exhaustive_limit': int,
    'oracle_limit': int,
    'enumeration_limit': int,
    'spectral_tolerance': float,
    'spectral_max_iterations': int,
    'spectral_seed': int,
    'balance_ratio': float,
    'local_epsilon': float,
    'default_seed': int,
    'monte_carlo_trials': int,
}


class _ConfigImpl(object):
    instance = None

    def __init__(self, overrides=None):
        for name in SETTINGS:
            setattr(self, name, globals()[name.upper()])

        for name, value in (overrides or {}).items():
            self.set(name, value)

    def set(self, name, value):
        kind = SETTINGS.get(name)
        if kind is None:
            raise InvalidConfigError(f'Unknown setting "{name}" in {CONFIG_FILE}')

        # YAML reads 10000 as int; accept it where a float is expected.
        if kind is float and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        if not isinstance(value, kind) or isinstance(value, bool):
            raise InvalidConfigError(
                f'Setting "{name}" must be of type {kind.__name__}, got {value!r}')
        if value <= 0 and name not in ('spectral_seed', 'default_seed'):
            raise InvalidConfigError(f'Setting "{name}" must be positive, got {value!r}')

        setattr(self, name, value)

    def as_dict(self):
        return {name: getattr(self, name) for name in SETTINGS}

    def dump(self, path=None):
        path = pathlib.Path(path or CONFIG_FILE)
        path.parent.mkdir(parents=True, exist_ok=True)

        with open(str(path), 'w') as fh:
            yaml.safe_dump(self.as_dict(), fh, default_flow_style=False)

    @staticmethod
    def load(path=None):
        path = pathlib.Path(path or CONFIG_FILE)
        if path.exists():
            with open(str(path), 'r') as fh:
                try:
                    overrides = yaml.safe_load(fh)
                except yaml.YAMLError as e:
                    get_logger().error('%s: %s', type(e).__name__, str(e))
                    overrides = None
                else:
                    if overrides is None:
                        overrides = {}
                    if not isinstance(overrides, dict):
                        raise InvalidConfigError(f'{path} must contain a mapping of settings')
                    return _ConfigImpl(overrides)

            get_logger().warning('Could not read config file at %s, using defaults '
                                 'as fallback', str(path))
        else:
            get_logger().debug('No config file at %s, using defaults', str(path))
        return _ConfigImpl()


# Singleton _Config object
def Config():
    if _ConfigImpl.instance is None:
        _ConfigImpl.instance = _ConfigImpl.load()

    return _ConfigImpl.instance
