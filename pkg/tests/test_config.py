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
import pathlib
import tempfile
import unittest

import constrainedhc.config as config
from constrainedhc.utils import InvalidConfigError
from constrainedhc.utils.log import get_logger


class ConfigTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls) -> None:
        get_logger(logging.INFO)

    def setUp(self) -> None:
        self.original_config_path = config.CONFIG_FILE
        self.temp_dir = tempfile.TemporaryDirectory()
        config.CONFIG_FILE = pathlib.Path(self.temp_dir.name) / 'config.yml'
        config._ConfigImpl.instance = None

    def tearDown(self) -> None:
        config.CONFIG_FILE = self.original_config_path
        config._ConfigImpl.instance = None
        self.temp_dir.cleanup()

    def test_defaults(self):
        settings = config.Config()
        self.assertEqual(settings.oracle_limit, config.ORACLE_LIMIT)
        self.assertEqual(settings.balance_ratio, config.BALANCE_RATIO)
        self.assertIs(config.Config(), settings)

    def test_round_trip(self):
        old_config = config.Config()
        old_config.set('oracle_limit', 10)
        old_config.set('local_epsilon', 0.5)
        old_config.dump()

        # Remove the singleton.
        config._ConfigImpl.instance = None

        new_config = config.Config()
        self.assertEqual(new_config.oracle_limit, 10)
        self.assertEqual(new_config.local_epsilon, 0.5)
        self.assertDictEqual(new_config.as_dict(), old_config.as_dict())

    def test_int_accepted_for_float(self):
        config.CONFIG_FILE.write_text('spectral_tolerance: 1\n')
        settings = config.Config()
        self.assertIsInstance(settings.spectral_tolerance, float)
        self.assertEqual(settings.spectral_tolerance, 1.0)

    def test_empty_file(self):
        config.CONFIG_FILE.write_text('')
        self.assertEqual(config.Config().as_dict(), config._ConfigImpl().as_dict())

    def test_invalid_settings(self):
        for text in ('no_such_setting: 1\n', 'oracle_limit: 2.5\n', 'oracle_limit: true\n',
                     'balance_ratio: -0.1\n', '- 1\n- 2\n'):
            config._ConfigImpl.instance = None
            config.CONFIG_FILE.write_text(text)
            with self.assertRaises(InvalidConfigError, msg=text):
                config.Config()

    def test_zero_seed_allowed(self):
        config.CONFIG_FILE.write_text('default_seed: 0\nspectral_seed: 0\n')
        self.assertEqual(config.Config().default_seed, 0)

    def test_unreadable_yaml_falls_back(self):
        config.CONFIG_FILE.write_text('oracle_limit: [1\n')
        with self.assertLogs(get_logger(), logging.WARNING):
            settings = config.Config()
        self.assertEqual(settings.oracle_limit, config.ORACLE_LIMIT)


if __name__ == '__main__':
    unittest.main()
