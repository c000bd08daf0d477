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

from invoke import Collection, Exit, ParseError, Program

from constrainedhc import __version__, commands, experiments
from constrainedhc.utils import EXIT_USAGE
from constrainedhc.utils.log import get_logger


def make_program() -> Program:
    ns = Collection.from_module(commands)
    for t in (experiments.zoo, experiments.demo_densest, experiments.fetch_zoo):
        ns.add_task(t)

    return Program(
        binary='chc',
        name='constrained-hc',
        namespace=ns,
        version=__version__)


def cli_main(argv=None) -> int:
    """
    Run the command line tool on `argv` (without the program name) and return its exit code.
    """
    argv = ['chc'] + list(sys.argv[1:] if argv is None else argv)
    p = make_program()

    try:
        p.parse_core(argv)
    except Exit as e:
        # --version
        return e.code
    except ParseError:
        # Reported by run().
        pass
    else:
        get_logger(level=logging.DEBUG if p.args.debug.value else logging.INFO)

    try:
        p.run(argv)
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    return 0


def run():
    sys.exit(cli_main())


if __name__ == '__main__':
    run()
