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
import contextlib

from invoke.exceptions import Exit

# Process exit codes used by the command line tool.
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_DATA = 3


class HCError(Exception):
    """
    Base class of every error raised by this package.
    """
    pass


class DomainError(HCError, ValueError):
    """
    A library operation was called outside its domain, e.g. a tree whose leaves don't match the
    graph or an instance too large for exhaustive search.
    """
    pass


class NoAdmissibleCutError(DomainError):
    """
    No split satisfies the requested balance.
    """
    pass


class DataError(HCError):
    """
    Error indicating a malformed input file.
    """

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        location = ''
        if path is not None:
            location = f'{path}:{line}: ' if line is not None else f'{path}: '
        super().__init__(f'{location}{message}')


class InfeasibleConstraintsError(HCError):
    """
    Error indicating that a set of hard triplet constraints admits no tree.
    """

    def __init__(self, message=None, cluster=None):
        self.cluster = cluster
        super().__init__(message or 'infeasible: the triplet constraints are inconsistent; '
                                    'use the regularized algorithm (--alg rhsc) instead')


class InternalError(HCError):
    """
    An invariant that the algorithms rely on was observed broken.
    """
    pass


class InvalidConfigError(HCError):
    """
    Error indicating invalid configuration or usage of the tool.
    """
    pass


@contextlib.contextmanager
def exit_codes():
    """
    Translate package errors raised inside a task into invoke exits with the documented codes.
    """
    try:
        yield
    except InvalidConfigError as e:
        raise Exit(str(e), code=EXIT_USAGE)
    except InfeasibleConstraintsError as e:
        raise Exit(str(e), code=EXIT_INFEASIBLE)
    except (DataError, DomainError, OSError) as e:
        raise Exit(str(e), code=EXIT_DATA)


def require_choice(option, value, choices):
    """
    Exit with the usage code unless `value` is one of `choices`.
    """
    if value not in choices:
        raise Exit(f'Unknown {option} "{value}"; expected one of: {", ".join(choices)}',
                   code=EXIT_USAGE)
    return value
