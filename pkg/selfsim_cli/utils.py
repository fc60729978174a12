#
#  Copyright © 2021-2024 Mergify SAS
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may
# not use this file except in compliance with the License. You may obtain
# a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations
# under the License.

from __future__ import annotations

import asyncio
import dataclasses
import functools
import sys
import typing

import click

from selfsim_cli import VERSION
from selfsim_cli import console


if typing.TYPE_CHECKING:
    from collections.abc import Callable
    from collections.abc import Coroutine
    from collections.abc import Iterable


EXIT_ERROR = 1
EXIT_UNKNOWN = 2

_DEBUG = False


def set_debug(debug: bool) -> None:
    global _DEBUG  # noqa: PLW0603
    _DEBUG = debug


def is_debug() -> bool:
    return _DEBUG


def debug(message: str) -> None:
    if is_debug():
        console.print(f"[purple]DEBUG: {message}[/]")


def warn(message: str) -> None:
    console.log(f"warning: {message}", style="yellow")


@dataclasses.dataclass
class SelfsimError(Exception):
    message: str

    def __str__(self) -> str:
        return self.message


def format_value(value: object) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, tuple | list):
        return ",".join(format_value(v) for v in value)
    return str(value)


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Fully resolved parameters of one verb invocation.

    The same lines head every stdout result block, every CSV file (as
    `#` comments) and every PNG (as text chunks), so two runs with equal
    configs produce byte-identical outputs.
    """

    verb: str
    params: tuple[tuple[str, str], ...] = ()

    @classmethod
    def build(cls, verb: str, **params: object) -> RunConfig:
        return cls(
            verb,
            tuple((key, format_value(value)) for key, value in params.items()),
        )

    def items(self) -> list[tuple[str, str]]:
        return [("selfsim", VERSION), ("verb", self.verb), *self.params]

    def lines(self) -> list[str]:
        return [f"{key}: {value}" for key, value in self.items()]


def echo_block(config: RunConfig, results: Iterable[tuple[str, object]]) -> None:
    for line in config.lines():
        click.echo(line)
    for key, value in results:
        click.echo(f"{key}: {format_value(value)}")


P = typing.ParamSpec("P")
R = typing.TypeVar("R")


def run_with_asyncio(
    func: Callable[
        P,
        Coroutine[typing.Any, typing.Any, R],
    ],
) -> functools._Wrapped[
    P,
    Coroutine[typing.Any, typing.Any, R],
    P,
    R,
]:
    @functools.wraps(func)
    def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
        try:
            return asyncio.run(func(*args, **kwargs))
        except SelfsimError as e:
            console.print(f"error: {e}", style="red")
            sys.exit(EXIT_ERROR)

    return wrapper
