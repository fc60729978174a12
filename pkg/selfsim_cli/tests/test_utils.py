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


from unittest import mock

import pytest

from selfsim_cli import VERSION
from selfsim_cli import utils


@pytest.mark.parametrize(
    ("value", "expected"),
    [
        (None, "-"),
        (True, "true"),
        (False, "false"),
        (0.1, "0.10000000000000001"),
        (1.0, "1"),
        (3, "3"),
        ((1.5, None), "1.5,-"),
        ("exact", "exact"),
    ],
)
def test_format_value(value: object, expected: str) -> None:
    assert utils.format_value(value) == expected


def test_run_config_lines() -> None:
    config = utils.RunConfig.build("dim", spec="cantor-1d", jobs=2, csv=None)
    assert config.lines() == [
        f"selfsim: {VERSION}",
        "verb: dim",
        "spec: cantor-1d",
        "jobs: 2",
        "csv: -",
    ]
    assert config == utils.RunConfig.build("dim", spec="cantor-1d", jobs=2, csv=None)


def test_run_with_asyncio_reports_domain_errors() -> None:
    @utils.run_with_asyncio
    async def failing() -> None:
        msg = "boom"
        raise utils.SelfsimError(msg)

    with (
        mock.patch.object(utils, "console") as console,
        pytest.raises(SystemExit) as excinfo,
    ):
        failing()
    assert excinfo.value.code == utils.EXIT_ERROR
    console.print.assert_called_once_with("error: boom", style="red")


def test_run_with_asyncio_returns_the_result() -> None:
    @utils.run_with_asyncio
    async def answer(value: int) -> int:
        return value * 2

    assert answer(21) == 42


def test_debug_is_silent_by_default() -> None:
    with mock.patch.object(utils, "console") as console:
        utils.debug("hidden")
        utils.set_debug(True)
        utils.debug("shown")
    console.print.assert_called_once_with("[purple]DEBUG: shown[/]")


def test_warn() -> None:
    with mock.patch.object(utils, "console") as console:
        utils.warn("careful")
    console.log.assert_called_once_with("warning: careful", style="yellow")
