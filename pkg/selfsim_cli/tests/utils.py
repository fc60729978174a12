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
from click import testing

from selfsim_cli import cli


IGNORED_PREFIXES = ("warning", "error", "DEBUG")


def invoke(*args: str) -> testing.Result:
    return testing.CliRunner().invoke(cli.cli, list(args))


def parse_block(text: str) -> dict[str, str]:
    """`key: value` lines of a result block; diagnostics are skipped."""
    block = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith(IGNORED_PREFIXES):
            continue
        key, sep, value = line.partition(": ")
        if sep:
            block[key] = value
    return block
