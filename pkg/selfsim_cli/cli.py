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

import click
import click_default_group

from selfsim_cli import VERSION
from selfsim_cli import utils
from selfsim_cli.dimension import cli as dimension_cli_mod
from selfsim_cli.separation import cli as separation_cli_mod
from selfsim_cli.specs import cli as specs_cli_mod
from selfsim_cli.symbolic import cli as symbolic_cli_mod
from selfsim_cli.tangents import cli as tangents_cli_mod


@click.group(
    cls=click_default_group.DefaultGroup,
    default="examples",
    default_if_no_args=True,
)
@click.option("--debug", is_flag=True, default=False, help="debug mode")
@click.version_option(VERSION)
def cli(debug: bool) -> None:
    utils.set_debug(debug)


cli.add_command(dimension_cli_mod.simdim)
cli.add_command(dimension_cli_mod.dim)
cli.add_command(symbolic_cli_mod.stopping_cmd)
cli.add_command(separation_cli_mod.overlap_scan)
cli.add_command(separation_cli_mod.wsp_scan)
cli.add_command(separation_cli_mod.multiplicity)
cli.add_command(tangents_cli_mod.tangent)
cli.add_command(specs_cli_mod.render)
cli.add_command(specs_cli_mod.examples)


def main() -> None:
    cli()
