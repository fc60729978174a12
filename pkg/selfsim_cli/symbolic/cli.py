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

import click

from selfsim_cli import utils
from selfsim_cli.specs import options
from selfsim_cli.symbolic import fixed_points
from selfsim_cli.symbolic import groups
from selfsim_cli.symbolic import stopping


@click.command("stopping", help="List the stopping set I_r, or I_r(x) with --at")
@options.system_options
@click.option(
    "--r",
    "r",
    required=True,
    callback=options.positive_number,
    help="Scale r in (0,1)",
)
@click.option("--at", callback=options.point_type, help="Center x as X or X,Y")
@utils.run_with_asyncio
async def stopping_cmd(
    spec: str,
    backend: str | None,
    digits: int | None,
    r: str,
    at: tuple[str, ...] | None,
) -> None:
    system = await options.load(spec, backend, digits)
    pieces = await asyncio.to_thread(stopping.stopping_maps, system, r)
    ratios = [s.ratio for _, s in pieces]
    results: list[tuple[str, object]] = [
        ("system", system),
        ("count", len(pieces)),
        ("min_ratio", min(ratios)),
        ("max_ratio", max(ratios)),
        ("words", " ".join(str(w) for w, _ in pieces)),
    ]
    if at is not None:
        local = await asyncio.to_thread(stopping.local_stopping_set, system, r, at)
        results.extend(
            (
                ("local_count", len(local)),
                ("local_words", " ".join(str(w) for w in local)),
            ),
        )
    if system.ambient_dim == 2 and not system.trivial:
        analysis = groups.orthogonal_group_analysis(system)
        report = await asyncio.to_thread(fixed_points.spanning_fixed_points, system, r)
        results.extend(
            (
                ("orthogonal_group", analysis.verdict),
                ("orthogonal_group_order", analysis.order),
                ("fixed_points", report.describe()),
            ),
        )
    config = utils.RunConfig.build(
        "stopping",
        spec=spec,
        backend=options.backend_name(system),
        r=r,
        at=at,
    )
    utils.echo_block(config, results)
