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
import sys

import click

from selfsim_cli import console
from selfsim_cli import utils
from selfsim_cli.separation import multiplicity as multiplicity_mod
from selfsim_cli.separation import overlap
from selfsim_cli.separation import wsp
from selfsim_cli.specs import options


def _pair(alpha: object, beta: object) -> str:
    return f"{alpha} {beta}"


@click.command("overlap-scan", help="Search for distinct words with identical maps")
@options.system_options
@click.option(
    "--depth",
    type=options.IntRange(min=1),
    required=True,
    help="Largest word length",
)
@utils.run_with_asyncio
async def overlap_scan(
    spec: str,
    backend: str | None,
    digits: int | None,
    depth: int,
) -> None:
    system = await options.load(spec, backend, digits)
    with console.status(f"Scanning {system} for exact overlaps"):
        found = await asyncio.to_thread(overlap.exact_overlap_scan, system, depth)
    results: list[tuple[str, object]] = [
        ("system", system),
        ("overlaps", len(found)),
    ]
    results.extend(
        (f"overlap[{i}]", _pair(w.alpha, w.beta)) for i, w in enumerate(found, start=1)
    )
    config = utils.RunConfig.build(
        "overlap-scan",
        spec=spec,
        backend=options.backend_name(system),
        depth=depth,
    )
    utils.echo_block(config, results)


@click.command("wsp-scan", help="Scan the relative maps for a weak separation verdict")
@options.system_options
@click.option(
    "--depth",
    type=options.IntRange(min=1),
    required=True,
    help="Largest level of the closure",
)
@click.option(
    "--epsilon",
    default=wsp.DEFAULT_EPSILON,
    show_default=True,
    callback=options.positive_number,
    help="Relative maps closer than this to the identity witness a violation",
)
@click.option(
    "--prune-bound",
    callback=options.positive_number,
    help="Drop relative maps whose image of the unit cube lies farther away (default 2 sqrt(d))",
)
@utils.run_with_asyncio
async def wsp_scan(
    spec: str,
    backend: str | None,
    digits: int | None,
    depth: int,
    epsilon: str,
    prune_bound: str | None,
) -> None:
    system = await options.load(spec, backend, digits)
    with console.status(f"Scanning relative maps of {system}"):
        verdict = await asyncio.to_thread(
            wsp.wsp_scan,
            system,
            depth,
            epsilon,
            prune_bound,
        )
    results: list[tuple[str, object]] = [
        ("system", system),
        ("status", verdict.status),
        ("witnesses", len(verdict.witnesses)),
    ]
    for i, record in enumerate(verdict.witnesses, start=1):
        results.extend(
            (
                (f"witness[{i}]", _pair(record.alpha, record.beta)),
                (f"witness[{i}].distance", record.id_distance.format(17)),
                (f"witness[{i}].level", record.level),
            ),
        )
    min_distance = verdict.min_nonzero_distance
    results.extend(
        (
            (
                "min_nonzero_distance",
                None if min_distance is None else min_distance.format(17),
            ),
            ("exact_overlaps", len(verdict.exact_overlaps)),
            ("stabilized_at", verdict.stabilized_at),
            ("states", verdict.states),
            ("truncation_note", verdict.truncation_note),
        ),
    )
    config = utils.RunConfig.build(
        "wsp-scan",
        spec=spec,
        backend=options.backend_name(system),
        depth=depth,
        epsilon=epsilon,
        prune_bound=prune_bound,
    )
    utils.echo_block(config, results)
    if verdict.status == wsp.WspStatus.UNKNOWN:
        sys.exit(utils.EXIT_UNKNOWN)


@click.command(help="Largest count of orbit points S_alpha(z), alpha in I_r, in an r-ball")
@options.system_options
@click.option(
    "--r",
    "r",
    required=True,
    callback=options.positive_number,
    help="Scale r in (0,1)",
)
@click.option(
    "--z",
    callback=options.point_type,
    help="Orbit start as X or X,Y (default: fixed point of map 1)",
)
@utils.run_with_asyncio
async def multiplicity(
    spec: str,
    backend: str | None,
    digits: int | None,
    r: str,
    z: tuple[str, ...] | None,
) -> None:
    system = await options.load(spec, backend, digits)
    report = await asyncio.to_thread(multiplicity_mod.multiplicity_scan, system, r, z)
    config = utils.RunConfig.build(
        "multiplicity",
        spec=spec,
        backend=options.backend_name(system),
        r=r,
        z=z,
    )
    utils.echo_block(
        config,
        [
            ("system", system),
            ("max_multiplicity", report.max_multiplicity),
            ("worst_ball_center", tuple(str(v) for v in report.worst_ball_center)),
            ("points", report.points),
            ("duplicates", report.duplicates),
        ],
    )
