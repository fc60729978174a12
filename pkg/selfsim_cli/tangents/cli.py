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
import typing

import click

from selfsim_cli import console
from selfsim_cli import utils
from selfsim_cli.geometry import cloud
from selfsim_cli.specs import options
from selfsim_cli.symbolic import relative
from selfsim_cli.tangents import bandt_graf
from selfsim_cli.tangents import pretangent
from selfsim_cli.tangents import pseudo
from selfsim_cli.tangents import witnesses as witnesses_mod
from selfsim_cli.tangents import zoom


if typing.TYPE_CHECKING:
    from selfsim_cli.symbolic import ifs as ifs_mod


Mode = typing.Literal["pseudo", "ek", "zoom"]
WitnessSource = typing.Literal["family", "search"]

GRID_POINTS = {1: 1001, 2: 101}


def witness_sequence(
    system: ifs_mod.IfsSystem,
    source: WitnessSource,
    m_max: int,
    depth: int,
) -> witnesses_mod.WitnessSequence:
    if source == "family":
        if system.backend.is_exact:
            msg = "the Bandt-Graf witness family needs the float backend (--backend float)"
            raise utils.SelfsimError(msg)
        if not bandt_graf.is_line_system(system):
            msg = f"{system} is not the {bandt_graf.LINE_NAME} system"
            raise utils.SelfsimError(msg)
        return bandt_graf.bandt_graf_witnesses(range(1, m_max + 1), system.backend)
    search = relative.enumerate_relative_maps(system, depth)
    sequence = witnesses_mod.from_records(search.records)
    if not sequence.pairs:
        msg = f"no relative maps found up to level {depth}"
        raise pseudo.WitnessExhaustedError(msg, 0)
    return witnesses_mod.normalize_orientation(system, sequence.pairs)


def _pseudo_results(run: pseudo.PseudoTangentRun) -> list[tuple[str, object]]:
    return [
        ("n", run.n),
        ("epsilon", run.epsilon.format(17)),
        ("contraction", run.contraction.format(17)),
        ("base_point", run.base_point.format(17)),
        ("rho", run.rho.format(17)),
        ("min_power", run.min_power),
        ("increments_within_bounds", run.increments_within_bounds()),
        ("min_increment", min(run.increments).format(17)),
        ("max_increment", max(run.increments).format(17)),
        ("tangent_distance", run.tangent_distance()),
        ("distance_bound", float(run.distance_bound())),
        ("swapped", sum(run.swapped)),
        (
            "selections",
            " ".join(f"{sel.witness}:{sel.power}" for sel in run.selections),
        ),
    ]


async def _pseudo(
    system: ifs_mod.IfsSystem,
    source: WitnessSource,
    n: int,
    m_max: int,
    depth: int,
) -> tuple[list[tuple[str, object]], int]:
    sequence = await asyncio.to_thread(witness_sequence, system, source, m_max, depth)
    results: list[tuple[str, object]] = [("witnesses", len(sequence))]
    try:
        run = await asyncio.to_thread(pseudo.build_pseudo_tangent, system, sequence, n)
    except pseudo.WitnessExhaustedError as e:
        utils.warn(e.message)
        if e.finest_n < 1:
            results.append(("status", "exhausted"))
            return results, utils.EXIT_UNKNOWN
        run = await asyncio.to_thread(
            pseudo.build_pseudo_tangent,
            system,
            sequence,
            e.finest_n,
        )
        results.append(("status", "reduced"))
    else:
        results.append(("status", "complete"))
    results.extend(_pseudo_results(run))
    return results, 0


def _ek_results(
    points: cloud.PointCloud,
    dim: int,
) -> list[tuple[str, object]]:
    grid = cloud.unit_grid(dim, GRID_POINTS[dim])
    return [
        ("points", len(points)),
        ("grid_distance", cloud.one_sided_hausdorff(grid, points, accelerate=True)),
    ]


@click.command(help="Pseudo tangents, pre-tangent sets E_k and zooms T(F) n X")
@options.system_options
@click.option(
    "--mode",
    type=options.Choice(["pseudo", "ek", "zoom"]),
    required=True,
    help="Construction to run",
)
@click.option(
    "--n",
    "n",
    type=options.IntRange(min=1),
    default=50,
    show_default=True,
    help="Target number of pseudo tangent steps",
)
@click.option(
    "--witnesses",
    "source",
    type=options.Choice(["family", "search"]),
    default="search",
    show_default=True,
    help="Bandt-Graf closed-form family or a relative map search",
)
@click.option(
    "--m-max",
    type=options.IntRange(min=1),
    default=bandt_graf.DEFAULT_FAMILY_SIZE,
    show_default=True,
    help="Largest index of the Bandt-Graf witness family",
)
@click.option(
    "--depth",
    type=options.IntRange(min=1),
    default=8,
    show_default=True,
    help="Relative map search depth for --witnesses search",
)
@click.option("--alpha", default="1/2", show_default=True, help="alpha of E_k")
@click.option(
    "--beta",
    default="1/3",
    show_default=True,
    help="beta of E_k and of the zoom beta^-k",
)
@click.option(
    "--k",
    "k",
    type=options.IntRange(min=0),
    default=10,
    show_default=True,
    help="k of E_k",
)
@click.option(
    "--zoom-k",
    type=options.IntRange(min=0),
    default=10,
    show_default=True,
    help="Zoom exponent k of T_k(x) = beta^-k x",
)
@click.option(
    "--window-size",
    type=options.FloatRange(min=0, max=zoom.WINDOW_LIMIT, min_open=True),
    default=1.0,
    show_default=True,
    help="Side of the window [0, W]^d",
)
@click.option(
    "--resolution",
    type=options.FloatRange(min=0, min_open=True),
    default=zoom.DEFAULT_RESOLUTION,
    show_default=True,
    help="Resolution of the zoomed cloud",
)
@utils.run_with_asyncio
async def tangent(
    spec: str,
    backend: str | None,
    digits: int | None,
    mode: Mode,
    n: int,
    source: WitnessSource,
    m_max: int,
    depth: int,
    alpha: str,
    beta: str,
    k: int,
    zoom_k: int,
    window_size: float,
    resolution: float,
) -> None:
    system = await options.load(spec, backend, digits)
    dim = system.ambient_dim
    params: dict[str, object] = {
        "spec": spec,
        "backend": options.backend_name(system),
        "mode": mode,
    }
    if mode == "pseudo":
        params.update(n=n, witnesses=source, m_max=m_max, depth=depth)
    else:
        params.update(alpha=alpha, beta=beta, k=k)
    if mode == "zoom":
        params.update(zoom_k=zoom_k, window_size=window_size, resolution=resolution)
    config = utils.RunConfig.build("tangent", **params)
    results: list[tuple[str, object]] = [("system", system)]
    status = 0
    with console.status(f"Building {mode} tangent data for {system}"):
        if mode == "pseudo":
            block, status = await _pseudo(system, source, n, m_max, depth)
            results.extend(block)
        elif mode == "ek":
            points = await asyncio.to_thread(
                pretangent.pretangent_Ek,
                alpha,
                beta,
                k,
                dim,
            )
            results.extend(_ek_results(points, dim))
        else:
            t = zoom.beta_zoom(system, beta, zoom_k)
            window = ([0.0] * dim, [window_size] * dim)
            zoomed = await asyncio.to_thread(
                zoom.tangent_zoom,
                system,
                t,
                window,
                resolution,
            )
            results.append(("points", len(zoomed)))
            if not zoomed.is_empty():
                grid = cloud.PointCloud.from_points(
                    cloud.unit_grid(dim, GRID_POINTS[dim]).points * window_size,
                )
                points = await asyncio.to_thread(
                    pretangent.pretangent_Ek,
                    alpha,
                    beta,
                    k,
                    dim,
                )
                inside = points.restrict(*window)
                results.extend(
                    (
                        (
                            "grid_distance",
                            cloud.one_sided_hausdorff(grid, zoomed, accelerate=True),
                        ),
                        (
                            "ek_inclusion_distance",
                            cloud.one_sided_hausdorff(inside, zoomed, accelerate=True),
                        ),
                    ),
                )
    utils.echo_block(config, results)
    if status:
        sys.exit(status)
