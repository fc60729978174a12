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
import pathlib
import typing

import click

from selfsim_cli import console
from selfsim_cli import utils
from selfsim_cli.dimension import ahlfors
from selfsim_cli.dimension import covering
from selfsim_cli.dimension import estimate
from selfsim_cli.dimension import moran
from selfsim_cli.separation import projection
from selfsim_cli.specs import csvout
from selfsim_cli.specs import options


if typing.TYPE_CHECKING:
    from selfsim_cli.symbolic import ifs as ifs_mod


Mode = typing.Literal["box", "assouad", "ahlfors"]


@click.command(help="Similarity dimension from the Moran equation")
@options.system_options
@click.option(
    "--reduced-r",
    callback=options.positive_number,
    help="Also report the reduced similarity dimension over I_r",
)
@utils.run_with_asyncio
async def simdim(
    spec: str,
    backend: str | None,
    digits: int | None,
    reduced_r: str | None,
) -> None:
    system = await options.load(spec, backend, digits)
    value = await asyncio.to_thread(moran.similarity_dimension, system)
    results: list[tuple[str, object]] = [
        ("system", system),
        ("ambient_dim", system.ambient_dim),
        ("maps", system.size),
        ("kind", "similarity"),
        ("value", float(value)),
    ]
    if reduced_r is not None:
        reduced = await asyncio.to_thread(
            moran.reduced_similarity_dimension,
            system,
            reduced_r,
        )
        raw = await asyncio.to_thread(
            moran.reduced_similarity_dimension,
            system,
            reduced_r,
            clamp=False,
        )
        results.extend(
            (
                ("reduced_kind", reduced.kind),
                ("reduced_value", reduced.value),
                ("reduced_raw_value", raw.value),
                ("reduced_note", reduced.note),
            ),
        )
    if system.model_error:
        results.append(("model_error", system.model_error))
    config = utils.RunConfig.build(
        "simdim",
        spec=spec,
        backend=options.backend_name(system),
        reduced_r=reduced_r,
    )
    utils.echo_block(config, results)


def _ahlfors_records(report: ahlfors.AhlforsReport) -> list[covering.CoveringRecord]:
    return [
        covering.CoveringRecord(sample.center, sample.r, report.rho, sample.count)
        for sample in report.samples
    ]


def _estimate(
    system: ifs_mod.IfsSystem,
    mode: Mode,
    min_exp: int,
    max_exp: int,
    min_gap: int,
    jobs: int | None,
) -> covering.DimensionEstimate:
    if mode == "box":
        return estimate.box_dimension_estimate(system, min_exp, max_exp)
    return estimate.assouad_estimate(system, min_gap, min_exp, max_exp, jobs=jobs)


@click.command(help="Estimate box or Assouad dimension, or check Ahlfors regularity")
@options.system_options
@click.option(
    "--mode",
    type=options.Choice(["box", "assouad", "ahlfors"]),
    required=True,
    help="Estimate to compute",
)
@click.option(
    "--min-exp",
    type=options.IntRange(min=1),
    default=1,
    show_default=True,
    help="Coarsest scale lambda^I",
)
@click.option(
    "--max-exp",
    type=options.IntRange(min=2),
    default=10,
    show_default=True,
    help="Finest scale lambda^J",
)
@click.option(
    "--min-gap",
    type=options.IntRange(min=estimate.MIN_GAP_FLOOR),
    default=estimate.DEFAULT_MIN_GAP,
    show_default=True,
    help="Smallest number of levels between r and rho (assouad)",
)
@click.option(
    "--csv",
    "csv_path",
    type=click.Path(dir_okay=False, path_type=pathlib.Path),
    help="Write the covering records to this CSV file",
)
@click.option(
    "--jobs",
    type=options.IntRange(min=1),
    default=1,
    show_default=True,
    help="Worker threads for window fits",
)
@click.option(
    "--s",
    "s",
    type=options.FloatRange(min=0, min_open=True),
    help="Exponent for --mode ahlfors, defaults to the similarity dimension",
)
@click.option(
    "--product",
    is_flag=True,
    default=False,
    help="For diagonal planar systems, also bound the Assouad dimension by its projections",
)
@utils.run_with_asyncio
async def dim(
    spec: str,
    backend: str | None,
    digits: int | None,
    mode: Mode,
    min_exp: int,
    max_exp: int,
    min_gap: int,
    csv_path: pathlib.Path | None,
    jobs: int,
    s: float | None,
    product: bool,
) -> None:
    if max_exp <= min_exp:
        msg = f"--max-exp must exceed --min-exp ({max_exp} <= {min_exp})"
        raise options.OptionValueError(msg, param_hint="--max-exp")
    system = await options.load(spec, backend, digits)
    config = utils.RunConfig.build(
        "dim",
        spec=spec,
        backend=options.backend_name(system),
        mode=mode,
        min_exp=min_exp,
        max_exp=max_exp,
        min_gap=min_gap,
        jobs=jobs,
        s=s,
        product=product,
        csv=csv_path,
    )
    results: list[tuple[str, object]] = [("system", system)]
    with console.status(f"Computing {mode} estimate of {system}"):
        if mode == "ahlfors":
            exponent = s if s is not None else float(moran.similarity_dimension(system))
            base = estimate.scale_base(system)
            report = await asyncio.to_thread(
                ahlfors.ahlfors_diagnostic,
                system,
                exponent,
                [base**i for i in range(min_exp, max_exp + 1)],
            )
            records = _ahlfors_records(report)
            results.extend(
                (
                    ("kind", "ahlfors"),
                    ("s", exponent),
                    ("rho", report.rho),
                    ("spread", report.spread),
                    ("samples", len(report.samples)),
                    ("note", report.note),
                ),
            )
        else:
            result = await asyncio.to_thread(
                _estimate,
                system,
                mode,
                min_exp,
                max_exp,
                min_gap,
                jobs,
            )
            records = list(result.records)
            results.extend(
                (
                    ("kind", result.kind),
                    ("value", result.value),
                    ("residual", result.residual),
                    ("records", len(records)),
                ),
            )
            if result.note:
                results.append(("note", result.note))
        if product and not (mode == "assouad" and projection.is_diagonal(system)):
            utils.warn("--product needs --mode assouad and a diagonal planar system")
        elif product:
            bounds = await asyncio.to_thread(
                estimate.product_assouad_bounds,
                system,
                min_gap,
                min_exp,
                max_exp,
                jobs=jobs,
            )
            results.extend(
                (
                    ("projection_values", (bounds.first.value, bounds.second.value)),
                    ("lower_bound", bounds.lower),
                    ("upper_bound", bounds.upper),
                ),
            )
    if csv_path is not None:
        rows = await csvout.emit_covering_csv(records, csv_path, config)
        results.extend((("csv", csv_path), ("csv_rows", rows)))
    utils.echo_block(config, results)
