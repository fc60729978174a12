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
"""Box and Assouad dimension estimates from mesh covering counts.

Scales are powers of lambda, the largest ratio of the system. The box
estimate fits log N(rho) against log(1/rho) over the whole cube. The
Assouad estimate fits, for every window center and every r-level, the
slope of log N(r, rho) against log(r/rho) over the rho-levels at least
`min_gap` below r, and keeps the steepest slope.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import itertools
import math
import typing

import numpy as np

from selfsim_cli import utils
from selfsim_cli.dimension import attractor
from selfsim_cli.dimension import covering
from selfsim_cli.separation import projection


if typing.TYPE_CHECKING:
    from collections.abc import Sequence

    import numpy.typing as npt

    from selfsim_cli.geometry import cloud
    from selfsim_cli.symbolic import ifs as ifs_mod


DEFAULT_MIN_GAP = 5
MIN_GAP_FLOOR = 3
MIN_FIT_SCALES = 3
MAX_CENTERS = 512


def scale_base(system: ifs_mod.IfsSystem) -> float:
    return float(system.max_ratio)


def fit_slope(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope and root-mean-square residual."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), residual


def _check_exponents(min_exp: int, max_exp: int) -> None:
    if min_exp < 1:
        msg = f"scale exponents start at 1, got min_exp={min_exp}"
        raise covering.FitError(msg)
    if max_exp <= min_exp:
        msg = f"max_exp={max_exp} must exceed min_exp={min_exp}"
        raise covering.FitError(msg)


def _clamp(value: float, ambient_dim: int) -> float:
    return min(max(value, 0.0), float(ambient_dim))


def box_dimension_estimate(
    system: ifs_mod.IfsSystem,
    min_exp: int,
    max_exp: int,
) -> covering.DimensionEstimate:
    _check_exponents(min_exp, max_exp)
    if max_exp - min_exp + 1 < MIN_FIT_SCALES:
        msg = f"box estimate needs at least {MIN_FIT_SCALES} scales"
        raise covering.FitError(msg)
    base = scale_base(system)
    points = attractor.attractor_points(system, base**max_exp / 2, labelled=False)
    center = tuple(0.5 for _ in range(system.ambient_dim))
    records = []
    for k in range(min_exp, max_exp + 1):
        rho = base**k
        covering.check_resolution(points, rho)
        count = len(np.unique(covering.flat_cells(points.points, rho)))
        records.append(covering.CoveringRecord(center, 1.0, rho, count))
    slope, residual = fit_slope(
        [-math.log(rec.rho) for rec in records],
        [math.log(rec.count) for rec in records],
    )
    utils.debug(f"box estimate of {system}: slope {slope:.6f} residual {residual:.3g}")
    return covering.DimensionEstimate(
        kind="box",
        value=_clamp(slope, system.ambient_dim),
        residual=residual,
        records=tuple(records),
    )


def window_centers(points: cloud.PointCloud) -> npt.NDArray[np.float64]:
    """Every max(2^d, n/512)-th cloud point, at most 512 of them."""
    stride = max(2**points.ambient_dim, math.ceil(len(points) / MAX_CENTERS))
    return points.points[::stride][:MAX_CENTERS]


@dataclasses.dataclass(frozen=True)
class _LocalFit:
    slope: float
    residual: float
    records: tuple[covering.CoveringRecord, ...]


def _center_fits(
    center: tuple[float, ...],
    levels: dict[int, list[int]],
    indexes: dict[tuple[int, int], covering.CellIndex],
    base: float,
) -> list[_LocalFit]:
    fits = []
    for i, js in levels.items():
        records = tuple(
            covering.CoveringRecord(
                center,
                indexes[i, j].r,
                indexes[i, j].rho,
                indexes[i, j].count(center),
            )
            for j in js
        )
        slope, residual = fit_slope(
            [(j - i) * -math.log(base) for j in js],
            [math.log(rec.count) for rec in records],
        )
        fits.append(_LocalFit(slope, residual, records))
    return fits


def assouad_estimate(
    system: ifs_mod.IfsSystem,
    min_gap: int = DEFAULT_MIN_GAP,
    min_exp: int = 1,
    max_exp: int = 10,
    *,
    jobs: int | None = None,
    points: cloud.PointCloud | None = None,
) -> covering.DimensionEstimate:
    _check_exponents(min_exp, max_exp)
    if min_gap < MIN_GAP_FLOOR:
        msg = f"min_gap must be at least {MIN_GAP_FLOOR}, got {min_gap}"
        raise covering.FitError(msg)
    levels = {
        i: list(range(i + min_gap, max_exp + 1))
        for i in range(min_exp, max_exp + 1)
        if max_exp - (i + min_gap) + 1 >= 2
    }
    if not levels:
        msg = (
            f"no r-level in {min_exp}..{max_exp} has two rho-levels "
            f"at least {min_gap} steps finer"
        )
        raise covering.FitError(msg)
    base = scale_base(system)
    if points is None:
        points = attractor.attractor_points(system, base**max_exp / 2, labelled=False)
    exponents = sorted({*levels, *itertools.chain.from_iterable(levels.values())})
    # one pass over the cloud per exponent, shared by every scale pair
    cells = {k: covering.flat_cells(points.points, base**k) for k in exponents}
    indexes = {
        (i, j): covering.CellIndex(
            points,
            base**i,
            base**j,
            coarse=cells[i],
            fine=cells[j],
        )
        for i, js in levels.items()
        for j in js
    }
    centers = [tuple(float(v) for v in c) for c in window_centers(points)]
    utils.debug(
        f"assouad estimate of {system}: {len(centers)} centers, "
        f"{len(indexes)} scale pairs, jobs={jobs or 1}",
    )

    def fits_of(center: tuple[float, ...]) -> list[_LocalFit]:
        return _center_fits(center, levels, indexes, base)

    if jobs is not None and jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as executor:
            per_center = list(executor.map(fits_of, centers))
    else:
        per_center = [fits_of(c) for c in centers]
    fits = list(itertools.chain.from_iterable(per_center))
    # first steepest fit in canonical (center, r-level) order
    best = max(fits, key=lambda f: f.slope)
    return covering.DimensionEstimate(
        kind="assouad",
        value=_clamp(best.slope, system.ambient_dim),
        residual=best.residual,
        records=tuple(rec for fit in fits for rec in fit.records),
    )


@dataclasses.dataclass(frozen=True)
class ProductBounds:
    first: covering.DimensionEstimate
    second: covering.DimensionEstimate
    plane: covering.DimensionEstimate

    @property
    def lower(self) -> float:
        return max(self.first.value, self.second.value)

    @property
    def upper(self) -> float:
        return self.first.value + self.second.value


def product_assouad_bounds(
    system: ifs_mod.IfsSystem,
    min_gap: int = DEFAULT_MIN_GAP,
    min_exp: int = 1,
    max_exp: int = 10,
    *,
    jobs: int | None = None,
) -> ProductBounds:
    """Assouad estimates of a diagonal planar system and of its two projections."""
    first = projection.project_ifs(system, 0)
    second = projection.project_ifs(system, 1)
    return ProductBounds(
        first=assouad_estimate(first, min_gap, min_exp, max_exp, jobs=jobs),
        second=assouad_estimate(second, min_gap, min_exp, max_exp, jobs=jobs),
        plane=assouad_estimate(system, min_gap, min_exp, max_exp, jobs=jobs),
    )
