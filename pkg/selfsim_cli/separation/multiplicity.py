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
"""Multiplicity of the orbit {S_alpha(z) : alpha in I_r} in balls of radius r.

Counts bounded in r are consistent with the weak separation property,
counts growing like a power of 1/r are evidence against it.
"""

from __future__ import annotations

import dataclasses
import typing

import numpy as np

from selfsim_cli import utils
from selfsim_cli.geometry import similarity
from selfsim_cli.symbolic import stopping


if typing.TYPE_CHECKING:
    from collections.abc import Sequence

    import numpy.typing as npt

    from selfsim_cli.geometry import scalar
    from selfsim_cli.symbolic import ifs as ifs_mod


BALL_SLACK = 1e-9


@dataclasses.dataclass(frozen=True)
class MultiplicityReport:
    max_multiplicity: int
    worst_ball_center: similarity.Point
    points: int
    duplicates: int


def _point_key(point: similarity.Point) -> tuple[typing.Any, ...]:
    if point[0].backend.is_exact:
        return tuple(v.value for v in point)
    return tuple(v.quantize(similarity.FLOAT_KEY_SCALE) for v in point)


def _ball_counts(points: npt.NDArray[np.float64], r: float) -> npt.NDArray[np.int64]:
    """Number of points within distance r of each point (itself included)."""
    radius = r * (1 + BALL_SLACK)
    order = np.argsort(points[:, 0], kind="stable")
    xs = points[order, 0]
    low = np.searchsorted(xs, xs - radius, side="left")
    high = np.searchsorted(xs, xs + radius, side="right")
    if points.shape[1] == 1:
        counts = high - low
    else:
        ys = points[order, 1]
        counts = np.array(
            [
                int(((ys[lo:hi] - y) ** 2 + (xs[lo:hi] - x) ** 2 <= radius**2).sum())
                for lo, hi, x, y in zip(low, high, xs, ys, strict=True)
            ],
            dtype=np.int64,
        )
    result = np.empty_like(counts)
    result[order] = counts
    return result


def multiplicity_scan(
    system: ifs_mod.IfsSystem,
    r: scalar.ScalarLike,
    z: Sequence[scalar.ScalarLike] | None = None,
) -> MultiplicityReport:
    scale = stopping.as_scale(system, r)
    if z is None:
        start = similarity.fixed_point(system.map(1))
    else:
        start = stopping.as_point(system, z)
    orbit: dict[tuple[typing.Any, ...], similarity.Point] = {}
    total = 0
    for _, s in stopping.stopping_maps(system, scale):
        image = s(start)
        total += 1
        orbit.setdefault(_point_key(image), image)
    unique = list(orbit.values())
    array = np.array([[float(v) for v in p] for p in unique], dtype=np.float64)
    counts = _ball_counts(array, float(scale))
    worst = int(np.argmax(counts))
    utils.debug(
        f"multiplicity of {system} at r={scale}: {len(unique)} points "
        f"({total - len(unique)} duplicates), max {counts[worst]}",
    )
    return MultiplicityReport(
        max_multiplicity=int(counts[worst]),
        worst_ball_center=unique[worst],
        points=len(unique),
        duplicates=total - len(unique),
    )
