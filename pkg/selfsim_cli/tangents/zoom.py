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
"""Magnified copies T(F) n X of an attractor, sampled as point clouds."""

from __future__ import annotations

import itertools
import typing

import numpy as np

from selfsim_cli import utils
from selfsim_cli.dimension import attractor
from selfsim_cli.geometry import similarity


if typing.TYPE_CHECKING:
    from collections.abc import Sequence

    from selfsim_cli.geometry import cloud
    from selfsim_cli.geometry import scalar
    from selfsim_cli.symbolic import ifs as ifs_mod


WINDOW_LIMIT = 10.0
DEFAULT_RESOLUTION = 1e-3
MAX_SOURCE_SCALE = 0.5


def _check_window(
    lower: Sequence[float],
    upper: Sequence[float],
    dim: int,
) -> None:
    if len(lower) != dim or len(upper) != dim:
        msg = f"window corners must have {dim} coordinates"
        raise similarity.DimensionMismatchError(msg)
    for lo, hi in zip(lower, upper, strict=True):
        if not -WINDOW_LIMIT <= lo <= hi <= WINDOW_LIMIT:
            msg = f"window [{lo}, {hi}] must be ordered and lie within [-10, 10]"
            raise utils.SelfsimError(msg)


def preimage_box(
    t: similarity.Similarity,
    lower: Sequence[float],
    upper: Sequence[float],
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Axis-aligned bounding box of T^-1 of the window."""
    matrix, offset = similarity.inverse(t).as_numpy()
    corners = np.array(list(itertools.product(*zip(lower, upper, strict=True))))
    images = corners @ matrix.T + offset
    return tuple(images.min(axis=0).tolist()), tuple(images.max(axis=0).tolist())


def tangent_zoom(
    system: ifs_mod.IfsSystem,
    t: similarity.Similarity,
    window: tuple[Sequence[float], Sequence[float]],
    resolution: float = DEFAULT_RESOLUTION,
    *,
    max_points: int = attractor.MAX_POINTS,
) -> cloud.PointCloud:
    """T(attractor cloud) restricted to the window.

    The source cloud is built at resolution / ratio(T), so the zoomed cloud
    is within `resolution` of T(F) n window.
    Words with equal maps are expanded once, which keeps zooms into
    commuting maps such as x/2 and x/3 near their common fixed point
    within the point budget.
    """
    lower, upper = window
    _check_window(lower, upper, system.ambient_dim)
    if t.ambient_dim != system.ambient_dim:
        msg = f"zoom map acts on R^{t.ambient_dim}, system on R^{system.ambient_dim}"
        raise similarity.DimensionMismatchError(msg)
    if resolution <= 0:
        msg = f"resolution must be positive, got {resolution}"
        raise utils.SelfsimError(msg)
    source_scale = min(resolution / float(t.ratio), MAX_SOURCE_SCALE)
    points = attractor.attractor_points(
        system,
        source_scale,
        labelled=False,
        max_points=max_points,
        within=preimage_box(t, lower, upper),
        distinct=True,
    )
    zoomed = points.transform(t).restrict(lower, upper)
    utils.debug(
        f"zoom of {system} by ratio {float(t.ratio):.6g}: "
        f"{len(points)} source points, {len(zoomed)} in window",
    )
    return zoomed


def beta_zoom(
    system: ifs_mod.IfsSystem,
    beta: scalar.ScalarLike,
    k: int,
) -> similarity.Similarity:
    """T_k(x) = beta^-k x."""
    b = similarity.build(system.backend, beta, [0] * system.ambient_dim)
    return similarity.power(similarity.inverse(b), k)
