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
"""Attractor clouds {S_alpha(p0) : alpha in I_resolution}.

The stopping set is expanded level by level on float64 arrays. A word stops
once its ratio is at most resolution * (1 + 1e-9), which absorbs the
rounding of products such as (1/3)^2 against 1/9. Children are generated
in letter order, so points come out ordered by word length, then
lexicographically.
"""

from __future__ import annotations

import itertools
import typing

import numpy as np

from selfsim_cli import utils
from selfsim_cli.dimension import covering
from selfsim_cli.geometry import cloud
from selfsim_cli.geometry import similarity
from selfsim_cli.symbolic import ifs as ifs_mod
from selfsim_cli.symbolic import stopping
from selfsim_cli.symbolic import words


if typing.TYPE_CHECKING:
    from collections.abc import Sequence

    import numpy.typing as npt

    from selfsim_cli.geometry import scalar


MAX_POINTS = 10**7
LABEL_LIMIT = 200_000
STOP_SLACK = 1e-9


def attractor_points(
    system: ifs_mod.IfsSystem,
    resolution: scalar.ScalarLike,
    *,
    labelled: bool | None = None,
    max_points: int = MAX_POINTS,
    within: tuple[Sequence[float], Sequence[float]] | None = None,
    distinct: bool = False,
) -> cloud.PointCloud:
    """Images of the fixed point of map 1 under the words of I_resolution.

    Labels hold the generating words unless the cloud is larger than
    LABEL_LIMIT points or `labelled` is False. With `within`, words whose
    image of [0,1]^d misses that box are dropped early; this is only done
    for systems mapping [0,1]^d into itself. With `distinct`, words whose
    maps agree are expanded once, keeping the first word; the maps are
    compared on a grid of 1e-3 times the resolution.
    """
    region = None
    if within is not None and not ifs_mod.escaping_maps(system):
        region = (np.asarray(within[0], dtype=np.float64), np.asarray(within[1], dtype=np.float64))
    scale = float(stopping.as_scale(system, resolution))
    limit = scale * (1 + STOP_SLACK)
    dim = system.ambient_dim
    linear = np.array([s.as_numpy()[0] for s in system.maps])
    shifts = np.array([s.as_numpy()[1] for s in system.maps])
    ratios = np.array([float(r) for r in system.ratios])
    start = np.array([float(v) for v in similarity.fixed_point(system.map(1))])

    frontier_linear = np.eye(dim)[np.newaxis]
    frontier_shift = np.zeros((1, dim))
    frontier_ratio = np.ones(1)
    frontier_words: list[words.Word] | None = (
        None if labelled is False else [words.EMPTY]
    )
    done_points: list[npt.NDArray[np.float64]] = []
    done_words: list[words.Word] = []
    done_count = 0
    size = system.size
    while len(frontier_ratio):
        if done_count + len(frontier_ratio) * size > max_points:
            msg = (
                f"resolution {resolution} needs more than {max_points} points "
                f"for {system}"
            )
            raise covering.ResolutionError(msg)
        # children of node k are rows k*size .. k*size + size - 1
        child_linear = np.einsum(
            "kij,ljm->klim",
            frontier_linear,
            linear,
        ).reshape(-1, dim, dim)
        child_shift = (
            np.einsum("kij,lj->kli", frontier_linear, shifts)
            + frontier_shift[:, np.newaxis]
        ).reshape(-1, dim)
        child_ratio = np.outer(frontier_ratio, ratios).reshape(-1)
        child_words = None
        if frontier_words is not None:
            child_words = [w.append(i) for w in frontier_words for i in range(1, size + 1)]
        if region is not None:
            meets = _meets(child_linear, child_shift, region)
            child_linear = child_linear[meets]
            child_shift = child_shift[meets]
            child_ratio = child_ratio[meets]
            if child_words is not None:
                child_words = [
                    w for w, m in zip(child_words, meets.tolist(), strict=True) if m
                ]
        if distinct:
            first = _first_of_each_map(child_linear, child_shift, child_ratio, scale)
            child_linear = child_linear[first]
            child_shift = child_shift[first]
            child_ratio = child_ratio[first]
            if child_words is not None:
                child_words = [child_words[i] for i in first.tolist()]
        stop = child_ratio <= limit
        if stop.any():
            done_points.append(child_linear[stop] @ start + child_shift[stop])
            done_count += int(stop.sum())
            if child_words is not None:
                done_words.extend(
                    w for w, s in zip(child_words, stop.tolist(), strict=True) if s
                )
        keep = ~stop
        frontier_linear = child_linear[keep]
        frontier_shift = child_shift[keep]
        frontier_ratio = child_ratio[keep]
        if child_words is not None:
            frontier_words = [
                w for w, k in zip(child_words, keep.tolist(), strict=True) if k
            ]
        oversized = done_count + len(frontier_ratio) > LABEL_LIMIT
        if frontier_words is not None and labelled is None and oversized:
            utils.debug(f"attractor cloud passes {LABEL_LIMIT} points, dropping labels")
            frontier_words = None
            done_words = []
    points = np.concatenate(done_points) if done_points else np.zeros((0, dim))
    labels = done_words if frontier_words is not None else None
    utils.debug(f"attractor cloud of {system}: {len(points)} points at resolution {resolution}")
    return cloud.PointCloud.from_points(points, labels=labels, resolution=scale)


def _meets(
    linear: npt.NDArray[np.float64],
    shift: npt.NDArray[np.float64],
    region: tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]],
) -> npt.NDArray[np.bool_]:
    """Whether the image box of [0,1]^d under each map meets the region."""
    dim = shift.shape[1]
    corners = np.array(list(itertools.product((0.0, 1.0), repeat=dim)))
    images = np.einsum("kij,cj->kci", linear, corners) + shift[:, np.newaxis]
    low, high = region
    slack = 1e-12
    return np.all(
        (images.max(axis=1) >= low - slack) & (images.min(axis=1) <= high + slack),
        axis=1,
    )


def _first_of_each_map(
    linear: npt.NDArray[np.float64],
    shift: npt.NDArray[np.float64],
    ratio: npt.NDArray[np.float64],
    scale: float,
) -> npt.NDArray[np.intp]:
    """Sorted row indices of the first occurrence of each map."""
    if not len(ratio):
        return np.zeros(0, dtype=np.intp)
    orthogonal = linear.reshape(len(ratio), -1) / ratio[:, np.newaxis]
    keys = np.column_stack(
        (
            np.round(np.log(ratio), 9),
            np.round(orthogonal, 9),
            np.round(shift / (scale * 1e-3)),
        ),
    )
    _, first = np.unique(keys, axis=0, return_index=True)
    return np.sort(first)
