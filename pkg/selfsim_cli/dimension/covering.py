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
"""Mesh-cell covering counts.

A point x lies in the rho-cell floor(x / rho + 1e-9), clamped so that the
top face of [0,1]^d belongs to the last cell. The window of scale r around
a center is the block of 3^d r-cells around the center's own cell; it
contains B_r(center). The count is the number of distinct rho-cells hit by
cloud points of the window.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
import typing

import numpy as np

from selfsim_cli import utils
from selfsim_cli.geometry import cloud


if typing.TYPE_CHECKING:
    from collections.abc import Sequence

    import numpy.typing as npt


CELL_SLACK = 1e-9

DimensionKind = typing.Literal["similarity", "box", "assouad", "reduced-similarity"]


class ResolutionError(utils.SelfsimError):
    pass


class FitError(utils.SelfsimError):
    pass


@dataclasses.dataclass(frozen=True)
class CoveringRecord:
    window_center: tuple[float, ...]
    r: float
    rho: float
    count: int

    def __post_init__(self) -> None:
        if not self.rho < self.r:
            msg = f"covering scales need rho < r, got rho={self.rho} r={self.r}"
            raise utils.SelfsimError(msg)
        if self.count < 1:
            msg = f"covering count must be positive, got {self.count}"
            raise utils.SelfsimError(msg)


@dataclasses.dataclass(frozen=True)
class DimensionEstimate:
    kind: DimensionKind
    value: float
    # Fit residual; 0 for closed-form kinds
    residual: float = 0.0
    records: tuple[CoveringRecord, ...] = ()
    note: str | None = None


def cells_per_axis(rho: float) -> int:
    return max(1, math.ceil(1 / rho - CELL_SLACK))


def cell_indices(points: npt.NDArray[np.float64], rho: float) -> npt.NDArray[np.int64]:
    index = np.floor(points / rho + CELL_SLACK).astype(np.int64)
    return np.clip(index, 0, cells_per_axis(rho) - 1)


def flat_cells(points: npt.NDArray[np.float64], rho: float) -> npt.NDArray[np.int64]:
    """Cell indices folded into one integer per point."""
    index = cell_indices(points, rho)
    width = cells_per_axis(rho)
    flat = np.zeros(len(points), dtype=np.int64)
    for axis in range(points.shape[1] - 1, -1, -1):
        flat = flat * width + index[:, axis]
    return flat


def window_cells(center: Sequence[float], r: float) -> list[int]:
    """Flat indices of the r-cells forming the window around `center`."""
    width = cells_per_axis(r)
    (own,) = cell_indices(np.asarray([center], dtype=np.float64), r)
    cells = []
    for offsets in itertools.product((-1, 0, 1), repeat=len(own)):
        neighbour = [int(c) + o for c, o in zip(own, offsets, strict=True)]
        if not all(0 <= c < width for c in neighbour):
            continue
        flat = 0
        for c in reversed(neighbour):
            flat = flat * width + c
        cells.append(flat)
    return sorted(cells)


def check_resolution(points: cloud.PointCloud, rho: float) -> None:
    if points.resolution is not None and points.resolution > rho / 2:
        msg = (
            f"cloud resolution {points.resolution:.3g} is too coarse for "
            f"rho={rho:.3g} (need at most rho/2)"
        )
        raise ResolutionError(msg)


def covering_count(
    points: cloud.PointCloud,
    center: Sequence[float],
    r: float,
    rho: float,
) -> CoveringRecord:
    if not 0 < rho < r:
        msg = f"covering scales need 0 < rho < r, got rho={rho} r={r}"
        raise utils.SelfsimError(msg)
    check_resolution(points, rho)
    window = np.isin(flat_cells(points.points, r), window_cells(center, r))
    count = len(np.unique(flat_cells(points.points[window], rho)))
    _check_nonempty(count, center)
    return CoveringRecord(tuple(float(c) for c in center), r, rho, count)


class CellIndex:
    """Precomputed r-cell to rho-cell incidences of one cloud.

    When every rho-cell lies inside one r-cell, window counts are sums of
    per-cell counts; otherwise the rho-cells of the window are merged.
    `coarse` and `fine` take the flat cells of the cloud at r and rho when
    the caller already has them.
    """

    def __init__(
        self,
        points: cloud.PointCloud,
        r: float,
        rho: float,
        *,
        coarse: npt.NDArray[np.int64] | None = None,
        fine: npt.NDArray[np.int64] | None = None,
    ) -> None:
        check_resolution(points, rho)
        self.r = r
        self.rho = rho
        if coarse is None:
            coarse = flat_cells(points.points, r)
        if fine is None:
            fine = flat_cells(points.points, rho)
        pairs = unique_pairs(coarse, fine, cells_per_axis(rho) ** points.ambient_dim)
        self.nested = len(np.unique(pairs[:, 1])) == len(pairs)
        cells, starts, counts = np.unique(
            pairs[:, 0],
            return_index=True,
            return_counts=True,
        )
        self.counts = dict(zip(cells.tolist(), counts.tolist(), strict=True))
        self.members: dict[int, npt.NDArray[np.int64]] = {}
        if not self.nested:
            for cell, start, size in zip(cells.tolist(), starts, counts, strict=True):
                self.members[cell] = pairs[start : start + size, 1]

    def count(self, center: Sequence[float]) -> int:
        cells = window_cells(center, self.r)
        if self.nested:
            total = sum(self.counts.get(cell, 0) for cell in cells)
        else:
            hit = [self.members[cell] for cell in cells if cell in self.members]
            total = len(np.unique(np.concatenate(hit))) if hit else 0
        _check_nonempty(total, center)
        return total


def _check_nonempty(count: int, center: Sequence[float]) -> None:
    if count == 0:
        msg = f"no cloud point in the window around {tuple(center)}"
        raise cloud.EmptyCloudError(msg)


def unique_pairs(
    coarse: npt.NDArray[np.int64],
    fine: npt.NDArray[np.int64],
    fine_cells: int,
) -> npt.NDArray[np.int64]:
    """Distinct (coarse, fine) rows, sorted."""
    if len(coarse) and int(coarse.max()) < np.iinfo(np.int64).max // fine_cells - 1:
        keys = np.unique(coarse * fine_cells + fine)
        return np.stack([keys // fine_cells, keys % fine_cells], axis=1)
    return np.unique(np.stack([coarse, fine], axis=1), axis=0)
