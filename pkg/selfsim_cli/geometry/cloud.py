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

import collections
import dataclasses
import itertools
import math
import typing

import numpy as np

from selfsim_cli import utils
from selfsim_cli.geometry import similarity


if typing.TYPE_CHECKING:
    from collections.abc import Hashable
    from collections.abc import Sequence

    import numpy.typing as npt


BRUTE_FORCE_CHUNK = 4096


class EmptyCloudError(utils.SelfsimError):
    pass


@dataclasses.dataclass(frozen=True, eq=False)
class PointCloud:
    points: npt.NDArray[np.float64]
    labels: tuple[Hashable, ...] | None = None
    resolution: float | None = None

    def __post_init__(self) -> None:
        if self.points.ndim != 2 or self.points.shape[1] not in {1, 2}:
            msg = f"point array must have shape (n, 1) or (n, 2), got {self.points.shape}"
            raise similarity.DimensionMismatchError(msg)
        if not np.isfinite(self.points).all():
            msg = "point cloud contains non-finite coordinates"
            raise utils.SelfsimError(msg)
        if self.labels is not None and len(self.labels) != len(self.points):
            msg = f"{len(self.labels)} labels for {len(self.points)} points"
            raise utils.SelfsimError(msg)

    @classmethod
    def from_points(
        cls,
        points: Sequence[Sequence[float]] | npt.NDArray[np.float64],
        labels: Sequence[Hashable] | None = None,
        resolution: float | None = None,
    ) -> PointCloud:
        array = np.asarray(points, dtype=np.float64)
        if array.ndim == 1:
            array = array.reshape(-1, 1)
        return cls(
            array,
            None if labels is None else tuple(labels),
            resolution,
        )

    @property
    def ambient_dim(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return len(self.points)

    def is_empty(self) -> bool:
        return len(self.points) == 0

    def transform(self, s: similarity.Similarity) -> PointCloud:
        matrix, offset = s.as_numpy()
        resolution = None
        if self.resolution is not None:
            resolution = self.resolution * float(s.ratio)
        return PointCloud(self.points @ matrix.T + offset, self.labels, resolution)

    def restrict(
        self,
        lower: Sequence[float],
        upper: Sequence[float],
        tol: float = 1e-12,
    ) -> PointCloud:
        lo = np.asarray(lower, dtype=np.float64) - tol
        hi = np.asarray(upper, dtype=np.float64) + tol
        mask = ((self.points >= lo) & (self.points <= hi)).all(axis=1)
        labels = None
        if self.labels is not None:
            labels = tuple(itertools.compress(self.labels, mask.tolist()))
        return PointCloud(self.points[mask], labels, self.resolution)


def interval_grid(start: float, stop: float, count: int) -> PointCloud:
    return PointCloud.from_points(np.linspace(start, stop, count))


def unit_grid(dim: int, per_axis: int) -> PointCloud:
    """Regular grid on [0,1]^dim with per_axis points along each axis."""
    axis = np.linspace(0.0, 1.0, per_axis)
    if dim == 1:
        return PointCloud.from_points(axis)
    xs, ys = np.meshgrid(axis, axis, indexing="ij")
    return PointCloud.from_points(np.column_stack((xs.ravel(), ys.ravel())))


def _check_pair(a: PointCloud, b: PointCloud) -> None:
    if a.ambient_dim != b.ambient_dim:
        msg = f"clouds live in dimensions {a.ambient_dim} and {b.ambient_dim}"
        raise similarity.DimensionMismatchError(msg)
    if a.is_empty() or b.is_empty():
        msg = "Hausdorff distance of an empty cloud"
        raise EmptyCloudError(msg)


def _squared(
    diff: npt.NDArray[np.float64],
) -> npt.NDArray[np.float64]:
    # per coordinate, identical rounding on every path
    total = diff[..., 0] * diff[..., 0]
    for k in range(1, diff.shape[-1]):
        total = total + diff[..., k] * diff[..., k]
    return total


def _nearest_brute(
    a: npt.NDArray[np.float64],
    b: npt.NDArray[np.float64],
) -> npt.NDArray[np.float64]:
    best = np.empty(len(a))
    chunk = max(1, min(BRUTE_FORCE_CHUNK, BRUTE_FORCE_CHUNK * 64 // max(len(b), 1)))
    for start in range(0, len(a), chunk):
        block = a[start : start + chunk]
        best[start : start + len(block)] = _squared(
            block[:, None, :] - b[None, :, :],
        ).min(axis=1)
    return best


class _Buckets:
    """Uniform grid of cells over the bounding box of a point set."""

    def __init__(self, points: npt.NDArray[np.float64]) -> None:
        self.points = points
        self.origin = points.min(axis=0)
        extent = float((points.max(axis=0) - self.origin).max())
        per_axis = max(1.0, len(points) ** (1 / points.shape[1]))
        self.size = extent / per_axis if extent > 0 else 1.0
        cells = np.floor((points - self.origin) / self.size).astype(np.int64)
        self.top = cells.max(axis=0)
        buckets: dict[tuple[int, ...], list[int]] = collections.defaultdict(list)
        for index, cell in enumerate(map(tuple, cells.tolist())):
            buckets[cell].append(index)
        self.buckets = {k: np.array(v) for k, v in buckets.items()}

    def cell_of(self, point: npt.NDArray[np.float64]) -> tuple[int, ...]:
        return tuple(int(c) for c in np.floor((point - self.origin) / self.size))

    def ring(self, center: tuple[int, ...], radius: int) -> list[tuple[int, ...]]:
        offsets = range(-radius, radius + 1)
        return [
            tuple(c + o for c, o in zip(center, offset, strict=True))
            for offset in itertools.product(offsets, repeat=len(center))
            if max(abs(o) for o in offset) == radius
        ]

    def max_radius(self, center: tuple[int, ...]) -> int:
        return max(
            max(abs(c), abs(c - int(t))) for c, t in zip(center, self.top, strict=True)
        )

    def nearest_squared(self, point: npt.NDArray[np.float64]) -> float:
        center = self.cell_of(point)
        best = math.inf
        for radius in range(self.max_radius(center) + 1):
            for cell in self.ring(center, radius):
                indices = self.buckets.get(cell)
                if indices is None:
                    continue
                candidate = float(_squared(point[None, :] - self.points[indices]).min())
                best = min(best, candidate)
            # cells beyond this ring are at least radius * size away, one
            # cell of slack absorbs rounding in the cell assignment
            reach = max(radius - 1, 0) * self.size
            if best <= reach * reach:
                break
        return best


def _nearest_grid(
    a: npt.NDArray[np.float64],
    b: npt.NDArray[np.float64],
) -> npt.NDArray[np.float64]:
    buckets = _Buckets(b)
    return np.array([buckets.nearest_squared(point) for point in a])


def one_sided_hausdorff(
    a: PointCloud,
    b: PointCloud,
    *,
    accelerate: bool = False,
) -> float:
    """sup over a in A of the distance from a to B."""
    _check_pair(a, b)
    nearest = _nearest_grid if accelerate else _nearest_brute
    return float(np.sqrt(nearest(a.points, b.points).max()))


def hausdorff_distance(
    a: PointCloud,
    b: PointCloud,
    *,
    accelerate: bool = False,
) -> float:
    return max(
        one_sided_hausdorff(a, b, accelerate=accelerate),
        one_sided_hausdorff(b, a, accelerate=accelerate),
    )


def affine_hull_dimension(cloud: PointCloud, tol: float = 1e-9) -> int:
    if cloud.is_empty():
        msg = "affine hull of an empty cloud"
        raise EmptyCloudError(msg)
    matrix = cloud.points[1:] - cloud.points[0]
    rank = 0
    while matrix.size:
        row, col = np.unravel_index(np.abs(matrix).argmax(), matrix.shape)
        pivot = matrix[row, col]
        if abs(pivot) <= tol:
            break
        rank += 1
        factors = matrix[:, col] / pivot
        matrix = matrix - np.outer(factors, matrix[row])
        matrix = np.delete(np.delete(matrix, row, axis=0), col, axis=1)
    return rank
